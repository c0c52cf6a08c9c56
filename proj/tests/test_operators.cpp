#include <doctest.h>

#include <qlatt/models.hpp>
#include <qlatt/operators.hpp>

#include <Eigen/Eigenvalues>
#include <random>
#include <stdexcept>

#include "support.hpp"

using namespace qlatt;

TEST_SUITE("operators") {

TEST_CASE("single-site transverse field") {
    AssembledOperator h = assemble(transverse_ising_interaction(1.0, 0.7), Region::chain(1));
    REQUIRE(h.dim() == 2);
    CHECK(h.hermitian);
    CHECK(h.label == "H");
    CHECK((h.matrix - (-0.7) * pauli_x()).norm() == 0.0);
}

TEST_CASE("ising pair couples the aligned states") {
    AssembledOperator h = assemble(transverse_ising_interaction(0.3, 0.0), Region::chain(2));
    Matrix expect = -0.3 * kron(pauli_z(), pauli_z());
    CHECK((h.matrix - expect).norm() == 0.0);
}

TEST_CASE("heisenberg dimer spectrum") {
    AssembledOperator h = assemble(heisenberg_interaction(1.0, 0.0), Region::chain(2));
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix);
    Eigen::VectorXd ev = es.eigenvalues();
    CHECK(ev(0) == doctest::Approx(-0.75).epsilon(1e-14));
    for (int i = 1; i < 4; ++i) CHECK(ev(i) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("hubbard site interaction is the double occupancy") {
    HubbardOperators ops = build_hubbard(1, {1.0}, 4.0);
    REQUIRE(ops.hamiltonian.dim() == 4);
    CHECK(ops.hamiltonian.per_site_dim() == 4);
    Eigen::SelfAdjointEigenSolver<Matrix> es(ops.hamiltonian.matrix);
    Eigen::VectorXd ev = es.eigenvalues();
    CHECK(ev(0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ev(2) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ev(3) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("hubbard chain conserves particle number exactly") {
    HubbardOperators ops = build_hubbard(2, {1.0}, 4.0);
    REQUIRE(ops.hamiltonian.dim() == 16);
    CHECK(ops.hamiltonian.hermitian);
    CHECK(ops.number.hermitian);
    Matrix comm = ops.hamiltonian.matrix * ops.number.matrix -
                  ops.number.matrix * ops.hamiltonian.matrix;
    CHECK(comm.norm() == 0.0);
    CHECK(std::abs(ops.number.matrix.trace() - Complex(32, 0)) < 1e-12);
}

TEST_CASE("macro observable sums translates") {
    AssembledOperator k = macro_observable(spin_observable("sigma_z"), Region::chain(2));
    REQUIRE(k.dim() == 4);
    CHECK(k.matrix(0, 0) == Complex(2, 0));
    CHECK(k.matrix(1, 1) == Complex(0, 0));
    CHECK(k.matrix(2, 2) == Complex(0, 0));
    CHECK(k.matrix(3, 3) == Complex(-2, 0));

    AssembledOperator k3 = macro_observable(spin_observable("sigma_z"), Region::chain(3));
    Matrix manual = embed_local(pauli_z(), {0}, 3, 2) + embed_local(pauli_z(), {1}, 3, 2) +
                    embed_local(pauli_z(), {2}, 3, 2);
    CHECK((k3.matrix - manual).norm() == 0.0);
}

TEST_CASE("assembly from an explicit placement list") {
    Interaction phi = transverse_ising_interaction(1.0, 0.5);
    Region r = Region::chain(4);
    std::vector<PlacedTerm> placed = terms_in(phi, r);
    AssembledOperator whole = assemble(phi, r);
    AssembledOperator rebuilt = assemble_terms(phi, placed, r, "H");
    CHECK((whole.matrix - rebuilt.matrix).norm() == 0.0);
}

TEST_CASE("free boundary assembly is translation covariant") {
    Interaction phi = transverse_ising_interaction(0.9, 0.4);
    AssembledOperator a = assemble(phi, Region::chain(3, 0));
    AssembledOperator b = assemble(phi, Region::chain(3, 5));
    CHECK((a.matrix - b.matrix).norm() == 0.0);

    HubbardOperators ha = build_hubbard(3, {0.8}, 2.0);
    AssembledOperator hb = assemble(hubbard_interaction({0.8}, 2.0), Region::chain(3, 7));
    CHECK((ha.hamiltonian.matrix - hb.matrix).norm() == 0.0);
}

TEST_CASE("operators on disjoint slots commute") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix a = embed_local(testing::random_hermitian(2, rng), {0}, 3, 2);
        Matrix b = embed_local(testing::random_hermitian(2, rng), {2}, 3, 2);
        CHECK((a * b - b * a).norm() < 1e-13);
    }
}

TEST_CASE("model presets") {
    Model hub = model_preset("hubbard", {{"t", 1.0}, {"u", 4.0}});
    CHECK(hub.kind == SiteKind::Fermion);
    CHECK(hub.hilbert_dim(2) == 16);
    CHECK(hub.number.has_value());
    AssembledOperator n = hub.build_number(Region::chain(2));
    CHECK(n.dim() == 16);

    Model tfim = model_preset("transverse_ising", {{"j", 1.0}, {"h", 0.5}});
    CHECK(tfim.hilbert_dim(10) == 1024);
    CHECK_THROWS_AS(tfim.build_number(Region::chain(2)), std::invalid_argument);

    CHECK_THROWS_AS(model_preset("xyz", {}), std::invalid_argument);
}

} // TEST_SUITE
