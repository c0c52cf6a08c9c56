#include <doctest.h>

#include <qlatt/bounds.hpp>
#include <qlatt/models.hpp>
#include <qlatt/representation.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

#include "support.hpp"

using namespace qlatt;

namespace {

Interaction weak_ising() { return transverse_ising_interaction(0.08, 0.2); }

} // namespace

TEST_SUITE("bounds") {

TEST_CASE("trace perturbation bound, first form") {
    std::mt19937_64 rng(7);
    Matrix h = testing::random_hermitian(8, rng);

    BoundReport zero = lemma_part1(h, Matrix::Zero(8, 8));
    CHECK(zero.lhs == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(zero.pass);

    BoundReport constant = lemma_part1(h, 0.6 * Matrix::Identity(8, 8));
    CHECK(constant.lhs == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(constant.rhs == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(constant.pass);

    for (int trial = 0; trial < 30; ++trial) {
        Matrix hh = testing::random_hermitian(8, rng);
        Matrix pp = testing::random_hermitian(8, rng, 0.7);
        BoundReport rep = lemma_part1(hh, pp);
        CHECK(rep.pass);
        CHECK(rep.lhs <= rep.rhs + rep.slack);
    }

    CHECK_THROWS_WITH_AS(lemma_part1(Matrix::Zero(128, 128), Matrix::Zero(128, 128)),
                         "lemma_part1: dimension capped at 64", std::invalid_argument);
}

TEST_CASE("trace perturbation bound, weighted form") {
    std::mt19937_64 rng(9);

    Eigen::VectorXd hd(6), pd(6), cd(6);
    hd << 0.3, -0.2, 0.9, -1.1, 0.0, 0.4;
    pd << 0.5, -0.1, 0.2, 0.7, -0.6, 0.3;
    cd << 1.0, 2.0, 0.5, 1.5, 3.0, 0.25;
    Matrix h = hd.cast<Complex>().asDiagonal();
    Matrix p = pd.cast<Complex>().asDiagonal();
    Matrix c = cd.cast<Complex>().asDiagonal();
    BoundReport diag = lemma_part2(h, p, c, 33, 33);
    CHECK(diag.pass);
    CHECK(diag.rhs == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(diag.rhs == diag.rhs_refined);

    for (int trial = 0; trial < 20; ++trial) {
        Matrix hh = testing::random_hermitian(6, rng);
        Matrix pp = testing::random_hermitian(6, rng, 0.5);
        Matrix base = testing::random_hermitian(6, rng);
        Matrix cc = base * base.adjoint() + 0.1 * Matrix::Identity(6, 6);
        BoundReport rep = lemma_part2(hh, pp, cc, 33, 33);
        CHECK(rep.pass);
        CHECK(rep.t_points == 33);
        CHECK(rep.s_points == 33);
        CHECK(std::abs(rep.worst_s) <= 0.5 + 1e-12);
        CHECK((rep.worst_t >= 0 && rep.worst_t <= 1));
    }

    Matrix h2 = Matrix::Zero(4, 4);
    CHECK_THROWS_WITH_AS(lemma_part2(h2, h2, Matrix::Identity(4, 4), 16, 33),
                         "lemma_part2: grids need at least 33 points", std::invalid_argument);
    Matrix indef = Matrix::Identity(4, 4);
    indef(0, 0) = -1.0;
    CHECK_THROWS_WITH_AS(lemma_part2(h2, h2, indef, 33, 33),
                         "lemma_part2: C must be positive definite", std::invalid_argument);
}

TEST_CASE("analytic conjugation bound on a chain") {
    Region r = Region::chain(6);
    Matrix a = embed_local(pauli_z(), {2}, 6, 2);
    const double lambda = 0.5;

    std::vector<Complex> real_grid{{-0.5, 0.0}, {0.0, 0.0}, {0.8, 0.0}};
    BoundReport real_rep = ruelle_bound(weak_ising(), lambda, r, a, 1, real_grid);
    CHECK(real_rep.pass);
    CHECK(real_rep.lhs == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(real_rep.rhs >= std::exp(lambda) - 1e-12);

    std::vector<Complex> strip_grid{{0.0, 0.25}, {0.3, -0.25}, {-0.7, 0.5}};
    BoundReport strip_rep = ruelle_bound(weak_ising(), lambda, r, a, 1, strip_grid);
    CHECK(strip_rep.pass);

    BoundReport free_rep = ruelle_bound(Interaction(), lambda, r, a, 1, strip_grid);
    CHECK(free_rep.pass);
    CHECK(free_rep.lhs == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> off(terms_in(weak_ising(), r).size(), 0.0);
    BoundReport dropped = ruelle_bound(weak_ising(), lambda, r, a, 1, strip_grid, &off);
    CHECK(dropped.lhs == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> on(off.size(), 1.0);
    BoundReport full = ruelle_bound(weak_ising(), lambda, r, a, 1, strip_grid, &on);
    CHECK(full.lhs == doctest::Approx(strip_rep.lhs).epsilon(1e-12));

    std::vector<Complex> outside{{0.0, 100.0}};
    CHECK_THROWS_WITH_AS(ruelle_bound(weak_ising(), lambda, r, a, 1, outside),
                         "ruelle_bound: grid point outside the admissible strip",
                         std::invalid_argument);
}

TEST_CASE("localization tails on a window") {
    Matrix pair = embed_local(kron(pauli_z(), pauli_z()), {2, 4}, 5, 2);
    ThetaNormReport rep = theta_norms(pair, 0.5, 2);
    CHECK(rep.operator_norm == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(rep.tails.size() == 3);
    CHECK(rep.tails[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.tails[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.tails[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.sum_quoted == doctest::Approx(3.0).epsilon(1e-11));
    CHECK(rep.sum_decay == doctest::Approx(1.5).epsilon(1e-11));
    CHECK_FALSE(rep.truncated);

    Matrix centered = embed_local(pauli_z(), {2}, 5, 2);
    ThetaNormReport local = theta_norms(centered, 0.5, 2);
    CHECK(local.tails[0] < 1e-14);
    CHECK(local.sum_quoted == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(local.sum_decay < 1e-13);

    ThetaNormReport flat = theta_norms(Matrix::Identity(32, 32), 0.5, 2);
    for (double t : flat.tails) CHECK(t < 1e-14);

    CHECK_THROWS_WITH_AS(theta_norms(pair, 1.0, 2), "theta_norms: theta must be in (0,1)",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(theta_norms(pair, 0.5, 1), "theta_norms: matrix does not match the window",
                         std::invalid_argument);
}

TEST_CASE("block estimate on the free chain is exact") {
    SubadditivityReport rep =
        subadditivity_gap(transverse_ising_interaction(0.0, 0.0), spin_observable("sigma_z"), 1.0,
                          0.4, 6, 3, 0.5);
    CHECK(rep.lhs < 1e-14);
    CHECK(rep.pass);
    CHECK(rep.psi_part == 0.0);
    CHECK(!rep.psi_part_from_norm);
    CHECK(rep.note == "2 blocks of 3, remainder 0");
}

TEST_CASE("block estimate with a single block is trivial") {
    SubadditivityReport rep =
        subadditivity_gap(weak_ising(), spin_observable("sigma_z"), 1.0, 0.2, 6, 6, 0.5);
    CHECK(rep.lhs < 1e-13);
    CHECK(rep.blocks == 1);
    CHECK(rep.pass);
}

TEST_CASE("block estimate holds on the weak chain") {
    SubadditivityReport rep =
        subadditivity_gap(weak_ising(), spin_observable("sigma_z"), 1.0, 0.2, 9, 3, 0.5);
    CHECK(rep.pass);
    CHECK(rep.lhs <= rep.rhs + 1e-9);
    CHECK(rep.rhs == doctest::Approx(rep.phi_part + rep.psi_part).epsilon(1e-13));
    CHECK(rep.note == "3 blocks of 3, remainder 0");
    CHECK(std::isfinite(rep.rhs_printed));

    SubadditivityReport ragged =
        subadditivity_gap(weak_ising(), spin_observable("sigma_z"), 1.0, 0.2, 8, 3, 0.5);
    CHECK(ragged.remainder == 2);
    CHECK(ragged.pass);
    CHECK(ragged.psi_part_from_norm);
    CHECK(ragged.psi_part == doctest::Approx(2.0 * 0.2 / 8.0).epsilon(1e-13));
}

TEST_CASE("block estimate tightens at fixed block fraction") {
    SubadditivityReport small =
        subadditivity_gap(weak_ising(), spin_observable("sigma_z"), 1.0, 0.2, 6, 2, 0.5);
    SubadditivityReport large =
        subadditivity_gap(weak_ising(), spin_observable("sigma_z"), 1.0, 0.2, 9, 3, 0.5);
    CHECK(large.lhs < small.lhs);
}

TEST_CASE("block estimate rejects strong coupling") {
    CHECK_THROWS_WITH_AS(subadditivity_gap(transverse_ising_interaction(5.0, 1.0),
                                           spin_observable("sigma_z"), 1.0, 0.2, 6, 3, 0.5),
                         "subadditivity_gap: scaled interaction outside the H1 window",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(subadditivity_gap(weak_ising(), spin_observable("sigma_z"), 1.0, 0.2, 6,
                                           7, 0.5),
                         "subadditivity_gap: invalid geometry", std::invalid_argument);
}

TEST_CASE("state and trace-ratio generating functions agree site by site") {
    Interaction field = transverse_ising_interaction(0.0, 0.3);
    TraceRatioReport rep =
        omega_vs_trace_ratio(field, spin_observable("sigma_z"), 1.0, 0.5, 2, 4);
    CHECK(rep.discrepancy < 1e-12);
    CHECK(rep.inner_size == 2);
    CHECK(rep.outer_size == 4);
}

TEST_CASE("trace ratio comparison degenerates when the chains coincide") {
    TraceRatioReport rep =
        omega_vs_trace_ratio(weak_ising(), spin_observable("sigma_z"), 1.0, 0.3, 4, 4);
    CHECK(rep.discrepancy < 1e-13);
}

TEST_CASE("trace ratio discrepancy shrinks at fixed margin") {
    TraceRatioReport small =
        omega_vs_trace_ratio(weak_ising(), spin_observable("sigma_z"), 1.0, 0.6, 4, 6);
    TraceRatioReport large =
        omega_vs_trace_ratio(weak_ising(), spin_observable("sigma_z"), 1.0, 0.6, 6, 8);
    CHECK(small.discrepancy > 0.0);
    CHECK(large.discrepancy < small.discrepancy);

    CHECK_THROWS_WITH_AS(omega_vs_trace_ratio(weak_ising(), spin_observable("sigma_z"), 1.0, 0.3,
                                              6, 4),
                         "omega_vs_trace_ratio: inner chain must sit inside the outer",
                         std::invalid_argument);
}

TEST_CASE("localization ingredients and the uniformity probe") {
    ArakiReport rep =
        araki_uniformity(weak_ising(), spin_observable("sigma_z"), 0.5, 0.5, 0.05, {4, 6, 8});
    CHECK(rep.theta_prime == doctest::Approx(0.5 * std::exp(4 * 0.05 * rep.s_phi)).epsilon(1e-12));
    CHECK(rep.admissible == (rep.theta_prime < 1.0));
    CHECK(rep.log_f_r == doctest::Approx(2.0 * (std::exp(1.0) - 1.0)).epsilon(1e-12));
    REQUIRE(rep.conjugation_norms.size() == 3);
    for (double n : rep.conjugation_norms) CHECK(n >= 1.0 - 1e-12);
    CHECK(rep.spread >= 0.0);
    CHECK(rep.spread < 0.05);

    Interaction unranged(1, SiteKind::SpinHalf, 1,
                         {make_named_term("sigma_x", {origin(1)}, 0.2, SiteKind::SpinHalf, 1)});
    CHECK_THROWS_WITH_AS(
        araki_uniformity(unranged, spin_observable("sigma_z"), 0.5, 0.5, 0.05, {4, 6}),
        "araki_uniformity: interaction needs a declared finite range", std::invalid_argument);
}

} // TEST_SUITE
