#include <doctest.h>

#include <qlatt/local_ops.hpp>
#include <qlatt/representation.hpp>

using namespace qlatt;

namespace {

Matrix anticommutator(const Matrix& a, const Matrix& b) { return a * b + b * a; }

} // namespace

TEST_SUITE("local_ops") {

TEST_CASE("pauli algebra") {
    const Matrix& x = pauli_x();
    const Matrix& y = pauli_y();
    const Matrix& z = pauli_z();
    const Matrix& id = identity2();
    CHECK((x * x - id).norm() == 0.0);
    CHECK((y * y - id).norm() == 0.0);
    CHECK((z * z - id).norm() == 0.0);
    CHECK((x * y - Complex(0, 1) * z).norm() == 0.0);
    CHECK((x - x.adjoint()).norm() == 0.0);
    CHECK((y - y.adjoint()).norm() == 0.0);
}

TEST_CASE("kron layout") {
    Matrix m = kron(pauli_z(), identity2());
    REQUIRE(m.rows() == 4);
    CHECK(m(0, 0) == Complex(1, 0));
    CHECK(m(1, 1) == Complex(1, 0));
    CHECK(m(2, 2) == Complex(-1, 0));
    CHECK(m(3, 3) == Complex(-1, 0));
    CHECK((kron(pauli_x(), pauli_y()) - kron(pauli_x(), identity2()) * kron(identity2(), pauli_y()))
              .norm() == 0.0);
}

TEST_CASE("embed_local places slots most significant first") {
    Matrix first = embed_local(pauli_z(), {0}, 2, 2);
    CHECK((first - kron(pauli_z(), identity2())).norm() == 0.0);
    Matrix second = embed_local(pauli_z(), {1}, 2, 2);
    CHECK((second - kron(identity2(), pauli_z())).norm() == 0.0);

    Matrix pair = embed_local(kron(pauli_z(), pauli_x()), {0, 2}, 3, 2);
    Matrix manual = kron(pauli_z(), kron(identity2(), pauli_x()));
    CHECK((pair - manual).norm() == 0.0);

    Matrix local4 = Matrix::Zero(4, 4);
    local4(1, 2) = 1.0;
    Matrix wide = embed_local(local4, {1}, 2, 4);
    CHECK(wide.rows() == 16);
    CHECK(wide(1, 2) == Complex(1, 0));
    CHECK(wide(5, 6) == Complex(1, 0));
}

TEST_CASE("canonical anticommutation relations") {
    Region r = Region::chain(3);
    const int channels = 2;
    struct Mode {
        Site x;
        int s;
    };
    std::vector<Mode> modes;
    for (int i = 0; i < r.size(); ++i)
        for (int s = 0; s < channels; ++s) modes.push_back({r.site(i), s});

    std::vector<Matrix> ann;
    for (const Mode& m : modes) ann.push_back(car_annihilator(r, channels, m.x, m.s));

    const Matrix id = Matrix::Identity(64, 64);
    for (size_t i = 0; i < modes.size(); ++i) {
        CHECK((car_creator(r, channels, modes[i].x, modes[i].s) - ann[i].adjoint()).norm() == 0.0);
        for (size_t j = 0; j < modes.size(); ++j) {
            CHECK(anticommutator(ann[i], ann[j]).norm() < 1e-12);
            Matrix mixed = anticommutator(ann[i], ann[j].adjoint());
            if (i == j)
                CHECK((mixed - id).norm() < 1e-12);
            else
                CHECK(mixed.norm() < 1e-12);
        }
    }
}

TEST_CASE("parity diagonal counts occupation bits") {
    Eigen::VectorXd p = parity_diagonal(2);
    REQUIRE(p.size() == 4);
    CHECK(p(0) == 1.0);
    CHECK(p(1) == -1.0);
    CHECK(p(2) == -1.0);
    CHECK(p(3) == 1.0);
}

TEST_CASE("operator parity classification") {
    Region r = Region::chain(2);
    Matrix c = car_annihilator(r, 1, {0}, 0);
    Matrix n = c.adjoint() * c;
    CHECK(operator_parity(n) == Parity::Even);
    CHECK(operator_parity(c) == Parity::Odd);
    CHECK(operator_parity(n + c) == Parity::Mixed);
}

TEST_CASE("fermion polynomial bookkeeping") {
    FermionPolynomial hop = fermion_hop({0}, {1}, 2);
    CHECK(hop.monomials.size() == 4);
    CHECK(hop.even());
    CHECK(hop.support() == std::vector<Site>{{0}, {1}});

    FermionPolynomial shifted = hop.translated({3});
    CHECK(shifted.support() == std::vector<Site>{{3}, {4}});

    FermionPolynomial twice = hop.scaled(2.0);
    CHECK(twice.monomials[0].coeff == Complex(2, 0));

    FermionPolynomial single;
    single.monomials.push_back({1.0, {{{0}, 0, false}}});
    CHECK_FALSE(single.even());

    FermionPolynomial sum = fermion_number({0}, 2);
    sum += fermion_number({1}, 2);
    CHECK(sum.monomials.size() == 4);
    CHECK(sum.support() == std::vector<Site>{{0}, {1}});
}

TEST_CASE("polynomial representation matches ladder matrices") {
    Region r = Region::chain(2);
    const int channels = 2;

    Matrix number = fermion_matrix(fermion_channel_number({0}, 0), r, channels);
    CHECK(std::abs(number.trace() - Complex(8, 0)) < 1e-12);
    CHECK((number - number.adjoint()).norm() == 0.0);

    Matrix hop = fermion_matrix(fermion_hop({0}, {1}, channels), r, channels);
    Matrix manual = Matrix::Zero(16, 16);
    for (int s = 0; s < channels; ++s) {
        Matrix ca = car_annihilator(r, channels, {0}, s);
        Matrix cb = car_annihilator(r, channels, {1}, s);
        manual += ca.adjoint() * cb + cb.adjoint() * ca;
    }
    CHECK((hop - manual).norm() < 1e-12);

    Region single_site = Region::chain(1);
    Matrix docc = fermion_matrix(fermion_double_occupancy({0}), single_site, 2);
    CHECK(std::abs(docc.trace() - Complex(1, 0)) < 1e-12);
    CHECK(docc.diagonal().real().maxCoeff() == 1.0);

    Matrix adj = fermion_matrix(fermion_hop({0}, {1}, channels).adjoint(), r, channels);
    CHECK((adj - hop.adjoint()).norm() < 1e-12);
}

TEST_CASE("density product matches number operator product") {
    Region r = Region::chain(2);
    Matrix prod = fermion_matrix(fermion_density_product({0}, {1}, 2), r, 2);
    Matrix na = fermion_matrix(fermion_number({0}, 2), r, 2);
    Matrix nb = fermion_matrix(fermion_number({1}, 2), r, 2);
    CHECK((prod - na * nb).norm() < 1e-12);
}

} // TEST_SUITE
