#include "qlatt/local_ops.hpp"

#include <algorithm>

namespace qlatt {

const Matrix& pauli_x() {
  static const Matrix m = [] {
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
  }();
  return m;
}

const Matrix& pauli_y() {
  static const Matrix m = [] {
    Matrix y(2, 2);
    y << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return y;
  }();
  return m;
}

const Matrix& pauli_z() {
  static const Matrix m = [] {
    Matrix z(2, 2);
    z << 1, 0, 0, -1;
    return z;
  }();
  return m;
}

const Matrix& identity2() {
  static const Matrix m = Matrix::Identity(2, 2);
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

FermionPolynomial& FermionPolynomial::operator+=(const FermionPolynomial& other) {
  monomials.insert(monomials.end(), other.monomials.begin(), other.monomials.end());
  return *this;
}

FermionPolynomial FermionPolynomial::scaled(Complex factor) const {
  FermionPolynomial out = *this;
  for (auto& m : out.monomials) m.coeff *= factor;
  return out;
}

FermionPolynomial FermionPolynomial::translated(const Site& shift) const {
  FermionPolynomial out = *this;
  for (auto& m : out.monomials)
    for (auto& f : m.factors) f.site = f.site + shift;
  return out;
}

FermionPolynomial FermionPolynomial::adjoint() const {
  FermionPolynomial out;
  for (const auto& m : monomials) {
    FermionMonomial a;
    a.coeff = std::conj(m.coeff);
    a.factors.assign(m.factors.rbegin(), m.factors.rend());
    for (auto& f : a.factors) f.dagger = !f.dagger;
    out.monomials.push_back(std::move(a));
  }
  return out;
}

std::vector<Site> FermionPolynomial::support() const {
  std::vector<Site> sites;
  for (const auto& m : monomials)
    for (const auto& f : m.factors) sites.push_back(f.site);
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  return sites;
}

bool FermionPolynomial::even() const {
  for (const auto& m : monomials)
    if (m.factors.size() % 2 != 0) return false;
  return true;
}

FermionPolynomial fermion_hop(const Site& a, const Site& b, int channels) {
  FermionPolynomial p;
  for (int s = 0; s < channels; ++s) {
    p.monomials.push_back({Complex(1, 0), {{a, s, true}, {b, s, false}}});
    p.monomials.push_back({Complex(1, 0), {{b, s, true}, {a, s, false}}});
  }
  return p;
}

FermionPolynomial fermion_number(const Site& x, int channels) {
  FermionPolynomial p;
  for (int s = 0; s < channels; ++s)
    p.monomials.push_back({Complex(1, 0), {{x, s, true}, {x, s, false}}});
  return p;
}

FermionPolynomial fermion_channel_number(const Site& x, int spin) {
  FermionPolynomial p;
  p.monomials.push_back({Complex(1, 0), {{x, spin, true}, {x, spin, false}}});
  return p;
}

FermionPolynomial fermion_double_occupancy(const Site& x) {
  FermionPolynomial p;
  p.monomials.push_back(
      {Complex(1, 0), {{x, 0, true}, {x, 0, false}, {x, 1, true}, {x, 1, false}}});
  return p;
}

FermionPolynomial fermion_density_product(const Site& a, const Site& b, int channels) {
  FermionPolynomial p;
  for (int s = 0; s < channels; ++s)
    for (int t = 0; t < channels; ++t)
      p.monomials.push_back(
          {Complex(1, 0), {{a, s, true}, {a, s, false}, {b, t, true}, {b, t, false}}});
  return p;
}

}  // namespace qlatt
