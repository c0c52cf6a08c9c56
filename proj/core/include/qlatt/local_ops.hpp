#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qlatt/lattice.hpp"

namespace qlatt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

const Matrix& pauli_x();
const Matrix& pauli_y();
const Matrix& pauli_z();
const Matrix& identity2();

Matrix kron(const Matrix& a, const Matrix& b);

// One ladder generator at (site, spin channel).
struct FermionFactor {
  Site site;
  int spin = 0;
  bool dagger = false;
};

struct FermionMonomial {
  Complex coeff{1.0, 0.0};
  std::vector<FermionFactor> factors;  // operator product, leftmost factor first
};

// Polynomial in the ladder generators; the carrier of fermionic interaction
// terms, kept symbolic so that embedding into any region stays exact.
struct FermionPolynomial {
  std::vector<FermionMonomial> monomials;

  FermionPolynomial& operator+=(const FermionPolynomial& other);
  FermionPolynomial scaled(Complex factor) const;
  FermionPolynomial translated(const Site& shift) const;
  FermionPolynomial adjoint() const;
  std::vector<Site> support() const;  // distinct sites, sorted
  bool even() const;                  // every monomial of even degree
};

// sum_s (c+_{a,s} c_{b,s} + c+_{b,s} c_{a,s})
FermionPolynomial fermion_hop(const Site& a, const Site& b, int channels);
// n_x = sum_s c+_{x,s} c_{x,s}
FermionPolynomial fermion_number(const Site& x, int channels);
// n_{x,0} n_{x,1}
FermionPolynomial fermion_double_occupancy(const Site& x);
// n_a n_b
FermionPolynomial fermion_density_product(const Site& a, const Site& b, int channels);
// n_{x,s}
FermionPolynomial fermion_channel_number(const Site& x, int spin);

}  // namespace qlatt
