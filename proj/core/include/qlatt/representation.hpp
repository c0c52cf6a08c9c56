#pragma once

#include "qlatt/local_ops.hpp"

namespace qlatt {

// Places a matrix acting on the listed site slots (ascending positions within
// a lexicographically ordered site list) into the full tensor product. The
// first listed slot is the most significant digit, matching the Kronecker
// order of the sorted site list.
Matrix embed_local(const Matrix& local, const std::vector<int>& positions, int n_sites,
                   int site_dim);

// Ordered-product representation of the ladder generators on a region. Modes
// are ordered site-major (site in lexicographic order, then channel); mode 0
// is the most significant occupation bit.
Matrix fermion_matrix(const FermionPolynomial& poly, const Region& region, int channels);
Matrix car_annihilator(const Region& region, int channels, const Site& x, int spin);
Matrix car_creator(const Region& region, int channels, const Site& x, int spin);

// Diagonal of the global parity (-1)^N over n_modes occupation bits.
Eigen::VectorXd parity_diagonal(int n_modes);

enum class Parity { Even, Odd, Mixed };
// Classifies by conjugation with (-1)^N; entries below tol are treated as 0.
Parity operator_parity(const Matrix& m, double tol = 1e-12);

}  // namespace qlatt
