#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "qlatt/local_ops.hpp"

namespace qlatt {

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;  // ascending
  Matrix vectors;               // unitary columns; empty when `perm` is set
  // diagonal inputs keep a permutation instead of dense vectors: eigenvector
  // j is the basis vector perm[j]
  std::optional<std::vector<long>> perm;
  bool real = false;
  std::string label;

  long dim() const { return eigenvalues.size(); }
  double norm() const;  // max |eigenvalue|
  Matrix dense_vectors() const;
  Complex vector_entry(long row, long col) const;
};

// true when every off-diagonal entry is a bit-exact zero
bool exactly_diagonal(const Matrix& m);

// Dense self-adjoint eigendecomposition. Validates the input is self-adjoint,
// then checks the residuals ||M v - t v|| <= 1e-10 ||M|| per column and the
// orthonormality of the vectors; any failure throws instead of degrading.
SpectralDecomposition decompose(const Matrix& m, const std::string& label = "");

double hermitian_norm(const Matrix& m);  // max |eigenvalue| of a self-adjoint matrix
double operator_norm(const Matrix& m);   // largest singular value

struct SectorSpectrum {
  long charge = 0;
  std::vector<long> members;  // basis indices, ascending
  Eigen::VectorXd eigenvalues;
  Matrix vectors;  // columns in the sector basis
};

// Block decomposition by the integer spectrum of a diagonal conserved charge.
// Rejects non-integer charges and matrix elements between sectors.
struct BlockedSpectral {
  long dim = 0;
  std::vector<SectorSpectrum> sectors;  // ascending charge
  double norm() const;
};

BlockedSpectral decompose_blocked(const Matrix& h, const Eigen::VectorXd& charge_diagonal,
                                  const std::string& label = "");

// Keyed store of decompositions, safe for concurrent readers with
// single-writer insertion (first insertion wins).
class SpectralCache {
 public:
  using Ptr = std::shared_ptr<const SpectralDecomposition>;
  Ptr get_or_compute(const std::string& key, const std::function<SpectralDecomposition()>& make);
  size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, Ptr> store_;
};

}  // namespace qlatt
