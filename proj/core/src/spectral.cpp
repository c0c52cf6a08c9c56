#include "qlatt/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "qlatt/limits.hpp"

#ifdef QLATT_USE_LAPACKE
#include <lapacke.h>
#endif

namespace qlatt {

namespace {

void pin_blas_threads() {
  // decompositions run single-threaded per task; parallelism lives in the
  // task pool, which keeps results independent of the worker count
  static std::once_flag flag;
  std::call_once(flag, [] {
    ::setenv("OPENBLAS_NUM_THREADS", "1", 0);
    ::setenv("OMP_NUM_THREADS", "1", 0);
  });
}

void check_self_adjoint(const Matrix& m, const std::string& label) {
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("decompose(" + label + "): matrix is not self-adjoint");
}

// post-hoc check of the factorization itself; templated so the real path can
// stay in real arithmetic, which matters at dimension 4096
template <typename Mat>
void validate(const Mat& m, const Mat& vectors, const Eigen::VectorXd& eigenvalues,
              const std::string& label) {
  const double norm = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  const double tol = 1e-10 * std::max(norm, 1e-300);
  Mat residual = m * vectors - vectors * eigenvalues.asDiagonal();
  for (Eigen::Index j = 0; j < residual.cols(); ++j)
    if (residual.col(j).norm() > tol)
      throw std::runtime_error("decompose(" + label + "): eigenpair residual " +
                               std::to_string(residual.col(j).norm()) + " exceeds tolerance");
  Mat gram = vectors.adjoint() * vectors;
  gram.diagonal().array() -= 1.0;
  if (gram.cwiseAbs().maxCoeff() > 1e-11)
    throw std::runtime_error("decompose(" + label + "): eigenvectors are not orthonormal");
}

}  // namespace

bool exactly_diagonal(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != Complex(0, 0)) return false;
  return true;
}

double SpectralDecomposition::norm() const {
  return eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
}

Matrix SpectralDecomposition::dense_vectors() const {
  if (!perm) return vectors;
  const long n = dim();
  Matrix v = Matrix::Zero(n, n);
  for (long j = 0; j < n; ++j) v((*perm)[j], j) = 1.0;
  return v;
}

Complex SpectralDecomposition::vector_entry(long row, long col) const {
  if (perm) return (*perm)[col] == row ? Complex(1, 0) : Complex(0, 0);
  return vectors(row, col);
}

SpectralDecomposition decompose(const Matrix& m, const std::string& label) {
  if (m.rows() != m.cols()) throw std::invalid_argument("decompose: matrix must be square");
  require_dense_dim(m.rows(), "decompose");
  check_self_adjoint(m, label);
  pin_blas_threads();

  const long n = m.rows();
  SpectralDecomposition sd;
  sd.label = label;

  if (exactly_diagonal(m)) {
    std::vector<long> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0l);
    std::stable_sort(order.begin(), order.end(),
                     [&](long a, long b) { return m(a, a).real() < m(b, b).real(); });
    sd.eigenvalues.resize(n);
    for (long j = 0; j < n; ++j) sd.eigenvalues[j] = m(order[j], order[j]).real();
    sd.perm = std::move(order);
    sd.real = true;
    return sd;
  }

  const bool real_input = m.imag().cwiseAbs().maxCoeff() == 0.0;
  sd.real = real_input;

#ifdef QLATT_USE_LAPACKE
  sd.eigenvalues.resize(n);
  if (real_input) {
    Eigen::MatrixXd a = m.real();
    int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n), a.data(),
                              static_cast<lapack_int>(n), sd.eigenvalues.data());
    if (info != 0)
      throw std::runtime_error("decompose(" + label + "): dsyevd failed with info " +
                               std::to_string(info));
    validate<Eigen::MatrixXd>(m.real(), a, sd.eigenvalues, label);
    sd.vectors = a.cast<Complex>();
  } else {
    Matrix a = m;
    int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                              reinterpret_cast<lapack_complex_double*>(a.data()),
                              static_cast<lapack_int>(n), sd.eigenvalues.data());
    if (info != 0)
      throw std::runtime_error("decompose(" + label + "): zheevd failed with info " +
                               std::to_string(info));
    validate<Matrix>(m, a, sd.eigenvalues, label);
    sd.vectors = std::move(a);
  }
#else
  if (real_input) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real());
    if (es.info() != Eigen::Success)
      throw std::runtime_error("decompose(" + label + "): eigensolver failed");
    sd.eigenvalues = es.eigenvalues();
    validate<Eigen::MatrixXd>(m.real(), es.eigenvectors(), sd.eigenvalues, label);
    sd.vectors = es.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("decompose(" + label + "): eigensolver failed");
    sd.eigenvalues = es.eigenvalues();
    sd.vectors = es.eigenvectors();
    validate<Matrix>(m, sd.vectors, sd.eigenvalues, label);
  }
#endif

  return sd;
}

double hermitian_norm(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  check_self_adjoint(m, "hermitian_norm");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_norm: eigensolver failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double operator_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  // largest singular value via the Gram matrix; adequate at these sizes
  Matrix gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("operator_norm: eigensolver failed");
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double BlockedSpectral::norm() const {
  double n = 0;
  for (const auto& s : sectors)
    if (s.eigenvalues.size() > 0) n = std::max(n, s.eigenvalues.cwiseAbs().maxCoeff());
  return n;
}

BlockedSpectral decompose_blocked(const Matrix& h, const Eigen::VectorXd& charge_diagonal,
                                  const std::string& label) {
  const long n = h.rows();
  if (h.cols() != n || charge_diagonal.size() != n)
    throw std::invalid_argument("decompose_blocked: shape mismatch");
  require_dense_dim(n, "decompose_blocked");

  std::map<long, std::vector<long>> groups;
  for (long i = 0; i < n; ++i) {
    const double c = charge_diagonal[i];
    const double r = std::round(c);
    if (std::abs(c - r) > 1e-9)
      throw std::invalid_argument("decompose_blocked: charge diagonal is not integral");
    groups[static_cast<long>(r)].push_back(i);
  }

  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  std::vector<long> charge_of(static_cast<size_t>(n));
  for (const auto& [c, members] : groups)
    for (long i : members) charge_of[static_cast<size_t>(i)] = c;
  for (long j = 0; j < n; ++j)
    for (long i = 0; i < n; ++i)
      if (charge_of[i] != charge_of[j] && std::abs(h(i, j)) > 1e-12 * scale)
        throw std::invalid_argument(
            "decompose_blocked: matrix couples different charge sectors");

  BlockedSpectral out;
  out.dim = n;
  for (const auto& [c, members] : groups) {
    SectorSpectrum sec;
    sec.charge = c;
    sec.members = members;
    const long k = static_cast<long>(members.size());
    Matrix sub(k, k);
    for (long j = 0; j < k; ++j)
      for (long i = 0; i < k; ++i) sub(i, j) = h(members[i], members[j]);
    auto sd = decompose(sub, label + "/q=" + std::to_string(c));
    sec.vectors = sd.dense_vectors();
    sec.eigenvalues = std::move(sd.eigenvalues);
    out.sectors.push_back(std::move(sec));
  }
  return out;
}

SpectralCache::Ptr SpectralCache::get_or_compute(
    const std::string& key, const std::function<SpectralDecomposition()>& make) {
  {
    std::shared_lock lock(mutex_);
    auto it = store_.find(key);
    if (it != store_.end()) return it->second;
  }
  auto value = std::make_shared<const SpectralDecomposition>(make());
  std::unique_lock lock(mutex_);
  auto [it, inserted] = store_.emplace(key, std::move(value));
  return it->second;
}

size_t SpectralCache::size() const {
  std::shared_lock lock(mutex_);
  return store_.size();
}

}  // namespace qlatt
