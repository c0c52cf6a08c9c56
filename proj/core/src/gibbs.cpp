#include "qlatt/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qlatt {

namespace {

void check_same_dim(long a, long b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

void check_self_adjoint_matrix(const Matrix& m, const char* what) {
  const double scale = std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument(std::string(what) + ": matrix is not self-adjoint");
}

double stable_log_sum_exp(const Eigen::VectorXd& x) {
  const double m = x.maxCoeff();
  double s = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::exp(x[i] - m);
  return m + std::log(s);
}

}  // namespace

double log_trace_exp(const SpectralDecomposition& sd) {
  if (sd.dim() == 0) throw std::invalid_argument("log_trace_exp: empty spectrum");
  return stable_log_sum_exp(sd.eigenvalues);
}

double log_trace_exp(const Matrix& m) {
  if (exactly_diagonal(m)) {
    Eigen::VectorXd d = m.diagonal().real();
    if (d.size() == 0) throw std::invalid_argument("log_trace_exp: empty matrix");
    return stable_log_sum_exp(d);
  }
  return log_trace_exp(decompose(m, "log_trace_exp"));
}

AssembledOperator effective_hamiltonian(const AssembledOperator& h, double beta, double mu,
                                        const AssembledOperator* number) {
  if (!(beta >= 0)) throw std::invalid_argument("effective_hamiltonian: beta must be nonnegative");
  if (!h.hermitian) throw std::invalid_argument("effective_hamiltonian: H is not self-adjoint");
  AssembledOperator out = h;
  if (mu != 0.0) {
    if (number == nullptr)
      throw std::invalid_argument("effective_hamiltonian: mu != 0 needs a number operator");
    if (!number->hermitian)
      throw std::invalid_argument("effective_hamiltonian: N is not self-adjoint");
    check_same_dim(h.dim(), number->dim(), "effective_hamiltonian");
    out.matrix = beta * (h.matrix - mu * number->matrix);
  } else {
    out.matrix = beta * h.matrix;
  }
  std::ostringstream label;
  label << h.label << "@beta=" << beta << ",mu=" << mu;
  out.label = label.str();
  out.hermitian = true;
  return out;
}

GibbsState::GibbsState(Matrix h_eff, double volume, std::string label)
    : h_eff_(std::move(h_eff)), volume_(volume), label_(std::move(label)) {
  if (!(volume_ > 0)) throw std::invalid_argument("GibbsState: volume must be positive");
  sd_ = decompose(h_eff_, label_);
  const long n = sd_.dim();
  const double eta0 = sd_.eigenvalues[0];
  weights_.resize(n);
  for (long k = 0; k < n; ++k) weights_[k] = std::exp(-(sd_.eigenvalues[k] - eta0));
  const double total = weights_.sum();
  weights_ /= total;
  log_z_ = -eta0 + std::log(total);
}

GibbsState::GibbsState(const AssembledOperator& h_eff)
    : GibbsState(h_eff.matrix, h_eff.volume(), h_eff.label) {
  if (!h_eff.hermitian) throw std::invalid_argument("GibbsState: exponent is not self-adjoint");
}

double GibbsState::log_partition(TraceConvention c) const {
  if (c == TraceConvention::Ordinary) return log_z_;
  return log_z_ - std::log(static_cast<double>(dim()));
}

Complex GibbsState::expectation_c(const Matrix& a) const {
  check_same_dim(a.rows(), dim(), "GibbsState::expectation");
  check_same_dim(a.cols(), dim(), "GibbsState::expectation");
  Complex out(0, 0);
  const long n = dim();
  if (sd_.perm) {
    for (long k = 0; k < n; ++k) out += weights_[k] * a((*sd_.perm)[k], (*sd_.perm)[k]);
    return out;
  }
  for (long k = 0; k < n; ++k) {
    if (weights_[k] < 1e-300) continue;
    out += weights_[k] * sd_.vectors.col(k).dot(a * sd_.vectors.col(k));
  }
  return out;
}

double GibbsState::expectation(const Matrix& a) const { return expectation_c(a).real(); }

double pressure_rate(const GibbsState& state, TraceConvention c) {
  return state.log_partition(c) / state.volume();
}

double grand_pressure_blocked(const BlockedSpectral& h, double beta, double mu, double volume,
                              TraceConvention c) {
  if (!(beta >= 0)) throw std::invalid_argument("grand_pressure_blocked: beta must be nonnegative");
  if (!(volume > 0)) throw std::invalid_argument("grand_pressure_blocked: volume must be positive");
  std::vector<double> exponents;
  exponents.reserve(static_cast<size_t>(h.dim));
  for (const auto& sec : h.sectors)
    for (Eigen::Index k = 0; k < sec.eigenvalues.size(); ++k)
      exponents.push_back(-beta * (sec.eigenvalues[k] - mu * static_cast<double>(sec.charge)));
  if (exponents.empty()) throw std::invalid_argument("grand_pressure_blocked: empty spectrum");
  Eigen::Map<Eigen::VectorXd> x(exponents.data(), static_cast<Eigen::Index>(exponents.size()));
  double log_z = stable_log_sum_exp(x);
  if (c == TraceConvention::Normalized) log_z -= std::log(static_cast<double>(h.dim));
  return log_z / volume;
}

EntropyEnergyReport mean_entropy_energy(const GibbsState& state) {
  const Eigen::VectorXd& w = state.weights();
  double s_vn = 0;
  double energy = 0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    energy += w[k] * state.spectral().eigenvalues[k];
    if (w[k] > 0) s_vn -= w[k] * std::log(w[k]);
  }
  EntropyEnergyReport rep;
  const double vol = state.volume();
  rep.entropy_rate = (s_vn - std::log(static_cast<double>(state.dim()))) / vol;
  rep.entropy_rate_alt = -rep.entropy_rate;
  rep.energy_rate = energy / vol;
  rep.pressure = state.log_partition(TraceConvention::Normalized) / vol;
  rep.identity_residual = std::abs(rep.pressure - (rep.entropy_rate - rep.energy_rate));
  return rep;
}

double DeviationMeasure::probability(double lo, double hi) const {
  double mass = 0;
  for (size_t i = 0; i < atoms.size(); ++i)
    if (atoms[i] >= lo && atoms[i] <= hi) mass += weights[i];
  return mass;
}

MgfEngine::MgfEngine(const AssembledOperator& h_eff, const AssembledOperator& k) {
  check_same_dim(h_eff.dim(), k.dim(), "MgfEngine");
  if (!h_eff.hermitian) throw std::invalid_argument("MgfEngine: exponent is not self-adjoint");
  if (!k.hermitian) throw std::invalid_argument("MgfEngine: observable is not self-adjoint");
  const Matrix& hm = h_eff.matrix;
  const Matrix& km = k.matrix;
  const long n = hm.rows();
  const bool h_diag = exactly_diagonal(hm);
  const bool k_diag = exactly_diagonal(km);

  kappa_.resize(n);
  r_.resize(n);
  if (k_diag) {
    kappa_ = km.diagonal().real();
    if (h_diag) {
      Eigen::VectorXd eta = hm.diagonal().real();
      eta_min_ = eta.minCoeff();
      r_ = (-(eta.array() - eta_min_)).exp();
    } else {
      auto sd = decompose(hm, h_eff.label);
      eta_min_ = sd.eigenvalues[0];
      Eigen::VectorXd boltz = (-(sd.eigenvalues.array() - eta_min_)).exp();
      r_ = sd.vectors.cwiseAbs2() * boltz;
    }
  } else {
    auto ksd = decompose(km, k.label);
    kappa_ = ksd.eigenvalues;
    if (h_diag) {
      Eigen::VectorXd eta = hm.diagonal().real();
      eta_min_ = eta.minCoeff();
      Eigen::VectorXd boltz = (-(eta.array() - eta_min_)).exp();
      r_ = ksd.vectors.cwiseAbs2().transpose() * boltz;
    } else {
      auto hsd = decompose(hm, h_eff.label);
      eta_min_ = hsd.eigenvalues[0];
      Eigen::VectorXd boltz = (-(hsd.eigenvalues.array() - eta_min_)).exp();
      Matrix overlap = ksd.vectors.adjoint() * hsd.vectors;
      r_ = overlap.cwiseAbs2() * boltz;
    }
  }
  volume_ = h_eff.volume();
  dim_ = n;
  finalize();
}

MgfEngine MgfEngine::blocked_charge(const BlockedSpectral& h_eff, double volume) {
  if (!(volume > 0)) throw std::invalid_argument("MgfEngine: volume must be positive");
  MgfEngine e;
  e.dim_ = h_eff.dim;
  e.volume_ = volume;
  double eta_min = std::numeric_limits<double>::infinity();
  for (const auto& sec : h_eff.sectors)
    if (sec.eigenvalues.size() > 0) eta_min = std::min(eta_min, sec.eigenvalues[0]);
  if (!std::isfinite(eta_min)) throw std::invalid_argument("MgfEngine: empty spectrum");
  e.eta_min_ = eta_min;
  e.kappa_.resize(e.dim_);
  e.r_.resize(e.dim_);
  long at = 0;
  for (const auto& sec : h_eff.sectors)
    for (Eigen::Index k = 0; k < sec.eigenvalues.size(); ++k, ++at) {
      e.kappa_[at] = static_cast<double>(sec.charge);
      e.r_[at] = std::exp(-(sec.eigenvalues[k] - eta_min));
    }
  if (at != e.dim_) throw std::logic_error("MgfEngine: sector sizes do not add up");
  e.finalize();
  return e;
}

MgfEngine MgfEngine::blocked_energy(const BlockedSpectral& h_eff, double beta, double mu,
                                    double volume) {
  if (!(beta > 0)) throw std::invalid_argument("MgfEngine: beta must be positive");
  MgfEngine e = blocked_charge(h_eff, volume);
  long at = 0;
  for (const auto& sec : h_eff.sectors)
    for (Eigen::Index k = 0; k < sec.eigenvalues.size(); ++k, ++at)
      e.kappa_[at] = sec.eigenvalues[k] / beta + mu * static_cast<double>(sec.charge);
  e.finalize();
  return e;
}

void MgfEngine::finalize() { log_zero_ = log_two_exp(0.0); }

double MgfEngine::log_two_exp(double alpha) const {
  double shift = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < kappa_.size(); ++j)
    if (r_[j] > 0) shift = std::max(shift, alpha * kappa_[j]);
  if (!std::isfinite(shift)) throw std::logic_error("MgfEngine: all spectral weights vanish");
  double s = 0;
  for (Eigen::Index j = 0; j < kappa_.size(); ++j)
    if (r_[j] > 0) s += std::exp(alpha * kappa_[j] - shift) * r_[j];
  return -eta_min_ + shift + std::log(s);
}

double MgfEngine::g(double alpha, TraceConvention c) const {
  double value = log_two_exp(alpha);
  if (c == TraceConvention::Normalized) value -= std::log(static_cast<double>(dim_));
  return value / volume_;
}

double MgfEngine::f(double alpha) const { return (log_two_exp(alpha) - log_zero_) / volume_; }

DeviationMeasure MgfEngine::deviation() const {
  std::vector<long> order;
  order.reserve(static_cast<size_t>(dim_));
  for (long j = 0; j < dim_; ++j)
    if (r_[j] > 0) order.push_back(j);
  std::stable_sort(order.begin(), order.end(),
                   [&](long a, long b) { return kappa_[a] < kappa_[b]; });

  const double total = r_.sum();
  double scale = 1.0;
  for (long j : order) scale = std::max(scale, std::abs(kappa_[j]) / volume_);
  const double tol = 1e-9 * scale;

  DeviationMeasure out;
  out.volume = volume_;
  for (long j : order) {
    const double atom = kappa_[j] / volume_;
    const double w = r_[j] / total;
    if (!out.atoms.empty() && atom - out.atoms.back() <= tol) {
      double& rep = out.atoms.back();
      double& rw = out.weights.back();
      if (atom != rep) rep = (rw * rep + w * atom) / (rw + w);
      rw += w;
    } else {
      out.atoms.push_back(atom);
      out.weights.push_back(w);
    }
  }
  return out;
}

GibbsState perturbed_state(const GibbsState& base, const Matrix& p, std::string label) {
  check_same_dim(p.rows(), base.dim(), "perturbed_state");
  check_same_dim(p.cols(), base.dim(), "perturbed_state");
  check_self_adjoint_matrix(p, "perturbed_state");
  if (label.empty()) label = base.label() + "/perturbed";
  return GibbsState(base.h_eff() - p, base.volume(), std::move(label));
}

Matrix exp_of(const SpectralDecomposition& sd, Complex z) {
  const long n = sd.dim();
  if (sd.perm) {
    Matrix out = Matrix::Zero(n, n);
    for (long j = 0; j < n; ++j) out((*sd.perm)[j], (*sd.perm)[j]) = std::exp(z * sd.eigenvalues[j]);
    return out;
  }
  Eigen::VectorXcd d(n);
  for (long j = 0; j < n; ++j) d[j] = std::exp(z * sd.eigenvalues[j]);
  return sd.vectors * d.asDiagonal() * sd.vectors.adjoint();
}

Matrix intertwiner(const Matrix& h, const Matrix& p, Complex z) {
  check_same_dim(h.rows(), p.rows(), "intertwiner");
  check_same_dim(h.cols(), p.cols(), "intertwiner");
  const Complex i(0, 1);
  Matrix sum = h + p;
  return exp_of(decompose(sum, "intertwiner:h+p"), i * z) *
         exp_of(decompose(h, "intertwiner:h"), -i * z);
}

ConjugationReport imaginary_time_conjugate(const SpectralDecomposition& h, const Matrix& a,
                                           double s) {
  const long n = h.dim();
  check_same_dim(a.rows(), n, "imaginary_time_conjugate");
  check_same_dim(a.cols(), n, "imaginary_time_conjugate");
  const Matrix v = h.perm ? h.dense_vectors() : h.vectors;
  Matrix tilde = v.adjoint() * a * v;
  for (long k = 0; k < n; ++k)
    for (long j = 0; j < n; ++j)
      tilde(j, k) *= std::exp(-s * (h.eigenvalues[j] - h.eigenvalues[k]));

  ConjugationReport rep;
  rep.value = v * tilde * v.adjoint();
  if (!rep.value.allFinite()) {
    rep.norm = std::numeric_limits<double>::infinity();
    rep.ill_conditioned = true;
  } else {
    rep.norm = operator_norm(rep.value);
    rep.ill_conditioned = rep.norm > 1e12;
  }
  if (rep.ill_conditioned)
    std::fprintf(stderr, "imaginary_time_conjugate: norm %.3e at s=%g is out of trust range\n",
                 rep.norm, s);
  return rep;
}

double kms_residual(const GibbsState& state, const Matrix& a, const Matrix& b,
                    const std::vector<double>& s_grid) {
  const long n = state.dim();
  check_same_dim(a.rows(), n, "kms_residual");
  check_same_dim(a.cols(), n, "kms_residual");
  check_same_dim(b.rows(), n, "kms_residual");
  check_same_dim(b.cols(), n, "kms_residual");
  for (double s : s_grid)
    if (!(s >= 0.0 && s <= 1.0))
      throw std::invalid_argument("kms_residual: grid point outside [0, 1]");

  const auto& sd = state.spectral();
  const Matrix v = sd.perm ? sd.dense_vectors() : sd.vectors;
  const Matrix at = v.adjoint() * a * v;
  const Matrix bt = v.adjoint() * b * v;
  Eigen::VectorXd ebar = sd.eigenvalues.array() - sd.eigenvalues[0];
  double z_tilde = 0;
  for (long k = 0; k < n; ++k) z_tilde += std::exp(-ebar[k]);

  // the two sides are evaluated as independent sums (different exponent
  // arithmetic and accumulation pairing); their agreement is the check
  double worst = 0;
  for (double s : s_grid) {
    Complex lhs(0, 0), rhs(0, 0);
    for (long j = 0; j < n; ++j)
      for (long k = 0; k < n; ++k) {
        lhs += at(j, k) * bt(k, j) * std::exp(-(1.0 - s) * ebar[j] - s * ebar[k]);
        rhs += at(k, j) * bt(j, k) * std::exp(-s * ebar[j] - (1.0 - s) * ebar[k]);
      }
    worst = std::max(worst, std::abs(lhs - rhs) / z_tilde);
  }
  return worst;
}

}  // namespace qlatt
