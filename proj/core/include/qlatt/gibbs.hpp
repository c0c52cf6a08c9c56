#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlatt/operators.hpp"
#include "qlatt/spectral.hpp"

namespace qlatt {

// Both trace normalizations are first-class. Ordinary is Tr, Normalized is
// Tr / dim; expectation values of observables agree, extensive quantities
// (partition functions, pressures) differ by log dim.
enum class TraceConvention { Ordinary, Normalized };

// log Tr e^{M} for self-adjoint M, stable at any spectral scale.
double log_trace_exp(const Matrix& m);
double log_trace_exp(const SpectralDecomposition& sd);

// beta (H - mu N). Passing mu != 0 requires the number operator; beta = 0 is
// the infinite-temperature state.
AssembledOperator effective_hamiltonian(const AssembledOperator& h, double beta, double mu = 0.0,
                                        const AssembledOperator* number = nullptr);

// Equilibrium state with density e^{-H_eff} / Tr e^{-H_eff}. The exponent is
// kept so the state can be perturbed later.
class GibbsState {
 public:
  GibbsState(Matrix h_eff, double volume, std::string label = "");
  explicit GibbsState(const AssembledOperator& h_eff);

  long dim() const { return sd_.dim(); }
  double volume() const { return volume_; }
  const std::string& label() const { return label_; }
  const Matrix& h_eff() const { return h_eff_; }
  const SpectralDecomposition& spectral() const { return sd_; }
  const Eigen::VectorXd& weights() const { return weights_; }  // sums to 1

  double log_partition(TraceConvention c) const;
  double expectation(const Matrix& a) const;  // self-adjoint observables
  Complex expectation_c(const Matrix& a) const;

 private:
  Matrix h_eff_;
  double volume_ = 0;
  std::string label_;
  SpectralDecomposition sd_;
  Eigen::VectorXd weights_;
  double log_z_ = 0;  // ordinary convention
};

// Per-site pressure log Tr e^{-H_eff} / |L| under the chosen convention.
double pressure_rate(const GibbsState& state, TraceConvention c);

// Same pressure from a charge-blocked decomposition of H, without assembling
// beta (H - mu N) densely.
double grand_pressure_blocked(const BlockedSpectral& h, double beta, double mu, double volume,
                              TraceConvention c);

struct EntropyEnergyReport {
  // (S_vN - log dim) / |L|, the sign that satisfies pressure = entropy - energy
  double entropy_rate = 0;
  // omega(log rho) / |L| for the normalized-trace density; equals -entropy_rate
  double entropy_rate_alt = 0;
  double energy_rate = 0;  // omega(H_eff) / |L|
  double pressure = 0;     // normalized convention
  double identity_residual = 0;
};

EntropyEnergyReport mean_entropy_energy(const GibbsState& state);

// Atomic distribution of K / |L| in the state, atoms ascending. Atoms closer
// than 1e-9 (relative) are merged into their weighted mean; zero-weight atoms
// are dropped.
struct DeviationMeasure {
  std::vector<double> atoms;
  std::vector<double> weights;  // positive, sums to 1
  double volume = 0;

  double probability(double lo, double hi) const;  // mass of the closed interval
};

// Trace of e^{alpha K} e^{-H_eff} as a single spectral sum
//
//   Tr(e^{alpha K} e^{-H_eff}) = sum_j e^{alpha kappa_j} r_j,
//   r_j = sum_k |<k_j|h_k>|^2 e^{-eta_k}
//
// with alpha-independent weights r_j, so a sweep over alpha costs O(dim) per
// point after construction. Diagonal exponents and diagonal observables skip
// the dense eigenvector overlap. The weights are stored shifted by the ground
// energy, so construction and evaluation never overflow.
class MgfEngine {
 public:
  MgfEngine(const AssembledOperator& h_eff, const AssembledOperator& k);

  // K is the conserved charge used for the blocking
  static MgfEngine blocked_charge(const BlockedSpectral& h_eff, double volume);
  // K = H recovered from the effective exponent beta (H - mu N): on a sector
  // of charge q, kappa = eta / beta + mu q
  static MgfEngine blocked_energy(const BlockedSpectral& h_eff, double beta, double mu,
                                  double volume);

  long dim() const { return dim_; }
  double volume() const { return volume_; }

  double log_two_exp(double alpha) const;  // log Tr e^{alpha K} e^{-H_eff}
  double g(double alpha, TraceConvention c) const;
  // g(alpha) - g(0), the convention-free deviation generating function;
  // exactly zero at alpha = 0
  double f(double alpha) const;

  DeviationMeasure deviation() const;

 private:
  MgfEngine() = default;
  void finalize();

  Eigen::VectorXd kappa_;
  Eigen::VectorXd r_;  // nonnegative, shifted by e^{eta_min}
  double eta_min_ = 0;
  double log_zero_ = 0;  // log_two_exp(0), the same code path as any alpha
  double volume_ = 0;
  long dim_ = 0;
};

// State with density e^{-(H_eff - P)}, normalized.
GibbsState perturbed_state(const GibbsState& base, const Matrix& p, std::string label = "");

// V e^{z diag} V^dagger from a self-adjoint decomposition.
Matrix exp_of(const SpectralDecomposition& sd, Complex z);

// e^{iz(H+P)} e^{-izH}; unitary for real z, a positive factorization for
// imaginary z. Overflow for large |Im z| ||H|| is the caller's regime to avoid.
Matrix intertwiner(const Matrix& h, const Matrix& p, Complex z);

struct ConjugationReport {
  Matrix value;                 // e^{-sH} A e^{sH}
  double norm = 0;              // operator norm of the value
  bool ill_conditioned = false; // norm passed 1e12
};

// Imaginary-time conjugation in the eigenbasis of the exponent: entrywise
// scaling by e^{-s(eta_j - eta_k)}, no inverse of an exponential is formed.
ConjugationReport imaginary_time_conjugate(const SpectralDecomposition& h, const Matrix& a,
                                           double s);

// max over the grid of |omega(A tau_{is}(B)) - omega(tau_{i(s-1)}(B) A)|.
// Every weight in both sums is e^{-(mix of eta - eta_min)} <= 1 for s in
// [0, 1], so the residual is a pure rounding figure; grid points outside
// [0, 1] are rejected.
double kms_residual(const GibbsState& state, const Matrix& a, const Matrix& b,
                    const std::vector<double>& s_grid);

}  // namespace qlatt
