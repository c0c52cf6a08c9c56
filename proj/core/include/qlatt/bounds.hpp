#pragma once

#include <string>
#include <vector>

#include "qlatt/gibbs.hpp"
#include "qlatt/interaction.hpp"
#include "qlatt/operators.hpp"

namespace qlatt {

struct BoundReport {
  double lhs = 0;
  double rhs = 0;
  double margin = 0;  // rhs - lhs
  double slack = 0;   // additive tolerance used by `pass`
  bool pass = false;  // lhs <= rhs + slack
  int t_points = 0;
  int s_points = 0;
  double worst_t = 0;
  double worst_s = 0;
  // grid suprema where a refinement step is taken; rhs equals rhs_refined
  double rhs_coarse = 0;
  double rhs_refined = 0;
  double rhs_extrapolated = 0;
  std::string note;
};

// |log Tr e^{H+P} - log Tr e^{H}| <= ||P||. Dimensions above 64 are rejected;
// the point of the check is the inequality, not scale.
BoundReport lemma_part1(const Matrix& h, const Matrix& p);

// |log Tr(C e^{H+P}) - log Tr(C e^{H})| <= sup_{t in [0,1], |s| <= 1/2}
// ||e^{-s(H+tP)} P e^{s(H+tP)}|| for positive definite C. The supremum is
// taken on a t x s grid and once more on the doubled grid; pass compares
// against the refined value.
BoundReport lemma_part2(const Matrix& h, const Matrix& p, const Matrix& c, int t_points = 65,
                        int s_points = 65);

// ||e^{izH} A e^{-izH}|| <= (1 - |Im z| (lambda/2) ||Phi||_lambda)^{-1}
// ||A|| e^{lambda |X|} on a z grid inside the strip
// |Im z| <= 2 / (lambda ||Phi||_lambda). `a` is the observable already
// embedded on the region; `support_size` is |X|, the number of sites it
// genuinely acts on. Optional weights u in [0,1]^{terms_in(phi, region)}
// replace H by sum u_X phi_X. The report carries the worst grid point in
// (worst_t, worst_s) = (Re z, Im z).
BoundReport ruelle_bound(const Interaction& phi, double lambda, const Region& region,
                         const Matrix& a, int support_size, const std::vector<Complex>& z_grid,
                         const std::vector<double>* u_weights = nullptr);

struct ThetaNormReport {
  double theta = 0;
  double operator_norm = 0;  // ||A||
  // compression upper bounds on inf{||A - B||: B supported on [-n, n]},
  // forced nonincreasing by running minima; index n = 0..n_max
  std::vector<double> tails;
  // sum_n theta^{-n} tail_n with tail_0 replaced by ||A|| (the quoted
  // definition), and the decaying variant sum_n theta^{+n} tail_n
  double sum_quoted = 0;
  double sum_decay = 0;
  bool truncated = false;  // tail at the window edge is still nonzero
};

// A lives on the 2 n_max + 1 sites of the window [-n_max, n_max], each of
// dimension site_dim. The compression onto [-n, n] is the partial trace over
// the complement, normalized, tensored back with the identity.
ThetaNormReport theta_norms(const Matrix& a, double theta, int n_max, int site_dim = 2);

struct SubadditivityReport {
  double alpha = 0;
  double lhs = 0;  // |g_whole - covered_fraction * g_block|
  double g_whole = 0;
  double g_block = 0;
  int blocks = 0;
  int block_side = 0;
  int remainder = 0;
  double phi_part = 0;         // surface estimate from the interaction terms
  double psi_part = 0;         // surface estimate from the observable terms
  double rhs = 0;              // phi_part + psi_part
  double rhs_printed = 0;      // variant with the quoted second prefactor; NaN when inapplicable
  bool psi_part_from_norm = false;  // single-site fallback (L - na) |alpha| ||Psi||_0 / L used
  bool pass = false;
  std::string note;
};

// Block estimate on a chain of `length` sites cut into blocks of side
// `block_side`: the normalized-trace g of the whole chain against the scaled
// block g, bounded by the crossing and remainder term sums with the
// high-temperature prefactors. beta scales the interaction; lambda is the
// norm weight. Rejects parameters outside the high-temperature window.
SubadditivityReport subadditivity_gap(const Interaction& phi, const Interaction& psi, double beta,
                                      double alpha, int length, int block_side, double lambda);

struct TraceRatioReport {
  double alpha = 0;
  long inner_size = 0;
  long outer_size = 0;
  double state_value = 0;  // |L|^-1 log omega_V(e^{alpha K_L})
  double trace_value = 0;  // |L|^-1 log Tr(e^{alpha K_L} e^{-H_L}) / Tr e^{-H_L}
  double discrepancy = 0;  // |state_value - trace_value|
};

// Compares the deviation generating function of K over the inner chain under
// the outer-chain Gibbs state against the inner-chain trace ratio. beta
// scales the interaction; both chains start at the origin.
TraceRatioReport omega_vs_trace_ratio(const Interaction& phi, const Interaction& psi, double beta,
                                      double alpha, int inner_length, int outer_length);

struct ArakiReport {
  double s_phi = 0;        // dispersion norm of the interaction
  double theta = 0;
  double h = 0;
  double theta_prime = 0;  // theta e^{4 h S(Phi)}
  bool admissible = false; // theta_prime < 1
  double log_f_r = 0;      // log F_R(2 S(Phi)) for the declared range
  std::vector<int> lengths;
  std::vector<double> conjugation_norms;  // ||e^{-sH} A e^{sH}|| per length
  double spread = 0;                      // max/min - 1 across lengths
};

// Ingredients of the one-dimensional localization estimate plus an empirical
// uniformity probe: the observable `a` (terms anchored at 0) is placed at the
// center of chains of the given lengths and conjugated to imaginary time s.
// The full inequality carries an unknown constant and is not asserted.
ArakiReport araki_uniformity(const Interaction& phi, const Interaction& a, double s, double theta,
                             double h, const std::vector<int>& lengths);

}  // namespace qlatt
