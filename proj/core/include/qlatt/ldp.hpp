#pragma once

#include <limits>
#include <string>
#include <vector>

#include "qlatt/gibbs.hpp"

namespace qlatt {

// Per-volume deviation generating curves over a shared alpha grid, with the
// thermodynamic extrapolation filled in by extrapolate_curve.
struct MGFCurve {
  std::vector<double> alpha;  // ascending
  std::vector<long> volumes;  // ascending |L|
  std::vector<std::vector<double>> values;  // values[v][i] = f at volumes[v], alpha[i]
  std::vector<double> extrapolated;
  std::vector<double> error_bars;
  std::vector<bool> non_cauchy;
  double alpha_window = std::numeric_limits<double>::infinity();
  bool window_unbounded = true;
};

struct Extrapolation {
  double estimate = 0;
  double error = 0;      // max fit deviation over the points used
  double surface_c = 0;  // fitted coefficient of 1/|L|
  bool non_cauchy = false;
};

// Least-squares fit of value = estimate + surface_c / |L| over the largest
// three volumes; the 1/|L| ansatz is a free-boundary heuristic, not a
// certified limit. Flags sequences whose increments fail to shrink.
Extrapolation extrapolate(const std::vector<long>& volumes, const std::vector<double>& values);

// Fills extrapolated/error_bars/non_cauchy per alpha.
void extrapolate_curve(MGFCurve& curve);

// Throws unless every per-volume curve is convex to 1e-9, vanishes at
// alpha = 0 when the grid contains it, and stays inside the alpha window.
void validate_curve(const MGFCurve& curve);

struct RateFunction {
  std::vector<double> x;  // ascending
  std::vector<double> value;
  // true where the conjugate is only the boundary linear extension (x beyond
  // the attained slope range); the true transform is +infinity there
  std::vector<bool> window_limited;
  double slope_lo = 0;  // attained slope range of the input
  double slope_hi = 0;

  // linear interpolation, clamped to the grid ends
  double evaluate(double xq) const;
  double minimum() const;
};

// Grid-max Legendre transform I(x) = max_i (a_i x - f_i). Convexity
// violations up to 1e-9 are repaired by the lower convex hull; larger ones
// are rejected. The default x grid is 401 points spanning the attained slope
// range.
RateFunction legendre(const std::vector<double>& alpha, const std::vector<double>& f,
                      const std::vector<double>& x_grid = {});

struct TranslatedPressure {
  double value = 0;  // shifted - base
  double base = 0;
  double shifted = 0;
  double beta_shifted = 0;
  double mu_shifted = 0;
  long volume = 0;
  bool conditioning_warning = false;  // |beta - alpha| below 0.05
};

// P(beta - alpha, beta mu / (beta - alpha)) - P(beta, mu) with the ordinary
// trace at fixed finite volume; equals the K = H deviation function when
// [H, N] = 0. Rejects alpha = beta.
TranslatedPressure translated_pressure_energy(const AssembledOperator& h,
                                              const AssembledOperator& n, double beta, double mu,
                                              double alpha);

// P(beta, mu + alpha/beta) - P(beta, mu); equals the K = N deviation function
// when [H, N] = 0.
TranslatedPressure translated_pressure_density(const AssembledOperator& h,
                                               const AssembledOperator& n, double beta, double mu,
                                               double alpha);

struct DecayProbeRow {
  long volume = 0;
  double mass = 0;            // measure of the closed interval
  double rate = 0;            // -log(mass) / |L|; infinite when mass = 0
  bool infinite = false;
  double inf_rate_grid = 0;   // inf of I over grid points inside the interval
  double inf_rate_atoms = 0;  // inf of I over this measure's atoms inside it
  double gap_grid = 0;
  double gap_atoms = 0;
};

struct DecayProbeReport {
  double c_lo = 0;
  double c_hi = 0;
  std::vector<DecayProbeRow> rows;
  bool monotone_gap_grid = false;   // nonincreasing along the volume sequence
  bool monotone_gap_atoms = false;
};

// Finite-volume decay rates of the closed interval [c_lo, c_hi] against the
// rate-function infimum, under both comparators: the plain grid infimum and
// the infimum over the atoms the measure actually places inside the interval
// (the lattice-adapted reading; the two differ when the interval boundary
// falls between atoms).
DecayProbeReport decay_probe(const std::vector<DeviationMeasure>& measures, double c_lo,
                             double c_hi, const RateFunction& rate);

}  // namespace qlatt
