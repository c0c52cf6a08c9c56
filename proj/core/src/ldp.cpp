#include "qlatt/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qlatt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pressure_at(const AssembledOperator& h, const AssembledOperator& n, double beta,
                   double mu) {
  Matrix exponent = -beta * (h.matrix - mu * n.matrix);
  return log_trace_exp(exponent) / h.volume();
}

// lower convex hull of (alpha, f), evaluated back on the alpha grid
std::vector<double> lower_hull(const std::vector<double>& alpha, const std::vector<double>& f) {
  const size_t n = alpha.size();
  std::vector<size_t> hull;
  for (size_t i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      const size_t a = hull[hull.size() - 2];
      const size_t b = hull[hull.size() - 1];
      const double cross = (alpha[b] - alpha[a]) * (f[i] - f[a]) -
                           (alpha[i] - alpha[a]) * (f[b] - f[a]);
      if (cross <= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }
  std::vector<double> out(n);
  size_t seg = 0;
  for (size_t i = 0; i < n; ++i) {
    while (seg + 1 < hull.size() && alpha[hull[seg + 1]] <= alpha[i]) ++seg;
    if (seg + 1 == hull.size()) {
      out[i] = f[hull[seg]];
    } else {
      const size_t a = hull[seg];
      const size_t b = hull[seg + 1];
      const double t = (alpha[i] - alpha[a]) / (alpha[b] - alpha[a]);
      out[i] = f[a] + t * (f[b] - f[a]);
    }
  }
  return out;
}

}  // namespace

Extrapolation extrapolate(const std::vector<long>& volumes, const std::vector<double>& values) {
  if (volumes.size() != values.size())
    throw std::invalid_argument("extrapolate: size mismatch");
  if (volumes.size() < 3) throw std::invalid_argument("extrapolate: need at least three volumes");
  for (size_t i = 1; i < volumes.size(); ++i)
    if (volumes[i] <= volumes[i - 1])
      throw std::invalid_argument("extrapolate: volumes must be strictly increasing");

  Extrapolation out;
  for (size_t i = 2; i + 1 < volumes.size(); ++i) {
    const double prev = std::abs(values[i - 1] - values[i - 2]);
    const double next = std::abs(values[i] - values[i - 1]);
    if (next > prev + 1e-12) out.non_cauchy = true;
  }
  if (volumes.size() >= 3) {
    const double tail_prev = std::abs(values[volumes.size() - 2] - values[volumes.size() - 3]);
    const double tail = std::abs(values.back() - values[volumes.size() - 2]);
    if (tail > tail_prev + 1e-12) out.non_cauchy = true;
  }

  const size_t m = volumes.size();
  double su = 0, suu = 0, sy = 0, suy = 0;
  for (size_t i = m - 3; i < m; ++i) {
    const double u = 1.0 / static_cast<double>(volumes[i]);
    su += u;
    suu += u * u;
    sy += values[i];
    suy += u * values[i];
  }
  const double det = 3.0 * suu - su * su;
  out.surface_c = (3.0 * suy - su * sy) / det;
  out.estimate = (sy - out.surface_c * su) / 3.0;
  for (size_t i = m - 3; i < m; ++i) {
    const double fit = out.estimate + out.surface_c / static_cast<double>(volumes[i]);
    out.error = std::max(out.error, std::abs(fit - values[i]));
  }
  return out;
}

void extrapolate_curve(MGFCurve& curve) {
  const size_t na = curve.alpha.size();
  curve.extrapolated.assign(na, 0.0);
  curve.error_bars.assign(na, 0.0);
  curve.non_cauchy.assign(na, false);
  std::vector<double> column(curve.volumes.size());
  for (size_t i = 0; i < na; ++i) {
    for (size_t v = 0; v < curve.volumes.size(); ++v) column[v] = curve.values[v][i];
    Extrapolation e = extrapolate(curve.volumes, column);
    curve.extrapolated[i] = e.estimate;
    curve.error_bars[i] = e.error;
    curve.non_cauchy[i] = e.non_cauchy;
  }
}

void validate_curve(const MGFCurve& curve) {
  const size_t na = curve.alpha.size();
  if (na < 2) throw std::invalid_argument("mgf curve: need at least two alpha points");
  for (size_t i = 1; i < na; ++i)
    if (!(curve.alpha[i] > curve.alpha[i - 1]))
      throw std::invalid_argument("mgf curve: alpha grid must be ascending");
  if (curve.values.size() != curve.volumes.size())
    throw std::invalid_argument("mgf curve: one value row per volume");

  if (!curve.window_unbounded)
    for (double a : curve.alpha)
      if (std::abs(a) >= curve.alpha_window)
        throw std::invalid_argument("mgf curve: alpha grid leaves the admissible window");

  for (size_t v = 0; v < curve.values.size(); ++v) {
    const auto& row = curve.values[v];
    if (row.size() != na) throw std::invalid_argument("mgf curve: ragged value row");
    for (size_t i = 0; i < na; ++i) {
      if (!std::isfinite(row[i])) throw std::invalid_argument("mgf curve: non-finite value");
      if (curve.alpha[i] == 0.0 && row[i] != 0.0)
        throw std::invalid_argument("mgf curve: f(0) must vanish exactly");
    }
    for (size_t i = 1; i + 1 < na; ++i) {
      const double left = (row[i] - row[i - 1]) / (curve.alpha[i] - curve.alpha[i - 1]);
      const double right = (row[i + 1] - row[i]) / (curve.alpha[i + 1] - curve.alpha[i]);
      if (right - left < -1e-9) throw std::invalid_argument("mgf curve: convexity violated");
    }
  }
}

double RateFunction::evaluate(double xq) const {
  if (x.empty()) return kInf;
  if (xq <= x.front()) return value.front();
  if (xq >= x.back()) return value.back();
  const auto it = std::upper_bound(x.begin(), x.end(), xq);
  const size_t hi = static_cast<size_t>(it - x.begin());
  const size_t lo = hi - 1;
  const double t = (xq - x[lo]) / (x[hi] - x[lo]);
  return value[lo] + t * (value[hi] - value[lo]);
}

double RateFunction::minimum() const {
  double best = kInf;
  for (double v : value) best = std::min(best, v);
  return best;
}

RateFunction legendre(const std::vector<double>& alpha, const std::vector<double>& f,
                      const std::vector<double>& x_grid) {
  const size_t n = alpha.size();
  if (f.size() != n) throw std::invalid_argument("legendre: size mismatch");
  if (n < 2) throw std::invalid_argument("legendre: need at least two points");
  for (size_t i = 0; i < n; ++i)
    if (!std::isfinite(alpha[i]) || !std::isfinite(f[i]))
      throw std::invalid_argument("legendre: non-finite input");
  for (size_t i = 1; i < n; ++i)
    if (!(alpha[i] > alpha[i - 1]))
      throw std::invalid_argument("legendre: alpha grid must be strictly ascending");

  std::vector<double> hull = lower_hull(alpha, f);
  double worst = 0;
  for (size_t i = 0; i < n; ++i) worst = std::max(worst, f[i] - hull[i]);
  if (worst > 1e-9)
    throw std::invalid_argument("legendre: input not convex beyond tolerance");

  RateFunction out;
  out.slope_lo = (hull[1] - hull[0]) / (alpha[1] - alpha[0]);
  out.slope_hi = (hull[n - 1] - hull[n - 2]) / (alpha[n - 1] - alpha[n - 2]);

  if (!x_grid.empty()) {
    out.x = x_grid;
    for (size_t i = 1; i < out.x.size(); ++i)
      if (!(out.x[i] > out.x[i - 1]))
        throw std::invalid_argument("legendre: x grid must be strictly ascending");
  } else if (out.slope_hi - out.slope_lo < 1e-15) {
    out.x = {out.slope_lo};
  } else {
    const int points = 401;
    out.x.resize(points);
    for (int i = 0; i < points; ++i)
      out.x[static_cast<size_t>(i)] =
          out.slope_lo + (out.slope_hi - out.slope_lo) * i / (points - 1);
  }

  out.value.resize(out.x.size());
  out.window_limited.resize(out.x.size());
  size_t j = 0;
  for (size_t q = 0; q < out.x.size(); ++q) {
    const double xq = out.x[q];
    while (j + 1 < n && alpha[j + 1] * xq - hull[j + 1] >= alpha[j] * xq - hull[j]) ++j;
    out.value[q] = alpha[j] * xq - hull[j];
    out.window_limited[q] = xq < out.slope_lo - 1e-12 || xq > out.slope_hi + 1e-12;
  }
  return out;
}

TranslatedPressure translated_pressure_energy(const AssembledOperator& h,
                                              const AssembledOperator& n, double beta, double mu,
                                              double alpha) {
  if (alpha == beta) throw std::invalid_argument("translated_pressure_energy: alpha equals beta");
  TranslatedPressure out;
  out.volume = static_cast<long>(h.volume());
  out.beta_shifted = beta - alpha;
  out.mu_shifted = beta * mu / (beta - alpha);
  out.conditioning_warning = std::abs(beta - alpha) < 0.05;
  out.base = pressure_at(h, n, beta, mu);
  out.shifted = pressure_at(h, n, out.beta_shifted, out.mu_shifted);
  out.value = out.shifted - out.base;
  return out;
}

TranslatedPressure translated_pressure_density(const AssembledOperator& h,
                                               const AssembledOperator& n, double beta, double mu,
                                               double alpha) {
  if (!(beta > 0)) throw std::invalid_argument("translated_pressure_density: beta must be positive");
  TranslatedPressure out;
  out.volume = static_cast<long>(h.volume());
  out.beta_shifted = beta;
  out.mu_shifted = mu + alpha / beta;
  out.base = pressure_at(h, n, beta, mu);
  out.shifted = pressure_at(h, n, beta, out.mu_shifted);
  out.value = out.shifted - out.base;
  return out;
}

DecayProbeReport decay_probe(const std::vector<DeviationMeasure>& measures, double c_lo,
                             double c_hi, const RateFunction& rate) {
  if (!(c_lo <= c_hi)) throw std::invalid_argument("decay_probe: empty interval");
  DecayProbeReport rep;
  rep.c_lo = c_lo;
  rep.c_hi = c_hi;

  double grid_inf = kInf;
  for (size_t q = 0; q < rate.x.size(); ++q)
    if (rate.x[q] >= c_lo && rate.x[q] <= c_hi) grid_inf = std::min(grid_inf, rate.value[q]);

  for (const auto& m : measures) {
    DecayProbeRow row;
    row.volume = static_cast<long>(m.volume);
    row.mass = m.probability(c_lo, c_hi);
    if (row.mass > 0) {
      row.rate = -std::log(row.mass) / m.volume;
    } else {
      row.rate = kInf;
      row.infinite = true;
    }
    row.inf_rate_grid = grid_inf;
    row.inf_rate_atoms = kInf;
    for (size_t i = 0; i < m.atoms.size(); ++i)
      if (m.atoms[i] >= c_lo && m.atoms[i] <= c_hi)
        row.inf_rate_atoms = std::min(row.inf_rate_atoms, rate.evaluate(m.atoms[i]));
    row.gap_grid = row.rate - row.inf_rate_grid;
    row.gap_atoms = row.rate - row.inf_rate_atoms;
    rep.rows.push_back(row);
  }

  auto monotone = [&](auto pick) {
    for (size_t i = 1; i < rep.rows.size(); ++i) {
      const double prev = pick(rep.rows[i - 1]);
      const double cur = pick(rep.rows[i]);
      if (std::isinf(prev) || std::isinf(cur)) return false;
      if (cur > prev + 1e-12) return false;
    }
    return !rep.rows.empty();
  };
  rep.monotone_gap_grid = monotone([](const DecayProbeRow& r) { return r.gap_grid; });
  rep.monotone_gap_atoms = monotone([](const DecayProbeRow& r) { return r.gap_atoms; });
  return rep;
}

}  // namespace qlatt
