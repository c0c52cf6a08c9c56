#include "qlatt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qlatt/representation.hpp"

namespace qlatt {

namespace {

constexpr double kSlack = 1e-9;

void check_square_pair(const Matrix& h, const Matrix& p, const char* what) {
  if (h.rows() != h.cols() || p.rows() != p.cols())
    throw std::invalid_argument(std::string(what) + ": matrices must be square");
  if (h.rows() != p.rows())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

double log_trace_against(const Matrix& c, const Matrix& exponent, const char* what) {
  Matrix e = exp_of(decompose(exponent, what), Complex(1, 0));
  const double value = (c * e).trace().real();
  if (!(value > 0)) throw std::runtime_error(std::string(what) + ": trace lost positivity");
  return std::log(value);
}

// sup over the grid of ||e^{-s(H+tP)} P e^{s(H+tP)}||; the outer unitary
// conjugation does not change the norm, so only the eigenbasis scaling runs
double conjugation_grid_max(const Matrix& h, const Matrix& p, int t_points, int s_points,
                            double* worst_t, double* worst_s) {
  const long n = h.rows();
  double best = -std::numeric_limits<double>::infinity();
  for (int ti = 0; ti < t_points; ++ti) {
    const double t = static_cast<double>(ti) / (t_points - 1);
    Matrix ht = h + t * p;
    auto sd = decompose(ht, "lemma_part2:grid");
    const Matrix v = sd.perm ? sd.dense_vectors() : sd.vectors;
    Matrix pt = v.adjoint() * p * v;
    for (int si = 0; si < s_points; ++si) {
      const double s = -0.5 + static_cast<double>(si) / (s_points - 1);
      Matrix scaled(n, n);
      for (long k = 0; k < n; ++k)
        for (long j = 0; j < n; ++j)
          scaled(j, k) = pt(j, k) * std::exp(-s * (sd.eigenvalues[j] - sd.eigenvalues[k]));
      const double value = operator_norm(scaled);
      if (value > best) {
        best = value;
        if (worst_t) *worst_t = t;
        if (worst_s) *worst_s = s;
      }
    }
  }
  return best;
}

}  // namespace

BoundReport lemma_part1(const Matrix& h, const Matrix& p) {
  check_square_pair(h, p, "lemma_part1");
  if (h.rows() > 64) throw std::invalid_argument("lemma_part1: dimension capped at 64");
  BoundReport rep;
  Matrix sum = h + p;
  rep.lhs = std::abs(log_trace_exp(sum) - log_trace_exp(h));
  rep.rhs = hermitian_norm(p);
  rep.slack = kSlack;
  rep.margin = rep.rhs - rep.lhs;
  rep.pass = rep.lhs <= rep.rhs + rep.slack;
  return rep;
}

BoundReport lemma_part2(const Matrix& h, const Matrix& p, const Matrix& c, int t_points,
                        int s_points) {
  check_square_pair(h, p, "lemma_part2");
  check_square_pair(h, c, "lemma_part2");
  if (t_points < 33 || s_points < 33)
    throw std::invalid_argument("lemma_part2: grids need at least 33 points");
  auto csd = decompose(c, "lemma_part2:C");
  if (!(csd.eigenvalues[0] > 0))
    throw std::invalid_argument("lemma_part2: C must be positive definite");

  BoundReport rep;
  Matrix sum = h + p;
  rep.lhs = std::abs(log_trace_against(c, sum, "lemma_part2:H+P") -
                     log_trace_against(c, h, "lemma_part2:H"));
  rep.t_points = t_points;
  rep.s_points = s_points;
  rep.rhs_coarse = conjugation_grid_max(h, p, t_points, s_points, nullptr, nullptr);
  rep.rhs_refined =
      conjugation_grid_max(h, p, 2 * t_points - 1, 2 * s_points - 1, &rep.worst_t, &rep.worst_s);
  rep.rhs_extrapolated = rep.rhs_refined + (rep.rhs_refined - rep.rhs_coarse) / 3.0;
  rep.rhs = rep.rhs_refined;
  rep.slack = kSlack;
  rep.margin = rep.rhs - rep.lhs;
  rep.pass = rep.lhs <= rep.rhs + rep.slack;
  std::ostringstream note;
  note << "refined grid " << (2 * t_points - 1) << "x" << (2 * s_points - 1);
  rep.note = note.str();
  return rep;
}

BoundReport ruelle_bound(const Interaction& phi, double lambda, const Region& region,
                         const Matrix& a, int support_size, const std::vector<Complex>& z_grid,
                         const std::vector<double>* u_weights) {
  if (!(lambda > 0)) throw std::invalid_argument("ruelle_bound: lambda must be positive");
  if (support_size < 0) throw std::invalid_argument("ruelle_bound: negative support size");
  if (z_grid.empty()) throw std::invalid_argument("ruelle_bound: empty grid");

  const auto placed = terms_in(phi, region);
  Matrix h;
  if (u_weights == nullptr) {
    h = assemble(phi, region, "ruelle:H").matrix;
  } else {
    if (u_weights->size() != placed.size())
      throw std::invalid_argument("ruelle_bound: one weight per placed term required");
    for (double u : *u_weights)
      if (!(u >= 0.0 && u <= 1.0))
        throw std::invalid_argument("ruelle_bound: weights must lie in [0, 1]");
    for (size_t i = 0; i < placed.size(); ++i) {
      Matrix term = assemble_terms(phi, {placed[i]}, region, "ruelle:term").matrix;
      if (h.size() == 0)
        h = (*u_weights)[i] * term;
      else
        h += (*u_weights)[i] * term;
    }
    if (h.size() == 0) {
      const long dim = assemble(phi, region, "ruelle:empty").matrix.rows();
      h = Matrix::Zero(dim, dim);
    }
  }
  if (a.rows() != h.rows() || a.cols() != h.cols())
    throw std::invalid_argument("ruelle_bound: observable dimension mismatch");

  const auto nr = phi.norms(lambda);
  const double strip = nr.norm_lambda > 0 ? 2.0 / (lambda * nr.norm_lambda)
                                          : std::numeric_limits<double>::infinity();
  for (const Complex& z : z_grid)
    if (std::abs(z.imag()) > strip * (1 + 1e-12))
      throw std::invalid_argument("ruelle_bound: grid point outside the admissible strip");

  auto sd = decompose(h, "ruelle:H");
  const double a_norm = operator_norm(a);
  const double base = a_norm * std::exp(lambda * support_size);
  const Complex i(0, 1);

  BoundReport rep;
  rep.t_points = static_cast<int>(z_grid.size());
  rep.slack = kSlack;
  rep.pass = true;
  double worst_gap = -std::numeric_limits<double>::infinity();
  for (const Complex& z : z_grid) {
    Matrix conj = exp_of(sd, i * z) * a * exp_of(sd, -i * z);
    const double lhs = operator_norm(conj);
    const double denom = 1.0 - std::abs(z.imag()) * 0.5 * lambda * nr.norm_lambda;
    const double rhs = denom > 0 ? base / denom : std::numeric_limits<double>::infinity();
    if (lhs > rhs + rep.slack) rep.pass = false;
    const double gap = lhs - rhs;
    if (gap >= worst_gap) {
      worst_gap = gap;
      rep.lhs = lhs;
      rep.rhs = rhs;
      rep.worst_t = z.real();
      rep.worst_s = z.imag();
    }
  }
  rep.margin = rep.rhs - rep.lhs;
  std::ostringstream note;
  note << "strip half-width " << strip << (u_weights ? ", weighted" : "");
  rep.note = note.str();
  return rep;
}

namespace {

// normalized partial trace onto the kept slots, tensored back with identity
Matrix window_compression(const Matrix& a, const std::vector<int>& kept, int n_sites, int d) {
  if (static_cast<int>(kept.size()) == n_sites) return a;
  std::vector<int> out;
  for (int s = 0; s < n_sites; ++s)
    if (std::find(kept.begin(), kept.end(), s) == kept.end()) out.push_back(s);

  std::vector<long> stride(static_cast<size_t>(n_sites));
  long acc = 1;
  for (int s = n_sites - 1; s >= 0; --s) {
    stride[static_cast<size_t>(s)] = acc;
    acc *= d;
  }
  auto offsets = [&](const std::vector<int>& slots) {
    long count = 1;
    for (size_t q = 0; q < slots.size(); ++q) count *= d;
    std::vector<long> table(static_cast<size_t>(count), 0);
    for (long idx = 0; idx < count; ++idx) {
      long rem = idx;
      long off = 0;
      for (size_t q = slots.size(); q-- > 0;) {
        off += (rem % d) * stride[static_cast<size_t>(slots[q])];
        rem /= d;
      }
      table[static_cast<size_t>(idx)] = off;
    }
    return table;
  };
  const auto kept_off = offsets(kept);
  const auto out_off = offsets(out);
  const long dk = static_cast<long>(kept_off.size());
  const long dout = static_cast<long>(out_off.size());

  Matrix b = Matrix::Zero(dk, dk);
  for (long g : out_off)
    for (long jj = 0; jj < dk; ++jj)
      for (long ii = 0; ii < dk; ++ii) b(ii, jj) += a(kept_off[ii] + g, kept_off[jj] + g);
  b /= static_cast<double>(dout);
  return embed_local(b, kept, n_sites, d);
}

}  // namespace

ThetaNormReport theta_norms(const Matrix& a, double theta, int n_max, int site_dim) {
  if (!(theta > 0 && theta < 1)) throw std::invalid_argument("theta_norms: theta must be in (0,1)");
  if (n_max < 0) throw std::invalid_argument("theta_norms: negative window");
  if (site_dim < 2) throw std::invalid_argument("theta_norms: site dimension must be at least 2");
  const int n_sites = 2 * n_max + 1;
  long dim = 1;
  for (int s = 0; s < n_sites; ++s) dim *= site_dim;
  if (a.rows() != dim || a.cols() != dim)
    throw std::invalid_argument("theta_norms: matrix does not match the window");

  ThetaNormReport rep;
  rep.theta = theta;
  rep.operator_norm = operator_norm(a);
  rep.tails.resize(static_cast<size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    std::vector<int> kept;
    for (int s = n_max - n; s <= n_max + n; ++s) kept.push_back(s);
    Matrix approx = window_compression(a, kept, n_sites, site_dim);
    double tail = operator_norm(a - approx);
    if (n > 0) tail = std::min(tail, rep.tails[static_cast<size_t>(n) - 1]);
    rep.tails[static_cast<size_t>(n)] = tail;
  }

  rep.sum_quoted = rep.operator_norm;
  rep.sum_decay = rep.tails[0];
  for (int n = 1; n <= n_max; ++n) {
    rep.sum_quoted += std::pow(theta, -n) * rep.tails[static_cast<size_t>(n)];
    rep.sum_decay += std::pow(theta, n) * rep.tails[static_cast<size_t>(n)];
  }
  rep.truncated = rep.tails.back() > 1e-14;
  return rep;
}

SubadditivityReport subadditivity_gap(const Interaction& phi, const Interaction& psi, double beta,
                                      double alpha, int length, int block_side, double lambda) {
  if (phi.dimension() != 1 || psi.dimension() != 1)
    throw std::invalid_argument("subadditivity_gap: one-dimensional chains only");
  if (!(lambda > 0)) throw std::invalid_argument("subadditivity_gap: lambda must be positive");
  if (!(beta >= 0)) throw std::invalid_argument("subadditivity_gap: beta must be nonnegative");
  if (length < 1 || block_side < 1 || block_side > length)
    throw std::invalid_argument("subadditivity_gap: invalid geometry");

  const Interaction phi_eff = phi.scaled(beta);
  const auto nr_phi = phi_eff.norms(lambda);
  if (!(nr_phi.h1_margin < 1))
    throw std::invalid_argument("subadditivity_gap: scaled interaction outside the H1 window");
  const auto nr_psi = psi.norms(lambda);
  const double denom_main = 1.0 - std::abs(alpha) * 0.25 * lambda * nr_psi.norm_lambda;
  if (!(denom_main > 0) && !psi.single_site())
    throw std::invalid_argument("subadditivity_gap: alpha outside the admissible window");

  const Region whole = Region::chain(length);
  const BlockDecomposition dec = decompose(whole, block_side);

  SubadditivityReport rep;
  rep.alpha = alpha;
  rep.blocks = static_cast<int>(dec.blocks.size());
  rep.block_side = block_side;
  rep.remainder = static_cast<int>(dec.rest.size());

  AssembledOperator h_whole = assemble(phi_eff, whole, "H");
  AssembledOperator k_whole = macro_observable(psi, whole, "K");
  rep.g_whole = MgfEngine(h_whole, k_whole).g(alpha, TraceConvention::Normalized);

  const Region& block = dec.blocks.front();
  AssembledOperator h_block = assemble(phi_eff, block, "H_block");
  AssembledOperator k_block = macro_observable(psi, block, "K_block");
  rep.g_block = MgfEngine(h_block, k_block).g(alpha, TraceConvention::Normalized);

  const double covered =
      static_cast<double>(rep.blocks * block_side) / static_cast<double>(length);
  rep.lhs = std::abs(rep.g_whole - covered * rep.g_block);

  const double vol = static_cast<double>(length);
  double s_phi = placed_norm_sum(phi_eff, crossing_terms(phi_eff, dec), lambda);
  double s_psi = placed_norm_sum(psi, crossing_terms(psi, dec), lambda);
  if (!dec.rest.empty()) {
    s_phi += placed_norm_sum(phi_eff, terms_in(phi_eff, dec.rest), lambda);
    s_psi += placed_norm_sum(psi, terms_in(psi, dec.rest), lambda);
  }
  rep.phi_part = s_phi / (1.0 - nr_phi.h1_margin) / vol;

  double candidate = std::numeric_limits<double>::infinity();
  if (denom_main > 0) candidate = std::abs(alpha) * s_psi / denom_main / vol;
  if (psi.single_site()) {
    const double uncovered = vol - static_cast<double>(rep.blocks * block_side);
    const double flat = uncovered * std::abs(alpha) * nr_psi.norm_zero / vol;
    if (flat < candidate) {
      candidate = flat;
      rep.psi_part_from_norm = true;
    }
  }
  rep.psi_part = candidate;
  rep.rhs = rep.phi_part + rep.psi_part;

  const double denom_printed = 1.0 - std::abs(alpha) * 0.25 * lambda * nr_phi.norm_lambda;
  rep.rhs_printed = denom_printed > 0
                        ? rep.phi_part + std::abs(alpha) * s_psi / denom_printed / vol
                        : std::numeric_limits<double>::quiet_NaN();
  rep.pass = rep.lhs <= rep.rhs + kSlack;
  std::ostringstream note;
  note << rep.blocks << " blocks of " << block_side << ", remainder " << rep.remainder;
  rep.note = note.str();
  return rep;
}

TraceRatioReport omega_vs_trace_ratio(const Interaction& phi, const Interaction& psi, double beta,
                                      double alpha, int inner_length, int outer_length) {
  if (phi.dimension() != 1 || psi.dimension() != 1)
    throw std::invalid_argument("omega_vs_trace_ratio: one-dimensional chains only");
  if (inner_length < 1 || inner_length > outer_length)
    throw std::invalid_argument("omega_vs_trace_ratio: inner chain must sit inside the outer");

  const Interaction phi_eff = phi.scaled(beta);
  const Region inner = Region::chain(inner_length);
  const Region outer = Region::chain(outer_length);

  TraceRatioReport rep;
  rep.alpha = alpha;
  rep.inner_size = inner_length;
  rep.outer_size = outer_length;

  AssembledOperator h_inner = assemble(phi_eff, inner, "H_inner");
  AssembledOperator k_inner = macro_observable(psi, inner, "K_inner");
  rep.trace_value = MgfEngine(h_inner, k_inner).f(alpha);

  AssembledOperator h_outer = assemble(phi_eff, outer, "H_outer");
  AssembledOperator k_embedded = assemble_terms(psi, terms_in(psi, inner), outer, "K_inner");
  MgfEngine outer_engine(h_outer, k_embedded);
  rep.state_value = (outer_engine.log_two_exp(alpha) - outer_engine.log_two_exp(0.0)) /
                    static_cast<double>(inner_length);
  rep.discrepancy = std::abs(rep.state_value - rep.trace_value);
  return rep;
}

ArakiReport araki_uniformity(const Interaction& phi, const Interaction& a, double s, double theta,
                             double h, const std::vector<int>& lengths) {
  if (phi.dimension() != 1) throw std::invalid_argument("araki_uniformity: dimension one only");
  if (!phi.declared_range())
    throw std::invalid_argument("araki_uniformity: interaction needs a declared finite range");
  if (!(theta > 0 && theta < 1)) throw std::invalid_argument("araki_uniformity: theta in (0,1)");
  if (!(h > 0)) throw std::invalid_argument("araki_uniformity: h must be positive");

  ArakiReport rep;
  rep.theta = theta;
  rep.h = h;
  rep.s_phi = phi.norms(0.0).dispersion;
  rep.theta_prime = theta * std::exp(4.0 * h * rep.s_phi);
  rep.admissible = rep.theta_prime < 1.0;

  const int range = *phi.declared_range();
  const double arg = 2.0 * rep.s_phi;
  double log_f = (1.0 - range) * arg;
  for (int k = 1; k <= range; ++k) {
    const double kr = static_cast<double>(k) * range;
    if (kr > 700) {
      log_f = std::numeric_limits<double>::infinity();
      break;
    }
    log_f += 2.0 * (std::exp(kr) - 1.0) / k;
  }
  rep.log_f_r = log_f;

  int extent = 0;
  for (const auto& term : a.terms())
    for (const auto& offset : term.offsets) extent = std::max(extent, offset[0]);

  rep.lengths = lengths;
  for (int length : lengths) {
    if (length <= extent)
      throw std::invalid_argument("araki_uniformity: chain shorter than the observable");
    const Region chain = Region::chain(length);
    std::vector<PlacedTerm> placed;
    const Site shift{(length - 1 - extent) / 2};
    for (int t = 0; t < static_cast<int>(a.terms().size()); ++t) {
      PlacedTerm pt;
      pt.term = t;
      pt.shift = shift;
      for (const auto& offset : a.terms()[static_cast<size_t>(t)].offsets)
        pt.sites.push_back(offset + shift);
      placed.push_back(std::move(pt));
    }
    AssembledOperator h_chain = assemble(phi, chain, "H");
    AssembledOperator obs = assemble_terms(a, placed, chain, "A");
    auto sd = decompose(h_chain.matrix, "araki:H");
    rep.conjugation_norms.push_back(imaginary_time_conjugate(sd, obs.matrix, s).norm);
  }
  if (!rep.conjugation_norms.empty()) {
    const double lo = *std::min_element(rep.conjugation_norms.begin(), rep.conjugation_norms.end());
    const double hi = *std::max_element(rep.conjugation_norms.begin(), rep.conjugation_norms.end());
    rep.spread = lo > 0 ? hi / lo - 1.0 : 0.0;
  }
  return rep;
}

}  // namespace qlatt
