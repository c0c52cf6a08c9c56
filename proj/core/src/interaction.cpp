#include "qlatt/interaction.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "qlatt/representation.hpp"

namespace qlatt {

namespace {

double matrix_norm_hermitian(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("local eigensolve failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

long pow_long(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

int Interaction::per_site_dim() const {
  return kind_ == SiteKind::SpinHalf ? 2 : (1 << channels_);
}

Interaction::Interaction(int dimension, SiteKind kind, int channels, std::vector<CellTerm> terms,
                         std::optional<int> declared_range)
    : dim_(dimension), kind_(kind), channels_(channels), range_(declared_range) {
  if (dim_ <= 0) throw std::invalid_argument("interaction dimension must be positive");
  if (kind_ == SiteKind::SpinHalf)
    channels_ = 1;
  else if (channels_ < 1 || channels_ > 8)
    throw std::invalid_argument("fermion channel count out of range");

  // canonicalize: sorted offsets anchored at their lexicographic minimum
  for (auto& t : terms) {
    if (t.offsets.empty()) throw std::invalid_argument("cell term needs a nonempty offset set");
    for (const auto& o : t.offsets)
      if (static_cast<int>(o.size()) != dim_)
        throw std::invalid_argument("cell term offset dimension mismatch");
    if (!std::is_sorted(t.offsets.begin(), t.offsets.end()))
      throw std::invalid_argument("cell term offsets must be sorted lexicographically");
    if (std::adjacent_find(t.offsets.begin(), t.offsets.end()) != t.offsets.end())
      throw std::invalid_argument("cell term offsets must be distinct");
    Site anchor = t.offsets.front();
    bool shifted = false;
    for (const auto& c : anchor) shifted |= (c != 0);
    if (shifted) {
      for (auto& o : t.offsets) o = o - anchor;
      if (kind_ == SiteKind::Fermion) {
        Site neg = origin(dim_) - anchor;
        t.payload = std::get<FermionPolynomial>(t.payload).translated(neg);
      }
      // lexicographic order of offsets is translation invariant, so a spin
      // matrix needs no basis permutation
    }
    if (range_ && sup_diameter(t.offsets) > *range_)
      throw std::invalid_argument("cell term exceeds the declared range");
  }

  // merge duplicated offset sets
  std::map<std::vector<Site>, size_t> seen;
  for (auto& t : terms) {
    auto it = seen.find(t.offsets);
    if (it == seen.end()) {
      seen.emplace(t.offsets, terms_.size());
      terms_.push_back(std::move(t));
      continue;
    }
    CellTerm& dst = terms_[it->second];
    if (kind_ == SiteKind::SpinHalf)
      std::get<Matrix>(dst.payload) += std::get<Matrix>(t.payload);
    else
      std::get<FermionPolynomial>(dst.payload) += std::get<FermionPolynomial>(t.payload);
    if (!t.label.empty()) dst.label += dst.label.empty() ? t.label : "+" + t.label;
  }

  // realize local matrices, validate self-adjointness and (fermions) evenness
  const int site_dim = per_site_dim();
  for (const auto& t : terms_) {
    Matrix m;
    if (kind_ == SiteKind::SpinHalf) {
      const Matrix& payload = std::get<Matrix>(t.payload);
      long want = pow_long(site_dim, static_cast<int>(t.offsets.size()));
      if (payload.rows() != want || payload.cols() != want)
        throw std::invalid_argument("cell term matrix size does not match its offsets");
      m = payload;
    } else {
      const auto& poly = std::get<FermionPolynomial>(t.payload);
      if (!poly.even())
        throw std::invalid_argument("fermionic cell terms must be even in the generators");
      auto sup = poly.support();
      if (!std::includes(t.offsets.begin(), t.offsets.end(), sup.begin(), sup.end()))
        throw std::invalid_argument("fermionic payload acts outside its offsets");
      m = fermion_matrix(poly, Region(dim_, t.offsets), channels_);
    }
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw std::invalid_argument("cell terms must be self-adjoint");
    local_.push_back(std::move(m));
    norms_.push_back(matrix_norm_hermitian(local_.back()));
  }
}

int Interaction::max_term_diameter() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, sup_diameter(t.offsets));
  return d;
}

bool Interaction::single_site() const {
  for (const auto& t : terms_)
    if (t.offsets.size() != 1) return false;
  return true;
}

Interaction Interaction::scaled(double factor) const {
  std::vector<CellTerm> terms = terms_;
  for (auto& t : terms) {
    if (kind_ == SiteKind::SpinHalf)
      std::get<Matrix>(t.payload) *= factor;
    else
      t.payload = std::get<FermionPolynomial>(t.payload).scaled(Complex(factor, 0));
  }
  return Interaction(dim_, kind_, channels_, std::move(terms), range_);
}

Interaction combine(const Interaction& a, const Interaction& b) {
  if (a.dimension() != b.dimension() || a.kind() != b.kind() || a.channels() != b.channels())
    throw std::invalid_argument("combine: incompatible interactions");
  std::vector<CellTerm> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  std::optional<int> range;
  if (a.declared_range() && b.declared_range())
    range = std::max(*a.declared_range(), *b.declared_range());
  return Interaction(a.dimension(), a.kind(), a.channels(), std::move(terms), range);
}

NormReport Interaction::norms(double lambda) const {
  if (lambda < 0) throw std::invalid_argument("norms: lambda must be nonnegative");
  NormReport rep;
  rep.lambda = lambda;
  for (size_t t = 0; t < terms_.size(); ++t) {
    // a representative on |X| sites has exactly |X| distinct translates
    // containing the origin, all with the same norm
    const double card = static_cast<double>(terms_[t].offsets.size());
    rep.norm_lambda += card * norms_[t] * std::exp(lambda * card);
    rep.norm_zero += card * norms_[t];
  }
  rep.h1_margin = 0.25 * lambda * rep.norm_lambda;

  // S(Phi): embed every translate containing the origin into the joint
  // support and take the norm of the weighted sum
  if (!terms_.empty()) {
    std::vector<Site> joint;
    for (const auto& t : terms_)
      for (const auto& x : t.offsets)
        for (const auto& o : t.offsets) joint.push_back(o - x);
    std::sort(joint.begin(), joint.end());
    joint.erase(std::unique(joint.begin(), joint.end()), joint.end());
    Region support(dim_, joint);
    long dim = pow_long(per_site_dim(), support.size());
    if (dim <= 16384) {
      Matrix sum = Matrix::Zero(dim, dim);
      for (size_t t = 0; t < terms_.size(); ++t) {
        const auto& off = terms_[t].offsets;
        const double divisor = std::max(1, sup_diameter(off));
        for (const auto& x : off) {
          if (kind_ == SiteKind::SpinHalf) {
            std::vector<int> positions;
            for (const auto& o : off) positions.push_back(support.index_of(o - x));
            sum += embed_local(local_[t], positions, support.size(), per_site_dim()) / divisor;
          } else {
            Site neg = origin(dim_) - x;
            auto poly = std::get<FermionPolynomial>(terms_[t].payload).translated(neg);
            sum += fermion_matrix(poly, support, channels_) / divisor;
          }
        }
      }
      rep.dispersion = matrix_norm_hermitian(sum);
    } else {
      rep.dispersion = std::numeric_limits<double>::quiet_NaN();
    }
  }

  if (range_) {
    const int R = *range_;
    double series = 0;
    for (int k = 1; k <= R; ++k) series += (std::exp(static_cast<double>(k) * R) - 1.0) / k;
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0})
      rep.log_growth.emplace_back(s, (1.0 - R) * s + 2.0 * series);
  }
  return rep;
}

std::vector<PlacedTerm> terms_in(const Interaction& phi, const Region& region) {
  std::vector<PlacedTerm> out;
  if (region.dimension() != phi.dimension())
    throw std::invalid_argument("terms_in: dimension mismatch");
  for (int t = 0; t < static_cast<int>(phi.terms().size()); ++t) {
    const auto& off = phi.terms()[t].offsets;
    // anchored representatives start at the origin, so candidate shifts are
    // exactly the region's sites
    for (const auto& s : region.sites()) {
      PlacedTerm pt;
      pt.term = t;
      pt.shift = s;
      pt.sites.reserve(off.size());
      bool inside = true;
      for (const auto& o : off) {
        Site y = o + s;
        if (!region.contains(y)) {
          inside = false;
          break;
        }
        pt.sites.push_back(std::move(y));
      }
      if (inside) out.push_back(std::move(pt));
    }
  }
  return out;
}

std::vector<PlacedTerm> boundary_terms(const Interaction& phi, const Region& inner,
                                       const Region& ambient) {
  std::vector<PlacedTerm> out;
  for (auto& pt : terms_in(phi, ambient)) {
    bool hits_inner = false, hits_outer = false;
    for (const auto& s : pt.sites) (inner.contains(s) ? hits_inner : hits_outer) = true;
    if (hits_inner && hits_outer) out.push_back(std::move(pt));
  }
  return out;
}

std::vector<PlacedTerm> crossing_terms(const Interaction& phi, const BlockDecomposition& dec) {
  std::vector<PlacedTerm> out;
  for (auto& pt : terms_in(phi, dec.whole)) {
    bool contained = dec.rest.contains_all(pt.sites);
    if (!contained)
      for (const auto& b : dec.blocks)
        if (b.contains_all(pt.sites)) {
          contained = true;
          break;
        }
    if (!contained) out.push_back(std::move(pt));
  }
  return out;
}

double placed_norm_sum(const Interaction& phi, const std::vector<PlacedTerm>& placed,
                       double lambda) {
  double s = 0;
  for (const auto& pt : placed)
    s += phi.term_norm(pt.term) * std::exp(lambda * static_cast<double>(pt.sites.size()));
  return s;
}

}  // namespace qlatt
