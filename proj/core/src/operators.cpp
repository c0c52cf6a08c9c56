#include "qlatt/operators.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <stdexcept>

#include "qlatt/limits.hpp"

namespace qlatt {

long max_dense_dim() {
  static const long cap = [] {
    long v = 8192;
    if (const char* env = std::getenv("QLATT_MAX_DIM")) {
      char* end = nullptr;
      long parsed = std::strtol(env, &end, 10);
      if (end && *end == '\0' && parsed > 0) {
        v = parsed;
        std::fprintf(stderr, "qlatt: dense dimension cap overridden to %ld via QLATT_MAX_DIM\n", v);
      } else {
        std::fprintf(stderr, "qlatt: ignoring malformed QLATT_MAX_DIM='%s'\n", env);
      }
    }
    return v;
  }();
  return cap;
}

void require_dense_dim(long dim, const char* what) {
  if (dim > max_dense_dim())
    throw std::invalid_argument(std::string(what) + ": dimension " + std::to_string(dim) +
                                " exceeds the dense cap " + std::to_string(max_dense_dim()) +
                                " (set QLATT_MAX_DIM to override)");
}

namespace {

long pow_long(long base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

Matrix embed_local(const Matrix& local, const std::vector<int>& positions, int n_sites,
                   int site_dim) {
  const int m = static_cast<int>(positions.size());
  const long local_dim = pow_long(site_dim, m);
  if (local.rows() != local_dim || local.cols() != local_dim)
    throw std::invalid_argument("embed_local: matrix size does not match the slot count");
  for (int t = 0; t < m; ++t) {
    if (positions[t] < 0 || positions[t] >= n_sites)
      throw std::invalid_argument("embed_local: slot out of range");
    if (t > 0 && positions[t] <= positions[t - 1])
      throw std::invalid_argument("embed_local: slots must be ascending");
  }
  const long dim = pow_long(site_dim, n_sites);
  require_dense_dim(dim, "embed_local");

  std::vector<long> stride(static_cast<size_t>(n_sites));
  for (int k = 0; k < n_sites; ++k) stride[k] = pow_long(site_dim, n_sites - 1 - k);
  std::vector<long> lstride(static_cast<size_t>(m));
  for (int t = 0; t < m; ++t) lstride[t] = pow_long(site_dim, m - 1 - t);

  Matrix out = Matrix::Zero(dim, dim);
  std::vector<int> digits(static_cast<size_t>(m));
  for (long g = 0; g < dim; ++g) {
    long j_loc = 0, base = g;
    for (int t = 0; t < m; ++t) {
      digits[t] = static_cast<int>((g / stride[positions[t]]) % site_dim);
      j_loc += digits[t] * lstride[t];
      base -= digits[t] * stride[positions[t]];
    }
    for (long i = 0; i < local_dim; ++i) {
      Complex v = local(i, j_loc);
      if (v == Complex(0, 0)) continue;
      long row = base;
      long rem = i;
      for (int t = 0; t < m; ++t) {
        row += (rem / lstride[t]) * stride[positions[t]];
        rem %= lstride[t];
      }
      out(row, g) = v;
    }
  }
  return out;
}

namespace {

// applies one ladder factor to basis state `state`; returns false if it kills it
bool apply_factor(const FermionFactor& f, int mode, int n_modes, unsigned long& state,
                  double& sign) {
  const int bitpos = n_modes - 1 - mode;
  const unsigned long bit = 1ul << bitpos;
  const bool occupied = state & bit;
  if (f.dagger == occupied) return false;  // create on occupied / annihilate on empty
  const unsigned long before = state >> (bitpos + 1);  // modes ordered before `mode`
  if (std::popcount(before) & 1) sign = -sign;
  state ^= bit;
  return true;
}

}  // namespace

Matrix fermion_matrix(const FermionPolynomial& poly, const Region& region, int channels) {
  const int n_modes = region.size() * channels;
  if (n_modes > 62) throw std::invalid_argument("fermion_matrix: too many modes");
  const long dim = 1l << n_modes;
  require_dense_dim(dim, "fermion_matrix");

  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& mono : poly.monomials) {
    std::vector<int> modes(mono.factors.size());
    for (size_t t = 0; t < mono.factors.size(); ++t) {
      const auto& f = mono.factors[t];
      int pos = region.index_of(f.site);
      if (pos < 0) throw std::invalid_argument("fermion_matrix: factor site outside region");
      if (f.spin < 0 || f.spin >= channels)
        throw std::invalid_argument("fermion_matrix: spin channel out of range");
      modes[t] = pos * channels + f.spin;
    }
    for (long g = 0; g < dim; ++g) {
      unsigned long state = static_cast<unsigned long>(g);
      double sign = 1.0;
      bool alive = true;
      for (size_t t = mono.factors.size(); t-- > 0;) {  // rightmost factor acts first
        if (!apply_factor(mono.factors[t], modes[t], n_modes, state, sign)) {
          alive = false;
          break;
        }
      }
      if (alive) out(static_cast<long>(state), g) += mono.coeff * sign;
    }
  }
  return out;
}

Matrix car_annihilator(const Region& region, int channels, const Site& x, int spin) {
  FermionPolynomial p;
  p.monomials.push_back({Complex(1, 0), {{x, spin, false}}});
  return fermion_matrix(p, region, channels);
}

Matrix car_creator(const Region& region, int channels, const Site& x, int spin) {
  FermionPolynomial p;
  p.monomials.push_back({Complex(1, 0), {{x, spin, true}}});
  return fermion_matrix(p, region, channels);
}

Eigen::VectorXd parity_diagonal(int n_modes) {
  const long dim = 1l << n_modes;
  Eigen::VectorXd d(dim);
  for (long g = 0; g < dim; ++g)
    d[g] = (std::popcount(static_cast<unsigned long>(g)) & 1) ? -1.0 : 1.0;
  return d;
}

Parity operator_parity(const Matrix& m, double tol) {
  bool has_even = false, has_odd = false;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (std::abs(m(i, j)) <= tol) continue;
      const bool flips = std::popcount(static_cast<unsigned long>(i ^ j)) & 1;
      (flips ? has_odd : has_even) = true;
    }
  if (has_odd && has_even) return Parity::Mixed;
  if (has_odd) return Parity::Odd;
  return Parity::Even;
}

AssembledOperator assemble_terms(const Interaction& phi, const std::vector<PlacedTerm>& placed,
                                 const Region& region, const std::string& label) {
  const int site_dim = phi.per_site_dim();
  long dim = 1;
  for (int i = 0; i < region.size(); ++i) dim *= site_dim;
  require_dense_dim(dim, "assemble");

  Matrix h = Matrix::Zero(dim, dim);
  for (const auto& pt : placed) {
    const CellTerm& term = phi.terms()[pt.term];
    if (phi.kind() == SiteKind::SpinHalf) {
      std::vector<int> positions;
      positions.reserve(pt.sites.size());
      for (const auto& s : pt.sites) {
        int idx = region.index_of(s);
        if (idx < 0) throw std::invalid_argument("assemble: placed term leaves the region");
        positions.push_back(idx);
      }
      h += embed_local(std::get<Matrix>(term.payload), positions, region.size(), site_dim);
    } else {
      const auto& poly = std::get<FermionPolynomial>(term.payload);
      h += fermion_matrix(poly.translated(pt.shift), region, phi.channels());
    }
  }

  AssembledOperator out;
  out.region = region;
  out.kind = phi.kind();
  out.channels = phi.channels();
  out.matrix = std::move(h);
  out.label = label;
  double herm = (out.matrix - out.matrix.adjoint()).cwiseAbs().maxCoeff();
  out.hermitian = herm <= 1e-12 * std::max(1.0, out.matrix.cwiseAbs().maxCoeff());
  return out;
}

AssembledOperator assemble(const Interaction& phi, const Region& region, const std::string& label) {
  return assemble_terms(phi, terms_in(phi, region), region, label);
}

AssembledOperator macro_observable(const Interaction& psi, const Region& region,
                                   const std::string& label) {
  if (psi.kind() == SiteKind::Fermion) {
    for (const auto& t : psi.terms())
      if (!std::get<FermionPolynomial>(t.payload).even())
        throw std::invalid_argument("macro_observable: fermionic cell terms must be even");
  }
  auto out = assemble(psi, region, label);
  if (!out.hermitian) throw std::invalid_argument("macro_observable: result is not self-adjoint");
  return out;
}

}  // namespace qlatt
