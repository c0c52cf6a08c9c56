#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qlatt/local_ops.hpp"

namespace qlatt {

enum class SiteKind { SpinHalf, Fermion };

// One translation orbit of a translation-invariant interaction: the offsets
// are anchored so their lexicographic minimum is the origin. Spin terms carry
// an explicit matrix on the tensor product of the listed offsets (in listed
// order); fermionic terms carry a polynomial in the ladder generators.
struct CellTerm {
  std::vector<Site> offsets;
  std::variant<Matrix, FermionPolynomial> payload;
  std::string label;
};

struct NormReport {
  double lambda = 0;
  double norm_lambda = 0;  // sum over translates X containing 0 of |phi_X| e^{lambda|X|}
  double norm_zero = 0;    // the same at lambda = 0
  // |sum_{X ni 0} phi_X / max(diam X, 1)| on the joint support; single-site
  // terms enter with divisor 1
  double dispersion = 0;
  double h1_margin = 0;  // (lambda/4) norm_lambda
  // (s, log F_R(s)) for the declared range R, on s in {0, 1/4, 1/2, 3/4, 1}
  std::vector<std::pair<double, double>> log_growth;
};

class Interaction {
public:
  Interaction() = default;  // the empty interaction on Z^1

  // Validates self-adjointness (tolerance 1e-12 on the local matrices),
  // evenness of fermionic payloads, and the declared range; canonicalizes the
  // representatives and merges duplicated offset sets.
  Interaction(int dimension, SiteKind kind, int channels, std::vector<CellTerm> terms,
              std::optional<int> declared_range = std::nullopt);

  int dimension() const { return dim_; }
  SiteKind kind() const { return kind_; }
  int channels() const { return channels_; }
  int per_site_dim() const;
  const std::vector<CellTerm>& terms() const { return terms_; }
  std::optional<int> declared_range() const { return range_; }
  int max_term_diameter() const;
  bool single_site() const;

  Interaction scaled(double factor) const;

  // payload realized as a matrix on its own offsets (fermions through the
  // ordered-product representation of that local region)
  const Matrix& local_matrix(int term) const { return local_[static_cast<size_t>(term)]; }
  double term_norm(int term) const { return norms_[static_cast<size_t>(term)]; }

  NormReport norms(double lambda) const;

private:
  int dim_ = 1;
  SiteKind kind_ = SiteKind::SpinHalf;
  int channels_ = 1;
  std::optional<int> range_;
  std::vector<CellTerm> terms_;
  std::vector<Matrix> local_;
  std::vector<double> norms_;
};

Interaction combine(const Interaction& a, const Interaction& b);

// A stored term translated into place: sites = offsets + shift.
struct PlacedTerm {
  int term = 0;
  Site shift;
  std::vector<Site> sites;
};

// All translates contained in the region, template order then lexicographic
// shift order (deterministic).
std::vector<PlacedTerm> terms_in(const Interaction& phi, const Region& region);

// Translates inside `ambient` that intersect both `inner` and its complement.
std::vector<PlacedTerm> boundary_terms(const Interaction& phi, const Region& inner,
                                       const Region& ambient);

struct BlockDecomposition;
// Translates inside the decomposed cube not contained in any single block nor
// in the remainder shell.
std::vector<PlacedTerm> crossing_terms(const Interaction& phi, const BlockDecomposition& dec);

double placed_norm_sum(const Interaction& phi, const std::vector<PlacedTerm>& placed,
                       double lambda);

struct CertificateReport {
  std::string hypothesis;  // "H1", "H2" or "H3"
  bool pass = false;
  double lambda = 0;
  double phi_norm_lambda = 0;  // for H2: the non-single-site part only
  double h1_margin = 0;        // (lambda/4) phi_norm_lambda, needs < 1
  double psi_norm_lambda = 0;
  double alpha_window = 0;  // 4/(lambda |Psi|_lambda)
  bool window_unbounded = false;
  double h2_commutator_norm = 0;
  std::vector<std::string> notes;
};

CertificateReport certificate_h1(const Interaction& phi, const Interaction& psi, double lambda);
// Caller supplies the splitting; the single-site part must commute with the
// rest (checked numerically, rejected above 1e-10).
CertificateReport certificate_h2(const Interaction& phi_main, const Interaction& phi_single,
                                 const Interaction& psi, double lambda);
// One-dimensional finite-range setting; the window is unconditional.
CertificateReport certificate_h3(const Interaction& phi, const Interaction& psi);

}  // namespace qlatt
