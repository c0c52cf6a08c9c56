#include <cmath>
#include <limits>
#include <stdexcept>

#include "qlatt/limits.hpp"
#include "qlatt/operators.hpp"

namespace qlatt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void fill_window(CertificateReport& rep, const Interaction& psi, double lambda) {
  rep.psi_norm_lambda = psi.norms(lambda).norm_lambda;
  rep.alpha_window =
      rep.psi_norm_lambda > 0 ? 4.0 / (lambda * rep.psi_norm_lambda) : kInf;
  if (psi.single_site()) {
    rep.window_unbounded = true;
    rep.notes.push_back("single-site observable: admissible window extends to all alpha");
  }
}

}  // namespace

CertificateReport certificate_h1(const Interaction& phi, const Interaction& psi, double lambda) {
  if (lambda <= 0) throw std::invalid_argument("certificate: lambda must be positive");
  CertificateReport rep;
  rep.hypothesis = "H1";
  rep.lambda = lambda;
  rep.phi_norm_lambda = phi.norms(lambda).norm_lambda;
  rep.h1_margin = 0.25 * lambda * rep.phi_norm_lambda;
  fill_window(rep, psi, lambda);
  rep.pass = rep.h1_margin < 1.0;
  return rep;
}

CertificateReport certificate_h2(const Interaction& phi_main, const Interaction& phi_single,
                                 const Interaction& psi, double lambda) {
  if (lambda <= 0) throw std::invalid_argument("certificate: lambda must be positive");
  if (!phi_single.single_site())
    throw std::invalid_argument("certificate H2: the split-off part must be single-site");

  CertificateReport rep;
  rep.hypothesis = "H2";
  rep.lambda = lambda;

  // commutator of the two assembled pieces on a small cube; side 3 unless the
  // dense cap forces side 2
  const int d = phi_main.dimension();
  int side = 3;
  long dim = 1;
  for (int k = 0; k < d; ++k) dim *= 3;  // 3^d sites
  long hdim = 1;
  for (long i = 0; i < dim; ++i) {
    hdim *= phi_main.per_site_dim();
    if (hdim > max_dense_dim()) break;
  }
  if (hdim > max_dense_dim()) {
    side = 2;
    rep.notes.push_back("commutator checked on a side-2 cube (side 3 exceeds the dense cap)");
  }
  Region probe = Region::cube(d, side);
  Matrix a = assemble(phi_main, probe, "Hmain").matrix;
  Matrix b = assemble(phi_single, probe, "Hsingle").matrix;
  Matrix comm = a * b - b * a;
  rep.h2_commutator_norm = comm.cwiseAbs().maxCoeff();
  if (rep.h2_commutator_norm > 1e-10)
    throw std::invalid_argument("certificate H2: split parts do not commute");

  rep.phi_norm_lambda = phi_main.norms(lambda).norm_lambda;
  rep.h1_margin = 0.25 * lambda * rep.phi_norm_lambda;
  fill_window(rep, psi, lambda);
  rep.pass = rep.h1_margin < 1.0;
  return rep;
}

CertificateReport certificate_h3(const Interaction& phi, const Interaction& psi) {
  CertificateReport rep;
  rep.hypothesis = "H3";
  rep.lambda = 0;
  rep.pass = true;
  if (phi.dimension() != 1 || psi.dimension() != 1) {
    rep.pass = false;
    rep.notes.push_back("requires a one-dimensional lattice");
  }
  if (!phi.declared_range() || !psi.declared_range()) {
    rep.pass = false;
    rep.notes.push_back("requires declared finite ranges");
  }
  if (rep.pass) {
    rep.window_unbounded = true;
    rep.alpha_window = kInf;
    rep.notes.push_back("finite-range one-dimensional setting: window extends to all alpha");
  }
  return rep;
}

}  // namespace qlatt
