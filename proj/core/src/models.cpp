#include "qlatt/models.hpp"

#include <cmath>
#include <stdexcept>

namespace qlatt {

namespace {

Matrix heisenberg_pair() {
  Matrix m = kron(pauli_x(), pauli_x()) + kron(pauli_y(), pauli_y()) + kron(pauli_z(), pauli_z());
  return 0.25 * m;
}

double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

}  // namespace

CellTerm make_named_term(const std::string& op, const std::vector<Site>& offsets,
                         double coefficient, SiteKind kind, int channels) {
  CellTerm t;
  t.offsets = offsets;
  t.label = op;
  const size_t n = offsets.size();
  if (kind == SiteKind::SpinHalf) {
    if (op == "sigma_x" && n == 1)
      t.payload = Matrix(coefficient * pauli_x());
    else if (op == "sigma_y" && n == 1)
      t.payload = Matrix(coefficient * pauli_y());
    else if (op == "sigma_z" && n == 1)
      t.payload = Matrix(coefficient * pauli_z());
    else if (op == "ising_zz" && n == 2)
      t.payload = Matrix(coefficient * kron(pauli_z(), pauli_z()));
    else if (op == "heisenberg" && n == 2)
      t.payload = Matrix(coefficient * heisenberg_pair());
    else
      throw std::invalid_argument("unknown spin template '" + op + "' on " + std::to_string(n) +
                                  " site(s)");
  } else {
    if (op == "hop" && n == 2)
      t.payload = fermion_hop(offsets[0], offsets[1], channels).scaled(coefficient);
    else if (op == "hubbard_u" && n == 1)
      t.payload = fermion_double_occupancy(offsets[0]).scaled(coefficient);
    else if (op == "density_density" && n == 2)
      t.payload = fermion_density_product(offsets[0], offsets[1], channels).scaled(coefficient);
    else if (op == "number" && n == 1)
      t.payload = fermion_number(offsets[0], channels).scaled(coefficient);
    else
      throw std::invalid_argument("unknown fermion template '" + op + "' on " + std::to_string(n) +
                                  " site(s)");
  }
  return t;
}

Interaction hubbard_interaction(const std::vector<double>& hopping, double repulsion,
                                const std::vector<double>& density_coupling,
                                std::vector<CellTerm> extra) {
  std::vector<CellTerm> terms;
  int range = 0;
  for (size_t r = 0; r < hopping.size(); ++r) {
    if (hopping[r] == 0.0) continue;
    int dist = static_cast<int>(r) + 1;
    terms.push_back(make_named_term("hop", {{0}, {dist}}, -hopping[r], SiteKind::Fermion, 2));
    range = std::max(range, dist);
  }
  if (repulsion != 0.0) {
    terms.push_back(make_named_term("hubbard_u", {{0}}, repulsion, SiteKind::Fermion, 2));
  }
  for (size_t r = 0; r < density_coupling.size(); ++r) {
    if (density_coupling[r] == 0.0) continue;
    int dist = static_cast<int>(r) + 1;
    terms.push_back(make_named_term("density_density", {{0}, {dist}}, density_coupling[r],
                                    SiteKind::Fermion, 2));
    range = std::max(range, dist);
  }
  for (auto& t : extra) {
    // custom terms must conserve the particle number on their own support
    Region local(1, t.offsets);
    Matrix m = fermion_matrix(std::get<FermionPolynomial>(t.payload), local, 2);
    Matrix n = Matrix::Zero(m.rows(), m.cols());
    for (const auto& s : t.offsets) n += fermion_matrix(fermion_number(s, 2), local, 2);
    if ((m * n - n * m).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("hubbard_interaction: custom term violates particle number");
    range = std::max(range, sup_diameter(t.offsets));
    terms.push_back(std::move(t));
  }
  return Interaction(1, SiteKind::Fermion, 2, std::move(terms), std::max(range, 0));
}

Interaction number_interaction() {
  std::vector<CellTerm> terms;
  terms.push_back(make_named_term("number", {{0}}, 1.0, SiteKind::Fermion, 2));
  return Interaction(1, SiteKind::Fermion, 2, std::move(terms), 0);
}

HubbardOperators build_hubbard(int length, const std::vector<double>& hopping, double repulsion,
                               const std::vector<double>& density_coupling,
                               std::vector<CellTerm> extra) {
  if (length < 1) throw std::invalid_argument("build_hubbard: length must be at least 1");
  auto phi = hubbard_interaction(hopping, repulsion, density_coupling, std::move(extra));
  Region chain = Region::chain(length);
  HubbardOperators out{assemble(phi, chain, "H"), macro_observable(number_interaction(), chain, "N")};
  Matrix comm = out.hamiltonian.matrix * out.number.matrix - out.number.matrix * out.hamiltonian.matrix;
  if (comm.cwiseAbs().maxCoeff() > 1e-10)
    throw std::runtime_error("build_hubbard: assembled Hamiltonian does not conserve N");
  return out;
}

Interaction transverse_ising_interaction(double j, double h) {
  std::vector<CellTerm> terms;
  if (h != 0.0) terms.push_back(make_named_term("sigma_x", {{0}}, -h, SiteKind::SpinHalf, 1));
  if (j != 0.0) terms.push_back(make_named_term("ising_zz", {{0}, {1}}, -j, SiteKind::SpinHalf, 1));
  if (terms.empty()) terms.push_back(make_named_term("sigma_z", {{0}}, 0.0, SiteKind::SpinHalf, 1));
  return Interaction(1, SiteKind::SpinHalf, 1, std::move(terms), 1);
}

Interaction heisenberg_interaction(double j, double h) {
  std::vector<CellTerm> terms;
  if (h != 0.0) terms.push_back(make_named_term("sigma_z", {{0}}, -h, SiteKind::SpinHalf, 1));
  if (j != 0.0)
    terms.push_back(make_named_term("heisenberg", {{0}, {1}}, j, SiteKind::SpinHalf, 1));
  if (terms.empty()) terms.push_back(make_named_term("sigma_z", {{0}}, 0.0, SiteKind::SpinHalf, 1));
  return Interaction(1, SiteKind::SpinHalf, 1, std::move(terms), 1);
}

AssembledOperator build_spin_chain(int length, const std::string& model, double j, double h) {
  if (length < 1) throw std::invalid_argument("build_spin_chain: length must be at least 1");
  Interaction phi = model == "transverse_ising" ? transverse_ising_interaction(j, h)
                    : model == "heisenberg"     ? heisenberg_interaction(j, h)
                                                : throw std::invalid_argument(
                                                      "build_spin_chain: unknown model '" + model + "'");
  return assemble(phi, Region::chain(length), model);
}

Interaction spin_observable(const std::string& name) {
  std::vector<CellTerm> terms;
  terms.push_back(make_named_term(name, {{0}}, 1.0, SiteKind::SpinHalf, 1));
  return Interaction(1, SiteKind::SpinHalf, 1, std::move(terms), 0);
}

Interaction fermion_observable(const std::string& name) {
  std::vector<CellTerm> terms;
  terms.push_back(make_named_term(name, {{0}}, 1.0, SiteKind::Fermion, 2));
  return Interaction(1, SiteKind::Fermion, 2, std::move(terms), 0);
}

AssembledOperator Model::build_hamiltonian(const Region& region) const {
  return assemble(hamiltonian, region, name + ":H");
}

AssembledOperator Model::build_number(const Region& region) const {
  if (!number) throw std::invalid_argument("model '" + name + "' has no number operator");
  return macro_observable(*number, region, name + ":N");
}

long Model::hilbert_dim(int length) const {
  long d = 1;
  const long site = kind == SiteKind::SpinHalf ? 2 : (1l << channels);
  for (int i = 0; i < length; ++i) d *= site;
  return d;
}

Model model_preset(const std::string& name, const std::map<std::string, double>& params) {
  Model m;
  m.name = name;
  if (name == "hubbard" || name == "tJ") {
    const double t = param(params, "t", 1.0);
    const double u = param(params, "u", name == "tJ" ? 8.0 : 4.0);
    const double j = param(params, "j", name == "tJ" ? 0.5 : 0.0);
    m.kind = SiteKind::Fermion;
    m.channels = 2;
    m.hamiltonian = hubbard_interaction({t}, u, j != 0.0 ? std::vector<double>{j} : std::vector<double>{});
    m.number = number_interaction();
  } else if (name == "transverse_ising") {
    m.hamiltonian = transverse_ising_interaction(param(params, "j", 1.0), param(params, "h", 1.0));
  } else if (name == "heisenberg") {
    m.hamiltonian = heisenberg_interaction(param(params, "j", 1.0), param(params, "h", 0.0));
  } else {
    throw std::invalid_argument("unknown model preset '" + name + "'");
  }
  return m;
}

}  // namespace qlatt
