#pragma once

#include <map>

#include "qlatt/operators.hpp"

namespace qlatt {

// Named cell-term factory shared by the presets and the JSON loader.
// Spin-half: sigma_x, sigma_y, sigma_z (one site); ising_zz, heisenberg (pair).
// Fermion (two channels): hop, density_density (pair); hubbard_u, number (one site).
CellTerm make_named_term(const std::string& op, const std::vector<Site>& offsets,
                         double coefficient, SiteKind kind, int channels);

// H = -sum_r T_r sum_s (c+ c + h.c.) + U sum n_up n_down + sum_r J_r n n,
// one-dimensional, free boundary conditions; T and J are indexed by distance
// starting at 1. Extra terms must conserve the particle number.
Interaction hubbard_interaction(const std::vector<double>& hopping, double repulsion,
                                const std::vector<double>& density_coupling = {},
                                std::vector<CellTerm> extra = {});
Interaction number_interaction();

struct HubbardOperators {
  AssembledOperator hamiltonian;
  AssembledOperator number;
};
HubbardOperators build_hubbard(int length, const std::vector<double>& hopping, double repulsion,
                               const std::vector<double>& density_coupling = {},
                               std::vector<CellTerm> extra = {});

// H = -J sum sigma^z sigma^z - h sum sigma^x
Interaction transverse_ising_interaction(double j, double h);
// H = J sum S.S - h sum sigma^z with S.S = (1/4) sigma.sigma
Interaction heisenberg_interaction(double j, double h);

// model is "transverse_ising" or "heisenberg"
AssembledOperator build_spin_chain(int length, const std::string& model, double j, double h);

// single-site observable families
Interaction spin_observable(const std::string& name);  // sigma_x | sigma_y | sigma_z
Interaction fermion_observable(const std::string& name);  // number

struct Model {
  std::string name;
  SiteKind kind = SiteKind::SpinHalf;
  int channels = 1;
  int dimension = 1;
  Interaction hamiltonian;
  std::optional<Interaction> number;

  AssembledOperator build_hamiltonian(const Region& region) const;
  AssembledOperator build_number(const Region& region) const;
  long hilbert_dim(int length) const;
};

// presets: hubbard (t, u, j), tJ (t, j, u), transverse_ising (j, h), heisenberg (j, h)
Model model_preset(const std::string& name, const std::map<std::string, double>& params);

}  // namespace qlatt
