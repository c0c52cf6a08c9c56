#pragma once

#include "qlatt/interaction.hpp"
#include "qlatt/representation.hpp"

namespace qlatt {

struct AssembledOperator {
  Region region;
  SiteKind kind = SiteKind::SpinHalf;
  int channels = 1;
  Matrix matrix;
  bool hermitian = false;
  std::string label;

  int per_site_dim() const { return kind == SiteKind::SpinHalf ? 2 : (1 << channels); }
  long dim() const { return matrix.rows(); }
  double volume() const { return static_cast<double>(region.size()); }
};

// Sums the translated cell terms over the region (free boundary conditions).
AssembledOperator assemble(const Interaction& phi, const Region& region,
                           const std::string& label = "H");

AssembledOperator assemble_terms(const Interaction& phi, const std::vector<PlacedTerm>& placed,
                                 const Region& region, const std::string& label = "A");

// K_Lambda = sum of the observable's translates; rejects odd fermionic terms.
AssembledOperator macro_observable(const Interaction& psi, const Region& region,
                                   const std::string& label = "K");

}  // namespace qlatt
