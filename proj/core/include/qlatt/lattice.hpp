#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qlatt {

// A lattice site is a point of Z^d; comparisons are lexicographic.
using Site = std::vector<int>;

Site operator+(const Site& a, const Site& b);
Site operator-(const Site& a, const Site& b);
Site origin(int dimension);

// Chebyshev (sup-metric) diameter; a single site has diameter 0 and a cube of
// side R has diameter R - 1.
int sup_diameter(const std::vector<Site>& sites);

// Finite subset of Z^d held as a sorted list of distinct sites.
class Region {
public:
  Region() = default;
  Region(int dimension, std::vector<Site> sites);

  static Region cube(int dimension, int side, const Site& corner = {});
  static Region chain(int length, int offset = 0);

  int dimension() const { return dim_; }
  int size() const { return static_cast<int>(sites_.size()); }
  bool empty() const { return sites_.empty(); }
  const std::vector<Site>& sites() const { return sites_; }
  const Site& site(int i) const { return sites_[i]; }

  bool contains(const Site& x) const;
  bool contains_all(const std::vector<Site>& xs) const;
  // position in the sorted site list, -1 if absent
  int index_of(const Site& x) const;

  Region translated(const Site& shift) const;
  Region set_union(const Region& other) const;
  Region set_minus(const Region& other) const;
  Region set_intersect(const Region& other) const;

  // side length when the region is exactly a translated cube
  std::optional<int> cube_side() const;

  bool operator==(const Region& other) const = default;

private:
  int dim_ = 0;
  std::vector<Site> sites_;
};

// L = n*a + b splitting of a cube of side L into n^d disjoint blocks of side a
// (lexicographic order in the block multi-index) plus the remainder shell.
struct BlockDecomposition {
  Region whole;
  int block_side = 0;
  int blocks_per_axis = 0;
  int remainder = 0;
  std::vector<Region> blocks;
  Region rest;
};

BlockDecomposition decompose(const Region& region, int block_side);

}  // namespace qlatt
