#include "qlatt/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace qlatt {

Site operator+(const Site& a, const Site& b) {
  if (a.size() != b.size()) throw std::invalid_argument("site dimension mismatch");
  Site r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Site operator-(const Site& a, const Site& b) {
  if (a.size() != b.size()) throw std::invalid_argument("site dimension mismatch");
  Site r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Site origin(int dimension) { return Site(static_cast<size_t>(dimension), 0); }

int sup_diameter(const std::vector<Site>& sites) {
  if (sites.empty()) return 0;
  int d = 0;
  for (size_t i = 0; i < sites.size(); ++i)
    for (size_t j = i + 1; j < sites.size(); ++j)
      for (size_t k = 0; k < sites[i].size(); ++k)
        d = std::max(d, std::abs(sites[i][k] - sites[j][k]));
  return d;
}

Region::Region(int dimension, std::vector<Site> sites) : dim_(dimension), sites_(std::move(sites)) {
  if (dim_ <= 0) throw std::invalid_argument("region dimension must be positive");
  for (const auto& s : sites_)
    if (static_cast<int>(s.size()) != dim_) throw std::invalid_argument("site dimension mismatch");
  std::sort(sites_.begin(), sites_.end());
  if (std::adjacent_find(sites_.begin(), sites_.end()) != sites_.end())
    throw std::invalid_argument("region sites must be distinct");
}

Region Region::cube(int dimension, int side, const Site& corner) {
  if (dimension <= 0 || side <= 0) throw std::invalid_argument("cube needs positive dimension and side");
  Site base = corner.empty() ? origin(dimension) : corner;
  if (static_cast<int>(base.size()) != dimension) throw std::invalid_argument("corner dimension mismatch");
  std::vector<Site> sites;
  sites.reserve(1);
  Site cur = base;
  // odometer over {0..side-1}^dimension
  std::vector<int> idx(static_cast<size_t>(dimension), 0);
  while (true) {
    Site s(static_cast<size_t>(dimension));
    for (int k = 0; k < dimension; ++k) s[k] = base[k] + idx[k];
    sites.push_back(std::move(s));
    int k = dimension - 1;
    while (k >= 0 && ++idx[k] == side) idx[k--] = 0;
    if (k < 0) break;
  }
  return Region(dimension, std::move(sites));
}

Region Region::chain(int length, int offset) {
  std::vector<Site> sites;
  for (int i = 0; i < length; ++i) sites.push_back({offset + i});
  return Region(1, std::move(sites));
}

bool Region::contains(const Site& x) const {
  return std::binary_search(sites_.begin(), sites_.end(), x);
}

bool Region::contains_all(const std::vector<Site>& xs) const {
  for (const auto& x : xs)
    if (!contains(x)) return false;
  return true;
}

int Region::index_of(const Site& x) const {
  auto it = std::lower_bound(sites_.begin(), sites_.end(), x);
  if (it == sites_.end() || *it != x) return -1;
  return static_cast<int>(it - sites_.begin());
}

Region Region::translated(const Site& shift) const {
  std::vector<Site> out;
  out.reserve(sites_.size());
  for (const auto& s : sites_) out.push_back(s + shift);
  return Region(dim_, std::move(out));
}

Region Region::set_union(const Region& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("region dimension mismatch");
  std::vector<Site> out;
  std::set_union(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                 std::back_inserter(out));
  return Region(dim_, std::move(out));
}

Region Region::set_minus(const Region& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("region dimension mismatch");
  std::vector<Site> out;
  std::set_difference(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                      std::back_inserter(out));
  return Region(dim_, std::move(out));
}

Region Region::set_intersect(const Region& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("region dimension mismatch");
  std::vector<Site> out;
  std::set_intersection(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                        std::back_inserter(out));
  return Region(dim_, std::move(out));
}

std::optional<int> Region::cube_side() const {
  if (sites_.empty()) return std::nullopt;
  Site lo = sites_.front(), hi = sites_.front();
  for (const auto& s : sites_)
    for (int k = 0; k < dim_; ++k) {
      lo[k] = std::min(lo[k], s[k]);
      hi[k] = std::max(hi[k], s[k]);
    }
  int side = hi[0] - lo[0] + 1;
  for (int k = 1; k < dim_; ++k)
    if (hi[k] - lo[k] + 1 != side) return std::nullopt;
  long long expect = 1;
  for (int k = 0; k < dim_; ++k) {
    expect *= side;
    if (expect > static_cast<long long>(sites_.size())) return std::nullopt;
  }
  if (expect != static_cast<long long>(sites_.size())) return std::nullopt;
  return side;  // sorted distinct sites inside the bounding cube fill it exactly
}

BlockDecomposition decompose(const Region& region, int block_side) {
  auto side = region.cube_side();
  if (!side) throw std::invalid_argument("decompose needs a full cube");
  if (block_side <= 0 || block_side > *side)
    throw std::invalid_argument("block side must lie in [1, L]");
  const int d = region.dimension();
  const int n = *side / block_side;
  BlockDecomposition dec;
  dec.whole = region;
  dec.block_side = block_side;
  dec.blocks_per_axis = n;
  dec.remainder = *side - n * block_side;
  Site corner = region.sites().front();  // lexicographic minimum is the cube corner

  std::vector<int> idx(static_cast<size_t>(d), 0);
  while (true) {
    Site c(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k) c[k] = corner[k] + idx[k] * block_side;
    dec.blocks.push_back(Region::cube(d, block_side, c));
    int k = d - 1;
    while (k >= 0 && ++idx[k] == n) idx[k--] = 0;
    if (k < 0) break;
  }

  Region covered = dec.blocks.front();
  for (size_t i = 1; i < dec.blocks.size(); ++i) covered = covered.set_union(dec.blocks[i]);
  dec.rest = region.set_minus(covered);
  return dec;
}

}  // namespace qlatt
