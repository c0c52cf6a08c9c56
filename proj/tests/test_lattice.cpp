#include <doctest.h>

#include <qlatt/lattice.hpp>

#include <stdexcept>

using namespace qlatt;

TEST_SUITE("lattice") {

TEST_CASE("chain sites are ordered and indexable") {
    Region r = Region::chain(5, 2);
    CHECK(r.dimension() == 1);
    CHECK(r.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(r.site(i) == Site{2 + i});
        CHECK(r.index_of({2 + i}) == i);
    }
    CHECK(r.index_of({7}) == -1);
    CHECK(r.contains({4}));
    CHECK_FALSE(r.contains({1}));
    CHECK(r.contains_all({{2}, {6}}));
    CHECK_FALSE(r.contains_all({{2}, {7}}));
}

TEST_CASE("cube size, side recovery, diameter") {
    Region c = Region::cube(2, 3, {1, -1});
    CHECK(c.size() == 9);
    CHECK(c.cube_side() == 3);
    CHECK(c.contains({3, 1}));
    CHECK_FALSE(c.contains({4, 0}));
    CHECK(sup_diameter(c.sites()) == 2);
    CHECK(sup_diameter({{0, 0}}) == 0);

    Region bent(2, {{0, 0}, {0, 1}, {1, 0}});
    CHECK_FALSE(bent.cube_side().has_value());
}

TEST_CASE("translation and set algebra") {
    Region a = Region::chain(4);
    Region b = a.translated({2});
    CHECK(b.site(0) == Site{2});
    CHECK(b.site(3) == Site{5});
    CHECK(a.set_union(b).size() == 6);
    CHECK(a.set_intersect(b) == Region(1, {{2}, {3}}));
    CHECK(a.set_minus(b) == Region(1, {{0}, {1}}));
    CHECK(a.set_minus(a).empty());
    CHECK(a.translated({0}) == a);
}

TEST_CASE("site arithmetic") {
    CHECK(Site{1, 2} + Site{3, -1} == Site{4, 1});
    CHECK(Site{1, 2} - Site{3, -1} == Site{-2, 3});
    CHECK(origin(3) == Site{0, 0, 0});
}

TEST_CASE("decomposition without remainder") {
    BlockDecomposition d = decompose(Region::chain(6), 3);
    CHECK(d.blocks_per_axis == 2);
    CHECK(d.remainder == 0);
    CHECK(d.blocks.size() == 2);
    CHECK(d.rest.empty());
    CHECK(d.blocks[0] == Region::chain(3, 0));
    CHECK(d.blocks[1] == Region::chain(3, 3));
}

TEST_CASE("decomposition with remainder shell") {
    BlockDecomposition d = decompose(Region::chain(7), 3);
    CHECK(d.blocks_per_axis == 2);
    CHECK(d.remainder == 1);
    CHECK(d.blocks.size() == 2);
    CHECK(d.rest == Region(1, {{6}}));
}

TEST_CASE("planar decomposition covers the cube") {
    BlockDecomposition d = decompose(Region::cube(2, 5), 2);
    CHECK(d.blocks_per_axis == 2);
    CHECK(d.blocks.size() == 4);
    CHECK(d.rest.size() == 25 - 16);
    Region covered = d.rest;
    for (const Region& blk : d.blocks) {
        CHECK(blk.size() == 4);
        CHECK(covered.set_intersect(blk).empty());
        covered = covered.set_union(blk);
    }
    CHECK(covered == d.whole);
}

TEST_CASE("block counting across sides") {
    for (int L = 4; L <= 12; ++L) {
        for (int a = 1; a <= L; ++a) {
            BlockDecomposition d = decompose(Region::chain(L), a);
            int n = L / a;
            CHECK(d.blocks_per_axis == n);
            CHECK(static_cast<int>(d.blocks.size()) == n);
            CHECK(d.rest.size() == L - n * a);
        }
    }
}

TEST_CASE("decomposition rejects bad inputs") {
    Region notched(1, {{0}, {1}, {3}});
    CHECK_THROWS_WITH_AS(decompose(notched, 1), "decompose needs a full cube",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(decompose(Region::chain(4), 0), "block side must lie in [1, L]",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(decompose(Region::chain(4), 5), "block side must lie in [1, L]",
                         std::invalid_argument);
}

} // TEST_SUITE
