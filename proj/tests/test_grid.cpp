#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "cgstencil/grid.hpp"
#include "support.hpp"

using namespace cgstencil;
using testing_support::brute_shell;

TEST(GridSpec, CellCentersAndSpacing) {
    const GridSpec g = GridSpec::cube(3, 10, 0.0, 3.0);
    EXPECT_DOUBLE_EQ(g.h(), 0.3);
    const Point c = g.cell_center(GridIndex(0, 4, 9));
    EXPECT_DOUBLE_EQ(c[0], 0.15);
    EXPECT_DOUBLE_EQ(c[1], 0.0 + 4.5 * 0.3);
    EXPECT_DOUBLE_EQ(c[2], 9.5 * 0.3);
    EXPECT_EQ(g.cell_count(), 1000);
}

TEST(GridSpec, RejectsInvalidShapes) {
    EXPECT_THROW(GridSpec(2, {10, 20, 1}, Point(0, 0, 0), Point(1, 1, 0)), std::invalid_argument);
    EXPECT_THROW(GridSpec(3, {0, 4, 4}, Point::Zero(), Point::Ones()), std::invalid_argument);
    EXPECT_THROW(GridSpec(4, {4, 4, 4}, Point::Zero(), Point::Ones()), std::invalid_argument);
    EXPECT_THROW(GridSpec(2, {4, 4, 1}, Point(1, 0, 0), Point(0, 1, 0)), std::invalid_argument);
    EXPECT_NO_THROW(GridSpec(2, {10, 20, 1}, Point(0, 0, 0), Point(1, 2, 0)));
}

TEST(GridSpec, LinearIndexRoundTrip) {
    for (int dim : {2, 3}) {
        const GridSpec g = GridSpec::cube(dim, 7, -1.0, 1.0);
        std::set<std::int64_t> seen;
        for (std::int64_t id = 0; id < g.cell_count(); ++id) {
            const GridIndex gi = g.unlinear(id);
            ASSERT_TRUE(g.contains(gi));
            ASSERT_EQ(g.linear(gi), id);
            seen.insert(id);
        }
        EXPECT_EQ(static_cast<std::int64_t>(seen.size()), g.cell_count());
    }
}

TEST(Layers, MemberCounts) {
    const GridIndex c2(5, 5), c3(5, 5, 5);
    EXPECT_EQ(layer_members(c2, 0, 2).members.size(), 1u);
    EXPECT_EQ(layer_members(c2, 1, 2).members.size(), 8u);
    EXPECT_EQ(layer_members(c2, 2, 2).members.size(), 16u);
    EXPECT_EQ(layer_members(c2, 3, 2).members.size(), 24u);
    EXPECT_EQ(layer_members(c3, 1, 3).members.size(), 26u);
    EXPECT_EQ(layer_members(c3, 2, 3).members.size(), 98u);
}

TEST(Layers, ZerothLayerIsCenter) {
    const auto ls = layer_members(GridIndex(0, 0), 0, 2);
    ASSERT_EQ(ls.members.size(), 1u);
    EXPECT_EQ(ls.members[0], GridIndex(0, 0));
}

TEST(Layers, FirstRingAroundFiveFive) {
    const auto ls = layer_members(GridIndex(5, 5), 1, 2);
    const std::vector<GridIndex> expected{{6, 5}, {6, 6}, {5, 6}, {4, 6}, {4, 5}, {4, 4}, {5, 4}, {6, 4}};
    EXPECT_EQ(ls.members, expected);
    const std::set<GridIndex> listed{{4, 4}, {5, 4}, {6, 4}, {4, 5}, {6, 5}, {4, 6}, {5, 6}};
    for (const auto& g : listed) EXPECT_NE(std::find(ls.members.begin(), ls.members.end(), g), ls.members.end());
}

TEST(Layers, MatchBruteForceShells) {
    auto g = testing_support::rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = trial % 2 ? 3 : 2;
        GridIndex c = dim == 2 ? GridIndex(0, 0) : GridIndex(0, 0, 0);
        for (int a = 0; a < dim; ++a) c[a] = testing_support::uniform_int(g, -20, 20);
        for (int L = 0; L <= 3; ++L) {
            const auto ls = layer_members(c, L, dim);
            const std::set<GridIndex> got(ls.members.begin(), ls.members.end());
            EXPECT_EQ(got.size(), ls.members.size()) << "duplicates in layer " << L;
            EXPECT_EQ(got, brute_shell(c, L));
        }
    }
}

TEST(Layers, ShellsPartitionTheBall) {
    for (int dim : {2, 3}) {
        const GridIndex c = dim == 2 ? GridIndex(3, -2) : GridIndex(3, -2, 7);
        std::set<GridIndex> all;
        std::size_t total = 0;
        for (int L = 0; L <= 3; ++L) {
            const auto ls = layer_members(c, L, dim);
            total += ls.members.size();
            all.insert(ls.members.begin(), ls.members.end());
        }
        EXPECT_EQ(all.size(), total);
        EXPECT_EQ(total, dim == 2 ? 49u : 343u);
    }
}

TEST(Layers, RingAdjacency) {
    for (int L = 1; L <= 3; ++L) {
        const auto ls = layer_members(GridIndex(2, 2), L, 2);
        EXPECT_EQ(ls.members.front(), GridIndex(2 + L, 2));
        for (std::size_t i = 0; i < ls.members.size(); ++i) {
            const auto& a = ls.members[i];
            const auto& b = ls.members[(i + 1) % ls.members.size()];
            EXPECT_EQ(std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]), 1) << "ring break at " << i;
        }
    }
}

TEST(Layers, RingIsCounterClockwise) {
    const auto ls = layer_members(GridIndex(0, 0), 2, 2);
    double signed_area = 0.0;
    for (std::size_t i = 0; i < ls.members.size(); ++i) {
        const auto& a = ls.members[i];
        const auto& b = ls.members[(i + 1) % ls.members.size()];
        signed_area += a[0] * b[1] - b[0] * a[1];
    }
    EXPECT_GT(signed_area, 0.0);
}

TEST(DirectionalSubset, SecondLayerSouthLine) {
    const auto line = directional_subset(layer_members(GridIndex(5, 5), 2, 2), kSouth);
    const std::vector<GridIndex> expected{{3, 3}, {4, 3}, {5, 3}, {6, 3}, {7, 3}};
    EXPECT_EQ(line, expected);
}

TEST(DirectionalSubset, ThirdLayerSouthLine) {
    const auto line = directional_subset(layer_members(GridIndex(5, 5), 3, 2), kSouth);
    ASSERT_EQ(line.size(), 7u);
    for (int t = 0; t < 7; ++t) EXPECT_EQ(line[static_cast<std::size_t>(t)], GridIndex(2 + t, 2));
}

TEST(DirectionalSubset, ThreeDimensionalSizes) {
    const GridIndex c(5, 5, 5);
    const auto down = directional_subset(layer_members(c, 2, 3), kDown);
    ASSERT_EQ(down.size(), 25u);
    for (const auto& g : down) EXPECT_EQ(g[2], 3);
    EXPECT_TRUE(std::is_sorted(down.begin(), down.end()));
    EXPECT_EQ(directional_subset(layer_members(c, 1, 3), kEast).size(), 9u);
}

TEST(DirectionalSubset, UnionCoversShell) {
    for (int dim : {2, 3})
        for (int L = 1; L <= 2; ++L) {
            const auto ls = layer_members(dim == 2 ? GridIndex(1, 1) : GridIndex(1, 1, 1), L, dim);
            std::set<GridIndex> covered;
            for (Direction d : canonical_directions(dim)) {
                const auto sub = directional_subset(ls, d);
                covered.insert(sub.begin(), sub.end());
            }
            EXPECT_EQ(covered, std::set<GridIndex>(ls.members.begin(), ls.members.end()));
        }
}

TEST(ConsecutiveRuns, WindowCounts) {
    const GridIndex c(4, 4);
    const auto pairs = consecutive_runs(layer_members(c, 1, 2), 2);
    EXPECT_EQ(pairs.size(), 8u);
    const std::vector<GridIndex> south_pair{{4, 3}, {5, 3}};
    EXPECT_NE(std::find(pairs.begin(), pairs.end(), south_pair), pairs.end());
    EXPECT_EQ(consecutive_runs(layer_members(c, 2, 2), 3).size(), 16u);
}

TEST(ConsecutiveRuns, FaceRingInThreeDimensions) {
    const auto plane = LatticePlane::normal_to(GridIndex(6, 5, 5), 0);
    const auto ring = plane_layer(plane, 1);
    EXPECT_EQ(consecutive_runs(ring, 2).size(), 8u);
    for (const auto& m : ring.members) EXPECT_EQ(m[0], 6);
    EXPECT_THROW(consecutive_runs(layer_members(GridIndex(0, 0, 0), 1, 3), 2), std::invalid_argument);
}

TEST(Directions, ParseAndOrder) {
    EXPECT_EQ(parse_direction("west"), kWest);
    EXPECT_EQ(parse_direction("+z"), kUp);
    EXPECT_EQ(parse_direction("down"), kDown);
    EXPECT_THROW(parse_direction("sideways"), std::invalid_argument);
    const auto canon = canonical_directions(3);
    const std::vector<Direction> expected{kWest, kEast, kSouth, kNorth, kDown, kUp};
    EXPECT_EQ(canon, expected);
    const Direction pref = kNorth;
    const auto order = direction_order(2, &pref);
    const std::vector<Direction> expected2{kNorth, kWest, kEast, kSouth};
    EXPECT_EQ(order, expected2);
}
