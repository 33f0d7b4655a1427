#include <dicycle/counting.hpp>
#include <dicycle/oracles.hpp>
#include <dicycle/pattern.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace dicycle;

namespace {

OrientedGraph c3_blowup_222()
{
    auto p = PatternSpec::uniform(directed_cycle(3));
    return blow_up(p, assignment_with_sizes(p, {2, 2, 2}));
}

OrientedGraph balanced_cycle(std::size_t d, std::size_t n)
{
    auto p = PatternSpec::uniform(directed_cycle(d));
    return blow_up(p, balanced_assignment(p, n));
}

OrientedGraph triangle_with_pendant() { return OrientedGraph(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}}); }

} // namespace

TEST(CycleCopies, Basics)
{
    EXPECT_EQ(count_cycle_copies(directed_cycle(3), 3), 1);
    EXPECT_EQ(count_cycle_copies(c3_blowup_222(), 3), 8);
    EXPECT_EQ(count_cycle_copies(directed_cycle(3), 4), 0);
    EXPECT_EQ(count_cycle_copies(OrientedGraph(5, {}), 3), 0);
    EXPECT_EQ(count_cycle_copies(transitive_tournament(6), 3), 0);
}

TEST(CycleCopies, MatchesNaiveEnumeration)
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 250; ++trial) {
        const std::size_t n = 3 + trial % 6;
        const double p = 0.3 + 0.1 * (trial % 7);
        OrientedGraph g = sample::random_oriented(n, p, rng);
        for (std::size_t k = 3; k <= n; ++k)
            ASSERT_EQ(count_cycle_copies(g, k, 1), oracle::cycle_copies(g, k)) << write_graph(g) << "k=" << k;
    }
}

TEST(CycleCopies, DirectedModeMatchesNaive)
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t n = 3 + trial % 5;
        OrientedGraph g = sample::random_directed(n, 0.45, rng);
        for (std::size_t k = 2; k <= n; ++k) ASSERT_EQ(count_cycle_copies(g, k), oracle::cycle_copies(g, k));
    }
}

TEST(CycleCopies, IndependentOfThreadCount)
{
    std::mt19937_64 rng(5);
    OrientedGraph g = sample::random_oriented(40, 0.5, rng);
    const BigInt one = count_cycle_copies(g, 5, 1);
    EXPECT_EQ(count_cycle_copies(g, 5, 3), one);
    EXPECT_EQ(count_cycle_copies(g, 5, 8), one);
}

TEST(CycleCopies, InvariantUnderRelabeling)
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        OrientedGraph g = sample::random_oriented(14, 0.6, rng);
        OrientedGraph h = g.permuted(sample::random_permutation(14, rng));
        for (std::size_t k = 3; k <= 6; ++k) EXPECT_EQ(count_cycle_copies(g, k), count_cycle_copies(h, k));
    }
}

TEST(ForEachCycle, VisitsCanonicalRotations)
{
    std::size_t visits = 0;
    for_each_cycle(c3_blowup_222(), 3, [&](std::span<const Vertex> c) {
        EXPECT_EQ(c.size(), 3u);
        EXPECT_LT(c[0], c[1]);
        EXPECT_LT(c[0], c[2]);
        ++visits;
        return true;
    });
    EXPECT_EQ(visits, 8u);
    std::size_t stopped = 0;
    EXPECT_FALSE(for_each_cycle(c3_blowup_222(), 3, [&](std::span<const Vertex>) { return ++stopped < 3; }));
    EXPECT_EQ(stopped, 3u);
}

TEST(ClosedWalks, Basics)
{
    EXPECT_EQ(count_closed_walks(directed_cycle(3), 3), 3);
    EXPECT_EQ(count_closed_walks(c3_blowup_222(), 3), 24);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(count_closed_walks(sample::random_oriented(9, 0.7, rng), 1), 0);
}

TEST(ClosedWalks, MatchesWalkDynamicProgramming)
{
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        OrientedGraph g = trial % 3 ? sample::random_oriented(7, 0.7, rng) : sample::random_directed(6, 0.5, rng);
        for (std::size_t l = 1; l <= 12; ++l) ASSERT_EQ(count_closed_walks(g, l), oracle::closed_walks(g, l));
    }
}

TEST(ClosedWalks, BigIntegerPath)
{
    // complete digraph on 12 vertices: tr(J-I)^l = (n-1)^l + (n-1)(-1)^l
    std::vector<Arc> arcs;
    for (Vertex a = 0; a < 12; ++a)
        for (Vertex b = 0; b < 12; ++b)
            if (a != b) arcs.push_back({a, b});
    OrientedGraph g(12, arcs, Mode::directed);
    const BigInt expected = ipow(BigInt(11), 30) + 11;
    EXPECT_EQ(count_closed_walks(g, 30), expected);
    EXPECT_EQ(count_closed_walks(g, 31), ipow(BigInt(11), 31) - 11);
}

TEST(ClosedWalks, FourWalksAreFourCyclesWithoutDigons)
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        OrientedGraph g = sample::random_oriented(10, 0.6, rng);
        EXPECT_EQ(count_closed_walks(g, 4), 4 * count_cycle_copies(g, 4));
        EXPECT_EQ(count_closed_walks(g, 3), 3 * count_cycle_copies(g, 3));
    }
}

TEST(HasClosedWalk, Basics)
{
    OrientedGraph c4 = balanced_cycle(4, 12);
    EXPECT_FALSE(has_closed_walk(c4, 6));
    EXPECT_TRUE(has_closed_walk(c4, 8));
    EXPECT_TRUE(has_closed_walk(triangle_with_pendant(), 3));
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        OrientedGraph g = sample::random_oriented(8, 0.4, rng);
        auto lengths = closed_walk_lengths(g, 20);
        for (std::size_t l = 1; l <= 20; ++l) {
            EXPECT_EQ(has_closed_walk(g, l), count_closed_walks(g, l) > 0);
            EXPECT_EQ(lengths[l], has_closed_walk(g, l));
        }
    }
}

TEST(HasCycleSubgraph, Basics)
{
    EXPECT_FALSE(has_cycle_subgraph(OrientedGraph(7, {}), 3));
    EXPECT_TRUE(has_cycle_subgraph(directed_cycle(5), 5));
    EXPECT_FALSE(has_cycle_subgraph(directed_cycle(5), 4));
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        OrientedGraph g = sample::random_oriented(7, 0.5, rng);
        for (std::size_t l = 3; l <= 7; ++l) EXPECT_EQ(has_cycle_subgraph(g, l), oracle::cycle_copies(g, l) > 0);
    }
}

TEST(Paths, Basics)
{
    EXPECT_EQ(count_paths(directed_cycle(3), 3), 3);
    EXPECT_EQ(count_paths(transitive_tournament(3), 3), 1);
    EXPECT_EQ(count_paths(c3_blowup_222(), 2), 12);
    EXPECT_EQ(count_paths(c3_blowup_222(), 1), 6);
}

TEST(Paths, MatchNaive)
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        OrientedGraph g = sample::random_oriented(8, 0.5, rng);
        for (std::size_t i = 1; i <= 8; ++i) ASSERT_EQ(count_paths(g, i, 2), oracle::path_copies(g, i));
    }
}

TEST(ArcMultiplicity, Basics)
{
    auto m = arc_cycle_multiplicities(directed_cycle(3), 3);
    for (auto c : m.counts) EXPECT_EQ(c, 1u);
    EXPECT_EQ(m.thin().size(), 3u);
    EXPECT_TRUE(m.thick().empty());
    auto b = arc_cycle_multiplicities(c3_blowup_222(), 3);
    // each arc between two blobs closes through either vertex of the third blob
    for (auto c : b.counts) EXPECT_EQ(c, 2u);
    EXPECT_EQ(b.thick().size(), 12u);
    EXPECT_EQ(b.at({0, 2}), 2u);
    EXPECT_EQ(order_of_magnitude_thick_threshold(5, 2, 10), BigInt(5 * 5 * 2 * 100));
}

TEST(ArcMultiplicity, DoubleCounting)
{
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        OrientedGraph g = sample::random_oriented(9, 0.6, rng);
        for (std::size_t k = 3; k <= 6; ++k) {
            const BigInt copies = count_cycle_copies(g, k);
            BigInt arcs = 0;
            for (auto c : arc_cycle_multiplicities(g, k).counts) arcs += c;
            BigInt verts = 0;
            for (auto t : vertex_cycle_counts(g, k)) verts += t;
            EXPECT_EQ(arcs, copies * k);
            EXPECT_EQ(verts, copies * k);
        }
    }
}

TEST(VertexCounts, Basics)
{
    for (auto t : vertex_cycle_counts(directed_cycle(5), 5)) EXPECT_EQ(t, 1u);
    for (auto t : vertex_cycle_counts(c3_blowup_222(), 3)) EXPECT_EQ(t, 4u);
}

TEST(Clear, RemovesPendant)
{
    auto r = clear(triangle_with_pendant(), 3);
    EXPECT_EQ(r.cleared, directed_cycle(3));
    EXPECT_EQ(r.removed_arcs, 1u);
    EXPECT_EQ(r.removed_vertices, 1u);
    EXPECT_FALSE(r.is_fixed_point);
    EXPECT_EQ(r.kept_vertices, (std::vector<Vertex>{0, 1, 2}));
}

TEST(Clear, BalancedC4IsAlreadyCleared)
{
    OrientedGraph g = balanced_cycle(4, 8);
    auto r = clear(g, 4, 6);
    EXPECT_TRUE(r.is_fixed_point);
    EXPECT_TRUE(r.is_cleared());
    EXPECT_EQ(r.cleared, g);
    EXPECT_FALSE(clear(g, 4, 8).is_cleared());
}

TEST(Clear, TransitiveTriangleVanishes)
{
    auto r = clear(transitive_tournament(3), 3);
    EXPECT_EQ(r.cleared.order(), 0u);
    EXPECT_EQ(r.removed_vertices, 3u);
}

TEST(Clear, EveryArcOnACycleAfterwards)
{
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 40; ++trial) {
        OrientedGraph g = sample::random_oriented(10, 0.35, rng);
        for (std::size_t k = 3; k <= 5; ++k) {
            auto r = clear(g, k);
            for (auto c : arc_cycle_multiplicities(r.cleared, k).counts) EXPECT_GE(c, 1u);
            for (auto t : vertex_cycle_counts(r.cleared, k)) EXPECT_GE(t, 1u);
            EXPECT_EQ(count_cycle_copies(r.cleared, k), count_cycle_copies(g, k));
        }
    }
}

TEST(Clear, ClearedWithoutLongerWalkHasNoTransitiveTriangle)
{
    std::mt19937_64 rng(61);
    int checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        OrientedGraph g = sample::random_oriented(8 + trial % 10, 0.3, rng);
        for (std::size_t k = 3; k <= 5; ++k) {
            auto r = clear(g, k, k + 1);
            if (r.cleared.order() == 0 || !r.is_cleared()) continue;
            ++checked;
            EXPECT_FALSE(oracle::transitive_triangle(r.cleared));
        }
    }
    // balanced blow-ups are cleared for (k, k+1)
    for (std::size_t d : {3u, 4u, 5u}) {
        auto r = clear(balanced_cycle(d, 3 * d), d, d + 1);
        ASSERT_TRUE(r.is_cleared());
        EXPECT_FALSE(has_transitive_triangle(r.cleared));
        ++checked;
    }
    EXPECT_GT(checked, 3);
}

TEST(Clear, ClearedExcludesShortCycles)
{
    // (k, m x + k y)-cleared graphs have no C_m
    for (std::size_t k : {3u, 4u, 5u})
        for (std::size_t m = 3; m < k + 3; ++m)
            for (std::size_t x = 1; x <= 2; ++x)
                for (std::size_t y = 0; y <= 2; ++y) {
                    if (m == k) continue;
                    auto r = clear(balanced_cycle(k, 4 * k), k, m * x + k * y);
                    if (!r.is_cleared()) continue;
                    EXPECT_FALSE(has_cycle_subgraph(r.cleared, m)) << k << " " << m;
                }
}

TEST(NeighborCondition, BalancedTriangleBlowUp)
{
    auto r = check_neighbor_condition(balanced_cycle(3, 9), 3, 3);
    EXPECT_TRUE(r.holds);
    EXPECT_EQ(r.limit, 2u);
}

TEST(NeighborCondition, VacuousWithoutCycles)
{
    EXPECT_TRUE(check_neighbor_condition(transitive_tournament(4), 3, 3).holds);
}

TEST(NeighborCondition, ChordInsideBlobIsDetected)
{
    OrientedGraph g = balanced_cycle(4, 8);
    EXPECT_TRUE(check_neighbor_condition(g, 4, 4).holds);
    std::vector<Arc> arcs = g.arcs();
    arcs.push_back({0, 1}); // vertices 0 and 1 share blob 0
    OrientedGraph h(8, arcs);
    auto r = check_neighbor_condition(h, 4, 4);
    ASSERT_FALSE(r.holds);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_EQ(r.witness->neighbors_in_cycle, 3u);
    const auto& c = r.witness->cycle;
    EXPECT_EQ(c.size(), 4u);
    EXPECT_EQ(std::count(c.begin(), c.end(), r.witness->vertex), 0);
}

TEST(CycleType, Basics)
{
    using T = Turn;
    EXPECT_EQ(cycle_type(std::vector<T>{T::forward, T::forward, T::forward}), 3u);
    EXPECT_EQ(cycle_type(std::vector<T>{T::forward, T::forward, T::backward}), 1u);
    EXPECT_EQ(cycle_type(std::vector<T>{T::forward, T::backward, T::forward, T::backward}), 0u);
    EXPECT_THROW(cycle_type(std::vector<T>{T::forward}), std::invalid_argument);
}

TEST(TransitiveTriangle, MatchesNaive)
{
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 200; ++trial) {
        OrientedGraph g = sample::random_oriented(6, 0.4, rng);
        EXPECT_EQ(has_transitive_triangle(g), oracle::transitive_triangle(g));
    }
}

TEST(PathBound, TriangleFreeSamples)
{
    std::mt19937_64 rng(81);
    int sampled = 0;
    while (sampled < 40) {
        OrientedGraph g = sample::random_oriented(12, 0.35, rng);
        if (has_cycle_subgraph(g, 3) || has_transitive_triangle(g)) continue;
        ++sampled;
        const std::size_t n = g.order();
        for (std::size_t j = 2; j <= 4; ++j) {
            // p_{2j} * 4^{2j-1} <= n^{2j}
            EXPECT_LE(count_paths(g, 2 * j) * ipow(BigInt(4), static_cast<unsigned>(2 * j - 1)),
                      ipow(BigInt(n), static_cast<unsigned>(2 * j)));
        }
    }
}

TEST(CountReport, Collects)
{
    CountOptions opt;
    opt.path_orders = {2, 3};
    opt.per_arc = true;
    opt.per_vertex = true;
    auto r = count_report(c3_blowup_222(), 3, opt);
    EXPECT_EQ(r.copies, 8);
    EXPECT_EQ(r.closed_walks, 24);
    EXPECT_EQ(r.paths.at(2), 12);
    EXPECT_EQ(r.paths.at(3), 24);
    ASSERT_TRUE(r.per_arc && r.per_vertex);
    EXPECT_EQ(r.per_vertex->size(), 6u);
}
