#include <dicycle/counting.hpp>
#include <dicycle/pattern.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace dicycle;

namespace {

PatternSpec cycle_pattern(std::size_t k) { return PatternSpec::uniform(directed_cycle(k)); }

PatternSpec two_blob_threshold(double c)
{
    PatternSpec p = PatternSpec::uniform(OrientedGraph(2, {{0, 1}}));
    p.arc_rule[0] = ThresholdRule{c};
    return p;
}

} // namespace

TEST(NewGraph, DirectedTriangle)
{
    OrientedGraph g = new_graph(3, std::vector<Arc>{{0, 1}, {1, 2}, {2, 0}});
    EXPECT_EQ(g.order(), 3u);
    EXPECT_EQ(g.arc_count(), 3u);
    EXPECT_TRUE(g.has_arc(2, 0));
    EXPECT_FALSE(g.has_arc(0, 2));
    EXPECT_EQ(g, directed_cycle(3));
}

TEST(NewGraph, DigonRejectedInOrientedMode)
{
    try {
        OrientedGraph(2, {{0, 1}, {1, 0}});
        FAIL() << "expected a digon error";
    } catch (const GraphError& e) {
        EXPECT_EQ(e.code(), GraphErrc::digon_in_oriented_mode);
    }
}

TEST(NewGraph, DigonAllowedInDirectedMode)
{
    OrientedGraph g(2, {{0, 1}, {1, 0}}, Mode::directed);
    EXPECT_TRUE(g.has_digon());
    EXPECT_EQ(count_cycle_copies(g, 2), 1);
}

TEST(NewGraph, SelfLoopAndRangeErrors)
{
    try {
        OrientedGraph(3, {{1, 1}});
        FAIL();
    } catch (const GraphError& e) {
        EXPECT_EQ(e.code(), GraphErrc::self_loop);
    }
    try {
        OrientedGraph(3, {{0, 3}});
        FAIL();
    } catch (const GraphError& e) {
        EXPECT_EQ(e.code(), GraphErrc::vertex_out_of_range);
    }
}

TEST(NewGraph, DuplicateArcsCollapse)
{
    OrientedGraph g(3, {{0, 1}, {0, 1}, {1, 2}});
    EXPECT_EQ(g.arc_count(), 2u);
}

TEST(BlowUp, C3WithPairs)
{
    auto p = cycle_pattern(3);
    OrientedGraph g = blow_up(p, assignment_with_sizes(p, {2, 2, 2}));
    EXPECT_EQ(g.order(), 6u);
    EXPECT_EQ(g.arc_count(), 12u);
    EXPECT_EQ(count_cycle_copies(g, 3), 8);
}

TEST(BlowUp, UnitSizesGiveTheBase)
{
    for (std::size_t k = 3; k <= 7; ++k) {
        auto p = cycle_pattern(k);
        EXPECT_EQ(blow_up(p, balanced_assignment(p, k)), directed_cycle(k));
    }
    // base with several arcs per vertex
    OrientedGraph base(5, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 2}, {1, 4}});
    auto p = PatternSpec::uniform(base);
    EXPECT_EQ(blow_up(p, balanced_assignment(p, 5)), base);
}

TEST(BlowUp, ThresholdWithCOneIsOneDirectional)
{
    auto p = two_blob_threshold(1.0);
    OrientedGraph g = blow_up(p, balanced_assignment(p, 10));
    EXPECT_EQ(g.arc_count(), 25u);
    for (const Arc& a : g.arcs()) {
        EXPECT_LT(a.tail, 5u);
        EXPECT_GE(a.head, 5u);
    }
}

TEST(BlowUp, ThresholdNeedsCoordinates)
{
    auto p = two_blob_threshold(0.5);
    BlobAssignment a;
    a.sizes = {3, 3};
    try {
        blow_up(p, a);
        FAIL();
    } catch (const GraphError& e) {
        EXPECT_EQ(e.code(), GraphErrc::missing_coordinates);
    }
}

TEST(BlowUp, SizeMismatch)
{
    auto p = cycle_pattern(4);
    BlobAssignment a;
    a.sizes = {1, 1, 1};
    try {
        blow_up(p, a);
        FAIL();
    } catch (const GraphError& e) {
        EXPECT_EQ(e.code(), GraphErrc::size_mismatch);
    }
}

TEST(BlowUp, IndependentBlobsCarryNoInternalArcs)
{
    OrientedGraph base(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}});
    auto p = PatternSpec::uniform(base);
    auto a = assignment_with_sizes(p, {3, 2, 4, 1});
    OrientedGraph g = blow_up(p, a);
    auto off = a.offsets();
    auto blob = [&](Vertex v) { return std::upper_bound(off.begin(), off.end(), v) - off.begin() - 1; };
    for (const Arc& arc : g.arcs()) EXPECT_NE(blob(arc.tail), blob(arc.head));
    EXPECT_EQ(g.arc_count(), 3 * 2 + 2 * 4 + 4 * 1 + 1 * 3 + 3 * 4u);
}

TEST(BlowUp, TournamentBlobIsTransitive)
{
    auto p = PatternSpec::uniform(directed_cycle(3));
    p.blob_internal[1] = TransitiveTournament{};
    auto a = assignment_with_sizes(p, {2, 6, 3});
    OrientedGraph g = blow_up(p, a);
    std::vector<Vertex> keep{2, 3, 4, 5, 6, 7};
    OrientedGraph inner = g.induced(keep);
    EXPECT_EQ(inner.arc_count(), 15u);
    for (std::size_t l = 1; l <= 6; ++l) EXPECT_FALSE(has_closed_walk(inner, l));
}

TEST(BlowUp, OneWayBipartiteBlob)
{
    auto p = PatternSpec::uniform(directed_cycle(3));
    p.blob_internal[0] = OneWayBipartite{Rational(1, 3)};
    auto a = assignment_with_sizes(p, {6, 1, 1});
    OrientedGraph g = blow_up(p, a);
    // first two vertices of blob 0 point to the other four
    EXPECT_EQ(g.induced(std::vector<Vertex>{0, 1, 2, 3, 4, 5}).arc_count(), 8u);
    EXPECT_TRUE(g.has_arc(1, 2));
    EXPECT_FALSE(g.has_arc(2, 1));
}

TEST(BlowUp, ThresholdPairHasNoFourCycle)
{
    for (double c : {0.0, 0.1, 0.33, 0.5, 0.67757, 0.9, 1.0}) {
        auto p = two_blob_threshold(c);
        for (std::size_t n : {4u, 9u, 16u, 31u}) {
            OrientedGraph g = blow_up(p, balanced_assignment(p, n));
            EXPECT_FALSE(has_cycle_subgraph(g, 4)) << "c=" << c << " n=" << n;
        }
    }
}

TEST(BlowUp, InvalidPatterns)
{
    auto p = cycle_pattern(3);
    p.blob_weights[0] = Rational(1, 2);
    EXPECT_THROW(p.validate(), GraphError);
    auto q = cycle_pattern(3);
    q.blob_internal[0] = OneWayBipartite{Rational(1)};
    EXPECT_THROW(q.validate(), GraphError);
    auto r = two_blob_threshold(1.5);
    EXPECT_THROW(r.validate(), GraphError);
}

TEST(IteratedBlowUp, SmallValues)
{
    OrientedGraph c4 = directed_cycle(4);
    EXPECT_EQ(iterated_blow_up(c4, 4), c4);
    EXPECT_EQ(count_cycle_copies(iterated_blow_up(c4, 4), 4), 1);
    EXPECT_EQ(count_cycle_copies(iterated_blow_up(c4, 5), 4), 2);
    EXPECT_EQ(count_cycle_copies(iterated_blow_up(c4, 16), 4), 260);
    EXPECT_THROW(iterated_blow_up(OrientedGraph(2, {{0, 1}}), 8), GraphError);
}

TEST(RandomBipartite, Shape)
{
    OrientedGraph g2 = random_bipartite_orientation(2, 17);
    EXPECT_EQ(g2.arc_count(), 1u);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        OrientedGraph g = random_bipartite_orientation(4, seed);
        EXPECT_EQ(g.arc_count(), 4u);
        EXPECT_FALSE(g.has_arc(0, 1) || g.has_arc(1, 0) || g.has_arc(2, 3) || g.has_arc(3, 2));
    }
    EXPECT_EQ(random_bipartite_orientation(11, 5), random_bipartite_orientation(11, 5));
    EXPECT_EQ(random_bipartite_orientation(11, 5).arc_count(), 30u);
}

TEST(RandomBipartite, MeanSixCycleCount)
{
    // Expected count: 2400 undirected 6-cycles in K_{6,6}, each consistently oriented with probability 2/64.
    BigInt total = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) total += count_cycle_copies(random_bipartite_orientation(12, seed), 6, 1);
    const double mean = to_double(total) / 1000.0;
    EXPECT_NEAR(mean, 75.0, 0.05 * 75.0);
}

TEST(Quotient, BlowUpCollapsesToBase)
{
    auto p = cycle_pattern(4);
    auto q = quotient_by_equivalence(blow_up(p, balanced_assignment(p, 8)));
    EXPECT_EQ(q.graph, directed_cycle(4));
    EXPECT_EQ(q.class_sizes, (std::vector<std::size_t>{2, 2, 2, 2}));
}

TEST(Quotient, TriangleIsItsOwnQuotient)
{
    auto q = quotient_by_equivalence(directed_cycle(3));
    EXPECT_EQ(q.graph, directed_cycle(3));
    EXPECT_EQ(q.class_sizes, (std::vector<std::size_t>{1, 1, 1}));
}

TEST(Quotient, Idempotent)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        OrientedGraph base = sample::random_oriented(5, 0.6, rng);
        auto p = PatternSpec::uniform(base);
        OrientedGraph g = blow_up(p, balanced_assignment(p, 13));
        auto q1 = quotient_by_equivalence(g);
        auto q2 = quotient_by_equivalence(q1.graph);
        EXPECT_EQ(q1.graph, q2.graph);
        EXPECT_EQ(q2.class_sizes, std::vector<std::size_t>(q1.graph.order(), 1));
    }
}

TEST(GraphText, ReadTriangle)
{
    EXPECT_EQ(read_graph("3 3\n0 1\n1 2\n2 0\n"), directed_cycle(3));
}

TEST(GraphText, RoundTripIsCanonical)
{
    const std::string messy = "# comment\n4 4\n2 3\n0 1\n  1 2\r\n3 0\n";
    const std::string canonical = write_graph(read_graph(messy));
    EXPECT_EQ(canonical, "4 4\n0 1\n1 2\n2 3\n3 0\n");
    EXPECT_EQ(write_graph(read_graph(canonical)), canonical);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 30; ++i) {
        OrientedGraph g = i % 2 ? sample::random_oriented(9, 0.5, rng) : sample::random_directed(7, 0.4, rng);
        EXPECT_EQ(read_graph(write_graph(g)), g);
    }
}

TEST(GraphText, MalformedArcLine)
{
    try {
        read_graph("2 1\n0 x\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.code(), GraphErrc::parse_error);
    }
    EXPECT_THROW(read_graph("3 2\n0 1\n"), ParseError);
    EXPECT_THROW(read_graph("3 1\n0 5\n"), ParseError);
    EXPECT_THROW(read_graph(""), ParseError);
    EXPECT_THROW(read_graph("2 2\n0 1\n1 0\n"), GraphError);
    EXPECT_NO_THROW(read_graph("2 2 directed\n0 1\n1 0\n"));
}
