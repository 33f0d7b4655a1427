#include <dicycle/constructions.hpp>
#include <dicycle/oracles.hpp>

#include <gtest/gtest.h>

using namespace dicycle;

namespace {

std::vector<ConstructionId> all_ids()
{
    std::vector<ConstructionId> ids;
    for (std::size_t d : {3, 4, 5, 6}) ids.push_back(ConstructionId::balanced(d));
    ids.push_back(ConstructionId::balanced(2, Mode::directed));
    for (std::size_t k : {3, 4, 5}) {
        auto id = ConstructionId::of(ConstructionKind::sparse_singleton_blowup);
        id.k = k;
        ids.push_back(id);
    }
    for (auto kind : {ConstructionKind::iterated_c4, ConstructionKind::c5c3_tournament_blobs, ConstructionKind::c3c6_sparse,
                      ConstructionKind::c7_chords_blowup, ConstructionKind::complete_bipartite_digraph})
        ids.push_back(ConstructionId::of(kind));
    auto c5c7 = ConstructionId::of(ConstructionKind::c5c7_bipartite_blobs);
    ids.push_back(c5c7);
    c5c7.placement = LargeBlobPlacement::opposite;
    ids.push_back(c5c7);
    for (std::size_t t : {2, 3, 5}) {
        auto id = ConstructionId::of(ConstructionKind::c3_3t_sparse);
        id.t = t;
        ids.push_back(id);
    }
    return ids;
}

} // namespace

TEST(ClosedForm, MatchesCountsForEveryConstruction)
{
    for (const auto& id : all_ids()) {
        const std::size_t k = id.natural_k();
        const std::size_t top = k >= 5 ? 34 : 60;
        for (std::size_t n = minimum_order(id); n <= top; n += (n < 20 ? 1 : 7)) {
            const auto g = generate(id, n);
            const auto f = closed_form_count(id, n, k);
            ASSERT_EQ(f.kind, ClosedFormKind::exact);
            EXPECT_EQ(f.value, Rational(count_cycle_copies(g, k))) << to_string(id.kind) << " n=" << n;
        }
    }
}

TEST(ClosedForm, OtherLengthsMatchToo)
{
    for (const auto& id : all_ids()) {
        for (std::size_t k = 3; k <= 7; ++k) {
            for (std::size_t n = minimum_order(id); n <= 16; ++n) {
                ClosedForm f;
                try {
                    f = closed_form_count(id, n, k);
                } catch (const ConstructionError& e) {
                    EXPECT_EQ(e.name(), "NoClosedForm");
                    continue;
                }
                EXPECT_EQ(f.value, Rational(count_cycle_copies(generate(id, n), k))) << to_string(id.kind) << " n=" << n << " k=" << k;
            }
        }
    }
}

TEST(ClosedForm, KnownValues)
{
    EXPECT_EQ(closed_form_count(ConstructionId::of(ConstructionKind::c5c3_tournament_blobs), 8, 5).value, Rational(32));
    EXPECT_EQ(closed_form_count(ConstructionId::of(ConstructionKind::iterated_c4), 16, 4).value, Rational(260));
    EXPECT_EQ(closed_form_count(ConstructionId::of(ConstructionKind::c5c7_bipartite_blobs), 20, 5).value, Rational(1728));
    EXPECT_EQ(closed_form_count(ConstructionId::of(ConstructionKind::c3c6_sparse), 9, 3).value, Rational(16));
    auto rb = closed_form_count(ConstructionId::of(ConstructionKind::random_bipartite), 12, 6);
    EXPECT_EQ(rb.kind, ClosedFormKind::expectation);
    EXPECT_EQ(rb.value, Rational(75));
    EXPECT_EQ(closed_form_count(ConstructionId::of(ConstructionKind::complete_bipartite_digraph), 10, 4).value, Rational(200));
    EXPECT_EQ(closed_form_count(ConstructionId::of(ConstructionKind::threshold_c7), 10, 5).kind, ClosedFormKind::limit);
}

TEST(ClosedForm, IteratedC4AgainstOracle)
{
    for (std::size_t n = 4; n <= 14; ++n) {
        const auto g = generate(ConstructionId::of(ConstructionKind::iterated_c4), n);
        EXPECT_EQ(oracle::cycle_copies(g, 4), iterated_c4_count(n)) << n;
    }
}

TEST(ClosedForm, IteratedC4Growth)
{
    // f(n)/n^4 approaches 1/252 = 1/(256 - 4)
    const double ratio = to_double(iterated_c4_count(4096)) / std::pow(4096.0, 4);
    EXPECT_NEAR(ratio, 1.0 / 252.0, 1e-6);
}

TEST(Generate, Errors)
{
    try {
        generate(ConstructionId::of(ConstructionKind::c7_chords_blowup), 5);
        FAIL();
    } catch (const ConstructionError& e) {
        EXPECT_EQ(e.name(), "TooSmall");
    }
    EXPECT_THROW(generate(ConstructionId::balanced(2), 6), ConstructionError);
    EXPECT_THROW(closed_form_count(ConstructionId::of(ConstructionKind::iterated_c4), 12, 6), ConstructionError);
    EXPECT_THROW(construction_kind_from_string("nope"), ConstructionError);
    EXPECT_EQ(construction_kind_from_string("threshold_c7"), ConstructionKind::threshold_c7);
}

TEST(Freeness, ForbiddenCyclesAbsent)
{
    struct Case {
        ConstructionId id;
        std::vector<std::size_t> forbidden;
    };
    auto t3 = ConstructionId::of(ConstructionKind::c3_3t_sparse);
    t3.t = 3;
    std::vector<Case> cases = {
        {ConstructionId::balanced(3), {4, 5, 7, 8}},
        {ConstructionId::balanced(4), {3, 5, 6, 7}},
        {ConstructionId::of(ConstructionKind::iterated_c4), {3}},
        {ConstructionId::of(ConstructionKind::c5c3_tournament_blobs), {3}},
        {ConstructionId::of(ConstructionKind::c5c7_bipartite_blobs), {3, 7}},
        {ConstructionId::of(ConstructionKind::c3c6_sparse), {4, 5, 6}},
        {ConstructionId::of(ConstructionKind::c7_chords_blowup), {4}},
        {ConstructionId::of(ConstructionKind::threshold_c7), {4}},
        {ConstructionId::of(ConstructionKind::random_bipartite), {3, 5, 7}},
        {t3, {4, 5, 7, 8}},
    };
    for (const auto& c : cases)
        for (std::size_t n : {12u, 17u, 24u}) {
            const auto r = verify_freeness(c.id, n, c.forbidden, 3);
            EXPECT_TRUE(r.pass) << to_string(c.id.kind) << " n=" << n;
        }
}

TEST(Freeness, ClosedWalkVersusSubgraph)
{
    // a C3 blow-up always has closed 6-walks, but a C6 needs two vertices in every blob
    auto r = verify_freeness(ConstructionId::balanced(3), 9, {6});
    EXPECT_TRUE(r.entries[0].has_closed_walk);
    EXPECT_TRUE(r.entries[0].has_subgraph);
    auto s = verify_freeness(ConstructionId::balanced(3), 4, {6});
    EXPECT_TRUE(s.entries[0].has_closed_walk);
    EXPECT_FALSE(s.entries[0].has_subgraph);
}

TEST(Freeness, ThresholdArcChoice)
{
    // only thresholding the cycle arcs keeps the blow-up C4-free
    auto id = ConstructionId::of(ConstructionKind::threshold_c7);
    EXPECT_FALSE(has_cycle_subgraph(generate(id, 70), 4));
    id.threshold_arcs = ThresholdArcs::all;
    EXPECT_TRUE(has_cycle_subgraph(generate(id, 70), 4));
    id.threshold_arcs = ThresholdArcs::chords;
    EXPECT_TRUE(has_cycle_subgraph(generate(id, 70), 4));
    id.threshold_arcs = ThresholdArcs::cycle;
    id.c = 1.0;
    EXPECT_EQ(generate(id, 35), generate(ConstructionId::of(ConstructionKind::c7_chords_blowup), 35));
}

TEST(Structure, ChordsClosePentagons)
{
    const auto base = c7_with_chords();
    EXPECT_EQ(base.arc_count(), 14u);
    std::size_t chords = 0;
    for (const Arc& a : base.arcs()) {
        if (!is_c7_chord(a)) continue;
        ++chords;
        std::size_t through = 0;
        for_each_cycle(base, 5, [&](std::span<const Vertex> cyc) {
            for (std::size_t i = 0; i < 5; ++i)
                if (cyc[i] == a.tail && cyc[(i + 1) % 5] == a.head) ++through;
            return true;
        });
        EXPECT_GE(through, 1u);
    }
    EXPECT_EQ(chords, 7u);
    // step lengths 1 and 3 reach 7 in three or five steps, never in four
    EXPECT_TRUE(has_cycle_subgraph(base, 3));
    EXPECT_FALSE(has_cycle_subgraph(base, 4));
}

TEST(Structure, C5C3QuotientHasEightClasses)
{
    const auto g = generate(ConstructionId::of(ConstructionKind::c5c3_tournament_blobs), 8);
    const auto q = quotient_by_equivalence(g);
    EXPECT_EQ(q.graph.order(), 8u);
    EXPECT_EQ(q.class_sizes, std::vector<std::size_t>(8, 1));
}

TEST(Structure, C5C7Sizes)
{
    EXPECT_EQ(c5c7_sizes(20, LargeBlobPlacement::adjacent), (std::vector<std::size_t>{6, 6, 4, 4}));
    EXPECT_EQ(c5c7_sizes(20, LargeBlobPlacement::opposite), (std::vector<std::size_t>{6, 4, 6, 4}));
    for (std::size_t n = 6; n < 80; ++n) {
        auto s = c5c7_sizes(n, LargeBlobPlacement::adjacent);
        EXPECT_EQ(s[0] + s[1] + s[2] + s[3], n);
    }
}

TEST(Structure, ThresholdDensityNearLimit)
{
    // finite blow-ups overshoot the limit by roughly a factor n^5/(n)_5
    const std::size_t n = 70;
    const auto g = generate(ConstructionId::of(ConstructionKind::threshold_c7), n);
    const double copies = to_double(count_cycle_copies(g, 5));
    const double scaled = copies / to_double(binomial(n, 5)) * to_double(falling_factorial(n, 5)) / std::pow(double(n), 5);
    EXPECT_NEAR(scaled, 0.0517, 0.003);
}
