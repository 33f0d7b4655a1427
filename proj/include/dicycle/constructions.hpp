#pragma once

#include "counting.hpp"
#include "errors.hpp"
#include "numeric.hpp"
#include "pattern.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dicycle {

class ConstructionError : public Error {
public:
    using Error::Error;
};

enum class ConstructionKind {
    balanced_cycle_blowup,
    sparse_singleton_blowup,
    iterated_c4,
    c5c3_tournament_blobs,
    c5c7_bipartite_blobs,
    c3c6_sparse,
    c7_chords_blowup,
    threshold_c7,
    random_bipartite,
    complete_bipartite_digraph,
    c3_3t_sparse,
};

inline constexpr ConstructionKind all_construction_kinds[] = {
    ConstructionKind::balanced_cycle_blowup, ConstructionKind::sparse_singleton_blowup, ConstructionKind::iterated_c4,
    ConstructionKind::c5c3_tournament_blobs, ConstructionKind::c5c7_bipartite_blobs,   ConstructionKind::c3c6_sparse,
    ConstructionKind::c7_chords_blowup,      ConstructionKind::threshold_c7,           ConstructionKind::random_bipartite,
    ConstructionKind::complete_bipartite_digraph, ConstructionKind::c3_3t_sparse,
};

inline std::string_view to_string(ConstructionKind k)
{
    switch (k) {
    case ConstructionKind::balanced_cycle_blowup: return "balanced_cycle_blowup";
    case ConstructionKind::sparse_singleton_blowup: return "sparse_singleton_blowup";
    case ConstructionKind::iterated_c4: return "iterated_c4";
    case ConstructionKind::c5c3_tournament_blobs: return "c5c3_tournament_blobs";
    case ConstructionKind::c5c7_bipartite_blobs: return "c5c7_bipartite_blobs";
    case ConstructionKind::c3c6_sparse: return "c3c6_sparse";
    case ConstructionKind::c7_chords_blowup: return "c7_chords_blowup";
    case ConstructionKind::threshold_c7: return "threshold_c7";
    case ConstructionKind::random_bipartite: return "random_bipartite";
    case ConstructionKind::complete_bipartite_digraph: return "complete_bipartite_digraph";
    case ConstructionKind::c3_3t_sparse: return "c3_3t_sparse";
    }
    return "unknown";
}

inline ConstructionKind construction_kind_from_string(std::string_view s)
{
    for (auto k : all_construction_kinds)
        if (to_string(k) == s) return k;
    throw ConstructionError("InvalidParameters", "unknown construction \"" + std::string(s) + "\"");
}

/// Which arcs of the C7-plus-chords skeleton use the threshold rule.
enum class ThresholdArcs { cycle, chords, all };

inline std::string_view to_string(ThresholdArcs a)
{
    switch (a) {
    case ThresholdArcs::cycle: return "cycle";
    case ThresholdArcs::chords: return "chords";
    case ThresholdArcs::all: return "all";
    }
    return "unknown";
}

inline ThresholdArcs threshold_arcs_from_string(std::string_view s)
{
    for (auto a : {ThresholdArcs::cycle, ThresholdArcs::chords, ThresholdArcs::all})
        if (to_string(a) == s) return a;
    throw ConstructionError("InvalidParameters", "unknown threshold arc set \"" + std::string(s) + "\"");
}

enum class LargeBlobPlacement { adjacent, opposite };

struct ConstructionId {
    ConstructionKind kind = ConstructionKind::balanced_cycle_blowup;
    std::size_t d = 3;  ///< balanced_cycle_blowup
    std::size_t k = 3;  ///< sparse_singleton_blowup
    std::size_t t = 2;  ///< c3_3t_sparse
    double c = 0.67757; ///< threshold_c7
    ThresholdArcs threshold_arcs = ThresholdArcs::cycle;
    LargeBlobPlacement placement = LargeBlobPlacement::adjacent;
    Mode mode = Mode::oriented; ///< balanced_cycle_blowup only; d = 2 needs directed

    static ConstructionId balanced(std::size_t d, Mode mode = Mode::oriented)
    {
        ConstructionId id;
        id.d = d;
        id.mode = mode;
        return id;
    }
    static ConstructionId of(ConstructionKind kind)
    {
        ConstructionId id;
        id.kind = kind;
        return id;
    }

    /// The cycle length the construction is built around.
    std::size_t natural_k() const
    {
        switch (kind) {
        case ConstructionKind::balanced_cycle_blowup: return d;
        case ConstructionKind::sparse_singleton_blowup: return k;
        case ConstructionKind::iterated_c4: return 4;
        case ConstructionKind::c5c3_tournament_blobs:
        case ConstructionKind::c5c7_bipartite_blobs:
        case ConstructionKind::c7_chords_blowup:
        case ConstructionKind::threshold_c7: return 5;
        case ConstructionKind::c3c6_sparse:
        case ConstructionKind::c3_3t_sparse: return 3;
        case ConstructionKind::random_bipartite: return 6;
        case ConstructionKind::complete_bipartite_digraph: return 4;
        }
        return 3;
    }

    void validate() const
    {
        if (kind == ConstructionKind::balanced_cycle_blowup) {
            if (d < 2 || (d == 2 && mode != Mode::directed))
                throw ConstructionError("InvalidParameters", "balanced_cycle_blowup needs d >= 3, or d = 2 in directed mode");
        }
        if (kind == ConstructionKind::sparse_singleton_blowup && k < 3)
            throw ConstructionError("InvalidParameters", "sparse_singleton_blowup needs k >= 3");
        if (kind == ConstructionKind::c3_3t_sparse && t < 2)
            throw ConstructionError("InvalidParameters", "c3_3t_sparse needs t >= 2");
        if (kind == ConstructionKind::threshold_c7 && !(c >= 0.0 && c <= 1.0))
            throw ConstructionError("InvalidParameters", "threshold constant must lie in [0,1]");
    }
};

/// Smallest n for which the construction's blob skeleton is realized.
inline std::size_t minimum_order(const ConstructionId& id)
{
    switch (id.kind) {
    case ConstructionKind::balanced_cycle_blowup: return id.d;
    case ConstructionKind::sparse_singleton_blowup: return id.k;
    case ConstructionKind::iterated_c4:
    case ConstructionKind::c5c3_tournament_blobs: return 4;
    case ConstructionKind::c5c7_bipartite_blobs: return 6;
    case ConstructionKind::c3c6_sparse: return 3;
    case ConstructionKind::c7_chords_blowup:
    case ConstructionKind::threshold_c7: return 7;
    case ConstructionKind::random_bipartite:
    case ConstructionKind::complete_bipartite_digraph: return 2;
    case ConstructionKind::c3_3t_sparse: return id.t + 1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Skeletons and patterns

/// C7 plus the chords i -> i+3; each chord closes a C5 with the cycle path i+3 -> ... -> i.
inline OrientedGraph c7_with_chords()
{
    std::vector<Arc> arcs;
    for (Vertex i = 0; i < 7; ++i) {
        arcs.push_back({i, (i + 1) % 7});
        arcs.push_back({i, (i + 3) % 7});
    }
    return OrientedGraph(7, arcs);
}

inline bool is_c7_chord(Arc a) { return (a.head + 7 - a.tail) % 7 == 3; }

/// Blob sizes of the C5/C7 construction: two blobs of round(3n/10), the rest split over the small blobs.
inline std::vector<std::size_t> c5c7_sizes(std::size_t n, LargeBlobPlacement placement)
{
    const std::size_t s = (3 * n + 5) / 10;
    const std::size_t rest = n - 2 * s;
    const std::size_t small_a = (rest + 1) / 2;
    const std::size_t small_b = rest / 2;
    if (placement == LargeBlobPlacement::adjacent) return {s, s, small_a, small_b};
    return {s, small_a, s, small_b};
}

inline std::vector<std::size_t> c5c7_large_blobs(LargeBlobPlacement placement)
{
    return placement == LargeBlobPlacement::adjacent ? std::vector<std::size_t>{0, 1} : std::vector<std::size_t>{0, 2};
}

/// Limit pattern of the construction (blob weights are the n -> infinity proportions).
/// Not defined for iterated_c4, random_bipartite, c3c6_sparse and c3_3t_sparse.
inline PatternSpec construction_pattern(const ConstructionId& id)
{
    id.validate();
    switch (id.kind) {
    case ConstructionKind::balanced_cycle_blowup: return PatternSpec::uniform(directed_cycle(id.d, id.mode));
    case ConstructionKind::sparse_singleton_blowup: return PatternSpec::uniform(directed_cycle(id.k));
    case ConstructionKind::complete_bipartite_digraph: return PatternSpec::uniform(directed_cycle(2, Mode::directed));
    case ConstructionKind::c5c3_tournament_blobs: {
        auto p = PatternSpec::uniform(directed_cycle(4));
        p.blob_internal.assign(4, TransitiveTournament{});
        return p;
    }
    case ConstructionKind::c5c7_bipartite_blobs: {
        auto p = PatternSpec::uniform(directed_cycle(4));
        p.blob_weights.assign(4, Rational(1, 5));
        for (auto b : c5c7_large_blobs(id.placement)) {
            p.blob_weights[b] = Rational(3, 10);
            p.blob_internal[b] = OneWayBipartite{Rational(1, 2)};
        }
        return p;
    }
    case ConstructionKind::c7_chords_blowup: return PatternSpec::uniform(c7_with_chords());
    case ConstructionKind::threshold_c7: {
        auto p = PatternSpec::uniform(c7_with_chords());
        for (std::size_t j = 0; j < p.base.arc_count(); ++j) {
            const bool chord = is_c7_chord(p.base.arcs()[j]);
            const bool use = id.threshold_arcs == ThresholdArcs::all || (chord == (id.threshold_arcs == ThresholdArcs::chords));
            if (use) p.arc_rule[j] = ThresholdRule{id.c};
        }
        return p;
    }
    default: break;
    }
    throw ConstructionError("NoPattern", std::string(to_string(id.kind)) + " has no blob pattern");
}

// ---------------------------------------------------------------------------
// Generators

namespace detail {

inline OrientedGraph three_part_sparse(std::size_t head, std::size_t n)
{
    // head blob V -> A -> B -> V, |A| = ceil((n - head)/2)
    const std::size_t rest = n - head;
    const std::size_t a = (rest + 1) / 2;
    std::vector<Arc> arcs;
    auto range = [](std::size_t from, std::size_t to) {
        std::vector<Vertex> v;
        for (std::size_t i = from; i < to; ++i) v.push_back(static_cast<Vertex>(i));
        return v;
    };
    const auto V = range(0, head);
    const auto A = range(head, head + a);
    const auto B = range(head + a, n);
    for (auto v : V)
        for (auto x : A) arcs.push_back({v, x});
    for (auto x : A)
        for (auto y : B) arcs.push_back({x, y});
    for (auto y : B)
        for (auto v : V) arcs.push_back({y, v});
    return OrientedGraph(n, arcs);
}

inline void assert_chords_close_pentagons(const OrientedGraph& base)
{
    for (const Arc& a : base.arcs()) {
        if (!is_c7_chord(a)) continue;
        for (Vertex s = 0; s < 4; ++s) {
            const Vertex u = static_cast<Vertex>((a.head + s) % 7);
            if (!base.has_arc(u, (u + 1) % 7))
                throw ConstructionError("InvalidPattern", "chord does not close a C5 with the cycle");
        }
    }
}

} // namespace detail

inline BlobAssignment construction_assignment(const ConstructionId& id, std::size_t n)
{
    const PatternSpec p = construction_pattern(id);
    switch (id.kind) {
    case ConstructionKind::sparse_singleton_blowup: {
        auto sizes = balanced_sizes(id.k - 1, n - 1);
        sizes.insert(sizes.begin(), 1);
        return assignment_with_sizes(p, sizes);
    }
    case ConstructionKind::c5c7_bipartite_blobs: return assignment_with_sizes(p, c5c7_sizes(n, id.placement));
    default: return balanced_assignment(p, n);
    }
}

inline OrientedGraph generate(const ConstructionId& id, std::size_t n, std::uint64_t seed = 0)
{
    id.validate();
    const std::size_t need = minimum_order(id);
    if (n < need)
        throw ConstructionError("TooSmall", std::string(to_string(id.kind)) + " needs n >= " + std::to_string(need));
    switch (id.kind) {
    case ConstructionKind::iterated_c4: return iterated_blow_up(directed_cycle(4), n);
    case ConstructionKind::random_bipartite: return random_bipartite_orientation(n, seed);
    case ConstructionKind::c3c6_sparse: return detail::three_part_sparse(1, n);
    case ConstructionKind::c3_3t_sparse: return detail::three_part_sparse(id.t - 1, n);
    case ConstructionKind::c7_chords_blowup:
    case ConstructionKind::threshold_c7: detail::assert_chords_close_pentagons(c7_with_chords()); break;
    default: break;
    }
    return blow_up(construction_pattern(id), construction_assignment(id, n));
}

// ---------------------------------------------------------------------------
// Closed forms

/// Copies of C_k in the blow-up of `base` with independent blobs of the given sizes:
/// (1/k) * sum over closed k-walks w of base of prod_j (a_j)_{visits of w to j}.
inline BigInt blowup_cycle_count(const OrientedGraph& base, const std::vector<std::size_t>& sizes, std::size_t k)
{
    const std::size_t p = base.order();
    std::vector<std::size_t> visits(p, 0);
    BigInt total = 0;
    std::vector<Vertex> walk;
    auto rec = [&](auto&& self, Vertex v, std::size_t len) -> void {
        if (len == k) {
            if (v != walk.front()) return;
            BigInt term = 1;
            for (std::size_t j = 0; j < p && term != 0; ++j) term *= falling_factorial(sizes[j], visits[j]);
            total += term;
            return;
        }
        for (Vertex u : base.out_neighbors(v)) {
            if (len + 1 < k) {
                ++visits[u];
                self(self, u, len + 1);
                --visits[u];
            } else {
                self(self, u, len + 1);
            }
        }
    };
    for (Vertex s = 0; s < p; ++s) {
        walk.assign(1, s);
        ++visits[s];
        rec(rec, s, 0);
        --visits[s];
    }
    return total / k;
}

/// f(m) = prod of the balanced part sizes + sum f(part), f(m) = 0 for m < 4.
inline BigInt iterated_c4_count(std::size_t n)
{
    if (n < 4) return 0;
    auto sizes = balanced_sizes(4, n);
    BigInt prod = 1;
    BigInt rec = 0;
    for (auto s : sizes) {
        prod *= s;
        rec += iterated_c4_count(s);
    }
    return prod + rec;
}

enum class ClosedFormKind { exact, expectation, limit };

inline std::string_view to_string(ClosedFormKind k)
{
    switch (k) {
    case ClosedFormKind::exact: return "exact";
    case ClosedFormKind::expectation: return "expectation";
    case ClosedFormKind::limit: return "limit";
    }
    return "unknown";
}

struct ClosedForm {
    Rational value;
    ClosedFormKind kind = ClosedFormKind::exact;
    std::string formula;
};

inline ClosedForm closed_form_count(const ConstructionId& id, std::size_t n, std::size_t k)
{
    id.validate();
    if (k < 2) throw ConstructionError("InvalidParameters", "cycle length must be at least 2");
    const std::size_t need = minimum_order(id);
    if (n < need)
        throw ConstructionError("TooSmall", std::string(to_string(id.kind)) + " needs n >= " + std::to_string(need));
    auto no_form = [&]() {
        return ConstructionError("NoClosedForm",
                                 std::string(to_string(id.kind)) + " has no closed form for k = " + std::to_string(k));
    };
    auto exact = [](BigInt v, std::string f) { return ClosedForm{Rational(v), ClosedFormKind::exact, std::move(f)}; };
    switch (id.kind) {
    case ConstructionKind::balanced_cycle_blowup:
    case ConstructionKind::sparse_singleton_blowup:
    case ConstructionKind::complete_bipartite_digraph:
    case ConstructionKind::c7_chords_blowup: {
        const PatternSpec p = construction_pattern(id);
        return exact(blowup_cycle_count(p.base, construction_assignment(id, n).sizes, k),
                     "(1/k) sum over closed k-walks of the skeleton of prod (a_j)_{m_j}");
    }
    case ConstructionKind::iterated_c4:
        if (k == 3) return exact(0, "no closed 3-walk");
        if (k != 4) throw no_form();
        return exact(iterated_c4_count(n), "f(n) = prod a_i + sum f(a_i)");
    case ConstructionKind::c5c3_tournament_blobs: {
        const auto a = balanced_sizes(4, n);
        if (k == 3) return exact(0, "C3-free");
        if (k == 4) return exact(BigInt(a[0]) * a[1] * a[2] * a[3], "prod a_i");
        if (k != 5) throw no_form();
        BigInt total = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            BigInt term = binomial(a[i], 2);
            for (std::size_t j = 0; j < 4; ++j)
                if (j != i) term *= a[j];
            total += term;
        }
        return exact(total, "sum_i C(a_i,2) prod_{j != i} a_j");
    }
    case ConstructionKind::c5c7_bipartite_blobs: {
        const auto a = c5c7_sizes(n, id.placement);
        if (k == 3 || k == 7) return exact(0, "no closed walk of this length");
        if (k == 4) return exact(BigInt(a[0]) * a[1] * a[2] * a[3], "prod a_i");
        if (k != 5) throw no_form();
        BigInt total = 0;
        for (auto i : c5c7_large_blobs(id.placement)) {
            const std::size_t h1 = (a[i] + 1) / 2;
            BigInt term = BigInt(h1) * (a[i] - h1);
            for (std::size_t j = 0; j < 4; ++j)
                if (j != i) term *= a[j];
            total += term;
        }
        return exact(total, "sum over large blobs of h1 h2 prod_{j != i} a_j");
    }
    case ConstructionKind::c3c6_sparse:
    case ConstructionKind::c3_3t_sparse: {
        const std::size_t head = id.kind == ConstructionKind::c3c6_sparse ? 1 : id.t - 1;
        if (k != 3) throw no_form();
        const std::size_t rest = n - head;
        return exact(BigInt(head) * ((rest + 1) / 2) * (rest / 2), "|V| |A| |B|");
    }
    case ConstructionKind::random_bipartite: {
        if (k % 2 == 1) return exact(0, "bipartite");
        const std::size_t r = k / 2;
        const std::size_t a = (n + 1) / 2;
        const std::size_t b = n / 2;
        Rational v(falling_factorial(a, r) * falling_factorial(b, r), BigInt(r) * ipow(BigInt(2), static_cast<unsigned>(k)));
        return ClosedForm{v, ClosedFormKind::expectation, "(a)_r (b)_r / (r 2^k)"};
    }
    case ConstructionKind::threshold_c7: {
        if (k != 5) throw no_form();
        return ClosedForm{Rational(517, 10000) * Rational(binomial(n, 5)), ClosedFormKind::limit, "0.0517 C(n,5)"};
    }
    }
    throw no_form();
}

// ---------------------------------------------------------------------------

struct FreenessEntry {
    std::size_t l = 0;
    bool has_subgraph = false;
    bool has_closed_walk = false;
};

struct FreenessReport {
    std::vector<FreenessEntry> entries;
    bool pass = true; ///< no forbidden cycle appears as a subgraph
};

inline FreenessReport verify_freeness(const OrientedGraph& g, const std::vector<std::size_t>& lengths)
{
    FreenessReport r;
    for (auto l : lengths) {
        FreenessEntry e;
        e.l = l;
        e.has_subgraph = l <= g.order() && has_cycle_subgraph(g, l);
        e.has_closed_walk = dicycle::has_closed_walk(g, l);
        r.pass = r.pass && !e.has_subgraph;
        r.entries.push_back(e);
    }
    return r;
}

inline FreenessReport verify_freeness(const ConstructionId& id, std::size_t n, const std::vector<std::size_t>& lengths,
                                      std::uint64_t seed = 0)
{
    return verify_freeness(generate(id, n, seed), lengths);
}

} // namespace dicycle
