#pragma once

#include "digraph.hpp"
#include "numeric.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <variant>
#include <vector>

namespace dicycle {

// Internal structure placed on the vertices of one blob.
struct Independent {
    bool operator==(const Independent&) const = default;
};
/// Arcs i -> j for every i < j inside the blob (vertex order).
struct TransitiveTournament {
    bool operator==(const TransitiveTournament&) const = default;
};
/// The first round(split * size) vertices send an arc to every remaining vertex.
struct OneWayBipartite {
    Rational split{1, 2};
    bool operator==(const OneWayBipartite&) const = default;
};
using BlobInternal = std::variant<Independent, TransitiveTournament, OneWayBipartite>;

/// Every vertex of the tail blob points to every vertex of the head blob.
struct FullRule {
    bool operator==(const FullRule&) const = default;
};
/// Between tail blob A and head blob B: x -> y iff min(coord(x) + c, 1) >= coord(y), else y -> x.
struct ThresholdRule {
    double c = 1.0;
    bool operator==(const ThresholdRule&) const = default;
};
using ArcRule = std::variant<FullRule, ThresholdRule>;

/// A small weighted blueprint digraph. Blob i is base vertex i; arc_rule[j] governs base.arcs()[j].
struct PatternSpec {
    OrientedGraph base;
    std::vector<Rational> blob_weights;
    std::vector<BlobInternal> blob_internal;
    std::vector<ArcRule> arc_rule;

    std::size_t blob_count() const noexcept { return base.order(); }

    /// Pattern with uniform weights, independent blobs and full arcs.
    static PatternSpec uniform(OrientedGraph base)
    {
        PatternSpec p;
        const std::size_t n = base.order();
        p.blob_weights.assign(n, n == 0 ? Rational(0) : Rational(1, static_cast<long>(n)));
        p.blob_internal.assign(n, Independent{});
        p.arc_rule.assign(base.arc_count(), FullRule{});
        p.base = std::move(base);
        return p;
    }

    bool has_threshold() const
    {
        for (const auto& r : arc_rule)
            if (std::holds_alternative<ThresholdRule>(r)) return true;
        return false;
    }

    /// Blobs incident to at least one threshold arc; these need coordinates when realized.
    std::vector<bool> threshold_blobs() const
    {
        std::vector<bool> out(blob_count(), false);
        for (std::size_t j = 0; j < arc_rule.size(); ++j)
            if (std::holds_alternative<ThresholdRule>(arc_rule[j])) {
                out[base.arcs()[j].tail] = true;
                out[base.arcs()[j].head] = true;
            }
        return out;
    }

    void validate() const
    {
        const std::size_t p = blob_count();
        if (blob_weights.size() != p || blob_internal.size() != p)
            throw GraphError(GraphErrc::invalid_pattern, "pattern needs one weight and one internal rule per blob");
        if (arc_rule.size() != base.arc_count())
            throw GraphError(GraphErrc::invalid_pattern, "pattern needs one arc rule per base arc");
        Rational total = 0;
        for (const auto& w : blob_weights) {
            if (w < 0) throw GraphError(GraphErrc::invalid_pattern, "blob weights must be non-negative");
            total += w;
        }
        if (p > 0 && total != 1) throw GraphError(GraphErrc::invalid_pattern, "blob weights must sum to exactly 1");
        for (const auto& in : blob_internal)
            if (const auto* b = std::get_if<OneWayBipartite>(&in); b && (b->split <= 0 || b->split >= 1))
                throw GraphError(GraphErrc::invalid_pattern, "one-way bipartite split must lie strictly in (0,1)");
        for (std::size_t j = 0; j < arc_rule.size(); ++j) {
            const auto* t = std::get_if<ThresholdRule>(&arc_rule[j]);
            if (!t) continue;
            if (!(t->c >= 0.0 && t->c <= 1.0))
                throw GraphError(GraphErrc::invalid_pattern, "threshold constant must lie in [0,1]");
            const Arc a = base.arcs()[j];
            if (base.has_arc(a.head, a.tail))
                throw GraphError(GraphErrc::invalid_pattern, "threshold rule not allowed on a digon of the base");
        }
    }
};

/// Realization of a pattern at a finite size: blob sizes plus per-blob coordinates for threshold blobs.
struct BlobAssignment {
    std::vector<std::size_t> sizes;
    std::vector<std::vector<double>> coordinates; ///< empty inner vector = no coordinates

    std::size_t total() const
    {
        std::size_t s = 0;
        for (auto v : sizes) s += v;
        return s;
    }

    std::vector<std::size_t> offsets() const
    {
        std::vector<std::size_t> out(sizes.size() + 1, 0);
        for (std::size_t i = 0; i < sizes.size(); ++i) out[i + 1] = out[i] + sizes[i];
        return out;
    }
};

/// p parts summing to n, differing by at most one; remainders go to the lowest-indexed parts.
inline std::vector<std::size_t> balanced_sizes(std::size_t p, std::size_t n)
{
    std::vector<std::size_t> out(p, p == 0 ? 0 : n / p);
    for (std::size_t i = 0; i < (p == 0 ? 0 : n % p); ++i) ++out[i];
    return out;
}

/// i/(size-1) for i = 0..size-1; a singleton blob sits at 1/2.
inline std::vector<double> equispaced_coordinates(std::size_t size)
{
    if (size == 0) return {};
    if (size == 1) return {0.5};
    std::vector<double> out(size);
    for (std::size_t i = 0; i < size; ++i) out[i] = static_cast<double>(i) / static_cast<double>(size - 1);
    return out;
}

inline BlobAssignment assignment_with_sizes(const PatternSpec& pattern, std::vector<std::size_t> sizes)
{
    BlobAssignment a;
    a.coordinates.resize(sizes.size());
    const auto needs = pattern.threshold_blobs();
    for (std::size_t i = 0; i < sizes.size() && i < needs.size(); ++i)
        if (needs[i]) a.coordinates[i] = equispaced_coordinates(sizes[i]);
    a.sizes = std::move(sizes);
    return a;
}

inline BlobAssignment balanced_assignment(const PatternSpec& pattern, std::size_t n)
{
    return assignment_with_sizes(pattern, balanced_sizes(pattern.blob_count(), n));
}

inline std::size_t one_way_first_part(const OneWayBipartite& b, std::size_t size)
{
    // round half up of split * size, exactly
    const Rational x = b.split * Rational(static_cast<long long>(size)) + Rational(1, 2);
    const BigInt fl = boost::multiprecision::numerator(x) / boost::multiprecision::denominator(x);
    return static_cast<std::size_t>(fl);
}

inline OrientedGraph blow_up(const PatternSpec& pattern, const BlobAssignment& assignment)
{
    pattern.validate();
    const std::size_t p = pattern.blob_count();
    if (assignment.sizes.size() != p)
        throw GraphError(GraphErrc::size_mismatch, "assignment has " + std::to_string(assignment.sizes.size()) +
                                                       " parts but the pattern has " + std::to_string(p) + " blobs");
    const auto needs = pattern.threshold_blobs();
    for (std::size_t i = 0; i < p; ++i) {
        if (!needs[i]) continue;
        if (assignment.coordinates.size() <= i || assignment.coordinates[i].size() != assignment.sizes[i])
            throw GraphError(GraphErrc::missing_coordinates,
                             "blob " + std::to_string(i) + " carries a threshold arc but has no coordinates");
        const auto& c = assignment.coordinates[i];
        for (std::size_t j = 1; j < c.size(); ++j)
            if (!(c[j - 1] < c[j]))
                throw GraphError(GraphErrc::invalid_pattern, "coordinates must be strictly increasing within a blob");
    }

    const auto off = assignment.offsets();
    std::vector<Arc> arcs;
    for (std::size_t j = 0; j < pattern.base.arc_count(); ++j) {
        const Arc ba = pattern.base.arcs()[j];
        const std::size_t sa = assignment.sizes[ba.tail];
        const std::size_t sb = assignment.sizes[ba.head];
        if (const auto* t = std::get_if<ThresholdRule>(&pattern.arc_rule[j])) {
            const auto& ca = assignment.coordinates[ba.tail];
            const auto& cb = assignment.coordinates[ba.head];
            for (std::size_t x = 0; x < sa; ++x) {
                const double fx = std::min(ca[x] + t->c, 1.0);
                for (std::size_t y = 0; y < sb; ++y) {
                    const auto vx = static_cast<Vertex>(off[ba.tail] + x);
                    const auto vy = static_cast<Vertex>(off[ba.head] + y);
                    if (fx >= cb[y])
                        arcs.push_back({vx, vy});
                    else
                        arcs.push_back({vy, vx});
                }
            }
        } else {
            for (std::size_t x = 0; x < sa; ++x)
                for (std::size_t y = 0; y < sb; ++y)
                    arcs.push_back({static_cast<Vertex>(off[ba.tail] + x), static_cast<Vertex>(off[ba.head] + y)});
        }
    }
    for (std::size_t b = 0; b < p; ++b) {
        const std::size_t s = assignment.sizes[b];
        const auto base = static_cast<Vertex>(off[b]);
        if (std::holds_alternative<TransitiveTournament>(pattern.blob_internal[b])) {
            for (Vertex i = 0; i < s; ++i)
                for (Vertex j = i + 1; j < s; ++j) arcs.push_back({base + i, base + j});
        } else if (const auto* ow = std::get_if<OneWayBipartite>(&pattern.blob_internal[b])) {
            const std::size_t first = one_way_first_part(*ow, s);
            for (Vertex i = 0; i < first; ++i)
                for (Vertex j = static_cast<Vertex>(first); j < s; ++j) arcs.push_back({base + i, base + j});
        }
    }
    return OrientedGraph(off[p], arcs, pattern.base.mode());
}

/// Balanced blow-up of `base` with blow-ups placed recursively inside every blob of size >= |V(base)|.
inline OrientedGraph iterated_blow_up(const OrientedGraph& base, std::size_t n)
{
    const std::size_t p = base.order();
    if (p < 3) throw GraphError(GraphErrc::invalid_pattern, "iterated blow-up needs a base on at least 3 vertices");
    std::vector<Arc> arcs;
    auto build = [&](auto&& self, std::size_t offset, std::size_t m) -> void {
        if (m < p) return;
        const auto sizes = balanced_sizes(p, m);
        std::vector<std::size_t> off(p + 1, offset);
        for (std::size_t i = 0; i < p; ++i) off[i + 1] = off[i] + sizes[i];
        for (const Arc& a : base.arcs())
            for (std::size_t x = off[a.tail]; x < off[a.tail + 1]; ++x)
                for (std::size_t y = off[a.head]; y < off[a.head + 1]; ++y)
                    arcs.push_back({static_cast<Vertex>(x), static_cast<Vertex>(y)});
        for (std::size_t i = 0; i < p; ++i) self(self, off[i], sizes[i]);
    };
    build(build, 0, n);
    return OrientedGraph(n, arcs, base.mode());
}

/// Complete bipartite graph with parts [0, ceil(n/2)) and [ceil(n/2), n), each cross pair
/// oriented by one draw of a 64-bit Mersenne twister seeded with `seed`.
inline OrientedGraph random_bipartite_orientation(std::size_t n, std::uint64_t seed)
{
    const std::size_t a = (n + 1) / 2;
    std::mt19937_64 rng(seed);
    std::vector<Arc> arcs;
    arcs.reserve(a * (n - a));
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = a; j < n; ++j) {
            if (rng() >> 63)
                arcs.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j)});
            else
                arcs.push_back({static_cast<Vertex>(j), static_cast<Vertex>(i)});
        }
    return OrientedGraph(n, arcs);
}

struct Quotient {
    OrientedGraph graph;
    std::vector<std::size_t> class_sizes;
    std::vector<std::size_t> class_of; ///< vertex -> class index; classes ordered by smallest member
};

/// Merges vertices with identical out- and in-neighbourhoods.
inline Quotient quotient_by_equivalence(const OrientedGraph& g)
{
    const std::size_t n = g.order();
    std::map<std::pair<std::vector<Word>, std::vector<Word>>, std::size_t> ids;
    Quotient q;
    q.class_of.resize(n);
    std::vector<Vertex> rep;
    for (Vertex v = 0; v < n; ++v) {
        auto o = g.out_row(v);
        auto i = g.in_row(v);
        auto key = std::make_pair(std::vector<Word>(o.begin(), o.end()), std::vector<Word>(i.begin(), i.end()));
        auto [it, inserted] = ids.emplace(std::move(key), rep.size());
        if (inserted) {
            rep.push_back(v);
            q.class_sizes.push_back(0);
        }
        q.class_of[v] = it->second;
        ++q.class_sizes[it->second];
    }
    std::vector<Arc> arcs;
    for (std::size_t a = 0; a < rep.size(); ++a)
        for (std::size_t b = 0; b < rep.size(); ++b)
            if (a != b && g.has_arc(rep[a], rep[b]))
                arcs.push_back({static_cast<Vertex>(a), static_cast<Vertex>(b)});
    q.graph = OrientedGraph(rep.size(), arcs, g.mode());
    return q;
}

} // namespace dicycle
