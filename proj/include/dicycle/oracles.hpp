#pragma once

// Deliberately naive reference implementations. Nothing here shares code with the fast paths
// beyond OrientedGraph::has_arc.

#include "digraph.hpp"
#include "numeric.hpp"

#include <numeric>
#include <optional>
#include <vector>

namespace dicycle::oracle {

namespace detail {

template <class Visit>
void injective_sequences(std::size_t n, std::size_t len, std::vector<Vertex>& seq, std::vector<bool>& used, Visit& visit)
{
    if (seq.size() == len) {
        visit(seq);
        return;
    }
    for (Vertex v = 0; v < n; ++v) {
        if (used[v]) continue;
        used[v] = true;
        seq.push_back(v);
        injective_sequences(n, len, seq, used, visit);
        seq.pop_back();
        used[v] = false;
    }
}

} // namespace detail

/// Number of cyclic vertex sequences (v_0..v_{k-1}) of distinct vertices with every v_i -> v_{i+1 mod k},
/// divided by k.
inline BigInt cycle_copies(const OrientedGraph& g, std::size_t k)
{
    std::uint64_t sequences = 0;
    std::vector<Vertex> seq;
    std::vector<bool> used(g.order(), false);
    auto visit = [&](const std::vector<Vertex>& s) {
        for (std::size_t i = 0; i < k; ++i)
            if (!g.has_arc(s[i], s[(i + 1) % k])) return;
        ++sequences;
    };
    detail::injective_sequences(g.order(), k, seq, used, visit);
    return BigInt(sequences / k);
}

/// Number of simple directed paths on `vertices` vertices.
inline BigInt path_copies(const OrientedGraph& g, std::size_t vertices)
{
    std::uint64_t count = 0;
    std::vector<Vertex> seq;
    std::vector<bool> used(g.order(), false);
    auto visit = [&](const std::vector<Vertex>& s) {
        for (std::size_t i = 0; i + 1 < s.size(); ++i)
            if (!g.has_arc(s[i], s[i + 1])) return;
        ++count;
    };
    detail::injective_sequences(g.order(), vertices, seq, used, visit);
    return BigInt(count);
}

/// tr(M^length) by walk dynamic programming: ways[v] = number of walks from the start ending at v.
inline BigInt closed_walks(const OrientedGraph& g, std::size_t length)
{
    const std::size_t n = g.order();
    BigInt total = 0;
    for (Vertex s = 0; s < n; ++s) {
        std::vector<BigInt> ways(n, 0);
        ways[s] = 1;
        for (std::size_t step = 0; step < length; ++step) {
            std::vector<BigInt> next(n, 0);
            for (Vertex u = 0; u < n; ++u) {
                if (ways[u] == 0) continue;
                for (Vertex v = 0; v < n; ++v)
                    if (g.has_arc(u, v)) next[v] += ways[u];
            }
            ways = std::move(next);
        }
        total += ways[s];
    }
    return total;
}

/// Exhaustive search over all coefficient vectors with x_i * a_i <= target.
inline std::optional<std::vector<std::uint64_t>> representation(std::uint64_t target, const std::vector<std::uint64_t>& gens)
{
    std::vector<std::uint64_t> x(gens.size(), 0);
    std::optional<std::vector<std::uint64_t>> found;
    auto rec = [&](auto&& self, std::size_t i, std::uint64_t remaining) -> void {
        if (found) return;
        if (i == gens.size()) {
            if (remaining == 0) found = x;
            return;
        }
        for (std::uint64_t c = 0; c * gens[i] <= remaining; ++c) {
            x[i] = c;
            self(self, i + 1, remaining - c * gens[i]);
            if (found) return;
        }
        x[i] = 0;
    };
    rec(rec, 0, target);
    return found;
}

/// True iff some 3 distinct vertices carry a -> b, b -> c, a -> c.
inline bool transitive_triangle(const OrientedGraph& g)
{
    const Vertex n = static_cast<Vertex>(g.order());
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = 0; b < n; ++b)
            for (Vertex c = 0; c < n; ++c)
                if (a != b && b != c && a != c && g.has_arc(a, b) && g.has_arc(b, c) && g.has_arc(a, c)) return true;
    return false;
}

} // namespace dicycle::oracle
