#pragma once

#include "constructions.hpp"
#include "counting.hpp"
#include "digraph.hpp"
#include "errors.hpp"
#include "numtheory.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace dicycle {

class SearchError : public Error {
public:
    using Error::Error;
};

struct Forbidden {
    enum class Kind { cycle, transitive_triangle };
    Kind kind = Kind::cycle;
    std::size_t length = 3;

    static Forbidden cycle(std::size_t l) { return {Kind::cycle, l}; }
    static Forbidden transitive_triangle() { return {Kind::transitive_triangle, 3}; }

    bool operator==(const Forbidden&) const = default;
};

inline std::string to_string(const Forbidden& f)
{
    return f.kind == Forbidden::Kind::transitive_triangle ? "TT3" : "C" + std::to_string(f.length);
}

/// Parses "C4", "c7" or "TT3".
inline Forbidden parse_forbidden(std::string_view s)
{
    if (s == "TT3" || s == "tt3") return Forbidden::transitive_triangle();
    if (s.size() >= 2 && (s[0] == 'C' || s[0] == 'c')) {
        std::size_t l = 0;
        for (char ch : s.substr(1)) {
            if (ch < '0' || ch > '9') throw SearchError("InvalidParameters", "bad forbidden pattern \"" + std::string(s) + "\"");
            l = l * 10 + static_cast<std::size_t>(ch - '0');
        }
        if (l < 2) throw SearchError("InvalidParameters", "forbidden cycle length must be at least 2");
        return Forbidden::cycle(l);
    }
    throw SearchError("InvalidParameters", "bad forbidden pattern \"" + std::string(s) + "\"");
}

inline bool contains_forbidden(const OrientedGraph& g, const std::vector<Forbidden>& forbidden)
{
    for (const auto& f : forbidden) {
        if (f.kind == Forbidden::Kind::transitive_triangle) {
            if (has_transitive_triangle(g)) return true;
        } else if (f.length <= g.order() && has_cycle_subgraph(g, f.length)) {
            return true;
        }
    }
    return false;
}

enum class SearchMethod { exhaustive, local_search };

inline std::string_view to_string(SearchMethod m) { return m == SearchMethod::exhaustive ? "exhaustive" : "local_search"; }

struct ExtremalRecord {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<Forbidden> forbidden;
    Mode mode = Mode::oriented;
    BigInt max_copies = 0;
    std::vector<OrientedGraph> witnesses;
    SearchMethod method = SearchMethod::exhaustive;
    std::uint64_t search_budget = 0;
    std::uint64_t graphs_examined = 0; ///< canonical forbidden-free graphs at the final order
    bool lower_bound_only = false;
};

namespace detail {

/// Adjacency of a graph on at most 8 vertices as one out-neighbour byte per vertex.
struct SmallGraph {
    std::size_t n = 0;
    std::array<std::uint8_t, 8> out{};

    bool arc(std::size_t u, std::size_t v) const { return (out[u] >> v) & 1u; }
    /// pair state for u < v: bit 0 = u -> v, bit 1 = v -> u
    unsigned state(std::size_t u, std::size_t v) const { return (arc(u, v) ? 1u : 0u) | (arc(v, u) ? 2u : 0u); }
    void set_state(std::size_t u, std::size_t v, unsigned s)
    {
        out[u] = static_cast<std::uint8_t>((out[u] & ~(1u << v)) | ((s & 1u) << v));
        out[v] = static_cast<std::uint8_t>((out[v] & ~(1u << u)) | (((s >> 1) & 1u) << u));
    }

    OrientedGraph to_graph(Mode mode) const
    {
        std::vector<Arc> arcs;
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v)
                if (arc(u, v)) arcs.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
        return OrientedGraph(n, arcs, mode);
    }

    /// Column-by-column pair states: (0,1), (0,2), (1,2), (0,3), ...
    std::vector<std::uint8_t> encoding() const
    {
        std::vector<std::uint8_t> e;
        for (std::size_t j = 1; j < n; ++j)
            for (std::size_t i = 0; i < j; ++i) e.push_back(static_cast<std::uint8_t>(state(i, j)));
        return e;
    }
};

/// Directed cycles of length k through `through` (or all of them when through = n).
inline std::uint64_t small_cycles(const SmallGraph& g, std::size_t k, std::size_t through)
{
    std::uint64_t count = 0;
    const std::size_t n = g.n;
    auto dfs = [&](auto&& self, std::size_t start, std::size_t at, std::size_t len, unsigned used, bool seen) -> void {
        if (len == k) {
            if (g.arc(at, start) && seen) ++count;
            return;
        }
        for (std::size_t v = start + 1; v < n; ++v)
            if (!((used >> v) & 1u) && g.arc(at, v)) self(self, start, v, len + 1, used | (1u << v), seen || v == through);
    };
    for (std::size_t s = 0; s < n; ++s) dfs(dfs, s, s, 1, 1u << s, through >= n || s == through);
    return count;
}

inline bool small_transitive_triangle(const SmallGraph& g, std::size_t through)
{
    const std::size_t n = g.n;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (y == x || !g.arc(x, y)) continue;
            for (std::size_t z = 0; z < n; ++z) {
                if (z == x || z == y || !g.arc(y, z) || !g.arc(x, z)) continue;
                if (through >= n || x == through || y == through || z == through) return true;
            }
        }
    return false;
}

inline bool small_forbidden(const SmallGraph& g, const std::vector<Forbidden>& forbidden, std::size_t through)
{
    for (const auto& f : forbidden) {
        if (f.kind == Forbidden::Kind::transitive_triangle) {
            if (small_transitive_triangle(g, through)) return true;
        } else if (f.length <= g.n && small_cycles(g, f.length, through) > 0) {
            return true;
        }
    }
    return false;
}

/// True when no relabeling gives a lexicographically smaller encoding.
inline bool is_canonical(const SmallGraph& g)
{
    const std::size_t n = g.n;
    const auto target = g.encoding();
    std::array<std::size_t, 8> perm{};
    unsigned used = 0;
    // returns -1 if a smaller relabeling exists below this node
    auto rec = [&](auto&& self, std::size_t pos, std::size_t offset) -> int {
        if (pos == n) return 0;
        for (std::size_t v = 0; v < n; ++v) {
            if ((used >> v) & 1u) continue;
            perm[pos] = v;
            int cmp = 0;
            for (std::size_t i = 0; i < pos && cmp == 0; ++i) {
                const unsigned s = (g.arc(perm[i], v) ? 1u : 0u) | (g.arc(v, perm[i]) ? 2u : 0u);
                const unsigned t = target[offset + i];
                cmp = s < t ? -1 : (s > t ? 1 : 0);
            }
            if (cmp < 0) return -1;
            if (cmp > 0) continue;
            used |= 1u << v;
            const int r = self(self, pos + 1, offset + pos);
            used &= ~(1u << v);
            if (r < 0) return -1;
        }
        return 0;
    };
    return rec(rec, 0, 0) == 0;
}

inline SmallGraph small_from(const OrientedGraph& g)
{
    SmallGraph s;
    s.n = g.order();
    for (const Arc& a : g.arcs()) s.out[a.tail] |= static_cast<std::uint8_t>(1u << a.head);
    return s;
}

/// Minimal encoding over all relabelings, and the relabeled graph.
inline SmallGraph canonical_small(const SmallGraph& g)
{
    std::vector<std::size_t> perm(g.n);
    for (std::size_t i = 0; i < g.n; ++i) perm[i] = i;
    SmallGraph best = g;
    auto best_enc = g.encoding();
    do {
        SmallGraph h;
        h.n = g.n;
        // vertex perm[p] of g becomes vertex p
        for (std::size_t p = 0; p < g.n; ++p)
            for (std::size_t q = 0; q < g.n; ++q)
                if (g.arc(perm[p], perm[q])) h.out[p] |= static_cast<std::uint8_t>(1u << q);
        auto e = h.encoding();
        if (e < best_enc) {
            best_enc = std::move(e);
            best = h;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace detail

/// Relabeled copy of g with the lexicographically minimal pair-state encoding (n <= 8).
inline OrientedGraph canonical_form(const OrientedGraph& g)
{
    if (g.order() > 8) throw SearchError("TooLarge", "canonical_form supports at most 8 vertices");
    return detail::canonical_small(detail::small_from(g)).to_graph(g.mode());
}

/// Exact maximum by orderly generation: canonical forbidden-free graphs are extended one vertex
/// at a time, and only arc-maximal graphs at the final order are counted.
inline ExtremalRecord exhaustive_extremal(std::size_t n, std::size_t k, const std::vector<Forbidden>& forbidden,
                                          Mode mode = Mode::oriented, std::size_t max_witnesses = 5,
                                          std::size_t threads = default_thread_count())
{
    if (n > 6) throw SearchError("TooLarge", "exhaustive search supports n <= 6");
    if (k < 2) throw SearchError("InvalidParameters", "cycle length must be at least 2");
    if (k == 2 && mode == Mode::oriented) throw SearchError("InvalidParameters", "C2 needs directed mode");
    ExtremalRecord rec;
    rec.n = n;
    rec.k = k;
    rec.forbidden = forbidden;
    rec.mode = mode;
    rec.method = SearchMethod::exhaustive;
    if (n == 0) return rec;

    const unsigned states = mode == Mode::directed ? 4u : 3u;
    std::vector<detail::SmallGraph> level(1);
    level[0].n = 1;
    for (std::size_t m = 1; m < n; ++m) {
        std::vector<std::vector<detail::SmallGraph>> found(level.size());
        parallel_for(level.size(), threads, [&](std::size_t, std::size_t idx) {
            detail::SmallGraph g = level[idx];
            g.n = m + 1;
            std::vector<unsigned> s(m, 0);
            while (true) {
                for (std::size_t i = 0; i < m; ++i) g.set_state(i, m, s[i]);
                if (!detail::small_forbidden(g, forbidden, m) && detail::is_canonical(g)) found[idx].push_back(g);
                std::size_t i = 0;
                while (i < m && ++s[i] == states) s[i++] = 0;
                if (i == m) break;
            }
        });
        level.clear();
        for (auto& f : found) level.insert(level.end(), f.begin(), f.end());
    }

    rec.graphs_examined = level.size();
    std::vector<std::uint64_t> counts(level.size(), 0);
    std::vector<char> maximal(level.size(), 0);
    parallel_for(level.size(), threads, [&](std::size_t, std::size_t idx) {
        detail::SmallGraph g = level[idx];
        // an arc that can be added without creating a forbidden pattern means g is dominated
        for (std::size_t j = 1; j < g.n; ++j)
            for (std::size_t i = 0; i < j; ++i) {
                const unsigned cur = g.state(i, j);
                for (unsigned add : {1u, 2u}) {
                    if (cur & add) continue;
                    if (mode == Mode::oriented && cur != 0) continue;
                    detail::SmallGraph h = g;
                    h.set_state(i, j, cur | add);
                    if (!detail::small_forbidden(h, forbidden, n)) return;
                }
            }
        maximal[idx] = 1;
        counts[idx] = k <= g.n ? detail::small_cycles(g, k, g.n) : 0;
    });

    std::uint64_t best = 0;
    for (std::size_t i = 0; i < level.size(); ++i)
        if (maximal[i]) best = std::max(best, counts[i]);
    rec.max_copies = best;
    std::vector<std::vector<std::uint8_t>> encs;
    for (std::size_t i = 0; i < level.size(); ++i)
        if (maximal[i] && counts[i] == best) encs.push_back(level[i].encoding());
    std::vector<std::size_t> order(encs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < level.size(); ++i)
        if (maximal[i] && counts[i] == best) hits.push_back(i);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return encs[a] < encs[b]; });
    for (std::size_t r = 0; r < order.size() && rec.witnesses.size() < max_witnesses; ++r) {
        OrientedGraph w = level[hits[order[r]]].to_graph(mode);
        // independent re-verification through the counting module
        if (contains_forbidden(w, forbidden) || count_cycle_copies(w, k, 1) != BigInt(best))
            throw SearchError("VerificationFailed", "witness failed re-verification");
        rec.witnesses.push_back(std::move(w));
    }
    return rec;
}

/// Simulated annealing over pair states; a lower bound only. Deterministic per seed.
inline ExtremalRecord local_search_extremal(std::size_t n, std::size_t k, const std::vector<Forbidden>& forbidden,
                                            std::uint64_t budget, std::uint64_t seed, Mode mode = Mode::oriented)
{
    if (n < 2) throw SearchError("InvalidParameters", "local search needs n >= 2");
    if (k < 2 || (k == 2 && mode == Mode::oriented)) throw SearchError("InvalidParameters", "bad cycle length");
    std::mt19937_64 rng(seed);
    const unsigned states = mode == Mode::directed ? 4u : 3u;
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex v = 1; v < n; ++v)
        for (Vertex u = 0; u < v; ++u) pairs.emplace_back(u, v);
    std::vector<unsigned> cur(pairs.size(), 0);

    auto build = [&](const std::vector<unsigned>& st) {
        std::vector<Arc> arcs;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (st[i] & 1u) arcs.push_back({pairs[i].first, pairs[i].second});
            if (st[i] & 2u) arcs.push_back({pairs[i].second, pairs[i].first});
        }
        return OrientedGraph(n, arcs, mode);
    };
    auto score = [&](const OrientedGraph& g) -> std::optional<double> {
        if (contains_forbidden(g, forbidden)) return std::nullopt;
        return k <= n ? to_double(count_cycle_copies(g, k, 1)) : 0.0;
    };

    double cur_val = 0.0;
    std::vector<unsigned> best = cur;
    double best_val = 0.0;
    const double t0 = 2.0;
    const double t1 = 0.02;
    const std::uint64_t patience = std::max<std::uint64_t>(budget / 10, 1000);
    std::uint64_t since_best = 0;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::uint64_t it = 0; it < budget; ++it) {
        const double temp = t0 * std::pow(t1 / t0, static_cast<double>(it) / static_cast<double>(std::max<std::uint64_t>(budget, 1)));
        const std::size_t p = static_cast<std::size_t>(rng() % pairs.size());
        unsigned next = static_cast<unsigned>(rng() % (states - 1));
        if (next >= cur[p]) ++next;
        const unsigned old = cur[p];
        cur[p] = next;
        const auto val = score(build(cur));
        if (val && (*val >= cur_val || unit(rng) < std::exp((*val - cur_val) / temp))) {
            cur_val = *val;
            if (cur_val > best_val) {
                best_val = cur_val;
                best = cur;
                since_best = 0;
            }
        } else {
            cur[p] = old;
        }
        if (++since_best > patience) {
            cur = best;
            cur_val = best_val;
            since_best = 0;
        }
    }

    ExtremalRecord rec;
    rec.n = n;
    rec.k = k;
    rec.forbidden = forbidden;
    rec.mode = mode;
    rec.method = SearchMethod::local_search;
    rec.search_budget = budget;
    rec.lower_bound_only = true;
    OrientedGraph w = build(best);
    if (contains_forbidden(w, forbidden)) throw SearchError("VerificationFailed", "witness failed re-verification");
    rec.max_copies = k <= n ? count_cycle_copies(w, k, 1) : BigInt(0);
    rec.witnesses.push_back(n <= 8 ? canonical_form(w) : w);
    return rec;
}

struct FormulaRow {
    std::size_t n = 0;
    BigInt search_value = 0;
    std::optional<BigInt> predicted;
    std::optional<bool> match;
    std::string source;
};

/// Exact value the theory predicts at this n, when there is one.
inline std::optional<std::pair<BigInt, std::string>> predicted_exact(std::size_t k, const std::vector<Forbidden>& forbidden,
                                                                     std::size_t n, Mode mode)
{
    if (forbidden.size() != 1) return std::nullopt;
    const auto& f = forbidden[0];
    auto ceil3 = [](std::size_t x) { return (x + 2) / 3; };
    if (f.kind == Forbidden::Kind::transitive_triangle) {
        if (k != 3 || mode != Mode::oriented) return std::nullopt;
        return std::pair{BigInt(ceil3(n)) * ceil3(n >= 1 ? n - 1 : 0) * ceil3(n >= 2 ? n - 2 : 0),
                         "ceil(n/3)ceil((n-1)/3)ceil((n-2)/3)"};
    }
    if (mode == Mode::oriented && k == 4 && f.length == 3) return std::pair{iterated_c4_count(n), "iterated C4 blow-up recursion"};
    if (k < 3 || f.length < 3 || f.length == k) return std::nullopt;
    const auto p = predicted_extremal(k, f.length, n, mode);
    if (p.exact_value) return std::pair{*p.exact_value, p.source};
    return std::nullopt;
}

inline std::vector<FormulaRow> verify_formula(std::size_t k, const std::vector<Forbidden>& forbidden, std::size_t n_lo,
                                              std::size_t n_hi, Mode mode = Mode::oriented,
                                              std::size_t threads = default_thread_count())
{
    std::vector<FormulaRow> rows;
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
        FormulaRow r;
        r.n = n;
        r.search_value = exhaustive_extremal(n, k, forbidden, mode, 1, threads).max_copies;
        if (auto p = predicted_exact(k, forbidden, n, mode)) {
            r.predicted = p->first;
            r.source = p->second;
            r.match = r.search_value == p->first;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace dicycle
