#pragma once

#include "digraph.hpp"
#include "numeric.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace dicycle {

namespace detail {

/// Depth-first enumeration of directed k-cycles whose smallest vertex is `start`.
///
/// Pruning: reach[r] holds the vertices > start from which `start` is reachable by a walk of exactly
/// r arcs through vertices > start. A simple path can only be extended to v if v is in
/// reach[remaining], which is a necessary condition for closing the cycle.
class CycleSearch {
public:
    CycleSearch(const OrientedGraph& g, std::size_t k)
        : g_(g), k_(k), stride_(g.stride()), allowed_(stride_), visited_(stride_), reach_(k + 1, std::vector<Word>(stride_)),
          cand_(k + 1, std::vector<Word>(stride_)), path_(k)
    {
    }

    /// Prepares the per-start state; returns false if no k-cycle can start here.
    bool prepare(Vertex s)
    {
        start_ = s;
        std::fill(allowed_.begin(), allowed_.end(), 0);
        for (std::size_t v = s + 1; v < g_.order(); ++v) set_bit(allowed_, v);
        auto in_s = g_.in_row(s);
        for (std::size_t w = 0; w < stride_; ++w) reach_[1][w] = in_s[w] & allowed_[w];
        for (std::size_t r = 2; r < k_; ++r) {
            auto& cur = reach_[r];
            std::fill(cur.begin(), cur.end(), 0);
            for_each_bit(std::span<const Word>(reach_[r - 1]), [&](std::size_t u) {
                auto in_u = g_.in_row(static_cast<Vertex>(u));
                for (std::size_t w = 0; w < stride_; ++w) cur[w] |= in_u[w] & allowed_[w];
            });
            if (!any(std::span<const Word>(cur))) return false;
        }
        return any(std::span<const Word>(reach_[1]));
    }

    /// Number of k-cycles with smallest vertex `start` (requires k >= 3).
    std::uint64_t count()
    {
        std::fill(visited_.begin(), visited_.end(), 0);
        set_bit(visited_, start_);
        return count_from(start_, 0);
    }

    /// Calls visit(span of k vertices) for each cycle; stops early when visit returns false.
    template <class Visit>
    bool enumerate(Visit& visit)
    {
        std::fill(visited_.begin(), visited_.end(), 0);
        set_bit(visited_, start_);
        path_[0] = start_;
        return enumerate_from(start_, 0, visit);
    }

private:
    // depth = index of `v` in the path; k - depth - 1 arcs remain before returning to start.
    std::uint64_t count_from(Vertex v, std::size_t depth)
    {
        const std::size_t remaining = k_ - depth - 1;
        auto out = g_.out_row(v);
        auto& cand = cand_[depth];
        const auto& target = reach_[remaining];
        for (std::size_t w = 0; w < stride_; ++w) cand[w] = out[w] & target[w] & ~visited_[w];
        if (remaining == 1) return popcount(std::span<const Word>(cand));
        std::uint64_t total = 0;
        for_each_bit(std::span<const Word>(cand), [&](std::size_t u) {
            set_bit(visited_, u);
            total += count_from(static_cast<Vertex>(u), depth + 1);
            clear_bit(visited_, u);
        });
        return total;
    }

    template <class Visit>
    bool enumerate_from(Vertex v, std::size_t depth, Visit& visit)
    {
        const std::size_t remaining = k_ - depth - 1;
        if (remaining == 0) {
            if (!g_.has_arc(v, start_)) return true;
            return visit(std::span<const Vertex>(path_.data(), k_));
        }
        auto out = g_.out_row(v);
        auto& cand = cand_[depth];
        const auto& target = reach_[remaining];
        for (std::size_t w = 0; w < stride_; ++w) cand[w] = out[w] & target[w] & ~visited_[w];
        bool keep_going = true;
        for (std::size_t wi = 0; wi < stride_ && keep_going; ++wi) {
            Word word = cand[wi];
            while (word && keep_going) {
                const auto u = static_cast<Vertex>(wi * word_bits + static_cast<std::size_t>(std::countr_zero(word)));
                word &= word - 1;
                set_bit(visited_, u);
                path_[depth + 1] = u;
                keep_going = enumerate_from(u, depth + 1, visit);
                clear_bit(visited_, u);
            }
        }
        return keep_going;
    }

    const OrientedGraph& g_;
    std::size_t k_;
    std::size_t stride_;
    Vertex start_ = 0;
    std::vector<Word> allowed_;
    std::vector<Word> visited_;
    std::vector<std::vector<Word>> reach_;
    std::vector<std::vector<Word>> cand_;
    std::vector<Vertex> path_;
};

inline void require_length(std::size_t k, std::size_t minimum, const char* what)
{
    if (k < minimum)
        throw std::invalid_argument(std::string(what) + " must be at least " + std::to_string(minimum));
}

} // namespace detail

/// Calls visit(cycle) for every copy of the directed k-cycle, each exactly once, as the vertex
/// sequence rotated to start at its smallest vertex. visit returns false to stop; the function
/// returns false iff it was stopped. Serial.
template <class Visit>
bool for_each_cycle(const OrientedGraph& g, std::size_t k, Visit&& visit)
{
    detail::require_length(k, 2, "cycle length");
    if (k == 2) {
        for (const Arc& a : g.arcs())
            if (a.tail < a.head && g.has_arc(a.head, a.tail)) {
                const Vertex c[2] = {a.tail, a.head};
                if (!visit(std::span<const Vertex>(c, 2))) return false;
            }
        return true;
    }
    if (k > g.order()) return true;
    detail::CycleSearch search(g, k);
    for (Vertex s = 0; s + k <= g.order(); ++s) {
        if (!search.prepare(s)) continue;
        if (!search.enumerate(visit)) return false;
    }
    return true;
}

/// Number of subgraphs isomorphic to the directed k-cycle (k = 2 counts digons).
inline BigInt count_cycle_copies(const OrientedGraph& g, std::size_t k, std::size_t threads = default_thread_count())
{
    detail::require_length(k, 2, "cycle length");
    if (k == 2) {
        std::uint64_t c = 0;
        for (const Arc& a : g.arcs())
            if (a.tail < a.head && g.has_arc(a.head, a.tail)) ++c;
        return c;
    }
    if (k > g.order()) return 0;
    const std::size_t starts = g.order() - k + 1;
    threads = std::max<std::size_t>(1, std::min(threads, starts));
    std::vector<std::uint64_t> per_start(starts, 0);
    std::vector<std::optional<detail::CycleSearch>> searchers(threads);
    parallel_for(starts, threads, [&](std::size_t w, std::size_t s) {
        if (!searchers[w]) searchers[w].emplace(g, k);
        if (searchers[w]->prepare(static_cast<Vertex>(s))) per_start[s] = searchers[w]->count();
    });
    BigInt total = 0;
    for (auto c : per_start) total += c;
    return total;
}

/// True iff g contains a directed cycle of length exactly `length` as a subgraph.
inline bool has_cycle_subgraph(const OrientedGraph& g, std::size_t length)
{
    detail::require_length(length, 2, "cycle length");
    bool found = false;
    for_each_cycle(g, length, [&](std::span<const Vertex>) {
        found = true;
        return false;
    });
    return found;
}

// ---------------------------------------------------------------------------
// Closed walks

namespace detail {

template <class T>
class DenseMatrix {
public:
    explicit DenseMatrix(std::size_t n) : n_(n), a_(n * n, T(0)) {}
    T& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    std::size_t size() const { return n_; }

    DenseMatrix operator*(const DenseMatrix& b) const
    {
        DenseMatrix out(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < n_; ++k) {
                const T& x = (*this)(i, k);
                if (x == 0) continue;
                for (std::size_t j = 0; j < n_; ++j)
                    if (b(k, j) != 0) out(i, j) += x * b(k, j);
            }
        return out;
    }

    T trace() const
    {
        T t(0);
        for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

private:
    std::size_t n_;
    std::vector<T> a_;
};

template <class T, class M>
M power(M base, std::size_t e, M identity)
{
    M result = std::move(identity);
    while (e > 0) {
        if (e & 1U) result = result * base;
        e >>= 1U;
        if (e > 0) base = base * base;
    }
    return result;
}

template <class T>
DenseMatrix<T> adjacency(const OrientedGraph& g)
{
    DenseMatrix<T> m(g.order());
    for (const Arc& a : g.arcs()) m(a.tail, a.head) = T(1);
    return m;
}

template <class T>
DenseMatrix<T> identity(std::size_t n)
{
    DenseMatrix<T> m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
}

/// True when every entry met while powering fits in 63 bits: entries of M^j are bounded by
/// (max out-degree)^j and the trace adds at most n of them.
inline bool fits_in_u64(const OrientedGraph& g, std::size_t length)
{
    std::size_t delta = 0;
    for (Vertex v = 0; v < g.order(); ++v) delta = std::max(delta, g.out_degree(v));
    long double bound = static_cast<long double>(std::max<std::size_t>(g.order(), 1));
    for (std::size_t i = 0; i < length; ++i) bound *= static_cast<long double>(std::max<std::size_t>(delta, 1));
    return bound < 9.0e18L;
}

} // namespace detail

/// tr(M^length) for the 0/1 adjacency matrix M, exactly.
inline BigInt count_closed_walks(const OrientedGraph& g, std::size_t length)
{
    detail::require_length(length, 1, "walk length");
    const std::size_t n = g.order();
    if (n == 0) return 0;
    if (detail::fits_in_u64(g, length)) {
        using M = detail::DenseMatrix<std::uint64_t>;
        M p = detail::power<std::uint64_t>(detail::adjacency<std::uint64_t>(g), length, detail::identity<std::uint64_t>(n));
        return BigInt(p.trace());
    }
    using M = detail::DenseMatrix<BigInt>;
    M p = detail::power<BigInt>(detail::adjacency<BigInt>(g), length, detail::identity<BigInt>(n));
    return p.trace();
}

/// Boolean version of count_closed_walks(g, length) > 0.
inline bool has_closed_walk(const OrientedGraph& g, std::size_t length)
{
    detail::require_length(length, 1, "walk length");
    const std::size_t n = g.order();
    if (n == 0) return false;
    BitMatrix p = detail::power<bool>(g.out_matrix(), length, BitMatrix::identity(n));
    for (std::size_t i = 0; i < n; ++i)
        if (p.get(i, i)) return true;
    return false;
}

/// result[l] (1 <= l <= max_length) tells whether a closed walk of length l exists; result[0] is false.
inline std::vector<bool> closed_walk_lengths(const OrientedGraph& g, std::size_t max_length)
{
    std::vector<bool> out(max_length + 1, false);
    const std::size_t n = g.order();
    if (n == 0) return out;
    BitMatrix p = g.out_matrix();
    for (std::size_t l = 1; l <= max_length; ++l) {
        if (l > 1) p = p * g.out_matrix();
        for (std::size_t i = 0; i < n && !out[l]; ++i)
            if (p.get(i, i)) out[l] = true;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Paths

namespace detail {

inline std::uint64_t count_paths_from(const OrientedGraph& g, Vertex v, std::size_t remaining, std::vector<Word>& visited,
                                      std::vector<std::vector<Word>>& scratch)
{
    auto out = g.out_row(v);
    if (remaining == 1) {
        std::uint64_t c = 0;
        for (std::size_t w = 0; w < visited.size(); ++w) c += static_cast<std::uint64_t>(std::popcount(out[w] & ~visited[w]));
        return c;
    }
    auto& cand = scratch[remaining];
    for (std::size_t w = 0; w < visited.size(); ++w) cand[w] = out[w] & ~visited[w];
    std::uint64_t total = 0;
    for_each_bit(std::span<const Word>(cand), [&](std::size_t u) {
        set_bit(visited, u);
        total += count_paths_from(g, static_cast<Vertex>(u), remaining - 1, visited, scratch);
        clear_bit(visited, u);
    });
    return total;
}

} // namespace detail

/// Number of copies of the directed path on `vertices` vertices (simple paths).
inline BigInt count_paths(const OrientedGraph& g, std::size_t vertices, std::size_t threads = default_thread_count())
{
    detail::require_length(vertices, 1, "path order");
    const std::size_t n = g.order();
    if (vertices == 1) return BigInt(n);
    if (vertices > n) return 0;
    std::vector<std::uint64_t> per_start(n, 0);
    threads = std::max<std::size_t>(1, std::min(threads, n));
    std::vector<std::vector<Word>> visited(threads, std::vector<Word>(g.stride()));
    std::vector<std::vector<std::vector<Word>>> scratch(threads,
                                                        std::vector<std::vector<Word>>(vertices, std::vector<Word>(g.stride())));
    parallel_for(n, threads, [&](std::size_t w, std::size_t s) {
        auto& vis = visited[w];
        std::fill(vis.begin(), vis.end(), 0);
        set_bit(vis, s);
        per_start[s] = detail::count_paths_from(g, static_cast<Vertex>(s), vertices - 1, vis, scratch[w]);
    });
    BigInt total = 0;
    for (auto c : per_start) total += c;
    return total;
}

// ---------------------------------------------------------------------------
// Per-arc and per-vertex statistics

struct ArcMultiplicities {
    std::vector<Arc> arcs;             ///< g.arcs() order
    std::vector<std::uint64_t> counts; ///< copies of C_k through arcs[i]

    std::uint64_t at(Arc a) const
    {
        auto it = std::lower_bound(arcs.begin(), arcs.end(), a);
        if (it == arcs.end() || *it != a) throw std::out_of_range("arc not in graph");
        return counts[static_cast<std::size_t>(it - arcs.begin())];
    }

    /// Arcs on at least one but fewer than `thick_from` copies.
    std::vector<Arc> thin(std::uint64_t thick_from = 2) const
    {
        std::vector<Arc> out;
        for (std::size_t i = 0; i < arcs.size(); ++i)
            if (counts[i] >= 1 && counts[i] < thick_from) out.push_back(arcs[i]);
        return out;
    }

    std::vector<Arc> thick(std::uint64_t thick_from = 2) const
    {
        std::vector<Arc> out;
        for (std::size_t i = 0; i < arcs.size(); ++i)
            if (counts[i] >= thick_from) out.push_back(arcs[i]);
        return out;
    }
};

/// Thickness cut-off k^2 * t * n^(k-3) from the order-of-magnitude argument for forbidden C_{kt}.
inline BigInt order_of_magnitude_thick_threshold(std::size_t k, std::size_t t, std::size_t n)
{
    return BigInt(k) * k * t * ipow(BigInt(n), static_cast<unsigned>(k >= 3 ? k - 3 : 0));
}

inline ArcMultiplicities arc_cycle_multiplicities(const OrientedGraph& g, std::size_t k)
{
    ArcMultiplicities m;
    m.arcs = g.arcs();
    m.counts.assign(m.arcs.size(), 0);
    auto index = [&](Vertex u, Vertex v) {
        return static_cast<std::size_t>(std::lower_bound(m.arcs.begin(), m.arcs.end(), Arc{u, v}) - m.arcs.begin());
    };
    for_each_cycle(g, k, [&](std::span<const Vertex> c) {
        for (std::size_t i = 0; i < c.size(); ++i) ++m.counts[index(c[i], c[(i + 1) % c.size()])];
        return true;
    });
    return m;
}

/// t_v: number of copies of C_k containing v.
inline std::vector<std::uint64_t> vertex_cycle_counts(const OrientedGraph& g, std::size_t k)
{
    std::vector<std::uint64_t> t(g.order(), 0);
    for_each_cycle(g, k, [&](std::span<const Vertex> c) {
        for (Vertex v : c) ++t[v];
        return true;
    });
    return t;
}

// ---------------------------------------------------------------------------
// Clearing

struct ClearingResult {
    OrientedGraph cleared;
    std::size_t removed_arcs = 0;
    std::size_t removed_vertices = 0;
    bool is_fixed_point = false;          ///< the input already had every arc and vertex on a C_k
    std::optional<bool> free_of_closed_walk; ///< no closed walk of the forbidden length (when one was given)
    std::vector<Vertex> kept_vertices;    ///< original labels of the cleared graph's vertices

    /// (k,l)-cleared: every arc and vertex on a C_k and no homomorphic image of C_l.
    bool is_cleared() const { return free_of_closed_walk.value_or(true); }
};

/// Deletes arcs and vertices lying on no C_k until nothing changes. Closed walks of the forbidden
/// length are only detected and reported, never removed.
inline ClearingResult clear(const OrientedGraph& g, std::size_t k, std::optional<std::size_t> forbidden_length = std::nullopt)
{
    ClearingResult r;
    OrientedGraph cur = g;
    std::vector<Vertex> labels(g.order());
    for (Vertex v = 0; v < g.order(); ++v) labels[v] = v;
    while (true) {
        auto mult = arc_cycle_multiplicities(cur, k);
        std::vector<Arc> dead;
        for (std::size_t i = 0; i < mult.arcs.size(); ++i)
            if (mult.counts[i] == 0) dead.push_back(mult.arcs[i]);
        auto on_cycle = vertex_cycle_counts(cur, k);
        std::vector<Vertex> keep;
        for (Vertex v = 0; v < cur.order(); ++v)
            if (on_cycle[v] > 0) keep.push_back(v);
        if (dead.empty() && keep.size() == cur.order()) break;
        r.removed_arcs += dead.size();
        r.removed_vertices += cur.order() - keep.size();
        cur = cur.without_arcs(dead).induced(keep);
        std::vector<Vertex> next;
        for (Vertex v : keep) next.push_back(labels[v]);
        labels = std::move(next);
    }
    r.is_fixed_point = r.removed_arcs == 0 && r.removed_vertices == 0;
    if (forbidden_length) r.free_of_closed_walk = !has_closed_walk(cur, *forbidden_length);
    r.cleared = std::move(cur);
    r.kept_vertices = std::move(labels);
    return r;
}

// ---------------------------------------------------------------------------
// Neighbour condition

struct NeighborWitness {
    Vertex vertex = 0;
    std::vector<Vertex> cycle;
    std::size_t neighbors_in_cycle = 0;
};

struct NeighborConditionResult {
    bool holds = true;
    std::size_t limit = 0; ///< floor(2k/d)
    std::optional<NeighborWitness> witness;
};

/// Checks that every vertex has at most floor(2k/d) neighbours (in- or out-) on every copy of C_k.
inline NeighborConditionResult check_neighbor_condition(const OrientedGraph& g, std::size_t k, std::size_t d)
{
    if (d < 2) throw std::invalid_argument("divisor d must be at least 2");
    NeighborConditionResult r;
    r.limit = (2 * k) / d;
    const std::size_t n = g.order();
    std::vector<std::vector<Word>> nbr(n);
    for (Vertex v = 0; v < n; ++v) nbr[v] = g.neighbor_row(v);
    std::vector<Word> members(g.stride());
    for_each_cycle(g, k, [&](std::span<const Vertex> c) {
        std::fill(members.begin(), members.end(), 0);
        for (Vertex v : c) set_bit(members, v);
        for (Vertex v = 0; v < n; ++v) {
            const std::size_t cnt = and_popcount(nbr[v], members);
            if (cnt > r.limit) {
                r.holds = false;
                r.witness = NeighborWitness{v, std::vector<Vertex>(c.begin(), c.end()), cnt};
                return false;
            }
        }
        return true;
    });
    return r;
}

// ---------------------------------------------------------------------------

/// Some copy of the transitive triangle a->b, b->c, a->c.
inline bool has_transitive_triangle(const OrientedGraph& g)
{
    for (const Arc& a : g.arcs())
        if (and_popcount(g.out_row(a.tail), g.in_row(a.head)) > 0) return true;
    return false;
}

enum class Turn { forward, backward };

/// |#forward - #backward| around an oriented cycle.
inline std::size_t cycle_type(std::span<const Turn> orientation)
{
    if (orientation.size() < 3) throw std::invalid_argument("a cycle has at least 3 arcs");
    std::size_t f = 0;
    for (Turn t : orientation) f += t == Turn::forward ? 1 : 0;
    const std::size_t b = orientation.size() - f;
    return f > b ? f - b : b - f;
}

/// Exact counts collected for one cycle length.
struct CountReport {
    std::size_t k = 0;
    BigInt copies;
    BigInt closed_walks;
    std::map<std::size_t, BigInt> paths;
    std::optional<ArcMultiplicities> per_arc;
    std::optional<std::vector<std::uint64_t>> per_vertex;
};

struct CountOptions {
    std::vector<std::size_t> path_orders;
    bool per_arc = false;
    bool per_vertex = false;
    std::size_t threads = default_thread_count();
};

inline CountReport count_report(const OrientedGraph& g, std::size_t k, const CountOptions& opt = {})
{
    CountReport r;
    r.k = k;
    r.copies = count_cycle_copies(g, k, opt.threads);
    r.closed_walks = count_closed_walks(g, k);
    for (auto i : opt.path_orders) r.paths[i] = count_paths(g, i, opt.threads);
    if (opt.per_arc) r.per_arc = arc_cycle_multiplicities(g, k);
    if (opt.per_vertex) r.per_vertex = vertex_cycle_counts(g, k);
    return r;
}

} // namespace dicycle
