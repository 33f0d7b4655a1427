#pragma once

#include "bits.hpp"
#include "errors.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dicycle {

using Vertex = std::uint32_t;

/// Oriented graphs forbid digons; directed mode allows them.
enum class Mode { oriented, directed };

inline std::string_view to_string(Mode m) { return m == Mode::oriented ? "oriented" : "directed"; }

struct Arc {
    Vertex tail = 0;
    Vertex head = 0;
    auto operator<=>(const Arc&) const = default;
};

enum class GraphErrc {
    self_loop,
    digon_in_oriented_mode,
    vertex_out_of_range,
    parse_error,
    missing_coordinates,
    size_mismatch,
    invalid_pattern,
};

inline std::string_view to_string(GraphErrc e)
{
    switch (e) {
    case GraphErrc::self_loop: return "SelfLoop";
    case GraphErrc::digon_in_oriented_mode: return "DigonInOrientedMode";
    case GraphErrc::vertex_out_of_range: return "VertexOutOfRange";
    case GraphErrc::parse_error: return "ParseError";
    case GraphErrc::missing_coordinates: return "MissingCoordinates";
    case GraphErrc::size_mismatch: return "SizeMismatch";
    case GraphErrc::invalid_pattern: return "InvalidPattern";
    }
    return "Unknown";
}

class GraphError : public Error {
public:
    GraphError(GraphErrc code, const std::string& what) : Error(std::string(to_string(code)), what), code_(code) {}
    GraphErrc code() const noexcept { return code_; }

private:
    GraphErrc code_;
};

class ParseError : public GraphError {
public:
    ParseError(std::size_t line, const std::string& what)
        : GraphError(GraphErrc::parse_error, "line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Finite digraph on vertices 0..n-1 without self-loops. Immutable after construction.
///
/// Arcs are deduplicated and kept sorted; adjacency is stored as out- and in-neighbour bit rows
/// so counting code can intersect neighbourhoods word by word.
class OrientedGraph {
public:
    OrientedGraph() : OrientedGraph(0, {}) {}

    OrientedGraph(std::size_t n, std::span<const Arc> arcs, Mode mode = Mode::oriented)
        : n_(n), mode_(mode), out_(n), in_(n)
    {
        arcs_.assign(arcs.begin(), arcs.end());
        std::sort(arcs_.begin(), arcs_.end());
        arcs_.erase(std::unique(arcs_.begin(), arcs_.end()), arcs_.end());
        for (const Arc& a : arcs_) {
            if (a.tail >= n || a.head >= n)
                throw GraphError(GraphErrc::vertex_out_of_range,
                                 "arc (" + std::to_string(a.tail) + "," + std::to_string(a.head) +
                                     ") has an endpoint outside [0," + std::to_string(n) + ")");
            if (a.tail == a.head)
                throw GraphError(GraphErrc::self_loop, "self-loop at vertex " + std::to_string(a.tail));
            out_.set(a.tail, a.head);
            in_.set(a.head, a.tail);
        }
        if (mode == Mode::oriented) {
            for (const Arc& a : arcs_) {
                if (out_.get(a.head, a.tail))
                    throw GraphError(GraphErrc::digon_in_oriented_mode,
                                     "arcs " + std::to_string(a.tail) + "->" + std::to_string(a.head) +
                                         " and its reverse form a digon in oriented mode");
            }
        }
    }

    OrientedGraph(std::size_t n, std::initializer_list<Arc> arcs, Mode mode = Mode::oriented)
        : OrientedGraph(n, std::span<const Arc>(arcs.begin(), arcs.size()), mode)
    {
    }

    std::size_t order() const noexcept { return n_; }
    std::size_t arc_count() const noexcept { return arcs_.size(); }
    Mode mode() const noexcept { return mode_; }
    const std::vector<Arc>& arcs() const noexcept { return arcs_; }
    std::size_t stride() const noexcept { return out_.stride(); }

    bool has_arc(Vertex u, Vertex v) const noexcept { return u < n_ && v < n_ && out_.get(u, v); }

    std::span<const Word> out_row(Vertex v) const noexcept { return out_.row(v); }
    std::span<const Word> in_row(Vertex v) const noexcept { return in_.row(v); }
    const BitMatrix& out_matrix() const noexcept { return out_; }
    const BitMatrix& in_matrix() const noexcept { return in_; }

    std::size_t out_degree(Vertex v) const noexcept { return popcount(out_row(v)); }
    std::size_t in_degree(Vertex v) const noexcept { return popcount(in_row(v)); }

    std::vector<Vertex> out_neighbors(Vertex v) const { return collect(out_row(v)); }
    std::vector<Vertex> in_neighbors(Vertex v) const { return collect(in_row(v)); }

    /// Neighbours in the underlying undirected sense.
    std::vector<Word> neighbor_row(Vertex v) const
    {
        std::vector<Word> row(stride());
        auto o = out_row(v);
        auto i = in_row(v);
        for (std::size_t w = 0; w < row.size(); ++w) row[w] = o[w] | i[w];
        return row;
    }

    bool has_digon() const noexcept
    {
        for (const Arc& a : arcs_)
            if (out_.get(a.head, a.tail)) return true;
        return false;
    }

    /// Subgraph induced by `keep` (sorted, distinct), relabelled 0..keep.size()-1 in order.
    OrientedGraph induced(std::span<const Vertex> keep) const
    {
        std::vector<std::int64_t> index(n_, -1);
        for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = static_cast<std::int64_t>(i);
        std::vector<Arc> out;
        for (const Arc& a : arcs_)
            if (index[a.tail] >= 0 && index[a.head] >= 0)
                out.push_back({static_cast<Vertex>(index[a.tail]), static_cast<Vertex>(index[a.head])});
        return OrientedGraph(keep.size(), out, mode_);
    }

    /// Same vertex set with the given arcs removed.
    OrientedGraph without_arcs(std::span<const Arc> removed) const
    {
        std::vector<Arc> sorted(removed.begin(), removed.end());
        std::sort(sorted.begin(), sorted.end());
        std::vector<Arc> kept;
        std::set_difference(arcs_.begin(), arcs_.end(), sorted.begin(), sorted.end(), std::back_inserter(kept));
        return OrientedGraph(n_, kept, mode_);
    }

    /// Relabels vertex v as perm[v].
    OrientedGraph permuted(std::span<const Vertex> perm) const
    {
        std::vector<Arc> out;
        out.reserve(arcs_.size());
        for (const Arc& a : arcs_) out.push_back({perm[a.tail], perm[a.head]});
        return OrientedGraph(n_, out, mode_);
    }

    friend bool operator==(const OrientedGraph& a, const OrientedGraph& b)
    {
        return a.n_ == b.n_ && a.mode_ == b.mode_ && a.arcs_ == b.arcs_;
    }

private:
    static std::vector<Vertex> collect(std::span<const Word> row)
    {
        std::vector<Vertex> out;
        for_each_bit(row, [&](std::size_t b) { out.push_back(static_cast<Vertex>(b)); });
        return out;
    }

    std::size_t n_ = 0;
    Mode mode_ = Mode::oriented;
    std::vector<Arc> arcs_;
    BitMatrix out_;
    BitMatrix in_;
};

inline OrientedGraph new_graph(std::size_t n, std::span<const Arc> arcs, Mode mode = Mode::oriented)
{
    return OrientedGraph(n, arcs, mode);
}

/// Directed cycle 0 -> 1 -> ... -> k-1 -> 0.
inline OrientedGraph directed_cycle(std::size_t k, Mode mode = Mode::oriented)
{
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < k; ++i)
        arcs.push_back({static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % k)});
    return OrientedGraph(k, arcs, mode);
}

/// Transitive tournament on n vertices, arcs i -> j for i < j.
inline OrientedGraph transitive_tournament(std::size_t n)
{
    std::vector<Arc> arcs;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j) arcs.push_back({i, j});
    return OrientedGraph(n, arcs);
}

// ---------------------------------------------------------------------------
// Text format:
//   line 1: "n m" or "n m directed"
//   then m lines "u v" (arc u -> v). Lines starting with '#' are comments.

inline std::string write_graph(const OrientedGraph& g)
{
    std::ostringstream os;
    os << g.order() << ' ' << g.arc_count();
    if (g.mode() == Mode::directed) os << " directed";
    os << '\n';
    for (const Arc& a : g.arcs()) os << a.tail << ' ' << a.head << '\n';
    return os.str();
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line)
{
    std::istringstream is(line);
    std::vector<std::string> out;
    for (std::string tok; is >> tok;) out.push_back(tok);
    return out;
}

inline std::optional<std::uint64_t> parse_uint(const std::string& tok)
{
    if (tok.empty() || tok.size() > 18) return std::nullopt;
    std::uint64_t v = 0;
    for (char c : tok) {
        if (c < '0' || c > '9') return std::nullopt;
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
}

} // namespace detail

inline OrientedGraph read_graph(std::istream& in)
{
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    Mode mode = Mode::oriented;
    std::vector<Arc> arcs;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        auto toks = detail::split_ws(line);
        if (!have_header) {
            if (toks.size() < 2 || toks.size() > 3) throw ParseError(lineno, "expected header \"n m [directed]\"");
            auto pn = detail::parse_uint(toks[0]);
            auto pm = detail::parse_uint(toks[1]);
            if (!pn || !pm) throw ParseError(lineno, "header counts must be non-negative integers");
            if (toks.size() == 3) {
                if (toks[2] == "directed")
                    mode = Mode::directed;
                else if (toks[2] != "oriented")
                    throw ParseError(lineno, "unknown mode \"" + toks[2] + "\"");
            }
            n = *pn;
            m = *pm;
            have_header = true;
            continue;
        }
        if (toks.size() != 2) throw ParseError(lineno, "expected arc line \"u v\"");
        auto u = detail::parse_uint(toks[0]);
        auto v = detail::parse_uint(toks[1]);
        if (!u || !v) throw ParseError(lineno, "arc endpoints must be non-negative integers");
        if (*u >= n || *v >= n) throw ParseError(lineno, "arc endpoint out of range");
        arcs.push_back({static_cast<Vertex>(*u), static_cast<Vertex>(*v)});
    }
    if (!have_header) throw ParseError(lineno + 1, "missing header");
    if (arcs.size() != m)
        throw ParseError(lineno, "header declares " + std::to_string(m) + " arcs but " + std::to_string(arcs.size()) +
                                     " were given");
    return OrientedGraph(n, arcs, mode);
}

inline OrientedGraph read_graph(const std::string& text)
{
    std::istringstream is(text);
    return read_graph(is);
}

} // namespace dicycle
