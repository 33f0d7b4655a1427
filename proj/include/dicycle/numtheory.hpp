#pragma once

#include "digraph.hpp"
#include "errors.hpp"
#include "numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <vector>

namespace dicycle {

class NumberTheoryError : public Error {
public:
    using Error::Error;
};

struct RepresentabilityQuery {
    std::uint64_t target = 0;
    std::vector<std::uint64_t> generators;
};

struct RepresentabilityResult {
    bool representable = false;
    std::vector<std::uint64_t> witness; ///< empty unless representable
    std::int64_t brauer_bound = 0;
    std::vector<std::uint64_t> gcd_chain; ///< d_i = gcd(a_1..a_i)
};

namespace detail {

inline void check_generators(const std::vector<std::uint64_t>& gens)
{
    if (gens.empty()) throw NumberTheoryError("EmptyGenerators", "at least one generator is required");
    for (auto a : gens)
        if (a == 0) throw NumberTheoryError("InvalidGenerator", "generators must be positive");
}

/// dist[r] = least value congruent to r (mod gens[first]) that is a non-negative combination of
/// gens[first+1..]; max() when there is none. Dijkstra over the residues.
inline std::vector<std::uint64_t> residue_table(const std::vector<std::uint64_t>& gens, std::size_t first)
{
    constexpr auto inf = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t m = gens[first];
    std::vector<std::uint64_t> dist(m, inf);
    dist[0] = 0;
    using Item = std::pair<std::uint64_t, std::uint64_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0, 0});
    while (!pq.empty()) {
        auto [d, r] = pq.top();
        pq.pop();
        if (d != dist[r]) continue;
        for (std::size_t j = first + 1; j < gens.size(); ++j) {
            const std::uint64_t nd = d + gens[j];
            const std::uint64_t nr = (r + gens[j]) % m;
            if (nd < dist[nr]) {
                dist[nr] = nd;
                pq.push({nd, nr});
            }
        }
    }
    return dist;
}

} // namespace detail

/// d_1..d_k with d_i = gcd(a_1, ..., a_i).
inline std::vector<std::uint64_t> gcd_chain(const std::vector<std::uint64_t>& gens)
{
    std::vector<std::uint64_t> d;
    std::uint64_t g = 0;
    for (auto a : gens) {
        g = std::gcd(g, a);
        d.push_back(g);
    }
    return d;
}

/// a_2 d_1/d_2 + ... + a_k d_{k-1}/d_k - (a_1 + ... + a_k). A single generator gives -a_1.
inline std::int64_t brauer_bound(const std::vector<std::uint64_t>& gens)
{
    detail::check_generators(gens);
    const auto d = gcd_chain(gens);
    std::int64_t s = 0;
    for (std::size_t i = 1; i < gens.size(); ++i) s += static_cast<std::int64_t>(gens[i] * (d[i - 1] / d[i]));
    for (auto a : gens) s -= static_cast<std::int64_t>(a);
    return s;
}

/// Decides whether target = sum x_i a_i with x_i >= 0. The witness is the lexicographically smallest
/// coefficient vector (smallest x_1, then smallest x_2, ...).
inline RepresentabilityResult representable(const RepresentabilityQuery& q)
{
    detail::check_generators(q.generators);
    const auto& a = q.generators;
    RepresentabilityResult r;
    r.gcd_chain = gcd_chain(a);
    r.brauer_bound = brauer_bound(a);
    const std::size_t k = a.size();
    // tables[i] answers "is v a combination of a_i..a_k" as v >= tables[i][v mod a_i]
    std::vector<std::vector<std::uint64_t>> tables(k);
    for (std::size_t i = 0; i < k; ++i) tables[i] = detail::residue_table(a, i);
    auto suffix_has = [&](std::size_t i, std::uint64_t v) { return v >= tables[i][v % a[i]]; };
    if (!suffix_has(0, q.target)) return r;
    r.representable = true;
    std::uint64_t remaining = q.target;
    for (std::size_t i = 0; i < k; ++i) {
        if (i + 1 == k) {
            r.witness.push_back(remaining / a[i]);
            break;
        }
        std::uint64_t x = 0;
        while (!suffix_has(i + 1, remaining - x * a[i])) ++x;
        r.witness.push_back(x);
        remaining -= x * a[i];
    }
    return r;
}

inline RepresentabilityResult representable(std::uint64_t target, std::vector<std::uint64_t> gens)
{
    return representable(RepresentabilityQuery{target, std::move(gens)});
}

/// Oriented: least d > 2 with d | k and d does not divide l. Directed: least such d >= 1.
inline std::size_t smallest_valid_divisor(std::size_t k, std::size_t l, Mode mode)
{
    if (k == 0 || l == 0) throw NumberTheoryError("InvalidParameters", "k and l must be positive");
    if (l % k == 0) throw NumberTheoryError("NoSuchDivisor", "k divides l, so every divisor of k divides l");
    for (std::size_t d = mode == Mode::oriented ? 3 : 1; d <= k; ++d)
        if (k % d == 0 && l % d != 0) return d;
    throw NumberTheoryError("NoSuchDivisor", "no admissible divisor");
}

// ---------------------------------------------------------------------------
// Table of known values of ex(n, C_k, C_l)

enum class Regime { exact, asymptotic, conjectural, open_interval, order_only };

inline std::string_view to_string(Regime r)
{
    switch (r) {
    case Regime::exact: return "exact";
    case Regime::asymptotic: return "asymptotic";
    case Regime::conjectural: return "conjectural";
    case Regime::open_interval: return "open-interval";
    case Regime::order_only: return "order-only";
    }
    return "unknown";
}

struct Hypothesis {
    std::string name;
    bool holds = false;
};

struct PredictedValue {
    std::size_t k = 0;
    std::size_t l = 0;
    std::size_t n = 0;
    Mode mode = Mode::oriented;
    Regime regime = Regime::order_only;
    std::string source;                   ///< which statement supplies the value
    unsigned exponent = 0;                ///< value ~ coefficient * n^exponent
    std::optional<Rational> coefficient;  ///< absent for order-only and open-interval
    std::optional<Rational> leading_term; ///< coefficient * n^exponent
    std::optional<BigInt> exact_value;    ///< exact regime only
    std::optional<std::pair<double, double>> interval; ///< open-interval regime, in units of C(n,5)
    std::optional<std::size_t> d;
    std::optional<Rational> blowup_lower_bound; ///< n/k (n/d)^(k-1), valid whenever k does not divide l
    std::optional<Rational> alternative_coefficient;
    std::string note;
    std::vector<Hypothesis> hypotheses;
};

namespace detail {

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

inline PredictedValue asymptotic(const PredictedValue& base, Regime regime, std::string source, Rational coefficient,
                                 unsigned exponent)
{
    PredictedValue p = base;
    p.regime = regime;
    p.source = std::move(source);
    p.exponent = exponent;
    p.leading_term = coefficient * rpow(Rational(static_cast<long long>(base.n)), exponent);
    p.coefficient = std::move(coefficient);
    return p;
}

inline bool general_blowup_hypotheses(std::size_t k, std::size_t l, Mode mode, std::vector<Hypothesis>* out)
{
    const bool big = l >= 2 * (k - 1) * (k - 1);
    const bool nondiv = l % k != 0;
    bool parity = true;
    if (nondiv && mode == Mode::oriented) {
        const std::size_t d = smallest_valid_divisor(k, l, mode);
        parity = k % 2 == 1 || l % 2 == 0 || d <= 4;
    }
    if (out) {
        out->push_back({"l >= 2(k-1)^2", big});
        out->push_back({"k does not divide l", nondiv});
        if (mode == Mode::oriented) out->push_back({"2 does not divide k, or 2 | l, or d <= 4", nondiv && parity});
    }
    return big && nondiv && parity;
}

inline bool random_bipartite_hypotheses(std::size_t k, std::size_t l, std::vector<Hypothesis>* out)
{
    const bool big = l > 33 * k * k;
    const bool nondiv = l % k != 0;
    const bool k_even = k % 2 == 0;
    const bool k_not4 = k % 4 != 0;
    const bool l_odd = l % 2 == 1;
    const bool three = k % 3 != 0 || l % 3 == 0;
    if (out) {
        out->push_back({"l > 33k^2", big});
        out->push_back({"2 | k", k_even});
        out->push_back({"4 does not divide k", k_not4});
        out->push_back({"2 does not divide l", l_odd});
        out->push_back({"3 does not divide k, or 3 | l", three});
    }
    return big && nondiv && k_even && k_not4 && l_odd && three;
}

} // namespace detail

/// Every statement whose hypotheses hold for (k, l), most specific first. Order-only is not listed.
inline std::vector<PredictedValue> applicable_statements(std::size_t k, std::size_t l, std::size_t n, Mode mode = Mode::oriented)
{
    if (k < 3 || l < 3 || k == l)
        throw NumberTheoryError("InvalidParameters", "need k >= 3, l >= 3 and k != l");
    PredictedValue base;
    base.k = k;
    base.l = l;
    base.n = n;
    base.mode = mode;
    const Rational N(static_cast<long long>(n));
    if (l % k != 0) {
        const std::size_t d = smallest_valid_divisor(k, l, mode);
        base.d = d;
        base.blowup_lower_bound = N / static_cast<long long>(k) * rpow(N / static_cast<long long>(d), static_cast<unsigned>(k - 1));
    }
    detail::general_blowup_hypotheses(k, l, mode, &base.hypotheses);
    if (mode == Mode::oriented) detail::random_bipartite_hypotheses(k, l, &base.hypotheses);

    std::vector<PredictedValue> out;
    auto power_coeff = [](std::size_t k_, std::size_t d) {
        return Rational(1, static_cast<long long>(k_)) * rpow(Rational(1, static_cast<long long>(d)), static_cast<unsigned>(k_ - 1));
    };
    const auto K = static_cast<unsigned>(k);

    if (mode == Mode::oriented) {
        if (k == 3) {
            if (l == 4 || l == 5) {
                PredictedValue p = detail::asymptotic(base, Regime::exact, "ceil(n/3)ceil((n-1)/3)ceil((n-2)/3)", Rational(1, 27), 3);
                p.exact_value = n < 2 ? BigInt(0)
                                      : BigInt(detail::ceil_div(n, 3)) * detail::ceil_div(n - 1, 3) * detail::ceil_div(n - 2, 3);
                out.push_back(p);
            }
            if (l > 6 && l % 3 != 0) out.push_back(detail::asymptotic(base, Regime::asymptotic, "n^3/27 for l > 6, 3 does not divide l", Rational(1, 27), 3));
            if (l == 6) out.push_back(detail::asymptotic(base, Regime::asymptotic, "sparse case n^2/4", Rational(1, 4), 2));
            if (l % 3 == 0 && l >= 6) {
                const std::size_t t = l / 3;
                out.push_back(detail::asymptotic(base, Regime::conjectural, "(t-1)n^2/4 for l = 3t",
                                                 Rational(static_cast<long long>(t - 1), 4), 2));
            }
        }
        if (k == 4) {
            if (l == 3) {
                PredictedValue p = detail::asymptotic(base, Regime::asymptotic, "iterated blow-up of C4, n^4/(4^4-1)", Rational(1, 255), 4);
                p.alternative_coefficient = Rational(1, 252);
                p.note = "the recursion f(n) = (n/4)^4 + 4 f(n/4) of the iterated blow-up solves to n^4/252";
                out.push_back(p);
            }
            if (l > 4 && l % 4 != 0) out.push_back(detail::asymptotic(base, Regime::asymptotic, "(n/4)^4 for l > 4, 4 does not divide l", Rational(1, 256), 4));
        }
        if (k == 5) {
            if (l == 3) out.push_back(detail::asymptotic(base, Regime::asymptotic, "n^5/512", Rational(1, 512), 5));
            if (l == 4) {
                PredictedValue p = base;
                p.regime = Regime::open_interval;
                p.source = "threshold construction below, flag-algebra bound above";
                p.exponent = 5;
                p.interval = {0.0517, 0.0567};
                out.push_back(p);
            }
            if (l == 7) out.push_back(detail::asymptotic(base, Regime::asymptotic, "27/16 (n/5)^5", Rational(27, 50000), 5));
            if (l > 5 && l % 5 != 0 && l != 7)
                out.push_back(detail::asymptotic(base, Regime::asymptotic, "(n/5)^5 for l > 5, 5 does not divide l", Rational(1, 3125), 5));
        }
        if (detail::general_blowup_hypotheses(k, l, mode, nullptr))
            out.push_back(detail::asymptotic(base, Regime::asymptotic, "balanced blow-up of C_d", power_coeff(k, *base.d), K));
        if (detail::random_bipartite_hypotheses(k, l, nullptr))
            out.push_back(detail::asymptotic(base, Regime::asymptotic, "random orientation of a balanced complete bipartite graph",
                                             Rational(2, static_cast<long long>(k)) * rpow(Rational(1, 4), K), K));
    } else {
        if (detail::general_blowup_hypotheses(k, l, mode, nullptr))
            out.push_back(detail::asymptotic(base, Regime::asymptotic, "balanced blow-up of C_d (digons allowed)", power_coeff(k, *base.d), K));
    }
    return out;
}

/// The most specific known value of ex(n, C_k, C_l), or the order of magnitude when no statement applies.
inline PredictedValue predicted_extremal(std::size_t k, std::size_t l, std::size_t n, Mode mode = Mode::oriented)
{
    auto all = applicable_statements(k, l, n, mode);
    if (!all.empty()) return all.front();
    PredictedValue p;
    p.k = k;
    p.l = l;
    p.n = n;
    p.mode = mode;
    p.regime = Regime::order_only;
    p.exponent = static_cast<unsigned>(l % k == 0 ? k - 1 : k);
    p.source = l % k == 0 ? "Theta(n^(k-1)) since k | l" : "Theta(n^k) since k does not divide l";
    detail::general_blowup_hypotheses(k, l, mode, &p.hypotheses);
    if (mode == Mode::oriented) detail::random_bipartite_hypotheses(k, l, &p.hypotheses);
    if (l % k != 0) {
        p.d = smallest_valid_divisor(k, l, mode);
        const Rational N(static_cast<long long>(n));
        p.blowup_lower_bound = N / static_cast<long long>(k) * rpow(N / static_cast<long long>(*p.d), static_cast<unsigned>(k - 1));
    }
    return p;
}

} // namespace dicycle
