#pragma once

#include "errors.hpp"
#include "numeric.hpp"
#include "parallel.hpp"
#include "pattern.hpp"
#include "piecewise.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <variant>
#include <vector>

namespace dicycle {

class DensityError : public Error {
public:
    using Error::Error;
};

/// Limit density of C_k copies in blow-ups of a pattern. Blobs with a nonzero entry in
/// `fixed_sizes` keep that many vertices as n grows; the others scale with their weight.
struct DensityModel {
    PatternSpec pattern;
    std::size_t k = 3;
    std::vector<std::size_t> fixed_sizes; ///< empty, or one entry per blob (0 = scaling)

    bool is_fixed(std::size_t blob) const { return !fixed_sizes.empty() && fixed_sizes[blob] != 0; }
    bool gradient_available() const { return !pattern.has_threshold(); }
    bool exact() const { return !pattern.has_threshold(); }

    void validate() const
    {
        pattern.validate();
        if (k < 2) throw DensityError("InvalidParameters", "cycle length must be at least 2");
        if (!fixed_sizes.empty()) {
            if (fixed_sizes.size() != pattern.blob_count())
                throw DensityError("InvalidParameters", "need one fixed size per blob");
            for (std::size_t b = 0; b < fixed_sizes.size(); ++b)
                if (fixed_sizes[b] && !std::holds_alternative<Independent>(pattern.blob_internal[b]))
                    throw DensityError("InvalidParameters", "fixed blobs must be independent sets");
            if (pattern.has_threshold()) throw DensityError("InvalidParameters", "fixed blobs cannot carry threshold arcs");
        }
    }
};

/// Overrides applied at evaluation time.
struct DensityParams {
    std::optional<double> threshold; ///< replaces c on every threshold arc
};

namespace detail {

enum class StepKind { full, forward, backward, tournament, bipartite };

/// One move of a closed walk through the blobs, with the kernel it uses on coordinates.
struct Step {
    std::size_t from = 0;
    std::size_t to = 0;
    StepKind kind = StepKind::full;
    double c = 1.0;
    Rational split;
};

inline std::vector<Step> steps_of(const PatternSpec& p, const DensityParams& params)
{
    std::vector<Step> out;
    const auto& arcs = p.base.arcs();
    for (std::size_t j = 0; j < arcs.size(); ++j) {
        if (const auto* t = std::get_if<ThresholdRule>(&p.arc_rule[j])) {
            const double c = params.threshold.value_or(t->c);
            out.push_back({arcs[j].tail, arcs[j].head, StepKind::forward, c, {}});
            out.push_back({arcs[j].head, arcs[j].tail, StepKind::backward, c, {}});
        } else {
            out.push_back({arcs[j].tail, arcs[j].head, StepKind::full, 1.0, {}});
        }
    }
    for (std::size_t b = 0; b < p.blob_count(); ++b) {
        if (std::holds_alternative<TransitiveTournament>(p.blob_internal[b]))
            out.push_back({b, b, StepKind::tournament, 1.0, {}});
        else if (const auto* s = std::get_if<OneWayBipartite>(&p.blob_internal[b]))
            out.push_back({b, b, StepKind::bipartite, 1.0, s->split});
    }
    return out;
}

inline bool is_internal(const Step& s) { return s.kind == StepKind::tournament || s.kind == StepKind::bipartite; }

/// Exact coordinate integral of a closed step sequence without threshold steps.
/// A tournament run of j steps needs increasing coordinates (1/(j+1)!); a bipartite run
/// needs x < s <= y, so only a single step survives.
inline Rational exact_sequence_integral(const std::vector<const Step*>& seq)
{
    const std::size_t k = seq.size();
    std::size_t start = k;
    for (std::size_t i = 0; i < k; ++i)
        if (!is_internal(*seq[i])) {
            start = i;
            break;
        }
    if (start == k) return 0;
    Rational total = 1;
    std::size_t run = 0;
    const Step* run_step = nullptr;
    auto close_run = [&]() {
        if (run == 0) return;
        if (run_step->kind == StepKind::tournament)
            total /= Rational(factorial(run + 1));
        else
            total *= run == 1 ? run_step->split * (1 - run_step->split) : Rational(0);
        run = 0;
    };
    for (std::size_t off = 1; off <= k; ++off) {
        const Step* s = seq[(start + off) % k];
        if (is_internal(*s)) {
            ++run;
            run_step = s;
        } else {
            close_run();
        }
    }
    close_run();
    return total;
}

inline PiecewisePoly start_kernel(const Step& s, double x0)
{
    switch (s.kind) {
    case StepKind::full: return PiecewisePoly::constant(1.0);
    case StepKind::forward: return PiecewisePoly::step(x0 + s.c, 1.0, 0.0);
    case StepKind::backward: return PiecewisePoly::step(x0 - s.c, 1.0, 0.0);
    case StepKind::tournament: return PiecewisePoly::step(x0, 0.0, 1.0);
    case StepKind::bipartite: {
        const double sp = to_double(s.split);
        return x0 < sp ? PiecewisePoly::step(sp, 0.0, 1.0) : PiecewisePoly::constant(0.0);
    }
    }
    return PiecewisePoly::constant(0.0);
}

/// y -> integral over x of g(x) K(x, y).
inline PiecewisePoly transfer(const Step& s, const PiecewisePoly& g)
{
    const PiecewisePoly G = g.antiderivative();
    const double total = g.total();
    switch (s.kind) {
    case StepKind::full: return PiecewisePoly::constant(total);
    case StepKind::forward: return PiecewisePoly::combine(1.0, PiecewisePoly::constant(total), -1.0, G.shifted(-s.c));
    case StepKind::backward: return PiecewisePoly::combine(1.0, PiecewisePoly::constant(total), -1.0, G.shifted(s.c));
    case StepKind::tournament: return G;
    case StepKind::bipartite: {
        const double sp = to_double(s.split);
        return PiecewisePoly::step(sp, 0.0, G(sp));
    }
    }
    return PiecewisePoly::constant(0.0);
}

/// Candidate breakpoints in x0 of any sequence integrand: {0, 1, splits} shifted by up to k
/// multiples of each threshold constant.
inline std::vector<double> integrand_breaks(const std::vector<Step>& steps, std::size_t k)
{
    std::vector<double> base{0.0, 1.0};
    std::vector<double> cs;
    for (const auto& s : steps) {
        if (s.kind == StepKind::bipartite) base.push_back(to_double(s.split));
        if (s.kind == StepKind::forward) cs.push_back(s.c);
    }
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    std::vector<double> shifts{0.0};
    for (std::size_t r = 0; r < k; ++r) {
        std::vector<double> next = shifts;
        for (double v : shifts)
            for (double c : cs) {
                next.push_back(v + c);
                next.push_back(v - c);
            }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end(), [](double a, double b) { return std::abs(a - b) < 1e-13; }),
                   next.end());
        shifts = std::move(next);
    }
    std::vector<double> out;
    for (double b : base)
        for (double s : shifts)
            if (b + s > 0.0 && b + s < 1.0) out.push_back(b + s);
    return out;
}

inline double numeric_sequence_integral(const std::vector<const Step*>& seq, const std::vector<double>& breaks)
{
    const std::size_t k = seq.size();
    return integrate_pieces(
        [&](double x0) {
            PiecewisePoly g = start_kernel(*seq[0], x0);
            for (std::size_t i = 1; i < k; ++i) g = transfer(*seq[i], g);
            return g(x0);
        },
        breaks);
}

template <class Visit>
void for_each_closed_sequence(const std::vector<Step>& steps, std::size_t blobs, std::size_t k, Visit&& visit)
{
    std::vector<std::vector<const Step*>> out(blobs);
    for (const auto& s : steps) out[s.from].push_back(&s);
    std::vector<const Step*> seq;
    seq.reserve(k);
    auto rec = [&](auto&& self, std::size_t start, std::size_t at) -> void {
        if (seq.size() + 1 == k) {
            for (const Step* s : out[at])
                if (s->to == start) {
                    seq.push_back(s);
                    visit(seq);
                    seq.pop_back();
                }
            return;
        }
        for (const Step* s : out[at]) {
            seq.push_back(s);
            self(self, start, s->to);
            seq.pop_back();
        }
    };
    for (std::size_t b = 0; b < blobs; ++b) rec(rec, b, b);
}

} // namespace detail

/// Leading-order density as a polynomial in the blob weights: value(w) = sum coef * prod w^e.
/// Fixed blobs have exponent 0 and their falling factorials folded into the coefficients.
struct DensityPolynomial {
    std::size_t blobs = 0;
    std::size_t exponent = 0; ///< copies ~ density * n^exponent
    bool exact = true;
    std::vector<std::vector<unsigned>> exps;
    std::vector<Rational> exact_coef;
    std::vector<double> coef;

    double value(const std::vector<double>& w) const
    {
        double total = 0.0;
        for (std::size_t t = 0; t < coef.size(); ++t) {
            double term = coef[t];
            for (std::size_t b = 0; b < blobs; ++b)
                for (unsigned e = 0; e < exps[t][b]; ++e) term *= w[b];
            total += term;
        }
        return total;
    }

    Rational value(const std::vector<Rational>& w) const
    {
        if (!exact) throw DensityError("NotExact", "density has no exact form for threshold patterns");
        Rational total = 0;
        for (std::size_t t = 0; t < exact_coef.size(); ++t) {
            Rational term = exact_coef[t];
            for (std::size_t b = 0; b < blobs && term != 0; ++b) term *= rpow(w[b], exps[t][b]);
            total += term;
        }
        return total;
    }

    std::vector<double> gradient(const std::vector<double>& w) const
    {
        std::vector<double> g(blobs, 0.0);
        for (std::size_t t = 0; t < coef.size(); ++t)
            for (std::size_t i = 0; i < blobs; ++i) {
                if (exps[t][i] == 0) continue;
                double term = coef[t] * exps[t][i];
                for (std::size_t b = 0; b < blobs; ++b) {
                    const unsigned e = exps[t][b] - (b == i ? 1 : 0);
                    for (unsigned r = 0; r < e; ++r) term *= w[b];
                }
                g[i] += term;
            }
        return g;
    }

    Eigen::MatrixXd hessian(const std::vector<double>& w) const
    {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(blobs), static_cast<Eigen::Index>(blobs));
        std::vector<unsigned> e;
        for (std::size_t t = 0; t < coef.size(); ++t)
            for (std::size_t i = 0; i < blobs; ++i)
                for (std::size_t j = 0; j < blobs; ++j) {
                    e = exps[t];
                    if (e[i] == 0) continue;
                    double term = coef[t] * e[i];
                    --e[i];
                    if (e[j] == 0) continue;
                    term *= e[j];
                    --e[j];
                    for (std::size_t b = 0; b < blobs; ++b)
                        for (unsigned r = 0; r < e[b]; ++r) term *= w[b];
                    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += term;
                }
        return h;
    }
};

/// Builds the density polynomial by summing over closed k-step walks through the blobs.
inline DensityPolynomial compile_density(const DensityModel& model, const DensityParams& params = {},
                                         std::size_t threads = default_thread_count())
{
    model.validate();
    const std::size_t p = model.pattern.blob_count();
    const auto steps = detail::steps_of(model.pattern, params);
    for (const auto& s : steps)
        if ((s.kind == detail::StepKind::forward) && !(s.c >= 0.0 && s.c <= 1.0))
            throw DensityError("InvalidParameters", "threshold constant must lie in [0,1]");
    const bool exact = model.exact();

    std::vector<std::vector<const detail::Step*>> seqs;
    detail::for_each_closed_sequence(steps, p, model.k, [&](const std::vector<const detail::Step*>& s) {
        if (seqs.size() > 20'000'000) throw DensityError("TooLarge", "too many closed walks to enumerate");
        seqs.push_back(s);
    });

    std::vector<Rational> exact_val(exact ? seqs.size() : 0);
    std::vector<double> num_val(exact ? 0 : seqs.size());
    const auto breaks = exact ? std::vector<double>{} : detail::integrand_breaks(steps, model.k);
    parallel_for(seqs.size(), threads, [&](std::size_t, std::size_t i) {
        if (exact)
            exact_val[i] = detail::exact_sequence_integral(seqs[i]);
        else
            num_val[i] = detail::numeric_sequence_integral(seqs[i], breaks);
    });

    struct Acc {
        Rational exact = 0;
        double num = 0.0;
    };
    std::map<std::vector<unsigned>, Acc> terms;
    std::size_t order = 0;
    std::vector<unsigned> visits(p);
    const Rational inv_k(1, static_cast<long long>(model.k));
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        if (exact ? exact_val[i] == 0 : num_val[i] == 0.0) continue;
        std::fill(visits.begin(), visits.end(), 0u);
        for (const auto* s : seqs[i]) ++visits[s->from];
        Rational fixed_factor = 1;
        std::size_t scaling = 0;
        for (std::size_t b = 0; b < p; ++b) {
            if (model.is_fixed(b)) {
                fixed_factor *= Rational(falling_factorial(model.fixed_sizes[b], visits[b]));
                visits[b] = 0;
            } else {
                scaling += visits[b];
            }
        }
        if (fixed_factor == 0) continue;
        if (scaling < order) continue;
        if (scaling > order) {
            terms.clear();
            order = scaling;
        }
        auto& acc = terms[visits];
        if (exact)
            acc.exact += exact_val[i] * fixed_factor * inv_k;
        else
            acc.num += num_val[i] * to_double(fixed_factor) / static_cast<double>(model.k);
    }

    DensityPolynomial poly;
    poly.blobs = p;
    poly.exponent = order;
    poly.exact = exact;
    for (auto& [e, acc] : terms) {
        if (exact && acc.exact == 0) continue;
        poly.exps.push_back(e);
        poly.coef.push_back(exact ? to_double(acc.exact) : acc.num);
        if (exact) poly.exact_coef.push_back(acc.exact);
    }
    return poly;
}

namespace detail {

template <class T>
void check_simplex(const DensityModel& model, const std::vector<T>& w)
{
    const std::size_t p = model.pattern.blob_count();
    if (w.size() != p) throw DensityError("WeightsOffSimplex", "need one weight per blob");
    T total = 0;
    for (std::size_t b = 0; b < p; ++b) {
        if (w[b] < 0) throw DensityError("WeightsOffSimplex", "weights must be non-negative");
        if (model.is_fixed(b)) continue;
        total += w[b];
    }
    bool ok;
    if constexpr (std::is_same_v<T, Rational>)
        ok = total == 1;
    else
        ok = std::abs(total - 1.0) <= 1e-9;
    if (!ok) throw DensityError("WeightsOffSimplex", "scaling blob weights must sum to 1");
}

} // namespace detail

struct DensityValue {
    double value = 0.0;
    std::optional<Rational> exact;
    std::size_t exponent = 0; ///< value is the limit of copies / n^exponent
};

inline DensityValue evaluate_density(const DensityModel& model, const std::vector<Rational>& weights,
                                     const DensityParams& params = {})
{
    detail::check_simplex(model, weights);
    const auto poly = compile_density(model, params);
    DensityValue v;
    v.exponent = poly.exponent;
    if (poly.exact) {
        v.exact = poly.value(weights);
        v.value = to_double(*v.exact);
    } else {
        std::vector<double> w;
        for (const auto& x : weights) w.push_back(to_double(x));
        v.value = poly.value(w);
    }
    return v;
}

inline DensityValue evaluate_density(const DensityModel& model, const std::vector<double>& weights,
                                     const DensityParams& params = {})
{
    detail::check_simplex(model, weights);
    const auto poly = compile_density(model, params);
    return DensityValue{poly.value(weights), std::nullopt, poly.exponent};
}

/// Pattern weights as the density model's weight vector (fixed blobs get 0).
inline std::vector<Rational> pattern_weights(const DensityModel& model)
{
    std::vector<Rational> w = model.pattern.blob_weights;
    if (model.fixed_sizes.empty()) return w;
    Rational total = 0;
    for (std::size_t b = 0; b < w.size(); ++b) {
        if (model.is_fixed(b)) w[b] = 0;
        total += w[b];
    }
    for (auto& x : w) x /= total;
    return w;
}

// ---------------------------------------------------------------------------
// Cross-check evaluators for threshold patterns

namespace detail {

/// Kernel of an arc from (a, x) to (b, y) in the limit object, or 0 when there is none.
inline bool limit_arc(const PatternSpec& p, const DensityParams& params, std::size_t a, double x, std::size_t b, double y)
{
    if (a == b) {
        if (std::holds_alternative<TransitiveTournament>(p.blob_internal[a])) return y > x;
        if (const auto* s = std::get_if<OneWayBipartite>(&p.blob_internal[a])) {
            const double sp = to_double(s->split);
            return x < sp && sp <= y;
        }
        return false;
    }
    const auto& arcs = p.base.arcs();
    for (std::size_t j = 0; j < arcs.size(); ++j) {
        if (arcs[j].tail == a && arcs[j].head == b) {
            if (const auto* t = std::get_if<ThresholdRule>(&p.arc_rule[j])) return y <= x + params.threshold.value_or(t->c);
            return true;
        }
        if (arcs[j].tail == b && arcs[j].head == a) {
            if (const auto* t = std::get_if<ThresholdRule>(&p.arc_rule[j])) return x > y + params.threshold.value_or(t->c);
        }
    }
    return false;
}

inline bool step_arc(const Step& s, double x, double y)
{
    switch (s.kind) {
    case StepKind::full: return true;
    case StepKind::forward: return y <= x + s.c;
    case StepKind::backward: return x > y + s.c;
    case StepKind::tournament: return y > x;
    case StepKind::bipartite: {
        const double sp = to_double(s.split);
        return x < sp && sp <= y;
    }
    }
    return false;
}

} // namespace detail

/// Midpoint-rule evaluation on a resolution^k coordinate grid, computed as a transfer product.
inline double density_grid(const DensityModel& model, const std::vector<double>& weights, std::size_t resolution,
                           const DensityParams& params = {}, std::size_t threads = default_thread_count())
{
    model.validate();
    detail::check_simplex(model, weights);
    if (!model.fixed_sizes.empty()) throw DensityError("InvalidParameters", "grid evaluator needs scaling blobs only");
    if (resolution == 0) throw DensityError("InvalidParameters", "resolution must be positive");
    const std::size_t p = model.pattern.blob_count();
    const std::size_t N = resolution;
    const auto steps = detail::steps_of(model.pattern, params);
    std::vector<double> mid(N);
    for (std::size_t i = 0; i < N; ++i) mid[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(N);
    const double h = 1.0 / static_cast<double>(N);

    // first grid index whose midpoint is >= v (or > v when strict)
    auto first_at_least = [&](double v) { return static_cast<std::size_t>(std::lower_bound(mid.begin(), mid.end(), v) - mid.begin()); };
    auto first_above = [&](double v) { return static_cast<std::size_t>(std::upper_bound(mid.begin(), mid.end(), v) - mid.begin()); };

    auto apply = [&](const detail::Step& s, const std::vector<double>& g, std::vector<double>& out, double wt) {
        std::vector<double> pre(N + 1, 0.0);
        for (std::size_t i = 0; i < N; ++i) pre[i + 1] = pre[i] + g[i];
        const double total = pre[N];
        for (std::size_t j = 0; j < N; ++j) {
            const double y = mid[j];
            double v = 0.0;
            switch (s.kind) {
            case detail::StepKind::full: v = total; break;
            case detail::StepKind::forward: v = total - pre[first_at_least(y - s.c)]; break;
            case detail::StepKind::backward: v = total - pre[first_above(y + s.c)]; break;
            case detail::StepKind::tournament: v = pre[first_at_least(y)]; break;
            case detail::StepKind::bipartite: {
                const double sp = to_double(s.split);
                v = y >= sp ? pre[first_at_least(sp)] : 0.0;
                break;
            }
            }
            out[j] += wt * h * v;
        }
    };

    std::vector<double> partial(p * N, 0.0);
    parallel_for(p * N, threads, [&](std::size_t, std::size_t idx) {
        const std::size_t a0 = idx / N;
        const double x0 = mid[idx % N];
        if (weights[a0] == 0.0) return;
        std::vector<std::vector<double>> g(p, std::vector<double>(N, 0.0));
        std::vector<bool> live(p, false);
        for (const auto& s : steps) {
            if (s.from != a0) continue;
            live[s.to] = true;
            for (std::size_t j = 0; j < N; ++j)
                g[s.to][j] += detail::step_arc(s, x0, mid[j]) ? weights[a0] : 0.0;
        }
        for (std::size_t r = 1; r < model.k; ++r) {
            std::vector<std::vector<double>> next(p, std::vector<double>(N, 0.0));
            std::vector<bool> next_live(p, false);
            for (const auto& s : steps) {
                if (!live[s.from] || weights[s.from] == 0.0) continue;
                next_live[s.to] = true;
                apply(s, g[s.from], next[s.to], weights[s.from]);
            }
            g = std::move(next);
            live = std::move(next_live);
        }
        partial[idx] = live[a0] ? g[a0][idx % N] : 0.0;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    return total * h / static_cast<double>(model.k);
}

struct MonteCarloEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;
};

/// Samples k independent (blob, coordinate) pairs and tests whether they close a cycle.
inline MonteCarloEstimate density_monte_carlo(const DensityModel& model, const std::vector<double>& weights,
                                              std::uint64_t samples, std::uint64_t seed, const DensityParams& params = {},
                                              std::size_t threads = default_thread_count())
{
    model.validate();
    detail::check_simplex(model, weights);
    if (!model.fixed_sizes.empty()) throw DensityError("InvalidParameters", "Monte Carlo evaluator needs scaling blobs only");
    const std::size_t k = model.k;
    const std::size_t chunks = 64;
    std::vector<std::uint64_t> hits(chunks, 0);
    parallel_for(chunks, threads, [&](std::size_t, std::size_t c) {
        std::mt19937_64 rng(seed * 1'000'003ULL + c);
        std::discrete_distribution<std::size_t> blob(weights.begin(), weights.end());
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const std::uint64_t count = samples / chunks + (c < samples % chunks ? 1 : 0);
        std::vector<std::size_t> b(k);
        std::vector<double> x(k);
        for (std::uint64_t s = 0; s < count; ++s) {
            for (std::size_t i = 0; i < k; ++i) {
                b[i] = blob(rng);
                x[i] = unit(rng);
            }
            bool ok = true;
            for (std::size_t i = 0; i < k && ok; ++i) {
                const std::size_t j = (i + 1) % k;
                ok = detail::limit_arc(model.pattern, params, b[i], x[i], b[j], x[j]);
            }
            hits[c] += ok ? 1 : 0;
        }
    });
    const std::uint64_t h = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
    const double q = static_cast<double>(h) / static_cast<double>(samples);
    MonteCarloEstimate e;
    e.samples = samples;
    e.mean = q / static_cast<double>(k);
    e.standard_error = std::sqrt(q * (1.0 - q) / static_cast<double>(samples)) / static_cast<double>(k);
    return e;
}

// ---------------------------------------------------------------------------
// Weight optimization

/// Best rational with denominator at most max_den (continued fractions).
inline Rational best_rational(double x, long long max_den)
{
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(v);
        const long long ai = static_cast<long long>(a);
        const long long q2 = q0 + ai * q1;
        if (q2 > max_den) break;
        const long long p2 = p0 + ai * p1;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        if (v - a < 1e-15) break;
        v = 1.0 / (v - a);
        if (v > 1e15) break;
    }
    if (q1 == 0) return Rational(static_cast<long long>(std::llround(x)));
    return Rational(p1, q1);
}

/// Euclidean projection of y onto {x >= 0, sum x = 1}.
inline std::vector<double> project_to_simplex(const std::vector<double>& y)
{
    std::vector<double> u = y;
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0.0;
    double theta = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        css += u[i];
        const double t = (css - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) theta = t;
    }
    std::vector<double> x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = std::max(y[i] - theta, 0.0);
    return x;
}

/// Gradient projected onto the tangent space of the simplex of scaling blobs.
inline std::vector<double> projected_gradient(const DensityModel& model, const DensityPolynomial& poly,
                                              const std::vector<double>& w)
{
    auto g = poly.gradient(w);
    double mean = 0.0;
    std::size_t free = 0;
    for (std::size_t b = 0; b < g.size(); ++b)
        if (!model.is_fixed(b)) {
            mean += g[b];
            ++free;
        }
    mean /= static_cast<double>(free);
    for (std::size_t b = 0; b < g.size(); ++b) g[b] = model.is_fixed(b) ? 0.0 : g[b] - mean;
    return g;
}

struct WeightOptimum {
    std::vector<double> weights;
    double value = 0.0;
    std::size_t exponent = 0;
    std::optional<std::vector<Rational>> rational_weights;
    std::optional<Rational> value_as_rational;
    std::size_t starts = 0;
};

namespace detail {

inline std::vector<std::vector<double>> default_starts(const DensityModel& model, std::size_t random_starts, std::uint64_t seed)
{
    const std::size_t p = model.pattern.blob_count();
    std::vector<std::size_t> free;
    for (std::size_t b = 0; b < p; ++b)
        if (!model.is_fixed(b)) free.push_back(b);
    std::vector<std::vector<double>> out;
    std::vector<double> uniform(p, 0.0);
    for (auto b : free) uniform[b] = 1.0 / static_cast<double>(free.size());
    out.push_back(uniform);
    for (auto b : free) {
        std::vector<double> w(p, 0.0);
        for (auto o : free) w[o] = 0.5 / static_cast<double>(free.size());
        w[b] += 0.5;
        out.push_back(w);
    }
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> gamma(1.0, 1.0);
    for (std::size_t r = 0; r < random_starts; ++r) {
        std::vector<double> w(p, 0.0);
        double s = 0.0;
        for (auto b : free) s += (w[b] = gamma(rng));
        for (auto b : free) w[b] /= s;
        out.push_back(w);
    }
    return out;
}

inline std::pair<std::vector<double>, double> ascend(const DensityModel& model, const DensityPolynomial& poly,
                                                     std::vector<double> x, double tolerance)
{
    const std::size_t p = x.size();
    std::vector<std::size_t> free;
    for (std::size_t b = 0; b < p; ++b)
        if (!model.is_fixed(b)) free.push_back(b);
    auto project = [&](const std::vector<double>& y) {
        std::vector<double> sub;
        for (auto b : free) sub.push_back(y[b]);
        sub = project_to_simplex(sub);
        std::vector<double> out(p, 0.0);
        for (std::size_t i = 0; i < free.size(); ++i) out[free[i]] = sub[i];
        return out;
    };
    x = project(x);
    double fx = poly.value(x);
    double eta = 1.0;
    for (int it = 0; it < 20000; ++it) {
        const auto g = poly.gradient(x);
        double gnorm = 0.0;
        for (auto b : free) gnorm = std::max(gnorm, std::abs(g[b]));
        if (gnorm == 0.0) break;
        bool moved = false;
        double step_len = 0.0;
        for (int bt = 0; bt < 60; ++bt) {
            std::vector<double> y = x;
            for (auto b : free) y[b] += eta / gnorm * g[b];
            y = project(y);
            double dir = 0.0;
            step_len = 0.0;
            for (auto b : free) {
                dir += g[b] * (y[b] - x[b]);
                step_len = std::max(step_len, std::abs(y[b] - x[b]));
            }
            const double fy = poly.value(y);
            if (fy >= fx + 1e-4 * dir && fy >= fx) {
                moved = fy > fx;
                x = std::move(y);
                fx = fy;
                eta = std::min(eta * 2.0, 1.0);
                break;
            }
            eta *= 0.5;
        }
        if (!moved || step_len < tolerance * 1e-3) break;
    }

    // Newton polish on the face of the simplex spanned by the positive coordinates.
    for (int it = 0; it < 30; ++it) {
        std::vector<std::size_t> act;
        for (auto b : free)
            if (x[b] > 1e-12) act.push_back(b);
        const auto m = static_cast<Eigen::Index>(act.size());
        if (m < 2) break;
        const auto g = poly.gradient(x);
        const auto H = poly.hessian(x);
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m + 1, m + 1);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) K(i, j) = H(static_cast<Eigen::Index>(act[i]), static_cast<Eigen::Index>(act[j]));
            K(i, m) = 1.0;
            K(m, i) = 1.0;
            rhs(i) = -g[act[i]];
        }
        Eigen::VectorXd sol = K.fullPivLu().solve(rhs);
        if (!sol.allFinite()) break;
        std::vector<double> y = x;
        for (Eigen::Index i = 0; i < m; ++i) y[act[i]] += sol(i);
        bool feasible = true;
        for (auto b : act) feasible = feasible && y[b] >= 0.0;
        if (!feasible) break;
        y = project(y);
        const double fy = poly.value(y);
        if (fy < fx - 1e-15 * std::abs(fx)) break;
        double delta = 0.0;
        for (auto b : act) delta = std::max(delta, std::abs(y[b] - x[b]));
        x = std::move(y);
        fx = fy;
        if (delta < 1e-15) break;
    }
    return {x, fx};
}

} // namespace detail

/// Multi-start projected gradient ascent on the simplex plus Newton polish.
/// An empty `initializations` uses the uniform point, one biased point per blob and 16 seeded
/// random points.
inline WeightOptimum optimize_weights(const DensityModel& model, std::vector<std::vector<double>> initializations = {},
                                      double tolerance = 1e-10, const DensityParams& params = {},
                                      std::size_t threads = default_thread_count())
{
    const auto poly = compile_density(model, params, threads);
    if (initializations.empty()) initializations = detail::default_starts(model, 16, 12345);
    for (const auto& w : initializations)
        if (w.size() != model.pattern.blob_count()) throw DensityError("WeightsOffSimplex", "need one weight per blob");

    std::vector<std::pair<std::vector<double>, double>> results(initializations.size());
    parallel_for(initializations.size(), threads,
                 [&](std::size_t, std::size_t i) { results[i] = detail::ascend(model, poly, initializations[i], tolerance); });

    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i) {
        const double a = results[i].second;
        const double b = results[best].second;
        const double tie = 1e-13 * std::max(std::abs(a), std::abs(b));
        if (a > b + tie || (std::abs(a - b) <= tie && results[i].first < results[best].first)) best = i;
    }

    WeightOptimum out;
    out.weights = results[best].first;
    out.value = results[best].second;
    out.exponent = poly.exponent;
    out.starts = initializations.size();

    // Snap to a nearby small-denominator point and re-evaluate exactly.
    const std::size_t p = out.weights.size();
    for (long long den : {10LL, 100LL, 1000LL, 10000LL, 100000LL, 1000000LL}) {
        std::vector<Rational> r(p, Rational(0));
        Rational sum = 0;
        bool close = true;
        for (std::size_t b = 0; b < p; ++b) {
            if (model.is_fixed(b)) continue;
            r[b] = best_rational(out.weights[b], den);
            sum += r[b];
            close = close && std::abs(to_double(r[b]) - out.weights[b]) <= std::max(tolerance, 1e-9) * 100;
        }
        if (!close || sum != 1) continue;
        out.rational_weights = r;
        if (poly.exact) out.value_as_rational = poly.value(r);
        break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Threshold constant

struct ThresholdOptions {
    double lo = 0.5;
    double hi = 1.0;
    std::size_t scan_points = 26;
    double tolerance = 1e-6;
    std::size_t resolution = 512;   ///< grid cross-check; 0 skips it
    std::uint64_t mc_samples = 0;   ///< Monte Carlo cross-check; 0 skips it
    std::uint64_t seed = 1;
};

struct ThresholdOptimum {
    double c_star = 0.0;
    double density = 0.0;          ///< per n^k
    double density_binomial = 0.0; ///< in units of C(n,k)
    std::optional<double> grid_density;
    std::optional<MonteCarloEstimate> monte_carlo;
    bool unimodal = true;
    std::vector<std::pair<double, double>> scan;
    std::size_t evaluations = 0;
};

/// Maximizes the density over the shared threshold constant at the pattern's weights:
/// a coarse scan locates the peak, golden-section search refines it.
inline ThresholdOptimum optimize_threshold(const DensityModel& model, const ThresholdOptions& opt = {},
                                           std::size_t threads = default_thread_count())
{
    if (!model.pattern.has_threshold()) throw DensityError("InvalidParameters", "pattern has no threshold arcs");
    if (!(opt.lo >= 0.0 && opt.hi <= 1.0 && opt.lo < opt.hi)) throw DensityError("InvalidParameters", "c range must lie in [0,1]");
    std::vector<double> w;
    for (const auto& x : model.pattern.blob_weights) w.push_back(to_double(x));
    ThresholdOptimum out;
    auto f = [&](double c) {
        ++out.evaluations;
        DensityParams params;
        params.threshold = c;
        return compile_density(model, params, threads).value(w);
    };

    const std::size_t m = std::max<std::size_t>(opt.scan_points, 3);
    std::size_t best = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double c = opt.lo + (opt.hi - opt.lo) * static_cast<double>(i) / static_cast<double>(m - 1);
        out.scan.emplace_back(c, f(c));
        if (out.scan[i].second > out.scan[best].second) best = i;
    }
    for (std::size_t i = 1; i < m; ++i) {
        const bool rising = out.scan[i].second > out.scan[i - 1].second;
        if (i <= best ? !rising && out.scan[i].second != out.scan[i - 1].second : rising) out.unimodal = false;
    }

    double a = out.scan[best == 0 ? 0 : best - 1].first;
    double b = out.scan[std::min(best + 1, m - 1)].first;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > opt.tolerance) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    out.c_star = 0.5 * (a + b);
    out.density = f(out.c_star);
    if (out.scan[best].second > out.density) {
        out.c_star = out.scan[best].first;
        out.density = out.scan[best].second;
    }
    out.density_binomial = out.density * to_double(factorial(model.k));

    DensityParams at;
    at.threshold = out.c_star;
    if (opt.resolution > 0) out.grid_density = density_grid(model, w, opt.resolution, at, threads);
    if (opt.mc_samples > 0) out.monte_carlo = density_monte_carlo(model, w, opt.mc_samples, opt.seed, at, threads);
    return out;
}

} // namespace dicycle
