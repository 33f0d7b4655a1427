#include <dicycle/constructions.hpp>
#include <dicycle/density.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace dicycle;

namespace {

DensityModel model_of(ConstructionKind kind, std::size_t k)
{
    return DensityModel{construction_pattern(ConstructionId::of(kind)), k, {}};
}

std::vector<double> as_double(const std::vector<Rational>& w)
{
    std::vector<double> out;
    for (const auto& x : w) out.push_back(to_double(x));
    return out;
}

std::vector<double> random_simplex_point(std::size_t p, std::mt19937_64& rng)
{
    std::gamma_distribution<double> g(1.0, 1.0);
    std::vector<double> w(p);
    double s = 0.0;
    for (auto& x : w) s += (x = g(rng) + 0.01);
    for (auto& x : w) x /= s;
    return w;
}

} // namespace

TEST(Piecewise, AntiderivativeAndShift)
{
    auto f = PiecewisePoly::step(0.3, 2.0, 5.0);
    auto F = f.antiderivative();
    EXPECT_NEAR(F(0.2), 0.4, 1e-15);
    EXPECT_NEAR(F(1.0), 0.6 + 3.5, 1e-14);
    EXPECT_NEAR(f.total(), 4.1, 1e-14);
    auto G = F.shifted(-0.25); // F(clamp(y - 0.25))
    EXPECT_NEAR(G(0.1), 0.0, 1e-15);
    EXPECT_NEAR(G(0.5), F(0.25), 1e-14);
    EXPECT_NEAR(G(0.9), F(0.65), 1e-14);
    auto H = F.shifted(0.4); // F(clamp(y + 0.4))
    EXPECT_NEAR(H(0.1), F(0.5), 1e-14);
    EXPECT_NEAR(H(0.7), F(1.0), 1e-14);
    auto sum = PiecewisePoly::combine(2.0, G, -1.0, H);
    for (double y : {0.05, 0.3, 0.61, 0.99}) EXPECT_NEAR(sum(y), 2.0 * G(y) - H(y), 1e-13);
}

TEST(Piecewise, GaussLegendreIsExactOnPieces)
{
    auto f = PiecewisePoly::step(0.4, 1.0, 0.0).antiderivative().antiderivative(); // quadratic then flat
    const double q = integrate_pieces([&](double x) { return f(x); }, {0.4});
    EXPECT_NEAR(q, f.total(), 1e-15);
}

TEST(EvaluateDensity, CycleBlowups)
{
    for (std::size_t d = 3; d <= 7; ++d) {
        DensityModel m{PatternSpec::uniform(directed_cycle(d)), d, {}};
        auto v = evaluate_density(m, pattern_weights(m));
        EXPECT_EQ(*v.exact, rpow(Rational(1, static_cast<long>(d)), static_cast<unsigned>(d)));
        EXPECT_EQ(v.exponent, d);
    }
}

TEST(EvaluateDensity, KnownConstants)
{
    auto c5c7 = model_of(ConstructionKind::c5c7_bipartite_blobs, 5);
    EXPECT_EQ(*evaluate_density(c5c7, pattern_weights(c5c7)).exact, Rational(27, 50000));
    EXPECT_EQ(Rational(27, 50000), Rational(27, 16) * rpow(Rational(1, 5), 5));
    auto c5c3 = model_of(ConstructionKind::c5c3_tournament_blobs, 5);
    EXPECT_EQ(*evaluate_density(c5c3, pattern_weights(c5c3)).exact, Rational(1, 512));
    auto chords = model_of(ConstructionKind::c7_chords_blowup, 5);
    EXPECT_EQ(*evaluate_density(chords, pattern_weights(chords)).exact, Rational(1, 2401));
}

TEST(EvaluateDensity, ThresholdEndpointMatchesChordBlowup)
{
    auto th = model_of(ConstructionKind::threshold_c7, 5);
    DensityParams p;
    p.threshold = 1.0;
    const double v = evaluate_density(th, as_double(pattern_weights(th)), p).value;
    EXPECT_NEAR(v, 1.0 / 2401.0, 1e-15);
    EXPECT_NEAR(v * 120, 0.0499, 1e-4);
}

TEST(EvaluateDensity, ThresholdAtOptimalConstant)
{
    auto th = model_of(ConstructionKind::threshold_c7, 5);
    const double v = evaluate_density(th, as_double(pattern_weights(th))).value * 120;
    EXPECT_NEAR(v, 0.0517, 5e-5);
}

TEST(EvaluateDensity, WeightsOffSimplex)
{
    auto m = model_of(ConstructionKind::c5c7_bipartite_blobs, 5);
    try {
        evaluate_density(m, std::vector<double>{0.5, 0.5, 0.5, 0.5});
        FAIL();
    } catch (const DensityError& e) {
        EXPECT_EQ(e.name(), "WeightsOffSimplex");
    }
    EXPECT_THROW(evaluate_density(m, std::vector<double>{1.2, -0.2, 0.0, 0.0}), DensityError);
    EXPECT_THROW(evaluate_density(m, std::vector<double>{1.0}), DensityError);
}

TEST(EvaluateDensity, AutomorphismInvariance)
{
    std::mt19937_64 rng(5);
    for (auto kind : {ConstructionKind::c7_chords_blowup, ConstructionKind::threshold_c7}) {
        auto m = model_of(kind, 5);
        for (int trial = 0; trial < 5; ++trial) {
            const auto w = random_simplex_point(7, rng);
            for (std::size_t r = 1; r < 7; ++r) {
                // vertex i -> i + r is an automorphism of C7 with chords
                std::vector<double> rotated(7);
                for (std::size_t i = 0; i < 7; ++i) rotated[(i + r) % 7] = w[i];
                EXPECT_NEAR(evaluate_density(m, w).value, evaluate_density(m, rotated).value, 1e-15);
            }
        }
    }
}

TEST(EvaluateDensity, RelabelingThePatternChangesNothing)
{
    auto m = model_of(ConstructionKind::c5c7_bipartite_blobs, 5);
    const std::vector<Vertex> perm{2, 0, 3, 1};
    DensityModel q = m;
    q.pattern.base = m.pattern.base.permuted(perm);
    std::vector<Rational> w(4);
    for (std::size_t i = 0; i < 4; ++i) {
        q.pattern.blob_internal[perm[i]] = m.pattern.blob_internal[i];
        q.pattern.blob_weights[perm[i]] = m.pattern.blob_weights[i];
    }
    EXPECT_EQ(*evaluate_density(q, q.pattern.blob_weights).exact, Rational(27, 50000));
}

TEST(EvaluateDensity, QuadratureAndMonteCarloAgree)
{
    auto th = model_of(ConstructionKind::threshold_c7, 5);
    const auto w = as_double(pattern_weights(th));
    for (double c : {0.55, 0.67757, 0.85}) {
        DensityParams p;
        p.threshold = c;
        const double exact = evaluate_density(th, w, p).value;
        const auto mc = density_monte_carlo(th, w, 2'000'000, 7, p);
        EXPECT_LE(std::abs(mc.mean - exact), 3 * mc.standard_error) << c;
        EXPECT_NEAR(density_grid(th, w, 512, p), exact, 1e-3 * exact) << c;
    }
}

TEST(EvaluateDensity, GridMatchesExactOnPolynomialPatterns)
{
    for (auto kind : {ConstructionKind::c5c3_tournament_blobs, ConstructionKind::c5c7_bipartite_blobs}) {
        auto m = model_of(kind, 5);
        const auto w = pattern_weights(m);
        EXPECT_NEAR(density_grid(m, as_double(w), 256), to_double(*evaluate_density(m, w).exact), 2e-2 * to_double(*evaluate_density(m, w).exact));
    }
}

TEST(EvaluateDensity, FiniteSizeConvergence)
{
    struct Case {
        ConstructionId id;
        std::size_t k;
    };
    std::vector<Case> cases = {{ConstructionId::balanced(3), 3},
                               {ConstructionId::balanced(5), 5},
                               {ConstructionId::of(ConstructionKind::c5c3_tournament_blobs), 5},
                               {ConstructionId::of(ConstructionKind::c5c7_bipartite_blobs), 5},
                               {ConstructionId::of(ConstructionKind::c7_chords_blowup), 5},
                               {ConstructionId::of(ConstructionKind::threshold_c7), 5}};
    for (const auto& c : cases) {
        DensityModel m{construction_pattern(c.id), c.k, {}};
        const double limit = evaluate_density(m, as_double(pattern_weights(m))).value;
        std::vector<double> scaled;
        for (std::size_t n : {40u, 80u, 160u}) {
            const double copies = to_double(count_cycle_copies(generate(c.id, n), c.k));
            const double err = std::abs(copies / std::pow(double(n), double(c.k)) - limit);
            scaled.push_back(err * double(n));
        }
        // err ~ C/n: n * err must stay bounded by the constant fitted at the smallest n
        const double C = std::max(scaled[0], 1e-12);
        EXPECT_LE(scaled[1], 1.25 * C) << to_string(c.id.kind);
        EXPECT_LE(scaled[2], 1.25 * C) << to_string(c.id.kind);
    }
}

TEST(OptimizeWeights, CyclePatternIsBalanced)
{
    for (std::size_t d : {3u, 4u, 5u, 6u}) {
        DensityModel m{PatternSpec::uniform(directed_cycle(d)), d, {}};
        auto o = optimize_weights(m);
        for (double x : o.weights) EXPECT_NEAR(x, 1.0 / double(d), 1e-6);
        ASSERT_TRUE(o.value_as_rational);
        EXPECT_EQ(*o.value_as_rational, rpow(Rational(1, static_cast<long>(d)), static_cast<unsigned>(d)));
    }
    // d | k with k = 2d
    DensityModel m{PatternSpec::uniform(directed_cycle(3)), 6, {}};
    for (double x : optimize_weights(m).weights) EXPECT_NEAR(x, 1.0 / 3.0, 1e-6);
}

TEST(OptimizeWeights, C5C7Proportions)
{
    auto m = model_of(ConstructionKind::c5c7_bipartite_blobs, 5);
    auto o = optimize_weights(m);
    const std::vector<double> expect{0.3, 0.3, 0.2, 0.2};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(o.weights[i], expect[i], 1e-3);
    EXPECT_NEAR(o.value, 27.0 / 50000.0, 1e-5);
    ASSERT_TRUE(o.value_as_rational);
    EXPECT_EQ(*o.value_as_rational, Rational(27, 50000));
}

TEST(OptimizeWeights, SparseHeadRecoversEvenSplit)
{
    for (std::size_t t : {2u, 3u, 6u}) {
        DensityModel m{PatternSpec::uniform(directed_cycle(3)), 3, {t - 1, 0, 0}};
        auto o = optimize_weights(m);
        EXPECT_EQ(o.exponent, 2u);
        EXPECT_NEAR(o.weights[1], 0.5, 1e-6);
        EXPECT_NEAR(o.weights[2], 0.5, 1e-6);
        ASSERT_TRUE(o.value_as_rational);
        EXPECT_EQ(*o.value_as_rational, Rational(static_cast<long>(t - 1), 4));
    }
}

TEST(OptimizeWeights, DeterministicAcrossThreadCounts)
{
    auto m = model_of(ConstructionKind::c5c3_tournament_blobs, 5);
    auto a = optimize_weights(m, {}, 1e-10, {}, 1);
    auto b = optimize_weights(m, {}, 1e-10, {}, 4);
    EXPECT_EQ(a.weights, b.weights);
    EXPECT_EQ(a.value, b.value);
}

TEST(Gradient, MatchesCentralDifferences)
{
    std::mt19937_64 rng(17);
    std::vector<DensityModel> models = {model_of(ConstructionKind::c5c7_bipartite_blobs, 5),
                                        model_of(ConstructionKind::c5c3_tournament_blobs, 5),
                                        model_of(ConstructionKind::c7_chords_blowup, 5)};
    std::size_t checked = 0;
    for (const auto& m : models) {
        const auto poly = compile_density(m);
        const std::size_t p = m.pattern.blob_count();
        for (int trial = 0; trial < 100; ++trial) {
            const auto w = random_simplex_point(p, rng);
            const auto g = projected_gradient(m, poly, w);
            // directional derivative along e_i - e_j stays on the simplex
            for (std::size_t i = 0; i + 1 < p; ++i) {
                const std::size_t j = i + 1;
                const double h = 1e-5 * std::min(w[i], w[j]);
                auto plus = w;
                auto minus = w;
                plus[i] += h;
                plus[j] -= h;
                minus[i] -= h;
                minus[j] += h;
                const double fd = (poly.value(plus) - poly.value(minus)) / (2 * h);
                const double an = g[i] - g[j];
                EXPECT_NEAR(fd, an, 1e-6 * std::max(std::abs(an), 1e-8));
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 300u);
}

TEST(OptimizeThreshold, RecoversConstant)
{
    auto th = model_of(ConstructionKind::threshold_c7, 5);
    ThresholdOptions opt;
    opt.resolution = 128;
    auto r = optimize_threshold(th, opt);
    EXPECT_NEAR(r.c_star, 0.67757, 5e-3);
    EXPECT_GE(r.density_binomial, 0.0516);
    EXPECT_LE(r.density_binomial, 0.0567);
    EXPECT_TRUE(r.unimodal);
    ASSERT_TRUE(r.grid_density);
    EXPECT_NEAR(*r.grid_density, r.density, 1e-3 * r.density);
}

TEST(OptimizeThreshold, Errors)
{
    EXPECT_THROW(optimize_threshold(model_of(ConstructionKind::c7_chords_blowup, 5)), DensityError);
    ThresholdOptions bad;
    bad.lo = 0.8;
    bad.hi = 1.2;
    EXPECT_THROW(optimize_threshold(model_of(ConstructionKind::threshold_c7, 5), bad), DensityError);
}
