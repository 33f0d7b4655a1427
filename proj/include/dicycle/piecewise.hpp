#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace dicycle {

/// Piecewise polynomial on [0,1]. Piece i covers [brk[i], brk[i+1]] and is stored in the local
/// variable t = y - brk[i], which makes shifts of the argument free.
class PiecewisePoly {
public:
    PiecewisePoly() : brk_{0.0, 1.0}, coef_{{0.0}} {}

    static PiecewisePoly constant(double v)
    {
        PiecewisePoly p;
        p.coef_[0][0] = v;
        return p;
    }

    /// value on [0, at) is `below`, on [at, 1] is `above`.
    static PiecewisePoly step(double at, double below, double above)
    {
        if (at <= 0.0) return constant(above);
        if (at >= 1.0) return constant(below);
        PiecewisePoly p;
        p.brk_ = {0.0, at, 1.0};
        p.coef_ = {{below}, {above}};
        return p;
    }

    std::size_t pieces() const { return coef_.size(); }
    const std::vector<double>& breakpoints() const { return brk_; }

    double operator()(double y) const
    {
        std::size_t i = static_cast<std::size_t>(std::upper_bound(brk_.begin(), brk_.end(), y) - brk_.begin());
        i = i == 0 ? 0 : i - 1;
        if (i >= coef_.size()) i = coef_.size() - 1;
        return horner(coef_[i], y - brk_[i]);
    }

    /// G(y) = integral of this from 0 to y.
    PiecewisePoly antiderivative() const
    {
        PiecewisePoly g;
        g.brk_ = brk_;
        g.coef_.resize(coef_.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < coef_.size(); ++i) {
            const auto& c = coef_[i];
            auto& out = g.coef_[i];
            out.assign(c.size() + 1, 0.0);
            out[0] = acc;
            for (std::size_t d = 0; d < c.size(); ++d) out[d + 1] = c[d] / static_cast<double>(d + 1);
            acc = horner(out, brk_[i + 1] - brk_[i]);
        }
        return g;
    }

    double total() const
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < coef_.size(); ++i) {
            const double h = brk_[i + 1] - brk_[i];
            double hp = h;
            for (std::size_t d = 0; d < coef_[i].size(); ++d) {
                acc += coef_[i][d] * hp / static_cast<double>(d + 1);
                hp *= h;
            }
        }
        return acc;
    }

    /// y -> this(clamp(y + shift, 0, 1)) on [0,1].
    PiecewisePoly shifted(double shift) const
    {
        PiecewisePoly out;
        out.brk_ = {0.0};
        out.coef_.clear();
        const double left = (*this)(0.0);
        const double right = value_at_end();
        // region where y + shift < 0
        if (-shift > 0.0) out.push(std::min(1.0, -shift), {left});
        for (std::size_t i = 0; i < coef_.size(); ++i) {
            const double a = brk_[i] - shift;
            const double b = brk_[i + 1] - shift;
            const double lo = std::max(a, out.brk_.back());
            const double hi = std::min(b, 1.0);
            if (hi <= lo) continue;
            out.push(hi, taylor_shift(coef_[i], lo - a));
        }
        if (out.brk_.back() < 1.0) out.push(1.0, {right});
        out.normalize();
        return out;
    }

    PiecewisePoly& operator*=(double s)
    {
        for (auto& c : coef_)
            for (auto& v : c) v *= s;
        return *this;
    }

    /// Pointwise a*this + b*other.
    static PiecewisePoly combine(double a, const PiecewisePoly& x, double b, const PiecewisePoly& y)
    {
        std::vector<double> br;
        std::merge(x.brk_.begin(), x.brk_.end(), y.brk_.begin(), y.brk_.end(), std::back_inserter(br));
        br.erase(std::unique(br.begin(), br.end(), [](double u, double v) { return std::abs(u - v) < eps; }), br.end());
        PiecewisePoly out;
        out.brk_ = {0.0};
        out.coef_.clear();
        std::size_t ix = 0;
        std::size_t iy = 0;
        for (std::size_t i = 0; i + 1 < br.size(); ++i) {
            const double lo = br[i];
            const double hi = br[i + 1];
            const double mid = 0.5 * (lo + hi);
            while (ix + 1 < x.coef_.size() && x.brk_[ix + 1] <= mid) ++ix;
            while (iy + 1 < y.coef_.size() && y.brk_[iy + 1] <= mid) ++iy;
            auto cx = taylor_shift(x.coef_[ix], lo - x.brk_[ix]);
            auto cy = taylor_shift(y.coef_[iy], lo - y.brk_[iy]);
            std::vector<double> c(std::max(cx.size(), cy.size()), 0.0);
            for (std::size_t d = 0; d < cx.size(); ++d) c[d] += a * cx[d];
            for (std::size_t d = 0; d < cy.size(); ++d) c[d] += b * cy[d];
            out.push(hi, std::move(c));
        }
        out.normalize();
        return out;
    }

    static constexpr double eps = 1e-14;

private:
    static double horner(const std::vector<double>& c, double t)
    {
        double v = 0.0;
        for (std::size_t d = c.size(); d-- > 0;) v = v * t + c[d];
        return v;
    }

    /// Coefficients of p(t + delta) in t.
    static std::vector<double> taylor_shift(std::vector<double> c, double delta)
    {
        if (delta == 0.0 || c.size() <= 1) return c;
        const std::size_t n = c.size();
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = n - 1; j > i; --j) c[j - 1] += delta * c[j];
        return c;
    }

    double value_at_end() const { return horner(coef_.back(), brk_.back() - brk_[brk_.size() - 2]); }

    void push(double hi, std::vector<double> c)
    {
        brk_.push_back(hi);
        coef_.push_back(std::move(c));
    }

    /// Drops slivers and guarantees brk = {0, ..., 1}.
    void normalize()
    {
        std::vector<double> br{0.0};
        std::vector<std::vector<double>> co;
        for (std::size_t i = 0; i < coef_.size(); ++i) {
            const double hi = i + 1 == coef_.size() ? 1.0 : brk_[i + 1];
            if (hi - br.back() <= eps && i + 1 < coef_.size()) continue;
            // re-centre if an earlier sliver was dropped
            co.push_back(taylor_shift(coef_[i], br.back() - brk_[i]));
            br.push_back(hi);
        }
        if (co.empty()) {
            br = {0.0, 1.0};
            co = {{0.0}};
        }
        brk_ = std::move(br);
        coef_ = std::move(co);
    }

    std::vector<double> brk_;
    std::vector<std::vector<double>> coef_;
};

/// Gauss-Legendre nodes and weights on [-1,1], 8 points (exact for degree <= 15).
inline const std::array<std::pair<double, double>, 8>& gauss_legendre_8()
{
    static const std::array<std::pair<double, double>, 8> nodes = {{
        {-0.9602898564975363, 0.1012285362903763},
        {-0.7966664774136267, 0.2223810344533745},
        {-0.5255324099163290, 0.3137066458778873},
        {-0.1834346424956498, 0.3626837833783620},
        {0.1834346424956498, 0.3626837833783620},
        {0.5255324099163290, 0.3137066458778873},
        {0.7966664774136267, 0.2223810344533745},
        {0.9602898564975363, 0.1012285362903763},
    }};
    return nodes;
}

/// Integral over [0,1] of f, exact for piecewise polynomials of degree <= 15 whose breakpoints all
/// lie in `breaks`.
template <class F>
double integrate_pieces(F&& f, std::vector<double> breaks)
{
    breaks.push_back(0.0);
    breaks.push_back(1.0);
    std::vector<double> b;
    for (double x : breaks)
        if (x >= 0.0 && x <= 1.0) b.push_back(x);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end(), [](double u, double v) { return std::abs(u - v) < 1e-13; }), b.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        const double lo = b[i];
        const double hi = b[i + 1];
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        for (const auto& [x, w] : gauss_legendre_8()) total += w * half * f(mid + half * x);
    }
    return total;
}

} // namespace dicycle
