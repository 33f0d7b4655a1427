#pragma once

#include "counting.hpp"
#include "digraph.hpp"
#include "errors.hpp"
#include "numeric.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

namespace dicycle {

class SpectralError : public Error {
public:
    using Error::Error;
};

struct Spectrum {
    std::vector<std::complex<double>> eigenvalues; ///< non-increasing real part
    std::vector<double> symmetrized;               ///< eigenvalues of (M + M^T)/2, non-increasing
    std::optional<std::pair<std::size_t, std::size_t>> bipartition;
    double max_residual = 0.0; ///< max ||Mv - lambda v|| / ||v|| over computed eigenpairs
};

inline Eigen::MatrixXd adjacency_matrix(const OrientedGraph& g)
{
    const auto n = static_cast<Eigen::Index>(g.order());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const Arc& a : g.arcs()) m(a.tail, a.head) = 1.0;
    return m;
}

/// Side of each vertex when the underlying graph is complete bipartite K_{m,n-m} (m, n-m >= 1).
inline std::optional<std::vector<int>> complete_bipartite_sides(const OrientedGraph& g)
{
    const std::size_t n = g.order();
    if (n < 2 || g.has_digon()) return std::nullopt;
    auto adjacent = [&](Vertex u, Vertex v) { return g.has_arc(u, v) || g.has_arc(v, u); };
    std::vector<int> side(n, 0);
    for (Vertex v = 1; v < n; ++v) side[v] = adjacent(0, v) ? 1 : 0;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (adjacent(u, v) != (side[u] != side[v])) return std::nullopt;
    if (std::count(side.begin(), side.end(), 1) == 0) return std::nullopt;
    return side;
}

inline Spectrum spectrum(const OrientedGraph& g, std::optional<std::size_t> bipartition_m = std::nullopt)
{
    Spectrum s;
    const Eigen::MatrixXd m = adjacency_matrix(g);
    const auto n = m.rows();
    if (n > 0) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(m, true);
        if (es.info() != Eigen::Success) throw SpectralError("ConvergenceFailure", "nonsymmetric eigensolver did not converge");
        const Eigen::VectorXcd values = es.eigenvalues();
        const Eigen::MatrixXcd vectors = es.eigenvectors();
        const Eigen::MatrixXcd mc = m.cast<std::complex<double>>();
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::VectorXcd v = vectors.col(i);
            const double norm = v.norm();
            if (norm == 0.0) continue;
            s.max_residual = std::max(s.max_residual, (mc * v - values(i) * v).norm() / norm);
            s.eigenvalues.push_back(values(i));
        }
        std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](auto a, auto b) {
            return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
        });

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sym(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
        if (sym.info() != Eigen::Success) throw SpectralError("ConvergenceFailure", "symmetric eigensolver did not converge");
        for (Eigen::Index i = 0; i < n; ++i) s.symmetrized.push_back(sym.eigenvalues()(i));
        std::sort(s.symmetrized.begin(), s.symmetrized.end(), std::greater<>());
    }
    if (const auto sides = complete_bipartite_sides(g)) {
        const auto ones = static_cast<std::size_t>(std::count(sides->begin(), sides->end(), 1));
        const std::size_t a = std::min(ones, g.order() - ones);
        s.bipartition = std::pair{a, g.order() - a};
    }
    if (bipartition_m) {
        if (!s.bipartition || (s.bipartition->first != *bipartition_m && s.bipartition->second != *bipartition_m))
            throw SpectralError("NotCompleteBipartite", "graph does not orient K_{m,n-m} with m = " + std::to_string(*bipartition_m));
    }
    return s;
}

/// sum of lambda_i^k over the spectrum.
inline std::complex<double> trace_power_via_spectrum(const Spectrum& s, std::size_t k)
{
    std::complex<double> total = 0.0;
    for (auto l : s.eigenvalues) total += std::pow(l, static_cast<int>(k));
    return total;
}

/// tr(M^k)/k from the eigenvalues; this counts closed k-walks up to rotation.
inline double hom_count_via_spectrum(const OrientedGraph& g, std::size_t k)
{
    if (k == 0) throw SpectralError("InvalidParameters", "k must be positive");
    const auto t = trace_power_via_spectrum(spectrum(g), k);
    const double scale = std::max(1.0, std::abs(t.real()));
    if (std::abs(t.imag()) > 1e-6 * scale)
        throw SpectralError("ConvergenceFailure", "imaginary part of the spectral trace did not cancel");
    return t.real() / static_cast<double>(k);
}

struct PositivePartCheck {
    double sum = 0.0;            ///< sum of the floor(n/2) largest real parts
    double bound = 0.0;          ///< sqrt(m(n-m))/2
    bool within_bound = false;
    double symmetrized_sum = 0.0; ///< sum of the floor(n/2) largest symmetrized eigenvalues
    bool ky_fan_holds = false;
};

inline PositivePartCheck positive_real_part_sum(const Spectrum& s, double tolerance = 1e-9)
{
    if (!s.bipartition) throw SpectralError("NotCompleteBipartite", "spectrum is not of a complete bipartite orientation");
    const std::size_t n = s.eigenvalues.size();
    PositivePartCheck c;
    for (std::size_t i = 0; i < n / 2; ++i) {
        c.sum += s.eigenvalues[i].real();
        c.symmetrized_sum += s.symmetrized[i];
    }
    c.bound = 0.5 * std::sqrt(static_cast<double>(s.bipartition->first) * static_cast<double>(s.bipartition->second));
    c.within_bound = c.sum <= c.bound + tolerance;
    c.ky_fan_holds = c.sum <= c.symmetrized_sum + tolerance;
    return c;
}

struct BipartiteCycleBound {
    BigInt count;
    double bound = 0.0;          ///< (2/k)(n/4)^k
    double spectral_bound = 0.0; ///< (2/k)(sqrt(m(n-m))/2)^k
    bool holds = false;
};

inline BipartiteCycleBound bipartite_cycle_bound(const OrientedGraph& g, std::size_t k)
{
    if (k % 4 != 2) throw SpectralError("PreconditionViolated", "bound needs k = 2 (mod 4)");
    const auto sides = complete_bipartite_sides(g);
    if (!sides) throw SpectralError("PreconditionViolated", "graph does not orient a complete bipartite graph");
    const std::size_t n = g.order();
    const auto m = static_cast<std::size_t>(std::count(sides->begin(), sides->end(), 1));
    BipartiteCycleBound b;
    b.count = count_cycle_copies(g, k);
    const double kd = static_cast<double>(k);
    b.bound = 2.0 / kd * std::pow(static_cast<double>(n) / 4.0, kd);
    b.spectral_bound = 2.0 / kd * std::pow(0.5 * std::sqrt(static_cast<double>(m) * static_cast<double>(n - m)), kd);
    b.holds = to_double(b.count) <= b.bound * (1.0 + 1e-12);
    return b;
}

/// Re(z^k) <= k |z|^{k-1} Re(z) for Re z >= 0 and k = 2 (mod 4).
inline bool power_real_part_inequality(std::complex<double> z, std::size_t k, double tolerance = 1e-9)
{
    const double lhs = std::pow(z, static_cast<int>(k)).real();
    const double rhs = static_cast<double>(k) * std::pow(std::abs(z), static_cast<double>(k - 1)) * z.real();
    return lhs <= rhs + tolerance * std::max(1.0, std::pow(std::abs(z), static_cast<double>(k)));
}

} // namespace dicycle
