#include "ssg/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "ssg/error.hpp"

namespace ssg {

SpectralData perron_frobenius(const IntMatrix& b, double tol, unsigned max_iter)
{
    const std::size_t n = b.size();
    if (n == 0 || !is_irreducible(b))
        throw Error(ErrorKind::NotIrreducible, "vertex matrix is not irreducible");
    std::vector<double> x(n, 1.0 / static_cast<double>(n)), bx(n);
    SpectralData out;
    for (unsigned it = 0;; ++it) {
        double rho = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0;
            for (std::size_t j = 0; j < n; ++j)
                s += static_cast<double>(b(i, j)) * x[j];
            bx[i] = s;
            rho += s;
        }
        double residual = 0;
        for (std::size_t i = 0; i < n; ++i)
            residual = std::max(residual, std::abs(bx[i] - rho * x[i]));
        out.rho = rho;
        out.x = x;
        out.residual = residual;
        out.iterations = it;
        if (residual <= tol)
            return out;
        if (it == max_iter)
            throw Error(ErrorKind::NoConvergence, "power iteration did not reach residual " + std::to_string(tol) +
                                                      " in " + std::to_string(max_iter) + " iterations");
        double norm = 0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = 0.5 * (bx[i] + x[i]);
            norm += x[i];
        }
        for (auto& v : x)
            v /= norm;
    }
}

double spectral_radius(const std::vector<std::vector<double>>& m)
{
    const Eigen::Index n = static_cast<Eigen::Index>(m.size());
    if (n == 0)
        return 0;
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = m[i][j];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_radius(const IntMatrix& b)
{
    if (b.size() > 0 && is_irreducible(b))
        return perron_frobenius(b).rho;
    std::vector<std::vector<double>> m(b.size(), std::vector<double>(b.size()));
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            m[i][j] = static_cast<double>(b(i, j));
    return spectral_radius(m);
}

ConstancyReport check_orbit_constancy(const SpectralData& spectral, const OrbitData& orbits, double tol)
{
    ConstancyReport report;
    for (std::size_t c = 0; c < orbits.components.size(); ++c) {
        double lo = spectral.x.at(orbits.components[c].front().value), hi = lo;
        for (auto v : orbits.components[c]) {
            lo = std::min(lo, spectral.x.at(v.value));
            hi = std::max(hi, spectral.x.at(v.value));
        }
        report.component_value.push_back(spectral.x.at(orbits.base[c].value));
        report.max_spread = std::max(report.max_spread, hi - lo);
        if (hi - lo > tol)
            throw Error(ErrorKind::ConstancyViolated,
                        "x varies by " + std::to_string(hi - lo) + " on component " + std::to_string(c));
    }
    return report;
}

RowSumReport check_orbit_row_sums(const DirectedGraph& graph, const OrbitData& orbits)
{
    const IntMatrix b = vertex_matrix(graph);
    const std::size_t nc = orbits.components.size();
    RowSumReport report{IntMatrix(nc)};
    for (std::size_t c = 0; c < nc; ++c)
        for (std::size_t d = 0; d < nc; ++d) {
            auto block_sum = [&](VertexId v) {
                std::int64_t s = 0;
                for (auto w : orbits.components[d])
                    s += b(v.value, w.value);
                return s;
            };
            const std::int64_t first = block_sum(orbits.components[c].front());
            for (auto v : orbits.components[c])
                if (block_sum(v) != first)
                    throw Error(ErrorKind::RowSumViolation,
                                "vertex " + graph.vertex_name(v) + " sends " + std::to_string(block_sum(v)) +
                                    " edges into component " + std::to_string(d) + ", expected " +
                                    std::to_string(first));
            report.reduced(c, d) = first;
        }
    return report;
}

} // namespace ssg
