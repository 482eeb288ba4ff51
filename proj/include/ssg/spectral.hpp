#pragma once

#include <vector>

#include "ssg/groupoid.hpp"

namespace ssg {

struct SpectralData {
    double rho = 0;
    std::vector<double> x;  // L1-normalised, positive
    double residual = 0;    // max |Bx - rho x|
    unsigned iterations = 0;
};

// Power iteration on (B + I)/2 from the uniform vector; the shift removes
// period-2 oscillation for bipartite-like graphs.
SpectralData perron_frobenius(const IntMatrix& b, double tol = 1e-12, unsigned max_iter = 100000);

// Largest |eigenvalue|; Perron-Frobenius when irreducible, a dense eigensolve
// otherwise.
double spectral_radius(const IntMatrix& b);
double spectral_radius(const std::vector<std::vector<double>>& m);

struct ConstancyReport {
    std::vector<double> component_value;  // x_C
    double max_spread = 0;
};

ConstancyReport check_orbit_constancy(const SpectralData& spectral, const OrbitData& orbits, double tol = 1e-10);

struct RowSumReport {
    IntMatrix reduced;  // r_CD = |v E^1 D| for any v in C
};

RowSumReport check_orbit_row_sums(const DirectedGraph& graph, const OrbitData& orbits);

} // namespace ssg
