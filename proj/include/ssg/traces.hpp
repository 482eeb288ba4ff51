#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "ssg/groupoid.hpp"
#include "ssg/spectral.hpp"

namespace ssg {

using Complex = std::complex<double>;

// Evaluator of a trace on C*(G) at the generators i_g.
class GroupoidTrace {
  public:
    enum class Kind { TauX, TauENormalized, Tau1Normalized, VertexWeights, IsotropyMoments, Sum };

    static constexpr unsigned default_search_cap = 64;

    // x_C on identities of C, 0 elsewhere
    static GroupoidTrace tau_x(const Groupoid& groupoid, const OrbitData& orbits, const SpectralData& spectral);
    // 1/|E^0| on identities
    static GroupoidTrace tau_e_normalized(const Groupoid& groupoid);
    // 1/|E^0| whenever d(g) = c(g)
    static GroupoidTrace tau_1_normalized(const Groupoid& groupoid);
    // weights[v] on the identity at v; weights must sum to 1
    static GroupoidTrace vertex_weights(const Groupoid& groupoid, std::vector<double> weights);
    // weight * m_n where k_y^-1 g k_y = z^n; moments absent from the table
    // are zero, negative ones default to conj(m_k)
    static GroupoidTrace from_isotropy(const Groupoid& groupoid, const OrbitData& orbits, std::size_t component,
                                       const MachineState& z, std::map<long, Complex> moments, double weight,
                                       unsigned search_cap = default_search_cap);
    static GroupoidTrace sum(std::vector<GroupoidTrace> terms);

    Kind kind() const noexcept { return kind_; }
    std::string kind_name() const;
    // tau_e, tau_1 are exposed normalised by 1/|E^0|; this is the factor
    // that recovers the unnormalised trace
    double raw_factor() const noexcept { return raw_factor_; }

    Complex evaluate(const MachineState& g) const;
    // tau(i_v) for every vertex
    std::vector<Complex> unit_values() const;
    // sup over g of |tau(i_g)|
    double magnitude_bound() const;

    const Groupoid& groupoid() const noexcept { return groupoid_; }

  private:
    GroupoidTrace(Kind kind, Groupoid groupoid) : kind_(kind), groupoid_(std::move(groupoid)) {}

    Complex evaluate_moments(const MachineState& g) const;

    Kind kind_;
    Groupoid groupoid_;
    double raw_factor_ = 1;
    std::vector<double> unit_weight_;  // per vertex
    OrbitData orbits_;
    std::size_t component_ = 0;
    MachineState generator_;
    std::map<long, Complex> moments_;
    double weight_ = 1;
    unsigned search_cap_ = default_search_cap;
    std::vector<GroupoidTrace> terms_;
};

} // namespace ssg
