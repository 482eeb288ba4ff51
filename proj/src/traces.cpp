#include "ssg/traces.hpp"

#include <cmath>

#include "ssg/error.hpp"

namespace ssg {

GroupoidTrace GroupoidTrace::tau_x(const Groupoid& groupoid, const OrbitData& orbits, const SpectralData& spectral)
{
    const std::size_t nv = groupoid.graph().vertex_count();
    if (spectral.x.size() != nv || orbits.component_of.size() != nv)
        throw Error(ErrorKind::MissingContext, "tau_x needs orbit and Perron-Frobenius data for every vertex");
    auto report = check_orbit_constancy(spectral, orbits);
    GroupoidTrace t(Kind::TauX, groupoid);
    for (std::size_t v = 0; v < nv; ++v)
        t.unit_weight_.push_back(report.component_value[orbits.component_of[v]]);
    return t;
}

GroupoidTrace GroupoidTrace::tau_e_normalized(const Groupoid& groupoid)
{
    const std::size_t nv = groupoid.graph().vertex_count();
    GroupoidTrace t(Kind::TauENormalized, groupoid);
    t.unit_weight_.assign(nv, 1.0 / static_cast<double>(nv));
    t.raw_factor_ = static_cast<double>(nv);
    return t;
}

GroupoidTrace GroupoidTrace::tau_1_normalized(const Groupoid& groupoid)
{
    const std::size_t nv = groupoid.graph().vertex_count();
    GroupoidTrace t(Kind::Tau1Normalized, groupoid);
    t.unit_weight_.assign(nv, 1.0 / static_cast<double>(nv));
    t.raw_factor_ = static_cast<double>(nv);
    return t;
}

GroupoidTrace GroupoidTrace::vertex_weights(const Groupoid& groupoid, std::vector<double> weights)
{
    if (weights.size() != groupoid.graph().vertex_count())
        throw Error(ErrorKind::MissingContext, "vertex_weights needs one weight per vertex");
    double total = 0;
    for (double w : weights) {
        if (!(w >= 0))
            throw Error(ErrorKind::NotNormalized, "vertex weights must be non-negative");
        total += w;
    }
    if (std::abs(total - 1) > 1e-12)
        throw Error(ErrorKind::NotNormalized, "vertex weights sum to " + std::to_string(total));
    GroupoidTrace t(Kind::VertexWeights, groupoid);
    t.unit_weight_ = std::move(weights);
    return t;
}

GroupoidTrace GroupoidTrace::from_isotropy(const Groupoid& groupoid, const OrbitData& orbits, std::size_t component,
                                           const MachineState& z, std::map<long, Complex> moments, double weight,
                                           unsigned search_cap)
{
    if (component >= orbits.components.size())
        throw Error(ErrorKind::MissingContext, "no such component");
    const VertexId x = orbits.base[component];
    if (z.d() != x || z.c() != x)
        throw Error(ErrorKind::NotIsotropyGenerator,
                    groupoid.name(z) + " is not a loop at " + groupoid.graph().vertex_name(x));
    if (!moments.count(0))
        moments[0] = 1.0;
    if (std::abs(moments[0].imag()) > 1e-12)
        throw Error(ErrorKind::ParseError, "m_0 must be real");
    std::map<long, Complex> full = moments;
    for (const auto& [k, m] : moments) {
        if (k == 0)
            continue;
        auto it = moments.find(-k);
        if (it == moments.end())
            full[-k] = std::conj(m);
        else if (std::abs(it->second - std::conj(m)) > 1e-12)
            throw Error(ErrorKind::ParseError, "moment table is not Hermitian at k = " + std::to_string(k));
    }
    long table_extent = 0;
    for (const auto& [k, m] : full)
        table_extent = std::max(table_extent, std::labs(k));
    GroupoidTrace t(Kind::IsotropyMoments, groupoid);
    t.orbits_ = orbits;
    t.component_ = component;
    t.generator_ = z;
    t.moments_ = std::move(full);
    t.weight_ = weight;
    t.search_cap_ = std::max<unsigned>(search_cap, static_cast<unsigned>(table_extent));
    t.unit_weight_.assign(groupoid.graph().vertex_count(), 0.0);
    for (auto v : orbits.components[component])
        t.unit_weight_[v.value] = weight * t.moments_.at(0).real();
    return t;
}

GroupoidTrace GroupoidTrace::sum(std::vector<GroupoidTrace> terms)
{
    if (terms.empty())
        throw Error(ErrorKind::MissingContext, "empty trace sum");
    GroupoidTrace t(Kind::Sum, terms.front().groupoid_);
    t.unit_weight_.assign(t.groupoid_.graph().vertex_count(), 0.0);
    for (const auto& term : terms)
        for (std::size_t v = 0; v < t.unit_weight_.size(); ++v)
            t.unit_weight_[v] += term.unit_values()[v].real();
    t.terms_ = std::move(terms);
    return t;
}

std::string GroupoidTrace::kind_name() const
{
    switch (kind_) {
    case Kind::TauX:
        return "tau_x";
    case Kind::TauENormalized:
        return "tau_e_normalized";
    case Kind::Tau1Normalized:
        return "tau_1_normalized";
    case Kind::VertexWeights:
        return "vertex_weights";
    case Kind::IsotropyMoments:
        return "isotropy_moments";
    case Kind::Sum:
        return "sum";
    }
    return "?";
}

Complex GroupoidTrace::evaluate_moments(const MachineState& g) const
{
    const VertexId y = g.d();
    if (orbits_.component_of[y.value] != component_)
        return 0.0;
    const MachineState& k = orbits_.transversal[y.value];
    const MachineState h = groupoid_.compose(groupoid_.inverse(k), groupoid_.compose(g, k));
    // n = 0, 1, -1, 2, -2, ...
    MachineState up = groupoid_.identity(h.d()), down = up;
    const MachineState z_inv = groupoid_.inverse(generator_);
    auto value = [&](long n) {
        auto it = moments_.find(n);
        return it == moments_.end() ? Complex(0.0) : weight_ * it->second;
    };
    if (groupoid_.is_identity(h))
        return value(0);
    for (long n = 1; n <= static_cast<long>(search_cap_); ++n) {
        up = groupoid_.compose(up, generator_);
        if (groupoid_.equivalent(h, up))
            return value(n);
        down = groupoid_.compose(down, z_inv);
        if (groupoid_.equivalent(h, down))
            return value(-n);
    }
    throw Error(ErrorKind::DiscreteLogNotFound, groupoid_.name(g) + " conjugates to no power of " +
                                                    groupoid_.name(generator_) + " with |n| <= " +
                                                    std::to_string(search_cap_));
}

Complex GroupoidTrace::evaluate(const MachineState& g) const
{
    if (g.d() != g.c())
        return 0.0;
    switch (kind_) {
    case Kind::TauX:
    case Kind::TauENormalized:
    case Kind::VertexWeights:
        return groupoid_.is_identity(g) ? unit_weight_[g.d().value] : 0.0;
    case Kind::Tau1Normalized:
        return unit_weight_[g.d().value];
    case Kind::IsotropyMoments:
        return evaluate_moments(g);
    case Kind::Sum: {
        Complex s = 0.0;
        for (const auto& t : terms_)
            s += t.evaluate(g);
        return s;
    }
    }
    return 0.0;
}

std::vector<Complex> GroupoidTrace::unit_values() const
{
    return {unit_weight_.begin(), unit_weight_.end()};
}

double GroupoidTrace::magnitude_bound() const
{
    switch (kind_) {
    case Kind::IsotropyMoments: {
        double m = 0;
        for (const auto& [k, v] : moments_)
            m = std::max(m, std::abs(v));
        return std::abs(weight_) * m;
    }
    case Kind::Sum: {
        double s = 0;
        for (const auto& t : terms_)
            s += t.magnitude_bound();
        return s;
    }
    default: {
        double m = 0;
        for (double w : unit_weight_)
            m = std::max(m, std::abs(w));
        return m;
    }
    }
}

} // namespace ssg
