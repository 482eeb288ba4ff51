#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssg/nucleus.hpp"
#include "ssg/spectral.hpp"
#include "ssg/traces.hpp"

namespace ssg {

// s_kappa u_g s_lambda^*, with s(kappa) = c(g) and s(lambda) = d(g).
struct SpanningElement {
    Path kappa;
    MachineState g;
    Path lambda;

    long degree() const noexcept
    {
        return static_cast<long>(kappa.length()) - static_cast<long>(lambda.length());
    }
    friend bool operator==(const SpanningElement&, const SpanningElement&) = default;
};

SpanningElement make_spanning(const Groupoid& groupoid, Path kappa, MachineState g, Path lambda);
// u_g = s_{c(g)} u_g s_{d(g)}^*
SpanningElement unit_element(const Groupoid& groupoid, const MachineState& g);
// p_v
SpanningElement vertex_projection(const Groupoid& groupoid, VertexId v);

// "s:1.2|u:b.a|s:3.4", "p:v"
SpanningElement parse_spanning(const Groupoid& groupoid, std::string_view text);
std::string format_spanning(const Groupoid& groupoid, const SpanningElement& b);

// nullopt is the zero element
std::optional<SpanningElement> multiply(const Groupoid& groupoid, const SpanningElement& b, const SpanningElement& c);
SpanningElement adjoint(const Groupoid& groupoid, const SpanningElement& b);

class SpanningCombination {
  public:
    struct Term {
        Complex coefficient;
        SpanningElement element;
    };

    SpanningCombination() = default;
    explicit SpanningCombination(SpanningElement b) { add(1.0, std::move(b)); }

    void add(Complex coefficient, SpanningElement b);
    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    static SpanningCombination product(const Groupoid& groupoid, const SpanningCombination& a,
                                       const SpanningCombination& b);
    SpanningCombination adjoint(const Groupoid& groupoid) const;

  private:
    std::vector<Term> terms_;
};

struct StateFunctional {
    double beta = 0;
    std::function<Complex(const SpanningElement&)> evaluate;

    Complex operator()(const SpanningElement& b) const { return evaluate(b); }
    Complex operator()(const SpanningCombination& a) const;
};

// Stationary transfer data on the restriction closure of g (state 0).
struct TransferSystem {
    ClosedMachine machine;
    // m[h1][h2] = #{ e : h1.e = e, h1|_e ~ h2 }
    std::vector<std::vector<std::int64_t>> m;
    // tau(i_h) when d(h) = c(h), else 0
    std::vector<Complex> w;
};

TransferSystem transfer_system(const Groupoid& groupoid, const MachineState& g, const GroupoidTrace* tau,
                               std::size_t cap = Groupoid::default_cap);

struct PartitionFunction {
    double closed = 0;      // sum of (I - e^-beta B)^-1 tau
    double series = 0;      // sum_{j <= depth} e^{-beta j} sum_{mu in E^j} tau(s(mu))
    double tail_bound = 0;  // bound on closed - series
    unsigned depth = 0;
};

// Throws BetaAtOrBelowCritical unless beta > ln rho(B) + 1e-9.
PartitionFunction partition_function(const DirectedGraph& graph, double beta, const std::vector<double>& tau_units,
                                     unsigned series_depth = 40);
PartitionFunction partition_function(const GroupoidTrace& tau, double beta, unsigned series_depth = 40);

// The state psi_{beta,tau} above the critical temperature.
class KmsBetaState {
  public:
    KmsBetaState(const Groupoid& groupoid, double beta, GroupoidTrace tau, std::size_t cap = Groupoid::default_cap);

    double beta() const noexcept { return beta_; }
    double partition() const noexcept { return z_; }
    // sum_k e^{-beta k} sum over stationary nu in s(kappa)E^k of tau(i_{g|_nu}),
    // before the Z^-1 e^{-beta|kappa|} factor
    Complex stationary_sum(const MachineState& g) const;
    Complex evaluate(const SpanningElement& b) const;
    StateFunctional functional() const;

  private:
    Groupoid groupoid_;
    double beta_;
    GroupoidTrace tau_;
    std::size_t cap_;
    double rho_;
    double z_;
};

Complex psi_beta(const Groupoid& groupoid, double beta, const GroupoidTrace& tau, const SpanningElement& b);

enum class CriticalMethod { Solve, Iterate };

struct CriticalStateTable {
    double rho = 0;
    std::vector<double> x;
    Nucleus nucleus;
    std::vector<std::vector<std::int64_t>> m;  // stationary matrix over the nucleus
    std::vector<double> c;                     // per nucleus state
    CriticalMethod method = CriticalMethod::Solve;
    bool singular_fallback = false;
    bool converged = true;
    unsigned iterations = 0;
    std::vector<std::vector<double>> sequence;  // c_{g,k}, k = 0..iterations (iterate only)
};

CriticalStateTable critical_state(const Groupoid& groupoid, CriticalMethod method, unsigned k_max = 200,
                                  double tol = 1e-12, const NucleusCaps& caps = {});

// (M^k)(g, h) over the nucleus, exact; F_g^k(v) is the entry at h = id_v.
std::vector<std::vector<std::int64_t>> stationary_power(const CriticalStateTable& table, unsigned k);

// c_g, pushing g down through stationary edges until it lands in the nucleus
double critical_value(const Groupoid& groupoid, const CriticalStateTable& table, const MachineState& g,
                      unsigned max_depth = 64);
double psi_critical(const Groupoid& groupoid, const CriticalStateTable& table, const SpanningElement& b);
StateFunctional critical_functional(const Groupoid& groupoid, const CriticalStateTable& table);

struct KmsReport {
    std::size_t samples = 0;
    std::size_t kms_checks = 0;
    std::size_t spanning_checks = 0;
    std::size_t trace_checks = 0;
    double max_residual = 0;
    std::vector<std::string> failures;

    bool passed() const noexcept { return failures.empty(); }
};

// Seeded spot check of phi(bc) = e^{-beta(|kappa_b| - |lambda_b|)} phi(cb), the
// delta/exponential form on spanning elements and the trace property on
// isotropy. Refuses beta below ln rho(B).
KmsReport verify_kms(const Groupoid& groupoid, const StateFunctional& phi, std::size_t samples, std::uint64_t seed,
                     double tol = 1e-9, const std::vector<MachineState>& extra_pool = {});

// phi_eps(s_kappa s_lambda^*) = delta e^{-beta|kappa|} ((I - e^-beta B)^-1 eps)_{s(kappa)}
StateFunctional graph_case_state(const DirectedGraph& graph, double beta, const std::vector<double>& eps);

struct KeyInequalityReport {
    unsigned j = 0;
    std::vector<double> lhs;  // sum over non-identity h of (M^{nj})(g,h) x_{d(h)}
    std::vector<double> rhs;  // (rho^j - 1)^n
    bool holds = true;
};

KeyInequalityReport check_key_inequality(const Groupoid& groupoid, const MachineState& g, unsigned n_max,
                                         unsigned j_cap = 8);

} // namespace ssg
