#include "ssg/kms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "ssg/error.hpp"

namespace ssg {

namespace {

constexpr double beta_margin = 1e-9;

double log_rho(const DirectedGraph& graph)
{
    return std::log(spectral_radius(vertex_matrix(graph)));
}

void require_above_critical(const DirectedGraph& graph, double beta)
{
    const double lr = log_rho(graph);
    if (!(beta > lr + beta_margin))
        throw Error(ErrorKind::BetaAtOrBelowCritical,
                    "beta = " + std::to_string(beta) + " but ln rho(B) = " + std::to_string(lr));
}

Eigen::MatrixXd to_dense(const std::vector<std::vector<std::int64_t>>& m)
{
    const Eigen::Index n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = static_cast<double>(m[i][j]);
    return out;
}

Eigen::MatrixXd to_dense(const IntMatrix& b)
{
    const Eigen::Index n = static_cast<Eigen::Index>(b.size());
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = static_cast<double>(b(i, j));
    return out;
}

std::vector<std::vector<std::int64_t>> multiply_checked(const std::vector<std::vector<std::int64_t>>& a,
                                                        const std::vector<std::vector<std::int64_t>>& b)
{
    const std::size_t n = a.size();
    std::vector<std::vector<std::int64_t>> out(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k] == 0)
                continue;
            for (std::size_t j = 0; j < n; ++j) {
                std::int64_t p;
                if (__builtin_mul_overflow(a[i][k], b[k][j], &p) || __builtin_add_overflow(out[i][j], p, &out[i][j]))
                    throw Error(ErrorKind::NoConvergence, "stationary path count overflows 64 bits");
            }
        }
    return out;
}

std::vector<std::vector<std::int64_t>> identity_counts(std::size_t n)
{
    std::vector<std::vector<std::int64_t>> out(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        out[i][i] = 1;
    return out;
}

} // namespace

SpanningElement make_spanning(const Groupoid& groupoid, Path kappa, MachineState g, Path lambda)
{
    const auto& graph = groupoid.graph();
    if (kappa.source() != g.c())
        throw Error(ErrorKind::DomainMismatch,
                    "s(" + graph.format_path(kappa) + ") != c(" + groupoid.name(g) + ")");
    if (lambda.source() != g.d())
        throw Error(ErrorKind::DomainMismatch,
                    "s(" + graph.format_path(lambda) + ") != d(" + groupoid.name(g) + ")");
    return {std::move(kappa), std::move(g), std::move(lambda)};
}

SpanningElement unit_element(const Groupoid& groupoid, const MachineState& g)
{
    return {groupoid.graph().empty_path(g.c()), g, groupoid.graph().empty_path(g.d())};
}

SpanningElement vertex_projection(const Groupoid& groupoid, VertexId v)
{
    return unit_element(groupoid, groupoid.identity(v));
}

SpanningElement parse_spanning(const Groupoid& groupoid, std::string_view text)
{
    const auto& graph = groupoid.graph();
    auto bad = [&](const std::string& why) {
        return Error(ErrorKind::ParseError, "spanning element '" + std::string(text) + "': " + why);
    };
    if (text.substr(0, 2) == "p:") {
        std::string v(text.substr(2));
        if (!graph.has_vertex(v))
            throw Error(ErrorKind::UnknownVertex, "'" + v + "'");
        return vertex_projection(groupoid, graph.vertex(v));
    }
    auto first = text.find('|');
    auto second = first == std::string_view::npos ? first : text.find('|', first + 1);
    if (second == std::string_view::npos || text.find('|', second + 1) != std::string_view::npos)
        throw bad("expected s:<path>|u:<word>|s:<path>");
    auto a = text.substr(0, first), u = text.substr(first + 1, second - first - 1), b = text.substr(second + 1);
    if (a.substr(0, 2) != "s:" || u.substr(0, 2) != "u:" || b.substr(0, 2) != "s:")
        throw bad("expected s:<path>|u:<word>|s:<path>");
    return make_spanning(groupoid, graph.parse_path(a.substr(2)), groupoid.resolve(u.substr(2)),
                         graph.parse_path(b.substr(2)));
}

std::string format_spanning(const Groupoid& groupoid, const SpanningElement& b)
{
    const auto& graph = groupoid.graph();
    return "s:" + graph.format_path(b.kappa) + "|u:" + groupoid.word_text(b.g) + "|s:" + graph.format_path(b.lambda);
}

std::optional<SpanningElement> multiply(const Groupoid& groupoid, const SpanningElement& b, const SpanningElement& c)
{
    const auto& graph = groupoid.graph();
    const Path& kappa = b.kappa;
    const Path& lambda = b.lambda;
    const Path& mu = c.kappa;
    const Path& nu = c.lambda;
    if (lambda.is_prefix_of(mu)) {
        // mu = lambda mu'
        Path mu1 = graph.suffix(mu, lambda.length());
        if (mu1.range() != b.g.d())
            return std::nullopt;
        auto [image, rest] = groupoid.apply(b.g, mu1);
        if (rest.d() != c.g.c())
            return std::nullopt;
        return SpanningElement{graph.concat(kappa, image), groupoid.compose(rest, c.g), nu};
    }
    if (mu.is_prefix_of(lambda)) {
        // lambda = mu lambda'
        Path lambda1 = graph.suffix(lambda, mu.length());
        if (lambda1.range() != c.g.c())
            return std::nullopt;
        MachineState h_inv = groupoid.inverse(c.g);
        auto [pre, inv_rest] = groupoid.apply(h_inv, lambda1);
        MachineState rest = groupoid.inverse(inv_rest);  // h|_{h^-1 . lambda'}
        if (b.g.d() != rest.c())
            return std::nullopt;
        return SpanningElement{kappa, groupoid.compose(b.g, rest), graph.concat(nu, pre)};
    }
    return std::nullopt;
}

SpanningElement adjoint(const Groupoid& groupoid, const SpanningElement& b)
{
    return {b.lambda, groupoid.inverse(b.g), b.kappa};
}

void SpanningCombination::add(Complex coefficient, SpanningElement b)
{
    for (auto it = terms_.begin(); it != terms_.end(); ++it)
        if (it->element == b) {
            it->coefficient += coefficient;
            if (it->coefficient == Complex(0.0))
                terms_.erase(it);
            return;
        }
    if (coefficient != Complex(0.0))
        terms_.push_back({coefficient, std::move(b)});
}

SpanningCombination SpanningCombination::product(const Groupoid& groupoid, const SpanningCombination& a,
                                                 const SpanningCombination& b)
{
    SpanningCombination out;
    for (const auto& x : a.terms_)
        for (const auto& y : b.terms_)
            if (auto p = multiply(groupoid, x.element, y.element))
                out.add(x.coefficient * y.coefficient, std::move(*p));
    return out;
}

SpanningCombination SpanningCombination::adjoint(const Groupoid& groupoid) const
{
    SpanningCombination out;
    for (const auto& t : terms_)
        out.add(std::conj(t.coefficient), ssg::adjoint(groupoid, t.element));
    return out;
}

Complex StateFunctional::operator()(const SpanningCombination& a) const
{
    Complex s = 0.0;
    for (const auto& t : a.terms())
        s += t.coefficient * evaluate(t.element);
    return s;
}

TransferSystem transfer_system(const Groupoid& groupoid, const MachineState& g, const GroupoidTrace* tau,
                               std::size_t cap)
{
    TransferSystem ts;
    ts.machine = groupoid.closure(g, cap);
    const std::size_t n = ts.machine.states.size();
    ts.m.assign(n, std::vector<std::int64_t>(n, 0));
    ts.w.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& s : ts.machine.transitions[i])
            if (s.edge == s.image)
                ++ts.m[i][s.target];
        const auto& h = ts.machine.states[i];
        if (tau && h.d() == h.c())
            ts.w[i] = tau->evaluate(h);
    }
    return ts;
}

PartitionFunction partition_function(const DirectedGraph& graph, double beta, const std::vector<double>& tau_units,
                                     unsigned series_depth)
{
    require_above_critical(graph, beta);
    const IntMatrix b = vertex_matrix(graph);
    const Eigen::Index n = static_cast<Eigen::Index>(b.size());
    if (tau_units.size() != b.size())
        throw Error(ErrorKind::MissingContext, "trace vector has the wrong length");
    const Eigen::MatrixXd bd = to_dense(b);
    Eigen::VectorXd t(n);
    for (Eigen::Index i = 0; i < n; ++i)
        t(i) = tau_units[i];
    const double q = std::exp(-beta);
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - q * bd;
    PartitionFunction out;
    out.closed = a.partialPivLu().solve(t).sum();

    Eigen::VectorXd v = t;
    double weight = 1;
    for (unsigned j = 0; j <= series_depth; ++j) {
        out.series += weight * v.sum();
        v = bd * v;
        weight *= q;
    }
    out.depth = series_depth;

    const double tmax = t.cwiseAbs().maxCoeff();
    if (is_irreducible(b)) {
        SpectralData pf = perron_frobenius(b);
        const double xmin = *std::min_element(pf.x.begin(), pf.x.end());
        const double r = q * pf.rho;
        out.tail_bound = tmax / xmin * std::pow(r, series_depth + 1) / (1 - r);
    } else {
        std::int64_t rmax = 0;
        for (std::size_t i = 0; i < b.size(); ++i)
            rmax = std::max(rmax, b.row_sum(i));
        const double r = q * static_cast<double>(rmax);
        out.tail_bound = r < 1 ? tmax * static_cast<double>(n) * std::pow(r, series_depth + 1) / (1 - r)
                               : std::numeric_limits<double>::infinity();
    }
    return out;
}

PartitionFunction partition_function(const GroupoidTrace& tau, double beta, unsigned series_depth)
{
    std::vector<double> units;
    for (auto v : tau.unit_values())
        units.push_back(v.real());
    return partition_function(tau.groupoid().graph(), beta, units, series_depth);
}

KmsBetaState::KmsBetaState(const Groupoid& groupoid, double beta, GroupoidTrace tau, std::size_t cap)
    : groupoid_(groupoid), beta_(beta), tau_(std::move(tau)), cap_(cap)
{
    require_above_critical(groupoid_.graph(), beta_);
    rho_ = spectral_radius(vertex_matrix(groupoid_.graph()));
    z_ = partition_function(tau_, beta_).closed;
}

Complex KmsBetaState::stationary_sum(const MachineState& g) const
{
    TransferSystem ts = transfer_system(groupoid_, g, &tau_, cap_);
    const Eigen::Index n = static_cast<Eigen::Index>(ts.machine.states.size());
    const Eigen::MatrixXd m = to_dense(ts.m);
    std::vector<std::vector<double>> md(n, std::vector<double>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            md[i][j] = m(i, j);
    if (spectral_radius(md) > rho_ + 1e-9)
        throw Error(ErrorKind::SingularSystem, "stationary matrix has larger spectral radius than B");
    const double q = std::exp(-beta_);
    Eigen::VectorXd wr(n), wi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        wr(i) = ts.w[i].real();
        wi(i) = ts.w[i].imag();
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(n, n) - q * m);
    if (lu.rcond() > 1e-12) {
        const double re = lu.solve(wr)(0), im = lu.solve(wi)(0);
        return {re, im};
    }
    // ill-conditioned: sum the series until the geometric tail is negligible
    Eigen::VectorXd vr = wr, vi = wi;
    Complex total = 0.0;
    double weight = 1;
    for (unsigned k = 0; k < 100000; ++k) {
        total += weight * Complex(vr(0), vi(0));
        vr = m * vr;
        vi = m * vi;
        weight *= q;
        if (weight * std::pow(rho_, k + 1) * (vr.cwiseAbs().maxCoeff() + vi.cwiseAbs().maxCoeff() + 1) < 1e-17)
            break;
    }
    return total;
}

Complex KmsBetaState::evaluate(const SpanningElement& b) const
{
    if (b.kappa != b.lambda)
        return 0.0;
    return std::exp(-beta_ * static_cast<double>(b.kappa.length())) * stationary_sum(b.g) / z_;
}

StateFunctional KmsBetaState::functional() const
{
    auto self = std::make_shared<KmsBetaState>(*this);
    return {beta_, [self](const SpanningElement& b) { return self->evaluate(b); }};
}

Complex psi_beta(const Groupoid& groupoid, double beta, const GroupoidTrace& tau, const SpanningElement& b)
{
    return KmsBetaState(groupoid, beta, tau).evaluate(b);
}

CriticalStateTable critical_state(const Groupoid& groupoid, CriticalMethod method, unsigned k_max, double tol,
                                  const NucleusCaps& caps)
{
    const auto& graph = groupoid.graph();
    if (!is_strongly_connected(graph))
        throw Error(ErrorKind::NotStronglyConnected, "critical state needs a strongly connected graph");
    const IntMatrix b = vertex_matrix(graph);
    SpectralData pf = perron_frobenius(b);

    CriticalStateTable t;
    t.rho = pf.rho;
    t.x = pf.x;
    t.nucleus = compute_nucleus(groupoid, caps);
    t.method = method;
    const std::size_t n = t.nucleus.size();
    t.m.assign(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& s : t.nucleus.transitions[i])
            if (s.edge == s.image)
                ++t.m[i][s.target];

    std::vector<std::size_t> ids, others;
    for (std::size_t i = 0; i < n; ++i)
        (t.nucleus.states[i].is_trivial_word() ? ids : others).push_back(i);
    t.c.assign(n, 0.0);
    for (auto i : ids)
        t.c[i] = t.x[t.nucleus.states[i].d().value];

    if (method == CriticalMethod::Solve && !others.empty()) {
        const Eigen::Index k = static_cast<Eigen::Index>(others.size());
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(k, k);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
        for (Eigen::Index r = 0; r < k; ++r) {
            for (Eigen::Index col = 0; col < k; ++col)
                a(r, col) -= static_cast<double>(t.m[others[r]][others[col]]) / t.rho;
            for (auto i : ids)
                rhs(r) += static_cast<double>(t.m[others[r]][i]) * t.c[i] / t.rho;
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
        if (lu.rcond() < 1e-12) {
            t.singular_fallback = true;
            method = CriticalMethod::Iterate;
        } else {
            Eigen::VectorXd sol = lu.solve(rhs);
            for (Eigen::Index r = 0; r < k; ++r)
                t.c[others[r]] = sol(r);
        }
    }
    if (method == CriticalMethod::Iterate) {
        std::vector<double> y(n, 0.0);
        for (auto i : ids)
            y[i] = t.c[i];
        t.sequence.assign(n, {});
        for (std::size_t i = 0; i < n; ++i)
            t.sequence[i].push_back(y[i]);
        t.converged = others.empty();
        unsigned k = 0;
        while (!t.converged && k < k_max) {
            ++k;
            std::vector<double> next = y;
            double change = 0;
            for (auto i : others) {
                double s = 0;
                for (std::size_t j = 0; j < n; ++j)
                    if (t.m[i][j] != 0)
                        s += static_cast<double>(t.m[i][j]) * y[j];
                next[i] = s / t.rho;
                change = std::max(change, std::abs(next[i] - y[i]));
            }
            y = std::move(next);
            for (std::size_t i = 0; i < n; ++i)
                t.sequence[i].push_back(y[i]);
            t.converged = change < tol;
        }
        t.iterations = k;
        t.c = y;
    }
    return t;
}

std::vector<std::vector<std::int64_t>> stationary_power(const CriticalStateTable& table, unsigned k)
{
    auto out = identity_counts(table.m.size());
    for (unsigned i = 0; i < k; ++i)
        out = multiply_checked(out, table.m);
    return out;
}

namespace {

double pushdown(const Groupoid& groupoid, const CriticalStateTable& table, const MachineState& g, unsigned depth,
                unsigned max_depth, std::map<MachineState, double>& memo)
{
    if (auto it = memo.find(g); it != memo.end())
        return it->second;
    if (auto i = nucleus_member(groupoid, table.nucleus, g))
        return memo[g] = table.c[*i];
    if (depth >= max_depth)
        throw Error(ErrorKind::ClosureCapExceeded,
                    groupoid.name(g) + " does not reach the nucleus within " + std::to_string(max_depth) + " levels");
    double s = 0;
    for (auto e : groupoid.graph().edges_with_range(g.d())) {
        auto [image, rest] = groupoid.apply(g, e);
        if (image == e)
            s += pushdown(groupoid, table, rest, depth + 1, max_depth, memo);
    }
    return memo[g] = s / table.rho;
}

} // namespace

double critical_value(const Groupoid& groupoid, const CriticalStateTable& table, const MachineState& g,
                      unsigned max_depth)
{
    if (g.d() != g.c())
        return 0;
    std::map<MachineState, double> memo;
    return pushdown(groupoid, table, g, 0, max_depth, memo);
}

double psi_critical(const Groupoid& groupoid, const CriticalStateTable& table, const SpanningElement& b)
{
    if (b.kappa != b.lambda || b.g.d() != b.g.c() || b.g.d() != b.kappa.source())
        return 0;
    return std::pow(table.rho, -static_cast<double>(b.kappa.length())) * critical_value(groupoid, table, b.g);
}

StateFunctional critical_functional(const Groupoid& groupoid, const CriticalStateTable& table)
{
    auto t = std::make_shared<const CriticalStateTable>(table);
    return {std::log(table.rho), [groupoid, t](const SpanningElement& b) -> Complex {
                return psi_critical(groupoid, *t, b);
            }};
}

KmsReport verify_kms(const Groupoid& groupoid, const StateFunctional& phi, std::size_t samples, std::uint64_t seed,
                     double tol, const std::vector<MachineState>& extra_pool)
{
    const auto& graph = groupoid.graph();
    const double lr = log_rho(graph);
    if (phi.beta < lr - beta_margin)
        throw Error(ErrorKind::BelowCriticalRefused, "no KMS states exist for beta = " + std::to_string(phi.beta) +
                                                         " < ln rho(B) = " + std::to_string(lr));

    std::vector<MachineState> pool = groupoid.words_up_to(2);
    for (const auto& s : extra_pool)
        if (std::find(pool.begin(), pool.end(), s) == pool.end())
            pool.push_back(s);
    std::vector<MachineState> loops;
    for (const auto& s : pool)
        if (s.d() == s.c())
            loops.push_back(s);
    const std::vector<Path> paths = enumerate_all_paths(graph, 3);
    std::vector<std::vector<Path>> by_source(graph.vertex_count());
    for (const auto& p : paths)
        by_source[p.source().value].push_back(p);

    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    auto pick_with_c = [&](VertexId v) {
        std::vector<const MachineState*> cands;
        for (const auto& s : pool)
            if (s.c() == v)
                cands.push_back(&s);
        return *cands[pick(cands.size())];
    };
    auto loops_at = [&](VertexId v) {
        std::vector<const MachineState*> cands;
        for (const auto& s : loops)
            if (s.d() == v)
                cands.push_back(&s);
        return cands;
    };

    KmsReport report;
    report.samples = samples;
    auto value = [&](const std::optional<SpanningElement>& b) { return b ? phi(*b) : Complex(0.0); };
    auto record = [&](double residual, const std::string& what) {
        report.max_residual = std::max(report.max_residual, residual);
        if (!(residual <= tol))
            report.failures.push_back(what + " residual " + std::to_string(residual));
    };

    for (std::size_t s = 0; s < samples; ++s) {
        const MachineState& g = pool[pick(pool.size())];
        const Path kappa = by_source[g.c().value][pick(by_source[g.c().value].size())];
        const Path lambda = by_source[g.d().value][pick(by_source[g.d().value].size())];
        SpanningElement b{kappa, g, lambda};

        Path mu = lambda;
        switch (pick(3)) {
        case 0: {
            std::vector<const Path*> ext;
            for (const auto& p : paths)
                if (lambda.is_prefix_of(p))
                    ext.push_back(&p);
            mu = *ext[pick(ext.size())];
            break;
        }
        case 1:
            mu = graph.prefix(lambda, pick(lambda.length() + 1));
            break;
        default:
            mu = paths[pick(paths.size())];
        }
        const MachineState h = pick_with_c(mu.source());
        const Path nu = by_source[h.d().value][pick(by_source[h.d().value].size())];
        SpanningElement c{mu, h, nu};

        const Complex lhs = value(multiply(groupoid, b, c));
        const Complex rhs = std::exp(-phi.beta * static_cast<double>(b.degree())) * value(multiply(groupoid, c, b));
        ++report.kms_checks;
        record(std::abs(lhs - rhs), "kms " + format_spanning(groupoid, b) + " * " + format_spanning(groupoid, c));

        Complex expected = 0.0;
        if (b.kappa == b.lambda)
            expected = std::exp(-phi.beta * static_cast<double>(kappa.length())) * phi(unit_element(groupoid, g));
        ++report.spanning_checks;
        record(std::abs(phi(b) - expected), "spanning " + format_spanning(groupoid, b));

        const MachineState& x = loops[pick(loops.size())];
        auto partners = loops_at(x.d());
        const MachineState& y = *partners[pick(partners.size())];
        const Complex xy = phi(unit_element(groupoid, groupoid.compose(x, y)));
        const Complex yx = phi(unit_element(groupoid, groupoid.compose(y, x)));
        ++report.trace_checks;
        record(std::abs(xy - yx), "trace " + groupoid.name(x) + ", " + groupoid.name(y));
    }
    return report;
}

StateFunctional graph_case_state(const DirectedGraph& graph, double beta, const std::vector<double>& eps)
{
    require_above_critical(graph, beta);
    const IntMatrix b = vertex_matrix(graph);
    const Eigen::Index n = static_cast<Eigen::Index>(b.size());
    if (eps.size() != b.size())
        throw Error(ErrorKind::MissingContext, "epsilon needs one entry per vertex");
    Eigen::VectorXd e(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(eps[i] >= 0))
            throw Error(ErrorKind::NotNormalized, "epsilon must be non-negative");
        e(i) = eps[i];
    }
    Eigen::VectorXd m = (Eigen::MatrixXd::Identity(n, n) - std::exp(-beta) * to_dense(b)).partialPivLu().solve(e);
    if (std::abs(m.sum() - 1) > 1e-10)
        throw Error(ErrorKind::NotNormalized, "y^beta . epsilon = " + std::to_string(m.sum()));
    std::vector<double> mv(m.data(), m.data() + n);
    return {beta, [mv, beta](const SpanningElement& x) -> Complex {
                if (!x.g.is_trivial_word())
                    throw Error(ErrorKind::DomainMismatch, "graph-algebra state takes s_kappa s_lambda^* only");
                if (x.kappa != x.lambda)
                    return 0.0;
                return std::exp(-beta * static_cast<double>(x.kappa.length())) * mv[x.kappa.source().value];
            }};
}

KeyInequalityReport check_key_inequality(const Groupoid& groupoid, const MachineState& g, unsigned n_max,
                                         unsigned j_cap)
{
    const auto& graph = groupoid.graph();
    if (groupoid.is_identity(g))
        throw Error(ErrorKind::DomainMismatch, "key inequality needs a non-identity element");
    TransferSystem ts = transfer_system(groupoid, g, nullptr);
    const std::size_t n = ts.machine.states.size();
    std::vector<bool> identity(n);
    for (std::size_t i = 0; i < n; ++i)
        identity[i] = groupoid.is_identity(ts.machine.states[i]);

    KeyInequalityReport report;
    for (unsigned j = 1; j <= j_cap && report.j == 0; ++j) {
        bool all = true;
        for (std::size_t i = 0; i < n && all; ++i) {
            if (identity[i])
                continue;
            const MachineState& h = ts.machine.states[i];
            bool moved = false;
            for (const auto& nu : enumerate_paths(graph, h.d(), j)) {
                if (nu.source() != h.d())
                    continue;
                if (groupoid.apply(h, nu).first != nu) {
                    moved = true;
                    break;
                }
            }
            all = moved;
        }
        if (all)
            report.j = j;
    }
    if (report.j == 0)
        throw Error(ErrorKind::NoSeparationDepthFound, "no separation depth up to " + std::to_string(j_cap));

    const SpectralData pf = perron_frobenius(vertex_matrix(graph));
    auto mj = identity_counts(n);
    for (unsigned i = 0; i < report.j; ++i)
        mj = multiply_checked(mj, ts.m);
    auto power = identity_counts(n);
    for (unsigned k = 0; k <= n_max; ++k) {
        double lhs = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (!identity[i])
                lhs += static_cast<double>(power[0][i]) * pf.x[ts.machine.states[i].d().value];
        const double rhs = std::pow(std::pow(pf.rho, report.j) - 1, k);
        report.lhs.push_back(lhs);
        report.rhs.push_back(rhs);
        if (lhs > rhs + 1e-12)
            report.holds = false;
        power = multiply_checked(power, mj);
    }
    return report;
}

} // namespace ssg
