#include "ssg/fock.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "ssg/error.hpp"

namespace ssg {

PartialMap PartialMap::identity(std::size_t n)
{
    PartialMap m;
    m.image.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        m.image[i] = static_cast<int>(i);
    return m;
}

bool PartialMap::is_injective() const
{
    std::vector<bool> hit(image.size(), false);
    for (int j : image) {
        if (j < 0)
            continue;
        if (hit[static_cast<std::size_t>(j)])
            return false;
        hit[static_cast<std::size_t>(j)] = true;
    }
    return true;
}

PartialMap PartialMap::adjoint() const
{
    if (!is_injective())
        throw Error(ErrorKind::DomainMismatch, "adjoint of a non-injective 0/1 map is not a 0/1 map");
    PartialMap out;
    out.image.assign(image.size(), -1);
    for (std::size_t i = 0; i < image.size(); ++i)
        if (image[i] >= 0)
            out.image[static_cast<std::size_t>(image[i])] = static_cast<int>(i);
    return out;
}

PartialMap operator*(const PartialMap& a, const PartialMap& b)
{
    PartialMap out;
    out.image.resize(b.image.size());
    for (std::size_t i = 0; i < b.image.size(); ++i)
        out.image[i] = b.image[i] < 0 ? -1 : a.image[static_cast<std::size_t>(b.image[i])];
    return out;
}

PartialMap fock_unitary(const Groupoid& groupoid, const FockRep& rep, const MachineState& g)
{
    PartialMap m;
    m.image.assign(rep.basis.size(), -1);
    for (std::size_t i = 0; i < rep.basis.size(); ++i) {
        const Path& mu = rep.basis[i];
        if (mu.range() != g.d())
            continue;
        m.image[i] = rep.index.at(groupoid.apply(g, mu).first);
    }
    return m;
}

FockRep build_fock(const Groupoid& groupoid, unsigned depth, const std::vector<MachineState>& states)
{
    if (depth < 1)
        throw Error(ErrorKind::DomainMismatch, "Fock truncation depth must be at least 1");
    const auto& graph = groupoid.graph();
    FockRep rep;
    rep.depth = depth;
    rep.basis = enumerate_all_paths(graph, depth);
    for (std::size_t i = 0; i < rep.basis.size(); ++i)
        rep.index.emplace(rep.basis[i], static_cast<int>(i));
    const std::size_t n = rep.basis.size();
    for (auto v : graph.vertices()) {
        PartialMap p;
        p.image.assign(n, -1);
        for (std::size_t i = 0; i < n; ++i)
            if (rep.basis[i].range() == v)
                p.image[i] = static_cast<int>(i);
        rep.p.push_back(std::move(p));
    }
    for (auto e : graph.edges()) {
        PartialMap s;
        s.image.assign(n, -1);
        for (std::size_t i = 0; i < n; ++i) {
            const Path& mu = rep.basis[i];
            if (mu.length() < depth && mu.range() == graph.source(e))
                s.image[i] = rep.index.at(graph.concat(graph.make_path({e}), mu));
        }
        rep.s.push_back(std::move(s));
    }
    rep.states = states;
    for (const auto& g : states)
        rep.u.push_back(fock_unitary(groupoid, rep, g));
    return rep;
}

bool RelationReport::all_passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const RelationCheck& c) { return c.passed(); });
}

namespace {

// a and b agree on every basis vector of level < limit
bool agree_below(const FockRep& rep, const PartialMap& a, const PartialMap& b, int limit)
{
    for (std::size_t i = 0; i < rep.basis.size(); ++i)
        if (rep.level(static_cast<int>(i)) < limit && a.image[i] != b.image[i])
            return false;
    return true;
}

RelationCheck named(const char* name)
{
    RelationCheck c;
    c.name = name;
    return c;
}

PartialMap zero_map(std::size_t n)
{
    PartialMap z;
    z.image.assign(n, -1);
    return z;
}

} // namespace

RelationReport check_relations(const Groupoid& groupoid, const FockRep& rep)
{
    const auto& graph = groupoid.graph();
    const std::size_t n = rep.basis.size();
    const int top = static_cast<int>(rep.depth);
    const int all = top + 1;
    const PartialMap zero = zero_map(n);
    RelationReport report;
    auto check = [&](RelationCheck& c, bool ok, const std::string& what) {
        ++c.instances;
        if (!ok && c.failures++ == 0)
            c.first_failure = what;
    };

    RelationCheck proj = named("P_v are mutually orthogonal projections summing to 1");
    {
        std::vector<int> cover(n, 0);
        for (std::size_t v = 0; v < rep.p.size(); ++v) {
            const auto& p = rep.p[v];
            const std::string vn = graph.vertex_name(VertexId{static_cast<std::uint32_t>(v)});
            check(proj, p * p == p && p.is_injective() && p.adjoint() == p, "P_" + vn);
            for (std::size_t w = 0; w < rep.p.size(); ++w)
                if (w != v)
                    check(proj, rep.p[v] * rep.p[w] == zero, "P_" + vn + " P_w");
            for (std::size_t i = 0; i < n; ++i)
                if (p.image[i] >= 0)
                    ++cover[i];
        }
        check(proj, std::all_of(cover.begin(), cover.end(), [](int c) { return c == 1; }), "sum of P_v");
    }
    report.checks.push_back(proj);

    RelationCheck sts = named("S_e^* S_f = delta_{e,f} P_{s(e)}");
    for (auto e : graph.edges())
        for (auto f : graph.edges()) {
            bool ok = false;
            if (rep.s[e.value].is_injective()) {
                PartialMap lhs = rep.s[e.value].adjoint() * rep.s[f.value];
                ok = agree_below(rep, lhs, e == f ? rep.p[graph.source(e).value] : zero, top);
            }
            check(sts, ok, "e = " + graph.edge_name(e) + ", f = " + graph.edge_name(f));
        }
    report.checks.push_back(sts);

    RelationCheck range = named("P_v >= sum_{e in vE^1} S_e S_e^*");
    for (auto v : graph.vertices()) {
        std::vector<int> cover(n, 0);
        bool ok = true;
        for (auto e : graph.edges_with_range(v)) {
            if (!rep.s[e.value].is_injective()) {
                ok = false;
                break;
            }
            PartialMap q = rep.s[e.value] * rep.s[e.value].adjoint();
            for (std::size_t i = 0; i < n; ++i)
                if (q.image[i] >= 0) {
                    if (q.image[i] != static_cast<int>(i))
                        ok = false;
                    ++cover[i];
                }
        }
        for (std::size_t i = 0; i < n; ++i)
            if (cover[i] > 1 || (cover[i] == 1 && rep.p[v.value].image[i] < 0))
                ok = false;
        check(range, ok, "v = " + graph.vertex_name(v));
    }
    report.checks.push_back(range);

    RelationCheck level = named("U_g is a level-preserving bijection d(g)E^k -> c(g)E^k");
    for (std::size_t a = 0; a < rep.states.size(); ++a) {
        const auto& g = rep.states[a];
        const auto& u = rep.u[a];
        bool ok = u.is_injective();
        std::vector<std::size_t> dom(rep.depth + 1, 0), cod(rep.depth + 1, 0), hit(rep.depth + 1, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto k = rep.basis[i].length();
            if (rep.basis[i].range() == g.d())
                ++dom[k];
            if (rep.basis[i].range() == g.c())
                ++cod[k];
            if (u.image[i] >= 0) {
                const Path& img = rep.basis[static_cast<std::size_t>(u.image[i])];
                if (img.length() != k || img.range() != g.c())
                    ok = false;
                ++hit[k];
            } else if (rep.basis[i].range() == g.d()) {
                ok = false;
            }
        }
        ok = ok && dom == cod && hit == cod;
        check(level, ok, groupoid.name(g));
    }
    report.checks.push_back(level);

    RelationCheck product = named("U_g U_h = delta_{d(g),c(h)} U_{gh}");
    RelationCheck unitary = named("U_g U_{g^-1} = P_{c(g)}");
    RelationCheck cov = named("U_g S_e = S_{g.e} U_{g|_e}");
    RelationCheck proj_cov = named("U_g P_v = delta_{d(g),v} P_{c(g)} U_g");
    for (std::size_t a = 0; a < rep.states.size(); ++a) {
        const auto& g = rep.states[a];
        const auto& ug = rep.u[a];
        const std::string gn = groupoid.name(g);
        for (std::size_t b = 0; b < rep.states.size(); ++b) {
            const auto& h = rep.states[b];
            const PartialMap expected =
                g.d() == h.c() ? fock_unitary(groupoid, rep, groupoid.compose(g, h)) : zero;
            check(product, agree_below(rep, ug * rep.u[b], expected, all), gn + ", " + groupoid.name(h));
        }
        const PartialMap uinv = fock_unitary(groupoid, rep, groupoid.inverse(g));
        check(unitary, ug * uinv == rep.p[g.c().value], gn);
        for (auto e : graph.edges()) {
            PartialMap expected = zero;
            if (graph.range(e) == g.d()) {
                auto [image, rest] = groupoid.apply(g, e);
                expected = rep.s[image.value] * fock_unitary(groupoid, rep, rest);
            }
            check(cov, agree_below(rep, ug * rep.s[e.value], expected, top), gn + ", e = " + graph.edge_name(e));
        }
        for (auto v : graph.vertices()) {
            const PartialMap expected = v == g.d() ? rep.p[g.c().value] * ug : zero;
            check(proj_cov, ug * rep.p[v.value] == expected, gn + ", v = " + graph.vertex_name(v));
        }
    }
    report.checks.push_back(product);
    report.checks.push_back(unitary);
    report.checks.push_back(cov);
    report.checks.push_back(proj_cov);
    return report;
}

BruteForceValue psi_bruteforce(const Groupoid& groupoid, double beta, const GroupoidTrace& tau,
                               const SpanningElement& b, unsigned depth)
{
    const auto& graph = groupoid.graph();
    const IntMatrix bm = vertex_matrix(graph);
    if (!is_irreducible(bm))
        throw Error(ErrorKind::NotIrreducible, "tail bound needs an irreducible vertex matrix");
    const SpectralData pf = perron_frobenius(bm);
    if (!(beta > std::log(pf.rho) + 1e-9))
        throw Error(ErrorKind::BetaAtOrBelowCritical,
                    "beta = " + std::to_string(beta) + " but ln rho(B) = " + std::to_string(std::log(pf.rho)));
    BruteForceValue out;
    out.depth = depth;
    if (b.kappa != b.lambda)
        return out;

    const double q = std::exp(-beta);
    // f(g, k) = sum over stationary nu in d(g)E^{<=k} of q^{|nu|} tau(i_{g|_nu})
    std::map<std::pair<MachineState, unsigned>, Complex> memo;
    std::function<Complex(const MachineState&, unsigned)> f = [&](const MachineState& g, unsigned k) -> Complex {
        auto key = std::make_pair(g, k);
        if (auto it = memo.find(key); it != memo.end())
            return it->second;
        Complex s = tau.evaluate(g);
        if (k > 0)
            for (auto e : graph.edges_with_range(g.d())) {
                auto [image, rest] = groupoid.apply(g, e);
                if (image == e)
                    s += q * f(rest, k - 1);
            }
        memo.emplace(std::move(key), s);
        return s;
    };
    const Complex sl = f(b.g, depth);
    double zl = 0;
    for (auto v : graph.vertices())
        zl += f(groupoid.identity(v), depth).real();

    const double xmin = *std::min_element(pf.x.begin(), pf.x.end());
    const double r = q * pf.rho;
    const double geometric = std::pow(r, depth + 1) / (1 - r);
    const double tmax = tau.magnitude_bound();
    const double tail_s = tmax * pf.x[b.g.d().value] / xmin * geometric;
    const double tail_z = tmax / xmin * geometric;
    const double scale = std::pow(q, static_cast<double>(b.kappa.length()));
    out.value = scale * sl / zl;
    out.tail_bound = scale * (tail_s / zl + std::abs(sl) * tail_z / (zl * zl));
    return out;
}

} // namespace ssg
