// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ssg/document.hpp"
#include "ssg/fock.hpp"
#include "ssg/kms.hpp"
#include "ssg/nucleus.hpp"
#include "ssg/spectral.hpp"

using namespace ssg;

namespace {

const double r2 = std::sqrt(2.0);

// Collects failed expectations for one criterion.
struct Checks {
    std::vector<std::string> failed;
    std::size_t count = 0;

    void expect(bool ok, const std::string& what)
    {
        ++count;
        if (!ok)
            failed.push_back(what);
    }
    void near(double got, double want, double tol, const std::string& what)
    {
        std::ostringstream s;
        s.precision(15);
        s << what << ": got " << got << ", want " << want << " +- " << tol;
        expect(std::abs(got - want) <= tol, s.str());
    }
};

struct Fx {
    ProjectDocument doc;
    Groupoid g;
    explicit Fx(const std::string& name)
        : doc(load_document_file(std::string(SSG_DATA_DIR) + "/" + name + ".json")), g(doc.groupoid())
    {
    }
    double log_rho() const { return std::log(perron_frobenius(vertex_matrix(*doc.graph)).rho); }
    Path path(const char* t) const { return doc.graph->parse_path(t); }
};

const char* fixtures[] = {"example3", "katsura", "basilica"};

std::vector<Path> paths_from(const DirectedGraph& graph, VertexId v, unsigned max_len)
{
    std::vector<Path> out;
    for (const auto& p : enumerate_all_paths(graph, max_len))
        if (p.source() == v)
            out.push_back(p);
    return out;
}

MachineState random_word(const Groupoid& g, std::mt19937_64& rng, std::size_t max_len)
{
    const auto& a = g.automaton();
    const std::size_t len = rng() % (max_len + 1);
    MachineState w = g.identity(VertexId{static_cast<std::uint32_t>(rng() % g.graph().vertex_count())});
    for (std::size_t i = 0; i < len; ++i) {
        std::vector<MachineState> cands;
        for (std::uint32_t s = 0; s < a.state_count(); ++s)
            for (bool inv : {false, true}) {
                MachineState l = g.generator(s, inv);
                if (l.c() == w.d())
                    cands.push_back(l);
            }
        if (cands.empty())
            break;
        w = g.compose(w, cands[rng() % cands.size()]);
    }
    return w;
}

Path random_path(const DirectedGraph& graph, VertexId v, std::mt19937_64& rng, std::size_t max_len)
{
    const std::size_t len = rng() % (max_len + 1);
    Path p = graph.empty_path(v);
    for (std::size_t i = 0; i < len; ++i) {
        const auto& es = graph.edges_with_range(p.source());
        p = graph.extend(p, es[rng() % es.size()]);
    }
    return p;
}

std::vector<double> random_weights(std::size_t n, std::mt19937_64& rng)
{
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> w(n);
    double total = 0;
    for (auto& x : w)
        total += x = ex(rng);
    for (auto& x : w)
        x /= total;
    // land exactly on 1 so vertex_weights accepts it
    double rest = 1.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        rest -= w[i];
    w.back() = rest;
    return w;
}

// 1. two-vertex example end to end
void example3_pipeline(Checks& c)
{
    Fx f("example3");
    Nucleus n = compute_nucleus(f.g);
    c.expect(n.size() == 6, "nucleus size " + std::to_string(n.size()));
    std::set<std::size_t> hit;
    for (const char* w : {"id:v", "id:w", "a", "a^-1", "b", "b^-1"}) {
        auto m = nucleus_member(f.g, n, f.g.resolve(w));
        c.expect(m.has_value(), std::string(w) + " in nucleus");
        if (m)
            hit.insert(*m);
    }
    c.expect(hit.size() == 6, "the six expected elements are pairwise distinct members");

    // expected Moore diagram as (from, to, edge, image)
    const std::set<std::tuple<std::string, std::string, std::string, std::string>> expected{
        {"id_v", "id_v", "1", "1"}, {"id_v", "id_w", "2", "2"},   {"id_w", "id_v", "3", "3"},
        {"id_w", "id_v", "4", "4"}, {"f_a", "id_v", "1", "4"},    {"f_a", "f_b", "2", "3"},
        {"f_a^-1", "f_b^-1", "3", "2"}, {"f_a^-1", "id_v", "4", "1"}, {"f_b", "id_v", "3", "1"},
        {"f_b", "f_a", "4", "2"},   {"f_b^-1", "id_v", "1", "3"}, {"f_b^-1", "f_a^-1", "2", "4"}};
    MooreDiagram m = moore_diagram(f.g, n);
    std::set<std::tuple<std::string, std::string, std::string, std::string>> got;
    for (const auto& e : m.edges)
        got.insert({m.names[e.from], m.names[e.to], f.doc.graph->edge_name(e.edge), f.doc.graph->edge_name(e.image)});
    c.expect(m.edges.size() == 12, "Moore diagram has " + std::to_string(m.edges.size()) + " edges");
    c.expect(got == expected, "Moore edges match edge for edge");

    SpectralData s = perron_frobenius(vertex_matrix(*f.doc.graph));
    c.near(s.rho, 2.0, 1e-12, "rho");
    c.near(s.x[0], 0.5, 1e-12, "x_v");
    c.near(s.x[1], 0.5, 1e-12, "x_w");

    CriticalStateTable t = critical_state(f.g, CriticalMethod::Solve);
    const std::vector<std::pair<const char*, double>> want{{"id:v", 0.5}, {"id:w", 0.5}, {"a", 0},
                                                           {"a^-1", 0},   {"b", 0},      {"b^-1", 0}};
    for (const auto& [w, v] : want)
        c.near(t.c[*nucleus_member(f.g, t.nucleus, f.g.resolve(w))], v, 1e-12, std::string("c_") + w);
}

// 2. Katsura example end to end
void katsura_pipeline(Checks& c)
{
    Fx f("katsura");
    SpectralData s = perron_frobenius(vertex_matrix(*f.doc.graph));
    c.near(s.rho, 2 + r2, 1e-10, "rho");
    c.near(s.x[0], r2 - 1, 1e-10, "x_1");
    c.near(s.x[1], 2 - r2, 1e-10, "x_2");

    CriticalStateTable solve = critical_state(f.g, CriticalMethod::Solve);
    CriticalStateTable iter = critical_state(f.g, CriticalMethod::Iterate, 60);
    c.expect(iter.iterations <= 60, "iteration used k <= 60");
    auto c_of = [&](const CriticalStateTable& t, const char* w) {
        return t.c[*nucleus_member(f.g, t.nucleus, f.g.resolve(w))];
    };
    for (const auto* t : {&solve, &iter}) {
        const std::string m = t == &solve ? "solve " : "iterate ";
        c.near(c_of(*t, "a1"), 3 - 2 * r2, 1e-9, m + "c_a1");
        c.near(c_of(*t, "a1^-1"), 3 - 2 * r2, 1e-9, m + "c_a1^-1");
        c.near(c_of(*t, "a2"), 10 - 7 * r2, 1e-9, m + "c_a2");
        c.near(c_of(*t, "a2^-1"), 10 - 7 * r2, 1e-9, m + "c_a2^-1");
    }
    for (std::size_t i = 0; i < solve.c.size(); ++i)
        c.near(solve.c[i], iter.c[i], 1e-9, "methods agree on " + f.g.name(solve.nucleus.states[i]));

    const IntMatrix a{{2, 1}, {2, 2}};
    const std::size_t ia1 = *nucleus_member(f.g, solve.nucleus, f.g.resolve("a1"));
    for (unsigned k = 1; k <= 8; ++k) {
        auto mk = stationary_power(solve, k);
        const IntMatrix ak = a.power(k - 1);
        for (std::uint32_t v = 0; v < 2; ++v)
            c.expect(mk[ia1][solve.nucleus.identity_index(VertexId{v})] == ak(1, v),
                     "|F^" + std::to_string(k) + "(" + std::to_string(v + 1) + ")|");
    }
}

// 3. c_{g,k} increases to c_g < x_{d(g)}
void monotonicity(Checks& c)
{
    for (const char* name : {"example3", "katsura"}) {
        Fx f(name);
        CriticalStateTable t = critical_state(f.g, CriticalMethod::Iterate);
        c.expect(t.converged, std::string(name) + " iteration converged");
        for (std::size_t i = 0; i < t.nucleus.size(); ++i) {
            const MachineState& g = t.nucleus.states[i];
            if (g.is_trivial_word())
                continue;
            const std::string label = std::string(name) + " " + f.g.name(g);
            bool mono = true;
            for (std::size_t k = 1; k < t.sequence[i].size(); ++k)
                mono = mono && t.sequence[i][k] >= t.sequence[i][k - 1];
            c.expect(mono, label + " c_{g,k} nondecreasing");
            c.expect(t.c[i] < t.x[g.d().value] - 1e-12, label + " c_g < x_d(g)");
        }
    }
}

// 4. KMS condition above and at the critical temperature
void kms_condition(Checks& c)
{
    for (const char* name : fixtures) {
        Fx f(name);
        KmsBetaState above(f.g, f.log_rho() + 0.5, resolve_trace(f.doc, "tau_x"));
        KmsReport ra = verify_kms(f.g, above.functional(), 200, 1);
        c.expect(ra.passed() && ra.max_residual <= 1e-9, std::string(name) + " psi_{beta,tau_x}: residual " +
                                                               std::to_string(ra.max_residual));
        CriticalStateTable t = critical_state(f.g, CriticalMethod::Solve);
        KmsReport rc = verify_kms(f.g, critical_functional(f.g, t), 200, 1, 1e-9, t.nucleus.states);
        c.expect(rc.passed() && rc.max_residual <= 1e-9,
                 std::string(name) + " psi_critical: residual " + std::to_string(rc.max_residual));
    }
}

// 5. Bm = rho m and the vertex projection splits over edges
void factoring(Checks& c)
{
    for (const char* name : fixtures) {
        Fx f(name);
        CriticalStateTable t = critical_state(f.g, CriticalMethod::Solve);
        const auto& graph = *f.doc.graph;
        const IntMatrix b = vertex_matrix(graph);
        std::vector<double> m;
        for (VertexId v : graph.vertices())
            m.push_back(psi_critical(f.g, t, vertex_projection(f.g, v)));
        for (VertexId v : graph.vertices()) {
            const std::string label = std::string(name) + " at " + graph.vertex_name(v);
            double bm = 0, split = 0;
            for (VertexId w : graph.vertices())
                bm += static_cast<double>(b(v.value, w.value)) * m[w.value];
            c.near(bm, t.rho * m[v.value], 1e-10, label + " (Bm)_v");
            for (EdgeId e : graph.edges_with_range(v)) {
                Path p = graph.make_path({e});
                split += psi_critical(f.g, t, make_spanning(f.g, p, f.g.identity(p.source()), p));
            }
            c.near(split, m[v.value], 1e-10, label + " sum of psi(s_e s_e*)");
        }
    }
}

// 6. partition function
void partition(Checks& c)
{
    Fx e("example3");
    c.near(partition_function(resolve_trace(e.doc, "tau_x"), std::log(4.0)).closed, 2.0, 1e-10, "Z(ln 4, tau_x)");
    for (const char* name : fixtures) {
        Fx f(name);
        std::mt19937_64 rng(6);
        std::vector<GroupoidTrace> named{resolve_trace(f.doc, "tau_x"), resolve_trace(f.doc, "tau_e_normalized"),
                                         resolve_trace(f.doc, "tau_1_normalized")};
        for (int i = 0; i < 20; ++i) {
            const double beta = f.log_rho() + 0.2 + 2.0 * std::uniform_real_distribution<double>()(rng);
            GroupoidTrace tau = i < 3 ? named[static_cast<std::size_t>(i)]
                                      : GroupoidTrace::vertex_weights(
                                            f.g, random_weights(f.doc.graph->vertex_count(), rng));
            PartitionFunction z = partition_function(tau, beta, 40);
            c.expect(std::abs(z.closed - z.series) <= z.tail_bound + 1e-12,
                     std::string(name) + " closed vs series at beta " + std::to_string(beta));
        }
    }
}

// 7. the identity groupoid reproduces the graph-algebra states
void graph_case(Checks& c)
{
    Fx f("example3");
    Groupoid id(std::make_shared<const EAutomaton>(
        load_automaton({{"states", nlohmann::json::array()}, {"transitions", nlohmann::json::array()}}, f.doc.graph)));
    const double ln4 = std::log(4.0);
    // eps with Z = 1: (I - B/4)^-1 eps sums to 1
    const std::vector<double> eps{0.25, 0.25};
    StateFunctional phi = graph_case_state(*f.doc.graph, ln4, eps);
    KmsBetaState psi(id, ln4, GroupoidTrace::vertex_weights(id, {0.5, 0.5}));
    double worst = 0;
    std::size_t pairs = 0;
    const auto paths = enumerate_all_paths(*f.doc.graph, 3);
    for (const auto& kappa : paths)
        for (const auto& lambda : paths)
            if (kappa.source() == lambda.source()) {
                SpanningElement b = make_spanning(id, kappa, id.identity(kappa.source()), lambda);
                worst = std::max(worst, std::abs(phi(b) - psi.evaluate(b)));
                ++pairs;
            }
    c.expect(pairs > 0, "pairs enumerated");
    c.expect(worst <= 1e-10, "max |phi_eps - psi| = " + std::to_string(worst) + " over " + std::to_string(pairs));
}

// 8. Fock-space relations and brute-force psi
void oracle(Checks& c)
{
    for (const char* name : fixtures) {
        Fx f(name);
        FockRep rep = build_fock(f.g, 5, compute_nucleus(f.g).states);
        RelationReport r = check_relations(f.g, rep);
        for (const auto& chk : r.checks)
            c.expect(chk.passed() && chk.instances > 0, std::string(name) + ": " + chk.name + " " + chk.first_failure);

        std::vector<GroupoidTrace> traces{resolve_trace(f.doc, "tau_x"), resolve_trace(f.doc, "tau_e_normalized"),
                                          resolve_trace(f.doc, "tau_1_normalized")};
        for (const auto& [tname, spec] : f.doc.traces)
            traces.push_back(make_trace(f.g, spec));
        auto words = f.g.words_up_to(3);
        std::mt19937_64 rng(8);
        for (int i = 0; i < 50; ++i) {
            const GroupoidTrace& tau = traces[rng() % traces.size()];
            const double beta = f.log_rho() + 0.4 + 1.5 * std::uniform_real_distribution<double>()(rng);
            const MachineState& w = words[rng() % words.size()];
            auto kap = paths_from(*f.doc.graph, w.c(), 2);
            auto lam = paths_from(*f.doc.graph, w.d(), 2);
            Path kappa = kap[rng() % kap.size()];
            // half the time a diagonal element, where psi is usually nonzero
            Path lambda = (w.c() == w.d() && rng() % 2) ? kappa : lam[rng() % lam.size()];
            SpanningElement b = make_spanning(f.g, kappa, w, lambda);
            BruteForceValue bf = psi_bruteforce(f.g, beta, tau, b, 16);
            const Complex closed = psi_beta(f.g, beta, tau, b);
            c.expect(std::abs(bf.value - closed) <= bf.tail_bound + 1e-12,
                     std::string(name) + " psi_bruteforce at " + format_spanning(f.g, b));
        }
    }
}

// 9. word calculus
void groupoid_calculus(Checks& c)
{
    Fx f("example3");
    const auto& gr = *f.doc.graph;
    MachineState ba = f.g.resolve("b.a");
    MachineState idv = f.g.resolve("id:v");
    for (long k = 1; k <= 10; ++k) {
        MachineState p = f.g.power(ba, k);
        EqualityResult r = f.g.equal(p, idv);
        const std::string label = "(f_b f_a)^" + std::to_string(k);
        c.expect(!r.equal && r.witness.has_value(), label + " distinct with witness");
        if (r.witness)
            c.expect(f.g.apply(p, *r.witness).first != *r.witness, label + " witness moves");
    }
    auto [img, res] = f.g.apply(ba, f.path("1"));
    c.expect(gr.format_path(img) == "2", "(f_b f_a).1 = 2");
    c.expect(f.g.equivalent(res, f.g.resolve("a")), "(f_b f_a)|_1 ~ f_a");
    c.expect(gr.format_path(f.g.apply(f.g.power(ba, 4), f.path("1.1.1")).first) == "1.1.2",
             "(f_b f_a)^4.(1.1.1) = 1.1.2");

    for (const char* name : fixtures) {
        Fx x(name);
        const auto& g = x.g;
        const auto& graph = *x.doc.graph;
        std::mt19937_64 rng(9);
        std::size_t bad = 0;
        for (int sample = 0; sample < 500; ++sample) {
            MachineState w = random_word(g, rng, 4);
            Path mu = random_path(graph, w.d(), rng, 4);
            Path nu = random_path(graph, mu.source(), rng, 3);
            auto [wmu, w_mu] = g.apply(w, mu);
            auto [wmunu, w_munu] = g.apply(w, graph.concat(mu, nu));
            auto [head, head_res] = g.apply(w_mu, nu);
            bool ok = wmu.length() == mu.length() && w_mu.d() == mu.source() && w_mu.c() == wmu.source() &&
                      wmunu == graph.concat(wmu, head) && g.equivalent(w_munu, head_res);
            MachineState h = random_word(g, rng, 3);
            if (h.d() == w.c()) {
                auto [hwmu, hw_mu] = g.apply(g.compose(h, w), mu);
                auto [hw, h_wmu] = g.apply(h, wmu);
                ok = ok && hwmu == hw && g.equivalent(hw_mu, g.compose(h_wmu, w_mu));
            }
            Path back = random_path(graph, w.c(), rng, 4);
            auto [wib, wi_b] = g.apply(g.inverse(w), back);
            auto [round, w_wib] = g.apply(w, wib);
            ok = ok && round == back && g.equivalent(wi_b, g.inverse(w_wib));
            bad += !ok;
        }
        c.expect(bad == 0, std::string(name) + ": " + std::to_string(bad) + " of 500 pairs break a restriction law");
    }
}

// 10. key inequality spot check
void key_inequality(Checks& c)
{
    Fx e("example3");
    Fx k("katsura");
    for (auto [fx, word] : {std::pair<Fx*, const char*>{&e, "b.a"}, {&k, "a2.a2"}}) {
        KeyInequalityReport r = check_key_inequality(fx->g, fx->g.resolve(word), 3);
        c.expect(r.lhs.size() == 4, std::string(word) + " covers n = 0..3");
        c.expect(r.holds, std::string(word) + " inequality holds with j = " + std::to_string(r.j));
        for (std::size_t n = 0; n < r.lhs.size(); ++n)
            c.expect(r.lhs[n] <= r.rhs[n] + 1e-12, std::string(word) + " n = " + std::to_string(n) + ": " +
                                                       std::to_string(r.lhs[n]) + " vs " + std::to_string(r.rhs[n]));
    }
}

// 11. single-vertex basilica automaton
void basilica(Checks& c)
{
    Fx f("basilica");
    c.expect(f.doc.graph->vertex_count() == 1, "single vertex");
    Nucleus n = compute_nucleus(f.g);
    c.expect(n.size() > 0, "contracting: nucleus found");
    c.expect(verify_certificates(f.g, n, 6) == 0, "contraction certificates hold");
    CriticalStateTable t = critical_state(f.g, CriticalMethod::Solve);
    c.near(t.rho, 2.0, 1e-12, "rho");
    c.near(critical_value(f.g, t, f.g.resolve("id:o")), 1.0, 1e-12, "c_id");
    StateFunctional phi = critical_functional(f.g, t);
    c.near(phi.beta, std::log(2.0), 1e-12, "beta");
    KmsReport r = verify_kms(f.g, phi, 200, 11, 1e-9, n.states);
    c.expect(r.passed() && r.max_residual <= 1e-9, "verify_kms residual " + std::to_string(r.max_residual));
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<void(Checks&)>>> criteria{
        {"two-vertex example pipeline", example3_pipeline},
        {"Katsura pipeline", katsura_pipeline},
        {"monotone convergence and bounds of c_{g,k}", monotonicity},
        {"KMS condition above and at critical beta", kms_condition},
        {"factoring criterion at critical beta", factoring},
        {"partition function", partition},
        {"graph-algebra consistency", graph_case},
        {"Fock relations and brute-force psi", oracle},
        {"groupoid calculus", groupoid_calculus},
        {"key inequality", key_inequality},
        {"basilica regression", basilica},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Checks c;
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            criteria[i].second(c);
        } catch (const std::exception& ex) {
            error = ex.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool ok = error.empty() && c.failed.empty() && c.count > 0 && secs < 10;
        failed += !ok;
        std::printf("%s %2zu %s (%zu checks, %.2fs)\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first, c.count,
                    secs);
        if (!error.empty())
            std::printf("     exception: %s\n", error.c_str());
        for (const auto& f : c.failed)
            std::printf("     %s\n", f.c_str());
        if (secs >= 10)
            std::printf("     took longer than 10 s\n");
    }
    return failed == 0 ? 0 : 1;
}
