// ssgkms: command-line front end over the ssg library.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ssg/document.hpp"
#include "ssg/error.hpp"
#include "ssg/fock.hpp"
#include "ssg/kms.hpp"
#include "ssg/nucleus.hpp"
#include "ssg/spectral.hpp"

namespace {

using namespace ssg;

enum Exit { Ok = 0, ValidationFailure = 1, ComputationFailure = 2, UsageFailure = 3 };

std::string exact(double x)
{
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

std::string num(double x)
{
    if (std::abs(x) < 5e-13)
        x = 0.0;  // avoid printing -0 and rounding noise
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

std::string num(Complex z)
{
    if (std::abs(z.imag()) < 5e-13)
        return num(z.real());
    std::string im = num(std::abs(z.imag()));
    return num(z.real()) + (z.imag() < 0 ? " - " : " + ") + im + "i";
}

std::string join(const std::vector<double>& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i)
        out += (i ? ", " : "") + num(xs[i]);
    return out;
}

void write_output(const std::string& text, const std::string& path)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorKind::ParseError, "cannot write " + path);
    out << text;
}

IntMatrix parse_matrix(const std::string& text)
{
    std::vector<std::vector<std::int64_t>> rows;
    std::stringstream rs(text);
    std::string row;
    while (std::getline(rs, row, ';')) {
        rows.emplace_back();
        std::stringstream cs(row);
        std::string cell;
        while (std::getline(cs, cell, ',')) {
            try {
                std::size_t used = 0;
                rows.back().push_back(std::stoll(cell, &used));
                if (cell.find_first_not_of(" \t", used) != std::string::npos)
                    throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw Error(ErrorKind::InvalidMatrices, "bad matrix entry '" + cell + "'");
            }
        }
    }
    const std::size_t n = rows.size();
    IntMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n)
            throw Error(ErrorKind::InvalidMatrices, "matrix must be square: '" + text + "'");
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

struct BetaChoice {
    bool critical = false;
    double value = 0;
};

BetaChoice parse_beta(const std::string& text, double log_rho)
{
    if (text == "critical")
        return {true, log_rho};
    double b = 0;
    try {
        std::size_t used = 0;
        b = std::stod(text, &used);
        if (used != text.size())
            throw std::invalid_argument(text);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--beta", "expected a number or 'critical', got '" + text + "'");
    }
    return {std::abs(b - log_rho) <= 1e-9, b};
}

int cmd_validate(const std::string& file)
{
    ProjectDocument doc = load_document_file(file);
    Groupoid g = doc.groupoid();
    std::cout << "valid: " << doc.graph->vertex_count() << " vertices, " << doc.graph->edge_count() << " edges, "
              << doc.automaton->state_count() << " states";
    if (!doc.traces.empty())
        std::cout << ", " << doc.traces.size() << " traces";
    if (!doc.elements.empty())
        std::cout << ", " << doc.elements.size() << " elements";
    std::cout << "\n";
    return Ok;
}

int cmd_nucleus(const std::string& file, std::size_t max_states, unsigned probe_depth)
{
    ProjectDocument doc = load_document_file(file);
    Groupoid g = doc.groupoid();
    NucleusCaps caps;
    caps.max_states = max_states;
    caps.probe_depth = probe_depth;
    Nucleus n = compute_nucleus(g, caps);
    const auto cyclic = is_minimal_on_cycles(n);
    unsigned depth = 0;
    for (const auto& c : n.certificates)
        depth = std::max(depth, c.depth);
    std::cout << "nucleus: " << n.size() << " states (certificate depth " << depth << ")\n";
    for (std::size_t i = 0; i < n.size(); ++i)
        std::cout << "  " << g.name(n.states[i]) << "  " << doc.graph->vertex_name(n.states[i].d()) << " -> "
                  << doc.graph->vertex_name(n.states[i].c()) << (cyclic[i] ? "" : "  (transient)") << "\n";
    return Ok;
}

int cmd_moore(const std::string& file, const std::string& format, const std::string& out)
{
    ProjectDocument doc = load_document_file(file);
    Groupoid g = doc.groupoid();
    MooreDiagram m = moore_diagram(g, compute_nucleus(g));
    if (format == "dot")
        write_output(export_dot(m, *doc.graph), out);
    else
        write_output(export_moore_json(m, *doc.graph).dump(2) + "\n", out);
    return Ok;
}

int cmd_spectral(const std::string& file, double tol)
{
    ProjectDocument doc = load_document_file(file);
    SpectralData s = perron_frobenius(vertex_matrix(*doc.graph), tol);
    std::cout << "rho " << num(s.rho) << ", x = " << join(s.x) << "\n";
    std::cout << "residual " << exact(s.residual) << ", iterations " << s.iterations << "\n";
    return Ok;
}

int cmd_orbits(const std::string& file)
{
    ProjectDocument doc = load_document_file(file);
    Groupoid g = doc.groupoid();
    OrbitData o = g.orbits();
    for (std::size_t c = 0; c < o.components.size(); ++c) {
        std::cout << "component " << c << " (base " << doc.graph->vertex_name(o.base[c]) << "):";
        for (VertexId v : o.components[c])
            std::cout << " " << doc.graph->vertex_name(v) << " [" << g.name(o.transversal[v.value]) << "]";
        std::cout << "\n";
    }
    return Ok;
}

int cmd_equal(const std::string& file, const std::string& w1, const std::string& w2, std::size_t cap)
{
    ProjectDocument doc = load_document_file(file);
    Groupoid g = doc.groupoid();
    EqualityResult r = g.equal(resolve_word(doc, w1), resolve_word(doc, w2), cap);
    if (r.equal)
        std::cout << "Equal\n";
    else if (r.witness)
        std::cout << "Distinct (witness: " << doc.graph->format_path(*r.witness) << ")\n";
    else
        std::cout << "Distinct\n";
    return Ok;
}

int cmd_order(const std::string& file, const std::string& word, unsigned cap)
{
    ProjectDocument doc = load_document_file(file);
    Groupoid g = doc.groupoid();
    auto n = g.order(resolve_word(doc, word), cap);
    if (n)
        std::cout << "order " << *n << "\n";
    else
        std::cout << "order exceeds " << cap << "\n";
    return Ok;
}

int cmd_kms(const std::string& file, const std::string& beta_text, const std::string& trace,
            const std::string& element)
{
    ProjectDocument doc = load_document_file(file);
    Groupoid g = doc.groupoid();
    const double rho = perron_frobenius(vertex_matrix(*doc.graph)).rho;
    BetaChoice beta = parse_beta(beta_text, std::log(rho));
    SpanningElement b = resolve_element(doc, element);
    if (beta.critical) {
        CriticalStateTable t = critical_state(g, CriticalMethod::Solve);
        std::cout << "beta " << num(beta.value) << " (critical)\n";
        std::cout << "psi(" << format_spanning(g, b) << ") = " << num(psi_critical(g, t, b)) << "\n";
        return Ok;
    }
    KmsBetaState state(g, beta.value, resolve_trace(doc, trace));
    std::cout << "beta " << num(beta.value) << ", Z = " << num(state.partition()) << "\n";
    std::cout << "psi(" << format_spanning(g, b) << ") = " << num(state.evaluate(b)) << "\n";
    return Ok;
}

int cmd_kms_critical(const std::string& file, const std::string& method)
{
    ProjectDocument doc = load_document_file(file);
    Groupoid g = doc.groupoid();
    CriticalStateTable t = critical_state(g, method == "iterate" ? CriticalMethod::Iterate : CriticalMethod::Solve);
    std::cout << "rho " << num(t.rho) << ", method " << method;
    if (t.singular_fallback)
        std::cout << " (singular system, iterated)";
    if (t.method == CriticalMethod::Iterate)
        std::cout << ", iterations " << t.iterations << (t.converged ? "" : " (not converged)");
    std::cout << "\n";
    for (std::size_t i = 0; i < t.nucleus.size(); ++i)
        std::cout << "  " << g.name(t.nucleus.states[i]) << "  " << num(t.c[i]) << "\n";
    std::cout << "c = " << join(t.c) << "\n";
    return t.converged ? Ok : ComputationFailure;
}

int cmd_check_kms(const std::string& file, const std::string& beta_text, std::size_t samples, std::uint64_t seed,
                  const std::string& trace)
{
    ProjectDocument doc = load_document_file(file);
    Groupoid g = doc.groupoid();
    const double rho = perron_frobenius(vertex_matrix(*doc.graph)).rho;
    BetaChoice beta = parse_beta(beta_text, std::log(rho));
    KmsReport r;
    if (beta.critical) {
        CriticalStateTable t = critical_state(g, CriticalMethod::Solve);
        r = verify_kms(g, critical_functional(g, t), samples, seed, 1e-9, t.nucleus.states);
    } else {
        KmsBetaState state(g, beta.value, resolve_trace(doc, trace));
        r = verify_kms(g, state.functional(), samples, seed);
    }
    std::cout << "beta " << num(beta.value) << (beta.critical ? " (critical)" : "") << ": " << r.samples
              << " samples, " << r.kms_checks << " KMS checks, " << r.spanning_checks << " spanning checks, "
              << r.trace_checks << " trace checks\n";
    std::cout << "max residual " << exact(r.max_residual) << "\n";
    for (const auto& f : r.failures)
        std::cout << "  failure: " << f << "\n";
    std::cout << (r.passed() ? "PASS" : "FAIL") << "\n";
    return r.passed() ? Ok : ValidationFailure;
}

int cmd_fock_check(const std::string& file, unsigned depth)
{
    ProjectDocument doc = load_document_file(file);
    Groupoid g = doc.groupoid();
    Nucleus n = compute_nucleus(g);
    FockRep rep = build_fock(g, depth, n.states);
    RelationReport r = check_relations(g, rep);
    std::cout << "Fock space depth " << depth << ": dimension " << rep.basis.size() << ", " << n.size()
              << " unitaries\n";
    for (const auto& c : r.checks) {
        std::cout << "  " << (c.passed() ? "ok   " : "FAIL ") << c.name << "  (" << c.instances << " instances";
        if (!c.passed())
            std::cout << ", " << c.failures << " failures, first: " << c.first_failure;
        std::cout << ")\n";
    }
    std::cout << (r.all_passed() ? "PASS" : "FAIL") << "\n";
    return r.all_passed() ? Ok : ValidationFailure;
}

int cmd_katsura(const std::string& a, const std::string& b, const std::string& out)
{
    KatsuraSystem k = build_katsura(parse_matrix(a), parse_matrix(b));
    write_output(document_to_json(k.automaton).dump(2) + "\n", out);
    if (!out.empty() && out != "-")
        std::cout << "wrote " << out << ": " << k.graph->vertex_count() << " vertices, " << k.graph->edge_count()
                  << " edges, " << k.automaton.state_count() << " states\n";
    return Ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Self-similar groupoid actions on graphs and their KMS states"};
    app.require_subcommand(1);
    std::function<int()> run;

    std::string file, out, format = "dot", w1, w2, beta, trace = "tau_x", element, method = "solve", a_text, b_text;
    std::size_t max_states = 512, cap = Groupoid::default_cap, samples = 200;
    unsigned probe_depth = 6, order_cap = 0, depth = 5;
    double tol = 1e-12;
    std::uint64_t seed = 1;

    auto with_file = [&](CLI::App* sub) { sub->add_option("file", file, "project document")->required(); };

    auto* validate = app.add_subcommand("validate", "load and check a project document");
    with_file(validate);
    validate->callback([&] { run = [&] { return cmd_validate(file); }; });

    auto* nucleus = app.add_subcommand("nucleus", "compute the nucleus");
    with_file(nucleus);
    nucleus->add_option("--max-states", max_states, "state cap");
    nucleus->add_option("--probe-depth", probe_depth, "certificate probe depth");
    nucleus->callback([&] { run = [&] { return cmd_nucleus(file, max_states, probe_depth); }; });

    auto* moore = app.add_subcommand("moore", "export the Moore diagram of the nucleus");
    with_file(moore);
    moore->add_option("--format", format, "dot or json")->check(CLI::IsMember({"dot", "json"}));
    moore->add_option("-o,--output", out, "output file");
    moore->callback([&] { run = [&] { return cmd_moore(file, format, out); }; });

    auto* spectral = app.add_subcommand("spectral", "Perron-Frobenius data of the vertex matrix");
    with_file(spectral);
    spectral->add_option("--tol", tol, "power iteration tolerance");
    spectral->callback([&] { run = [&] { return cmd_spectral(file, tol); }; });

    auto* orbits = app.add_subcommand("orbits", "orbit components and transversal");
    with_file(orbits);
    orbits->callback([&] { run = [&] { return cmd_orbits(file); }; });

    auto* equal = app.add_subcommand("equal", "decide equality of two words");
    with_file(equal);
    equal->add_option("word1", w1)->required();
    equal->add_option("word2", w2)->required();
    equal->add_option("--cap", cap, "closure cap");
    equal->callback([&] { run = [&] { return cmd_equal(file, w1, w2, cap); }; });

    auto* order = app.add_subcommand("order", "order of a word");
    with_file(order);
    order->add_option("word", w1)->required();
    order->add_option("--cap", order_cap, "largest order tried")->required();
    order->callback([&] { run = [&] { return cmd_order(file, w1, order_cap); }; });

    auto* kms = app.add_subcommand("kms", "evaluate a KMS state on a spanning element");
    with_file(kms);
    kms->add_option("--beta", beta, "inverse temperature or 'critical'")->required();
    kms->add_option("--trace", trace, "builtin kind, document trace name or JSON file");
    kms->add_option("--element", element, "spanning element or element name")->required();
    kms->callback([&] { run = [&] { return cmd_kms(file, beta, trace, element); }; });

    auto* critical = app.add_subcommand("kms-critical", "critical state values on the nucleus");
    with_file(critical);
    critical->add_option("--method", method, "solve or iterate")->check(CLI::IsMember({"solve", "iterate"}));
    critical->callback([&] { run = [&] { return cmd_kms_critical(file, method); }; });

    auto* check = app.add_subcommand("check-kms", "randomised KMS condition check");
    with_file(check);
    check->add_option("--beta", beta, "inverse temperature or 'critical'")->required();
    check->add_option("--samples", samples, "number of samples");
    check->add_option("--seed", seed, "random seed");
    check->add_option("--trace", trace, "trace for beta above critical");
    check->callback([&] { run = [&] { return cmd_check_kms(file, beta, samples, seed, trace); }; });

    auto* fock = app.add_subcommand("fock-check", "check the presentation relations on a truncated Fock space");
    with_file(fock);
    fock->add_option("--depth", depth, "path length cutoff")->check(CLI::PositiveNumber);
    fock->callback([&] { run = [&] { return cmd_fock_check(file, depth); }; });

    auto* katsura = app.add_subcommand("katsura", "write the Katsura document for matrices A, B");
    katsura->add_option("--A", a_text, "rows separated by ';', entries by ','")->required();
    katsura->add_option("--B", b_text, "same shape as A")->required();
    katsura->add_option("-o,--output", out, "output file")->required();
    katsura->callback([&] { run = [&] { return cmd_katsura(a_text, b_text, out); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : UsageFailure;
    }
    try {
        return run();
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return UsageFailure;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_computation_error(e.kind()) ? ComputationFailure : ValidationFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ComputationFailure;
    }
}
