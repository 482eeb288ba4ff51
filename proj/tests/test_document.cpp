#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ssg/document.hpp"
#include "support.hpp"

using namespace ssg;
using nlohmann::json;

namespace {

json example3_json()
{
    std::ifstream in(test::data_path("example3"));
    return json::parse(in);
}

} // namespace

TEST_CASE("schema and section checks")
{
    json j = example3_json();
    CHECK_NOTHROW(load_document(j));
    json no_tag = j;
    no_tag.erase("schema");
    CHECK(test::thrown([&] { load_document(no_tag); }) == ErrorKind::ParseError);
    json wrong = j;
    wrong["schema"] = "ssg-document/9";
    CHECK(test::thrown([&] { load_document(wrong); }) == ErrorKind::ParseError);
    json no_aut = j;
    no_aut.erase("automaton");
    CHECK(test::thrown([&] { load_document(no_aut); }) == ErrorKind::ParseError);
    CHECK(test::thrown([&] { load_document(json::array()); }) == ErrorKind::ParseError);
    CHECK(test::thrown([] { load_document_file("/nonexistent/x.json"); }) == ErrorKind::ParseError);

    json dup = j;
    dup["traces"].push_back(dup["traces"][0]);
    CHECK(test::thrown([&] { load_document(dup); }) == ErrorKind::DuplicateId);

    json bad_el = j;
    bad_el["elements"] = {{"oops", "c.a"}};
    CHECK(test::thrown([&] { load_document(bad_el); }).has_value());
}

TEST_CASE("round trip through document_to_json")
{
    for (const char* name : {"example3", "katsura", "basilica"}) {
        auto doc = test::fixture(name);
        auto again = load_document(document_to_json(*doc.automaton));
        CHECK(again.graph->vertex_count() == doc.graph->vertex_count());
        CHECK(again.graph->edge_count() == doc.graph->edge_count());
        CHECK(again.automaton->state_count() == doc.automaton->state_count());
        CHECK(automaton_to_json(*again.automaton) == automaton_to_json(*doc.automaton));
    }
}

TEST_CASE("trace resolution")
{
    auto doc = test::fixture("example3");
    Groupoid g = doc.groupoid();
    MachineState ba = g.resolve("b.a"), idv = g.resolve("id:v");

    GroupoidTrace tx = resolve_trace(doc, "tau_x");
    CHECK(tx.kind_name() == "tau_x");
    CHECK(std::abs(tx.evaluate(idv).real() - 0.5) < 1e-12);
    CHECK(resolve_trace(doc, "tau_e_normalized").evaluate(ba) == Complex(0.0));
    CHECK(std::abs(resolve_trace(doc, "tau_1_normalized").evaluate(ba).real() - 0.5) < 1e-15);

    GroupoidTrace pm = resolve_trace(doc, "point_mass");
    CHECK(pm.kind_name() == "isotropy_moments");
    CHECK(std::abs(pm.evaluate(ba).real() - 0.5) < 1e-15);
    CHECK(resolve_trace(doc, "lebesgue").evaluate(ba) == Complex(0.0));

    CHECK(test::thrown([&] { resolve_trace(doc, "no_such_trace"); }) == ErrorKind::ParseError);

    const std::string path = "test_document_trace.json";
    {
        std::ofstream out(path);
        out << json{{"kind", "vertex_weights"}, {"weights", {{"v", 0.25}, {"w", 0.75}}}}.dump();
    }
    GroupoidTrace vw = resolve_trace(doc, path);
    CHECK(vw.kind_name() == "vertex_weights");
    CHECK(vw.evaluate(g.resolve("id:w")) == Complex(0.75));
    {
        std::ofstream out(path);
        out << "{not json";
    }
    CHECK(test::thrown([&] { resolve_trace(doc, path); }) == ErrorKind::ParseError);
    std::remove(path.c_str());
}

TEST_CASE("trace descriptions")
{
    auto doc = test::fixture("example3");
    Groupoid g = doc.groupoid();
    MachineState ba = g.resolve("b.a");

    json sum = {{"kind", "sum"},
                {"terms",
                 {{{"kind", "isotropy_moments"},
                   {"component", "v"},
                   {"generator", "b.a"},
                   {"weight", 0.25},
                   {"moments", {{1, 0.0, 1.0}}}},
                  {{"kind", "isotropy_moments"},
                   {"component", "v"},
                   {"generator", "b.a"},
                   {"weight", 0.25},
                   {"moments", {{0, 1.0, 0.0}}}}}}};
    GroupoidTrace s = make_trace(g, sum);
    CHECK(s.kind_name() == "sum");
    CHECK(std::abs(s.evaluate(ba) - Complex(0, 0.25)) < 1e-15);
    CHECK(std::abs(s.evaluate(g.inverse(ba)) - Complex(0, -0.25)) < 1e-15);
    CHECK(std::abs(s.evaluate(g.resolve("id:v")) - Complex(0.5)) < 1e-15);

    CHECK(test::thrown([&] { make_trace(g, {{"kind", "mystery"}}); }) == ErrorKind::ParseError);
    CHECK(test::thrown([&] { make_trace(g, {{"weights", 1}}); }) == ErrorKind::ParseError);
    CHECK(test::thrown([&] {
              make_trace(g, {{"kind", "vertex_weights"}, {"weights", {{"v", 0.5}}}});
          }) == ErrorKind::NotNormalized);
    CHECK(test::thrown([&] {
              make_trace(g, {{"kind", "vertex_weights"}, {"weights", {{"q", 1.0}}}});
          }) == ErrorKind::UnknownVertex);
    CHECK(test::thrown([&] {
              make_trace(g, {{"kind", "isotropy_moments"},
                             {"component", "v"},
                             {"generator", "a"},
                             {"moments", json::array()}});
          }) == ErrorKind::NotIsotropyGenerator);
}

TEST_CASE("element and word resolution")
{
    auto doc = test::fixture("example3");
    Groupoid g = doc.groupoid();
    CHECK(format_spanning(g, resolve_element(doc, "b.a")) == "s:@v|u:" + g.word_text(g.resolve("b.a")) + "|s:@v");
    CHECK(format_spanning(g, resolve_element(doc, "p:w")) == format_spanning(g, vertex_projection(g, g.graph().vertex("w"))));
    SpanningElement sp = resolve_element(doc, "s:1|u:id:v|s:3");
    CHECK(sp.kappa == g.graph().parse_path("1"));
    CHECK(sp.lambda == g.graph().parse_path("3"));
    CHECK(g.equivalent(resolve_word(doc, "(b.a)^2"), g.compose(g.resolve("b.a"), g.resolve("b.a"))));
    CHECK(test::thrown([&] { resolve_word(doc, "zz"); }).has_value());
    CHECK(test::thrown([&] { resolve_element(doc, "s:1|u:id:v|s:2"); }) == ErrorKind::DomainMismatch);

    for (const auto& [name, text] : doc.elements) {
        CAPTURE(name);
        CHECK(format_spanning(g, resolve_element(doc, name)) == format_spanning(g, resolve_element(doc, text)));
    }
}

TEST_CASE("the Katsura fixture is what build_katsura produces")
{
    auto doc = test::fixture("katsura");
    KatsuraSystem k = build_katsura({{2, 1}, {2, 2}}, {{1, 0}, {2, 1}});
    json built = document_to_json(k.automaton);
    std::ifstream in(test::data_path("katsura"));
    json fixture = json::parse(in);
    CHECK(built.at("graph") == fixture.at("graph"));
    CHECK(built.at("automaton") == fixture.at("automaton"));
}
