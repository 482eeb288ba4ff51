#include <doctest.h>

#include <array>
#include <set>

#include "ssg/graph.hpp"
#include "support.hpp"

using namespace ssg;

namespace {

DirectedGraph example_graph()
{
    return load_graph(test::graph_json({"v", "w"}, {{"1", "v", "v"}, {"2", "v", "w"}, {"3", "w", "v"}, {"4", "w", "v"}}),
                      true);
}

std::vector<std::string> texts(const DirectedGraph& g, const std::vector<Path>& ps)
{
    std::vector<std::string> out;
    for (const auto& p : ps)
        out.push_back(g.format_path(p));
    return out;
}

} // namespace

TEST_CASE("load_graph on the two-vertex example")
{
    DirectedGraph g = example_graph();
    CHECK(g.vertex_count() == 2);
    CHECK(g.edge_count() == 4);
    CHECK(g.range(g.edge_id("2")) == g.vertex("v"));
    CHECK(g.source(g.edge_id("2")) == g.vertex("w"));
    CHECK(g.has_no_sources());
}

TEST_CASE("load_graph classical single vertex and malformed inputs")
{
    DirectedGraph g = load_graph(test::graph_json({"o"}, {{"x", "o", "o"}, {"y", "o", "o"}}), true);
    CHECK(g.vertex_count() == 1);
    CHECK(vertex_matrix(g) == IntMatrix{{2}});

    CHECK(test::thrown([] { load_graph(test::graph_json({"v"}, {{"1", "v", "u"}})); }) == ErrorKind::DanglingVertexRef);
    CHECK(test::thrown([] { load_graph(test::graph_json({"v", "v"}, {})); }) == ErrorKind::DuplicateId);
    CHECK(test::thrown([] { load_graph(test::graph_json({"v"}, {{"1", "v", "v"}, {"1", "v", "v"}})); }) ==
          ErrorKind::DuplicateId);
    CHECK(test::thrown([] { load_graph(nlohmann::json{{"vertices", 3}}); }) == ErrorKind::ParseError);
    // a source is only rejected in strict mode
    auto with_source = test::graph_json({"v", "w"}, {{"1", "v", "w"}, {"2", "v", "v"}});
    CHECK_NOTHROW(load_graph(with_source, false));
    CHECK(test::thrown([&] { load_graph(with_source, true); }) == ErrorKind::SourceVertex);
}

TEST_CASE("vertex matrix")
{
    CHECK(vertex_matrix(example_graph()) == IntMatrix{{1, 1}, {2, 0}});
    auto k = test::fixture("katsura");
    CHECK(vertex_matrix(*k.graph) == IntMatrix{{2, 1}, {2, 2}});
}

TEST_CASE("count_paths")
{
    DirectedGraph g = example_graph();
    const VertexId v = g.vertex("v"), w = g.vertex("w");
    CHECK(count_paths(g, v, v, 2) == 3);
    CHECK(count_paths(g, v, v, 0) == 1);
    CHECK(count_paths(g, v, w, 0) == 0);
    auto k = test::fixture("katsura");
    CHECK(count_paths(*k.graph, k.graph->vertex("2"), k.graph->vertex("1"), 1) == 2);
}

TEST_CASE("enumerate_paths order")
{
    DirectedGraph g = example_graph();
    CHECK(texts(g, enumerate_paths(g, g.vertex("v"), 2)) == std::vector<std::string>{"1.1", "1.2", "2.3", "2.4"});
    CHECK(texts(g, enumerate_paths(g, g.vertex("w"), 2)) == std::vector<std::string>{"3.1", "3.2", "4.1", "4.2"});
    CHECK(texts(g, enumerate_paths(g, g.vertex("v"), 0)) == std::vector<std::string>{"@v"});
    auto k = test::fixture("katsura");
    CHECK(texts(*k.graph, enumerate_paths(*k.graph, k.graph->vertex("1"), 1)) ==
          std::vector<std::string>{"e_{1,1,0}", "e_{1,1,1}", "e_{1,2,0}"});
}

TEST_CASE("strong connectivity")
{
    CHECK(is_strongly_connected(example_graph()));
    CHECK(is_strongly_connected(*test::fixture("katsura").graph));
    CHECK_FALSE(is_strongly_connected(load_graph(test::graph_json({"v", "w"}, {{"1", "v", "w"}}))));
}

TEST_CASE("path counts match matrix powers for k <= 6")
{
    for (const char* name : {"example3", "katsura", "basilica"}) {
        auto doc = test::fixture(name);
        const DirectedGraph& g = *doc.graph;
        const IntMatrix b = vertex_matrix(g);
        for (unsigned k = 0; k <= 6; ++k) {
            const IntMatrix bk = b.power(k);
            for (VertexId v : g.vertices()) {
                auto paths = enumerate_paths(g, v, k);
                std::set<Path> unique(paths.begin(), paths.end());
                CHECK(unique.size() == paths.size());
                CHECK(paths == enumerate_paths(g, v, k));
                for (VertexId w : g.vertices()) {
                    std::int64_t n = 0;
                    for (const auto& p : paths)
                        n += p.source() == w;
                    CHECK(n == bk(v.value, w.value));
                    CHECK(count_paths(g, v, w, k) == static_cast<std::uint64_t>(bk(v.value, w.value)));
                }
            }
        }
    }
}

TEST_CASE("concatenation is associative and length additive")
{
    DirectedGraph g = example_graph();
    auto all = enumerate_all_paths(g, 3);
    std::size_t triples = 0;
    for (const auto& a : all)
        for (const auto& b : all) {
            if (a.source() != b.range())
                continue;
            const Path ab = g.concat(a, b);
            CHECK(ab.length() == a.length() + b.length());
            CHECK(a.is_prefix_of(ab));
            for (const auto& c : all) {
                if (b.source() != c.range())
                    continue;
                CHECK(g.concat(ab, c) == g.concat(a, g.concat(b, c)));
                ++triples;
            }
        }
    CHECK(triples > 100);
    CHECK(test::thrown([&] { g.concat(g.parse_path("1"), g.parse_path("3")); }) == ErrorKind::NotComposable);
    CHECK(test::thrown([&] { g.parse_path("1.3"); }) == ErrorKind::NotComposable);
    CHECK(g.parse_path("@w").source() == g.vertex("w"));
    CHECK(g.format_path(g.parse_path("2.3.1")) == "2.3.1");
}
