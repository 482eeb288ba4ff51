#include "ssg/document.hpp"

#include <filesystem>
#include <fstream>

#include "ssg/error.hpp"

namespace ssg {

ProjectDocument load_document(const nlohmann::json& document, bool strict)
{
    if (!document.is_object())
        throw Error(ErrorKind::ParseError, "document must be a JSON object");
    if (!document.contains("schema") || !document.at("schema").is_string())
        throw Error(ErrorKind::ParseError, "missing schema tag");
    const auto schema = document.at("schema").get<std::string>();
    if (schema != document_schema)
        throw Error(ErrorKind::ParseError, "unsupported schema '" + schema + "'");
    if (!document.contains("graph") || !document.contains("automaton"))
        throw Error(ErrorKind::ParseError, "document needs graph and automaton sections");
    ProjectDocument doc;
    doc.graph = std::make_shared<const DirectedGraph>(load_graph(document.at("graph"), strict));
    doc.automaton = std::make_shared<const EAutomaton>(load_automaton(document.at("automaton"), doc.graph));
    try {
        if (document.contains("traces"))
            for (const auto& t : document.at("traces")) {
                auto name = t.at("name").get<std::string>();
                if (!doc.traces.emplace(name, t).second)
                    throw Error(ErrorKind::DuplicateId, "trace '" + name + "' declared twice");
            }
        if (document.contains("elements"))
            for (const auto& [name, text] : document.at("elements").items())
                doc.elements.emplace(name, text.get<std::string>());
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorKind::ParseError, ex.what());
    }
    // cross-references must resolve
    Groupoid g = doc.groupoid();
    for (const auto& [name, text] : doc.elements)
        resolve_element(doc, text);
    for (const auto& [name, spec] : doc.traces)
        if (spec.value("kind", "") != "tau_x")
            make_trace(g, spec);
    return doc;
}

ProjectDocument load_document_file(const std::string& path, bool strict)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::ParseError, "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorKind::ParseError, path + ": " + ex.what());
    }
    return load_document(j, strict);
}

nlohmann::json document_to_json(const EAutomaton& automaton)
{
    return {{"schema", document_schema},
            {"graph", graph_to_json(automaton.graph())},
            {"automaton", automaton_to_json(automaton)}};
}

GroupoidTrace make_trace(const Groupoid& groupoid, const nlohmann::json& spec)
{
    try {
        const auto kind = spec.at("kind").get<std::string>();
        const auto& graph = groupoid.graph();
        if (kind == "tau_x")
            return GroupoidTrace::tau_x(groupoid, groupoid.orbits(), perron_frobenius(vertex_matrix(graph)));
        if (kind == "tau_e_normalized")
            return GroupoidTrace::tau_e_normalized(groupoid);
        if (kind == "tau_1_normalized")
            return GroupoidTrace::tau_1_normalized(groupoid);
        if (kind == "vertex_weights") {
            std::vector<double> w(graph.vertex_count(), 0.0);
            for (const auto& [v, x] : spec.at("weights").items())
                w[graph.vertex(v).value] = x.get<double>();
            return GroupoidTrace::vertex_weights(groupoid, std::move(w));
        }
        if (kind == "isotropy_moments") {
            OrbitData orbits = groupoid.orbits();
            const VertexId base = graph.vertex(spec.at("component").get<std::string>());
            const std::size_t comp = orbits.component_of[base.value];
            std::map<long, Complex> moments;
            for (const auto& m : spec.at("moments"))
                moments[m.at(0).get<long>()] = Complex(m.at(1).get<double>(), m.size() > 2 ? m.at(2).get<double>() : 0.0);
            return GroupoidTrace::from_isotropy(groupoid, orbits, comp,
                                                groupoid.resolve(spec.at("generator").get<std::string>()),
                                                std::move(moments), spec.value("weight", 1.0),
                                                spec.value("search_cap", GroupoidTrace::default_search_cap));
        }
        if (kind == "sum") {
            std::vector<GroupoidTrace> terms;
            for (const auto& t : spec.at("terms"))
                terms.push_back(make_trace(groupoid, t));
            return GroupoidTrace::sum(std::move(terms));
        }
        throw Error(ErrorKind::ParseError, "unknown trace kind '" + kind + "'");
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorKind::ParseError, std::string("trace description: ") + ex.what());
    }
}

GroupoidTrace resolve_trace(const ProjectDocument& document, const std::string& spec)
{
    const Groupoid g = document.groupoid();
    if (spec == "tau_x" || spec == "tau_e_normalized" || spec == "tau_1_normalized")
        return make_trace(g, {{"kind", spec}});
    if (auto it = document.traces.find(spec); it != document.traces.end())
        return make_trace(g, it->second);
    if (std::filesystem::exists(spec)) {
        std::ifstream in(spec);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& ex) {
            throw Error(ErrorKind::ParseError, spec + ": " + ex.what());
        }
        return make_trace(g, j);
    }
    throw Error(ErrorKind::ParseError, "unknown trace '" + spec + "'");
}

SpanningElement resolve_element(const ProjectDocument& document, const std::string& text)
{
    const Groupoid g = document.groupoid();
    std::string body = text;
    if (auto it = document.elements.find(text); it != document.elements.end())
        body = it->second;
    if (body.find('|') != std::string::npos || body.rfind("p:", 0) == 0)
        return parse_spanning(g, body);
    return unit_element(g, g.resolve(body));
}

MachineState resolve_word(const ProjectDocument& document, const std::string& text)
{
    if (auto it = document.elements.find(text); it != document.elements.end())
        return document.groupoid().resolve(it->second);
    return document.groupoid().resolve(text);
}

} // namespace ssg
