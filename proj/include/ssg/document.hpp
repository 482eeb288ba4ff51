#pragma once

#include <map>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "ssg/groupoid.hpp"
#include "ssg/kms.hpp"
#include "ssg/traces.hpp"

namespace ssg {

inline constexpr const char* document_schema = "ssg-document/1";

struct ProjectDocument {
    std::shared_ptr<const DirectedGraph> graph;
    std::shared_ptr<const EAutomaton> automaton;
    std::map<std::string, nlohmann::json> traces;  // by name
    std::map<std::string, std::string> elements;  // name -> word or spanning text

    Groupoid groupoid() const { return Groupoid(automaton); }
};

// Requires the "schema" tag. With strict, every vertex must receive an edge.
ProjectDocument load_document(const nlohmann::json& document, bool strict = true);
ProjectDocument load_document_file(const std::string& path, bool strict = true);
nlohmann::json document_to_json(const EAutomaton& automaton);

// Trace description: {"kind": ...} with kind one of tau_x,
// tau_e_normalized, tau_1_normalized, vertex_weights {"weights": {v: w}},
// isotropy_moments {"component", "generator", "weight", "moments": [[k, re, im]]},
// sum {"terms": [...]}.
GroupoidTrace make_trace(const Groupoid& groupoid, const nlohmann::json& spec);
// A builtin kind name, a trace named in the document, or a JSON file.
GroupoidTrace resolve_trace(const ProjectDocument& document, const std::string& spec);

// Named element or literal; words become u_g.
SpanningElement resolve_element(const ProjectDocument& document, const std::string& text);
MachineState resolve_word(const ProjectDocument& document, const std::string& text);

} // namespace ssg
