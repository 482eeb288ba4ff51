#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ssg/groupoid.hpp"

namespace ssg {

struct NucleusCaps {
    std::size_t max_states = 512;
    unsigned probe_depth = 6;
    std::size_t closure_cap = Groupoid::default_cap;
};

struct Certificate {
    std::size_t g;
    std::size_t h;
    unsigned depth;  // (gh)|_mu lies in N once |mu| >= depth
};

// Restriction-closed finite set of elements, identities first in vertex
// order, then by (length, word).
struct Nucleus {
    std::vector<MachineState> states;
    std::vector<std::vector<ClosedMachine::Step>> transitions;
    std::vector<Certificate> certificates;

    std::size_t size() const noexcept { return states.size(); }
    // Index of the identity at v.
    std::size_t identity_index(VertexId v) const;

    // Wraps a caller-supplied set (duplicates by bisimulation are rejected);
    // throws NotContractingWithinCap unless the set is restriction-closed.
    static Nucleus from_states(const Groupoid& groupoid, std::vector<MachineState> states,
                               std::size_t cap = Groupoid::default_cap);
};

Nucleus compute_nucleus(const Groupoid& groupoid, const NucleusCaps& caps = {});

// Probes every certificate: all (gh)|_mu with depth <= |mu| <= probe_depth
// must be bisimilar to members. Returns the number of failing pairs.
std::size_t verify_certificates(const Groupoid& groupoid, const Nucleus& nucleus, unsigned probe_depth,
                                std::size_t cap = Groupoid::default_cap);

// Index in nucleus.states of the member bisimilar to g, if any.
std::optional<std::size_t> nucleus_member(const Groupoid& groupoid, const Nucleus& nucleus, const MachineState& g,
                                          std::size_t cap = Groupoid::default_cap);

// true: the state lies on a cycle of the Moore diagram; false: transient.
std::vector<bool> is_minimal_on_cycles(const Nucleus& nucleus);

struct MooreEdge {
    std::size_t from;
    std::size_t to;
    EdgeId edge;
    EdgeId image;
    friend bool operator==(const MooreEdge&, const MooreEdge&) = default;
};

struct MooreDiagram {
    std::vector<std::string> names;
    std::vector<VertexId> domain;
    std::vector<VertexId> codomain;
    std::vector<std::string> words;  // word-grammar text; empty when unknown
    std::vector<MooreEdge> edges;

    // Structure only: names, d/c and labelled edges.
    friend bool operator==(const MooreDiagram& a, const MooreDiagram& b)
    {
        return a.names == b.names && a.domain == b.domain && a.codomain == b.codomain && a.edges == b.edges;
    }
};

MooreDiagram moore_diagram(const Groupoid& groupoid, const Nucleus& nucleus);
// Identities plus the automaton's own states, read straight off the table.
MooreDiagram moore_from_automaton(const EAutomaton& automaton);

std::string export_dot(const MooreDiagram& diagram, const DirectedGraph& graph);
// Document form: the graph plus an automaton whose states are the
// non-identity nodes.
nlohmann::json export_moore_json(const MooreDiagram& diagram, const DirectedGraph& graph);
MooreDiagram import_moore_json(const nlohmann::json& document);

} // namespace ssg
