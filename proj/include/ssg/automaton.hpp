#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ssg/graph.hpp"

namespace ssg {

/// An element of the alphabet A: either the identity state at a vertex or a
/// proper state.
struct StateRef {
    enum class Kind : std::uint8_t { Identity, Proper };
    Kind kind = Kind::Identity;
    std::uint32_t index = 0;

    static StateRef identity(VertexId v) { return {Kind::Identity, v.value}; }
    static StateRef proper(std::uint32_t i) { return {Kind::Proper, i}; }
    bool is_identity() const noexcept { return kind == Kind::Identity; }
    VertexId vertex() const noexcept { return VertexId{index}; }

    friend auto operator<=>(const StateRef&, const StateRef&) = default;
};

struct AutomatonTransition {
    EdgeId image;
    StateRef restriction;
};

struct StateInfo {
    std::string id;
    VertexId domain;   // s_A(a)
    VertexId codomain; // r_A(a)
};

struct StateSpec {
    std::string id;
    std::string domain;
    std::string codomain;
};

struct TransitionSpec {
    std::string state;
    std::string edge;
    std::string image;
    std::string restriction;
};

/// A finite alphabet over a directed graph whose transition table
/// (a, e) -> (a.e, a|_e) satisfies (A1)-(A3). Identity states are implicit.
class EAutomaton {
  public:
    /// Exhaustively validates the table; throws on the first violated axiom.
    static EAutomaton create(std::shared_ptr<const DirectedGraph> graph, std::vector<StateSpec> states,
                             const std::vector<TransitionSpec>& transitions);

    const DirectedGraph& graph() const noexcept { return *graph_; }
    const std::shared_ptr<const DirectedGraph>& graph_ptr() const noexcept { return graph_; }

    std::size_t state_count() const noexcept { return states_.size(); }
    const StateInfo& state(std::uint32_t i) const { return states_.at(i); }
    std::optional<std::uint32_t> find_state(std::string_view id) const;

    VertexId domain(StateRef a) const;
    VertexId codomain(StateRef a) const;
    std::string name(StateRef a) const;

    /// (a.e, a|_e); requires r(e) = s_A(a).
    AutomatonTransition step(StateRef a, EdgeId e) const;
    /// The unique e with a.e = image; requires r(image) = r_A(a).
    EdgeId preimage(std::uint32_t state, EdgeId image) const;

    /// Transitions in (state, edge) declaration order.
    std::vector<TransitionSpec> transition_specs() const;

  private:
    std::shared_ptr<const DirectedGraph> graph_;
    std::vector<StateInfo> states_;
    // indexed [state][edge]; only edges with r(e) = s_A(a) are populated
    std::vector<std::vector<std::optional<AutomatonTransition>>> table_;
    std::vector<std::vector<std::optional<EdgeId>>> inverse_;
};

EAutomaton load_automaton(const nlohmann::json& section, std::shared_ptr<const DirectedGraph> graph);
nlohmann::json automaton_to_json(const EAutomaton& automaton);

/// (a . mu, a|_mu) by left-to-right recursion; requires r(mu) = s_A(a).
std::pair<Path, StateRef> act_path(const EAutomaton& automaton, StateRef a, const Path& mu);

struct KatsuraSystem {
    std::shared_ptr<const DirectedGraph> graph;
    EAutomaton automaton;
};

/// Graph with edges e_{i,j,m} (0 <= m < a_ij, r = i, s = j) and states a_i
/// acting by b_ij + m = l a_ij + n with 0 <= n < a_ij, restricting to a_j^l.
/// Powers a_j^l with l >= 2 become extra states named "a<j>_pow<l>".
KatsuraSystem build_katsura(const IntMatrix& a, const IntMatrix& b);

} // namespace ssg
