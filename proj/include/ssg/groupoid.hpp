#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ssg/automaton.hpp"

namespace ssg {

struct Letter {
    std::uint32_t state = 0;
    bool inverse = false;
    friend auto operator<=>(const Letter&, const Letter&) = default;
};

// A groupoid element held as a freely reduced word in the proper states and
// their inverses. The leftmost letter acts last. The empty word is the
// identity at d = c.
class MachineState {
  public:
    MachineState() = default;
    MachineState(std::vector<Letter> word, VertexId d, VertexId c) : word_(std::move(word)), d_(d), c_(c) {}

    const std::vector<Letter>& word() const noexcept { return word_; }
    VertexId d() const noexcept { return d_; }
    VertexId c() const noexcept { return c_; }
    bool is_trivial_word() const noexcept { return word_.empty(); }
    std::size_t length() const noexcept { return word_.size(); }

    friend auto operator<=>(const MachineState&, const MachineState&) = default;

  private:
    std::vector<Letter> word_;
    VertexId d_;
    VertexId c_;
};

// Restriction closure of a root element with bisimilar states merged.
// State 0 is the root.
struct ClosedMachine {
    struct Step {
        EdgeId edge;
        EdgeId image;
        std::size_t target;
    };
    std::vector<MachineState> states;
    // transitions[i] follows the order of d(states[i])E^1
    std::vector<std::vector<Step>> transitions;
    std::size_t raw_size = 0;
};

struct EqualityResult {
    bool equal = false;
    // shortest path on which the actions differ; empty path at d(g) when the
    // d/c data already differ
    std::optional<Path> witness;
};

struct OrbitData {
    std::vector<std::vector<VertexId>> components;
    std::vector<std::size_t> component_of;  // per vertex
    std::vector<VertexId> base;             // per component
    std::vector<MachineState> transversal;  // per vertex: d = base, c = vertex
};

class Groupoid {
  public:
    static constexpr std::size_t default_cap = 20000;

    explicit Groupoid(std::shared_ptr<const EAutomaton> automaton);

    const EAutomaton& automaton() const noexcept { return *automaton_; }
    const std::shared_ptr<const EAutomaton>& automaton_ptr() const noexcept { return automaton_; }
    const DirectedGraph& graph() const noexcept { return automaton_->graph(); }

    MachineState identity(VertexId v) const { return MachineState({}, v, v); }
    MachineState generator(std::uint32_t state, bool inverse = false) const;
    MachineState from_letters(const std::vector<Letter>& letters) const;
    MachineState from_ref(StateRef a) const;

    // "b.a", "a^-1", "id:v", "(b.a)^3", "(a^-1.b^-1)^-2"
    MachineState resolve(std::string_view word) const;

    std::pair<EdgeId, MachineState> apply(const MachineState& g, EdgeId e) const;
    std::pair<Path, MachineState> apply(const MachineState& g, const Path& mu) const;
    MachineState restrict(const MachineState& g, const Path& mu) const { return apply(g, mu).second; }

    MachineState compose(const MachineState& g, const MachineState& h) const;
    MachineState inverse(const MachineState& g) const;
    MachineState power(const MachineState& g, long n) const;

    ClosedMachine closure(const MachineState& g, std::size_t cap = default_cap) const;
    EqualityResult equal(const MachineState& g, const MachineState& h, std::size_t cap = default_cap) const;
    bool equivalent(const MachineState& g, const MachineState& h, std::size_t cap = default_cap) const
    {
        return equal(g, h, cap).equal;
    }
    bool is_identity(const MachineState& g, std::size_t cap = default_cap) const;
    // First index i with pool[i] bisimilar to g.
    std::optional<std::size_t> find_equivalent(const std::vector<MachineState>& pool, const MachineState& g,
                                               std::size_t cap = default_cap) const;

    // Smallest n in [1, cap] with g^n the identity; nullopt when none.
    std::optional<unsigned> order(const MachineState& g, unsigned cap) const;

    // id_v, f_a, f_a^-1, f_b.f_a
    std::string name(const MachineState& g) const;
    // Word-grammar form accepted by resolve.
    std::string word_text(const MachineState& g) const;

    // All reduced composable words of length <= max_length, shortest first.
    std::vector<MachineState> words_up_to(std::size_t max_length) const;

    OrbitData orbits() const;
    // Same components, caller-chosen transversal.
    OrbitData with_transversal(const OrbitData& base, std::vector<MachineState> transversal) const;

  private:
    VertexId letter_d(Letter l) const;
    VertexId letter_c(Letter l) const;
    struct LetterStep {
        EdgeId image;
        bool restricts_to_identity;
        Letter restriction;
    };
    LetterStep step(Letter l, EdgeId e) const;

    std::shared_ptr<const EAutomaton> automaton_;
};

// Raw restriction machine over explicit words, with bisimulation classes.
struct RawMachine {
    std::vector<MachineState> states;
    std::vector<std::vector<ClosedMachine::Step>> transitions;
    std::map<MachineState, std::size_t> index;
};

// BFS closure of all roots into one machine; throws ClosureCapExceeded when
// more than cap distinct words appear.
RawMachine raw_closure(const Groupoid& groupoid, const std::vector<MachineState>& roots, std::size_t cap);
// Coarsest partition with equal (d, c, images) and equal restriction classes.
std::vector<std::size_t> bisimulation_classes(const RawMachine& machine);

// Exel-Pardo data: a group K (index 0 is the identity) with a possibly
// partial product table acting on E, together with a cocycle.
struct ExelPardoData {
    std::vector<std::string> elements;
    std::vector<std::vector<std::optional<std::size_t>>> product;
    std::vector<std::vector<VertexId>> sigma0;  // [k][v]
    std::vector<std::vector<EdgeId>> sigma1;    // [k][e]
    std::vector<std::vector<std::size_t>> phi;  // [k][e]
};

// States "k@v" for every non-identity k; (k,v).e = sigma1_k(e) and
// (k,v)|_e = (phi(k,e), s(e)). Axioms are checked wherever the table defines
// the products involved.
EAutomaton from_exel_pardo(std::shared_ptr<const DirectedGraph> graph, const ExelPardoData& data);

} // namespace ssg
