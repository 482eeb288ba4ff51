#include "ssg/automaton.hpp"

#include <map>
#include <nlohmann/json.hpp>
#include <queue>
#include <set>

#include "ssg/error.hpp"

namespace ssg {

namespace {

std::string transition_label(const std::string& state, const std::string& edge)
{
    return "(" + state + ", " + edge + ")";
}

} // namespace

EAutomaton EAutomaton::create(std::shared_ptr<const DirectedGraph> graph, std::vector<StateSpec> states,
                              const std::vector<TransitionSpec>& transitions)
{
    const DirectedGraph& g = *graph;
    EAutomaton a;
    a.graph_ = std::move(graph);

    std::map<std::string, std::uint32_t> index;
    for (auto& spec : states) {
        if (spec.id.empty())
            throw Error(ErrorKind::ParseError, "empty state id");
        if (g.has_vertex(spec.id))
            throw Error(ErrorKind::IdClash, "state id '" + spec.id + "' is also a vertex id");
        if (!g.has_vertex(spec.domain))
            throw Error(ErrorKind::DanglingVertexRef, "state '" + spec.id + "' has unknown domain '" + spec.domain + "'");
        if (!g.has_vertex(spec.codomain))
            throw Error(ErrorKind::DanglingVertexRef,
                        "state '" + spec.id + "' has unknown codomain '" + spec.codomain + "'");
        auto id = static_cast<std::uint32_t>(a.states_.size());
        if (!index.emplace(spec.id, id).second)
            throw Error(ErrorKind::DuplicateId, "state '" + spec.id + "' declared twice");
        a.states_.push_back({spec.id, g.vertex(spec.domain), g.vertex(spec.codomain)});
    }

    const std::size_t n_edges = g.edge_count();
    a.table_.assign(a.states_.size(), std::vector<std::optional<AutomatonTransition>>(n_edges));
    a.inverse_.assign(a.states_.size(), std::vector<std::optional<EdgeId>>(n_edges));

    auto resolve_restriction = [&](const std::string& name, const std::string& where) -> StateRef {
        if (g.has_vertex(name))
            return StateRef::identity(g.vertex(name));
        auto it = index.find(name);
        if (it == index.end())
            throw Error(ErrorKind::ParseError, "transition " + where + " restricts to unknown state '" + name + "'");
        return StateRef::proper(it->second);
    };

    for (const auto& t : transitions) {
        const std::string where = transition_label(t.state, t.edge);
        if (!g.has_edge(t.edge))
            throw Error(ErrorKind::UnknownEdge, "transition " + where + " uses unknown edge");
        if (!g.has_edge(t.image))
            throw Error(ErrorKind::UnknownEdge, "transition " + where + " has unknown image '" + t.image + "'");
        const EdgeId e = g.edge_id(t.edge);
        const EdgeId img = g.edge_id(t.image);
        const StateRef rest = resolve_restriction(t.restriction, where);

        if (g.has_vertex(t.state)) {
            // explicit identity row: must agree with (A3)
            const VertexId v = g.vertex(t.state);
            if (g.range(e) != v)
                throw Error(ErrorKind::AxiomA3Violation, "identity " + where + ": r(e) != " + t.state);
            if (img != e || !rest.is_identity() || rest.vertex() != g.source(e))
                throw Error(ErrorKind::AxiomA3Violation, "identity " + where + " must fix the edge and restrict to s(e)");
            continue;
        }
        auto it = index.find(t.state);
        if (it == index.end())
            throw Error(ErrorKind::ParseError, "transition " + where + " names unknown state");
        const std::uint32_t s = it->second;
        const StateInfo& info = a.states_[s];
        if (g.range(e) != info.domain)
            throw Error(ErrorKind::AxiomA1Violation, where + ": edge is not in s_A(" + info.id + ")E^1");
        if (a.table_[s][e.value])
            throw Error(ErrorKind::DuplicateId, "transition " + where + " defined twice");
        if (g.range(img) != info.codomain)
            throw Error(ErrorKind::AxiomA1Violation, where + ": image " + t.image + " is not in r_A(" + info.id + ")E^1");
        const VertexId rest_domain = rest.is_identity() ? rest.vertex() : a.states_[rest.index].domain;
        const VertexId rest_codomain = rest.is_identity() ? rest.vertex() : a.states_[rest.index].codomain;
        if (rest_domain != g.source(e))
            throw Error(ErrorKind::AxiomA2Violation, where + ": s_A(a|_e) != s_E(e)");
        if (rest_codomain != g.source(img))
            throw Error(ErrorKind::CodomainMismatch, where + ": r_A(a|_e) != s_E(a.e)");
        a.table_[s][e.value] = AutomatonTransition{img, rest};
    }

    for (std::uint32_t s = 0; s < a.states_.size(); ++s) {
        const StateInfo& info = a.states_[s];
        const auto& dom = g.edges_with_range(info.domain);
        const auto& cod = g.edges_with_range(info.codomain);
        for (auto e : dom)
            if (!a.table_[s][e.value])
                throw Error(ErrorKind::MissingTransition, transition_label(info.id, g.edge_name(e)) + " is undefined");
        if (dom.size() != cod.size())
            throw Error(ErrorKind::AxiomA1Violation, info.id + ": |s_A(a)E^1| != |r_A(a)E^1|");
        for (auto e : dom) {
            const EdgeId img = a.table_[s][e.value]->image;
            if (a.inverse_[s][img.value])
                throw Error(ErrorKind::AxiomA1Violation,
                            info.id + ": edges " + g.edge_name(*a.inverse_[s][img.value]) + " and " + g.edge_name(e) +
                                " both map to " + g.edge_name(img));
            a.inverse_[s][img.value] = e;
        }
    }
    return a;
}

std::optional<std::uint32_t> EAutomaton::find_state(std::string_view id) const
{
    for (std::uint32_t i = 0; i < states_.size(); ++i)
        if (states_[i].id == id)
            return i;
    return std::nullopt;
}

VertexId EAutomaton::domain(StateRef a) const
{
    return a.is_identity() ? a.vertex() : states_.at(a.index).domain;
}

VertexId EAutomaton::codomain(StateRef a) const
{
    return a.is_identity() ? a.vertex() : states_.at(a.index).codomain;
}

std::string EAutomaton::name(StateRef a) const
{
    return a.is_identity() ? graph_->vertex_name(a.vertex()) : states_.at(a.index).id;
}

AutomatonTransition EAutomaton::step(StateRef a, EdgeId e) const
{
    if (a.is_identity()) {
        if (graph_->range(e) != a.vertex())
            throw Error(ErrorKind::DomainMismatch, "edge " + graph_->edge_name(e) + " does not start at " + name(a));
        return {e, StateRef::identity(graph_->source(e))};
    }
    const auto& entry = table_.at(a.index).at(e.value);
    if (!entry)
        throw Error(ErrorKind::DomainMismatch, "edge " + graph_->edge_name(e) + " is outside the domain of " + name(a));
    return *entry;
}

EdgeId EAutomaton::preimage(std::uint32_t state, EdgeId image) const
{
    const auto& entry = inverse_.at(state).at(image.value);
    if (!entry)
        throw Error(ErrorKind::DomainMismatch,
                    "edge " + graph_->edge_name(image) + " is outside the codomain of " + states_.at(state).id);
    return *entry;
}

std::vector<TransitionSpec> EAutomaton::transition_specs() const
{
    std::vector<TransitionSpec> out;
    for (std::uint32_t s = 0; s < states_.size(); ++s)
        for (auto e : graph_->edges_with_range(states_[s].domain)) {
            const auto& t = *table_[s][e.value];
            out.push_back({states_[s].id, graph_->edge_name(e), graph_->edge_name(t.image), name(t.restriction)});
        }
    return out;
}

EAutomaton load_automaton(const nlohmann::json& section, std::shared_ptr<const DirectedGraph> graph)
{
    std::vector<StateSpec> states;
    std::vector<TransitionSpec> transitions;
    try {
        if (section.contains("states"))
            for (const auto& s : section.at("states"))
                states.push_back({s.at("id").get<std::string>(), s.at("domain").get<std::string>(),
                                  s.at("codomain").get<std::string>()});
        if (section.contains("transitions"))
            for (const auto& t : section.at("transitions"))
                transitions.push_back({t.at("state").get<std::string>(), t.at("edge").get<std::string>(),
                                       t.at("image").get<std::string>(), t.at("restriction").get<std::string>()});
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorKind::ParseError, std::string("automaton section: ") + ex.what());
    }
    return EAutomaton::create(std::move(graph), std::move(states), transitions);
}

nlohmann::json automaton_to_json(const EAutomaton& automaton)
{
    const auto& g = automaton.graph();
    nlohmann::json out;
    out["states"] = nlohmann::json::array();
    for (std::uint32_t s = 0; s < automaton.state_count(); ++s) {
        const auto& info = automaton.state(s);
        out["states"].push_back(
            {{"id", info.id}, {"domain", g.vertex_name(info.domain)}, {"codomain", g.vertex_name(info.codomain)}});
    }
    out["transitions"] = nlohmann::json::array();
    for (const auto& t : automaton.transition_specs())
        out["transitions"].push_back(
            {{"state", t.state}, {"edge", t.edge}, {"image", t.image}, {"restriction", t.restriction}});
    return out;
}

std::pair<Path, StateRef> act_path(const EAutomaton& automaton, StateRef a, const Path& mu)
{
    const auto& g = automaton.graph();
    if (mu.range() != automaton.domain(a))
        throw Error(ErrorKind::DomainMismatch, "r(" + g.format_path(mu) + ") != s_A(" + automaton.name(a) + ")");
    if (mu.empty())
        return {g.empty_path(automaton.codomain(a)), a};
    std::vector<EdgeId> image;
    image.reserve(mu.length());
    StateRef current = a;
    for (auto e : mu.edges()) {
        auto t = automaton.step(current, e);
        image.push_back(t.image);
        current = t.restriction;
    }
    return {g.make_path(image), current};
}

KatsuraSystem build_katsura(const IntMatrix& a, const IntMatrix& b)
{
    const std::size_t n = a.size();
    if (n == 0 || b.size() != n)
        throw Error(ErrorKind::InvalidMatrices, "A and B must be square of the same positive size");
    for (std::size_t i = 0; i < n; ++i) {
        if (a.row_sum(i) == 0)
            throw Error(ErrorKind::InvalidMatrices, "A has a zero row " + std::to_string(i + 1));
        for (std::size_t j = 0; j < n; ++j) {
            if (a(i, j) < 0 || b(i, j) < 0)
                throw Error(ErrorKind::InvalidMatrices, "entries must be non-negative");
            if (a(i, j) == 0 && b(i, j) != 0)
                throw Error(ErrorKind::InvalidMatrices, "a_ij = 0 requires b_ij = 0");
        }
    }

    auto vname = [](std::size_t i) { return std::to_string(i + 1); };
    auto ename = [](std::size_t i, std::size_t j, std::int64_t m) {
        return "e_{" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + std::to_string(m) + "}";
    };
    auto sname = [](std::size_t j, std::int64_t l) {
        std::string base = "a" + std::to_string(j + 1);
        return l == 1 ? base : base + "_pow" + std::to_string(l);
    };

    std::vector<std::string> vertices;
    std::vector<EdgeSpec> edges;
    for (std::size_t i = 0; i < n; ++i)
        vertices.push_back(vname(i));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::int64_t m = 0; m < a(i, j); ++m)
                edges.push_back({ename(i, j, m), vname(i), vname(j)});
    auto graph = std::make_shared<const DirectedGraph>(DirectedGraph::create(vertices, edges, true));

    // states are powers a_i^l, l >= 1; start from the generators and add the
    // powers that restrictions reach
    constexpr std::int64_t max_power = 64;
    std::vector<std::pair<std::size_t, std::int64_t>> order;
    std::set<std::pair<std::size_t, std::int64_t>> seen;
    std::queue<std::pair<std::size_t, std::int64_t>> todo;
    for (std::size_t i = 0; i < n; ++i) {
        seen.insert({i, 1});
        todo.push({i, 1});
        order.push_back({i, 1});
    }
    std::vector<TransitionSpec> transitions;
    while (!todo.empty()) {
        auto [i, l] = todo.front();
        todo.pop();
        for (std::size_t j = 0; j < n; ++j)
            for (std::int64_t m = 0; m < a(i, j); ++m) {
                const std::int64_t total = l * b(i, j) + m;
                const std::int64_t q = total / a(i, j);
                const std::int64_t r = total % a(i, j);
                std::string restriction = q == 0 ? vname(j) : sname(j, q);
                if (q > 0 && !seen.count({j, q})) {
                    if (q > max_power)
                        throw Error(ErrorKind::InvalidMatrices, "restriction powers grow without bound");
                    seen.insert({j, q});
                    todo.push({j, q});
                    order.push_back({j, q});
                }
                transitions.push_back({sname(i, l), ename(i, j, m), ename(i, j, r), restriction});
            }
    }
    std::vector<StateSpec> states;
    for (auto [i, l] : order)
        states.push_back({sname(i, l), vname(i), vname(i)});
    auto automaton = EAutomaton::create(graph, std::move(states), transitions);
    return {graph, std::move(automaton)};
}

} // namespace ssg
