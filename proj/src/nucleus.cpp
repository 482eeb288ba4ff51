#include "ssg/nucleus.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "ssg/error.hpp"

namespace ssg {

namespace {

bool canonical_less(const MachineState& a, const MachineState& b)
{
    if (a.is_trivial_word() != b.is_trivial_word())
        return a.is_trivial_word();
    if (a.is_trivial_word())
        return a.d() < b.d();
    if (a.length() != b.length())
        return a.length() < b.length();
    return a.word() < b.word();
}

// States of the raw machine that can be reached at every depth: those
// reachable from a cycle.
std::vector<bool> eventual_states(const RawMachine& m)
{
    const std::size_t n = m.states.size();
    // Tarjan SCC, iterative
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    int counter = 0, ncomp = 0;
    std::vector<std::size_t> comp_size;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != -1)
            continue;
        std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, k] = call.back();
            if (k < m.transitions[v].size()) {
                std::size_t w = m.transitions[v][k++].target;
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::size_t size = 0;
                while (true) {
                    std::size_t w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = ncomp;
                    ++size;
                    if (w == v)
                        break;
                }
                comp_size.push_back(size);
                ++ncomp;
            }
            std::size_t done = v;
            call.pop_back();
            if (!call.empty())
                low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    std::vector<bool> eventual(n, false);
    std::vector<std::size_t> queue;
    for (std::size_t v = 0; v < n; ++v) {
        bool cyclic = comp_size[comp[v]] > 1;
        for (const auto& s : m.transitions[v])
            if (s.target == v)
                cyclic = true;
        if (cyclic) {
            eventual[v] = true;
            queue.push_back(v);
        }
    }
    while (!queue.empty()) {
        std::size_t v = queue.back();
        queue.pop_back();
        for (const auto& s : m.transitions[v])
            if (!eventual[s.target]) {
                eventual[s.target] = true;
                queue.push_back(s.target);
            }
    }
    return eventual;
}

// 0 if the root is eventual, else 1 + the longest path through transient
// states starting at the root.
unsigned transient_depth(const RawMachine& m, const std::vector<bool>& eventual, std::size_t root)
{
    if (eventual[root])
        return 0;
    std::map<std::size_t, unsigned> memo;
    std::function<unsigned(std::size_t)> longest = [&](std::size_t v) -> unsigned {
        if (auto it = memo.find(v); it != memo.end())
            return it->second;
        unsigned best = 0;
        for (const auto& s : m.transitions[v])
            if (!eventual[s.target])
                best = std::max(best, 1 + longest(s.target));
        memo[v] = best;
        return best;
    };
    return 1 + longest(root);
}

struct Classified {
    RawMachine raw;
    std::vector<std::size_t> cls;
};

Classified classify(const Groupoid& groupoid, const std::vector<MachineState>& roots, std::size_t cap)
{
    Classified c{raw_closure(groupoid, roots, cap), {}};
    c.cls = bisimulation_classes(c.raw);
    return c;
}

// Canonical member list: one shortest word per class among `members`' classes.
std::vector<MachineState> canonical_members(const Classified& c, const std::vector<MachineState>& members)
{
    std::set<std::size_t> wanted;
    for (const auto& m : members)
        wanted.insert(c.cls[c.raw.index.at(m)]);
    std::map<std::size_t, MachineState> best;
    for (std::size_t i = 0; i < c.raw.states.size(); ++i) {
        const std::size_t k = c.cls[i];
        if (!wanted.count(k))
            continue;
        auto it = best.find(k);
        if (it == best.end() || canonical_less(c.raw.states[i], it->second))
            best[k] = c.raw.states[i];
    }
    std::vector<MachineState> out;
    for (auto& [k, s] : best)
        out.push_back(std::move(s));
    // identities: any trivial word in the class wins, so the class of id_v is
    // always named id_v
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

Nucleus assemble(const Groupoid& groupoid, std::vector<MachineState> states, std::size_t cap)
{
    Classified c = classify(groupoid, states, cap);
    std::map<std::size_t, std::size_t> member_of_class;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const std::size_t k = c.cls[c.raw.index.at(states[i])];
        if (!member_of_class.emplace(k, i).second)
            throw Error(ErrorKind::DuplicateId, groupoid.name(states[i]) + " duplicates " +
                                                    groupoid.name(states[member_of_class[k]]));
    }
    Nucleus n;
    n.states = std::move(states);
    for (const auto& s : n.states) {
        std::vector<ClosedMachine::Step> steps = c.raw.transitions[c.raw.index.at(s)];
        for (auto& st : steps) {
            auto it = member_of_class.find(c.cls[st.target]);
            if (it == member_of_class.end())
                throw Error(ErrorKind::NotContractingWithinCap,
                            "set is not restriction-closed: " + groupoid.name(s) + " restricted by " +
                                groupoid.graph().edge_name(st.edge) + " is " + groupoid.name(c.raw.states[st.target]));
            st.target = it->second;
        }
        n.transitions.push_back(std::move(steps));
    }
    return n;
}

} // namespace

std::size_t Nucleus::identity_index(VertexId v) const
{
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i].is_trivial_word() && states[i].d() == v)
            return i;
    throw Error(ErrorKind::UnknownVertex, "nucleus has no identity at this vertex");
}

Nucleus Nucleus::from_states(const Groupoid& groupoid, std::vector<MachineState> states, std::size_t cap)
{
    return assemble(groupoid, std::move(states), cap);
}

Nucleus compute_nucleus(const Groupoid& groupoid, const NucleusCaps& caps)
{
    if (caps.max_states == 0 || caps.probe_depth == 0)
        throw Error(ErrorKind::NotContractingWithinCap, "caps must be positive");
    const auto& a = groupoid.automaton();
    std::vector<MachineState> roots;
    for (auto v : groupoid.graph().vertices())
        roots.push_back(groupoid.identity(v));
    for (std::uint32_t i = 0; i < a.state_count(); ++i) {
        roots.push_back(groupoid.generator(i));
        roots.push_back(groupoid.generator(i, true));
    }
    Classified c = classify(groupoid, roots, caps.closure_cap);
    std::vector<MachineState> members = canonical_members(c, c.raw.states);
    auto too_big = [&] {
        return Error(ErrorKind::NotContractingWithinCap,
                     "nucleus exceeds " + std::to_string(caps.max_states) + " states (probe depth " +
                         std::to_string(caps.probe_depth) + ")");
    };
    if (members.size() > caps.max_states)
        throw too_big();

    std::vector<Certificate> certs;
    while (true) {
        certs.clear();
        std::vector<MachineState> found;
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = 0; j < members.size(); ++j) {
                if (members[i].d() != members[j].c())
                    continue;
                MachineState gh = groupoid.compose(members[i], members[j]);
                RawMachine raw = raw_closure(groupoid, {gh}, caps.closure_cap);
                auto eventual = eventual_states(raw);
                certs.push_back({i, j, transient_depth(raw, eventual, 0)});
                for (std::size_t k = 0; k < raw.states.size(); ++k)
                    if (eventual[k])
                        found.push_back(raw.states[k]);
            }
        std::vector<MachineState> pool = members;
        pool.insert(pool.end(), found.begin(), found.end());
        Classified all = classify(groupoid, pool, caps.closure_cap);
        std::set<std::size_t> known;
        for (const auto& m : members)
            known.insert(all.cls[all.raw.index.at(m)]);
        bool grew = false;
        for (const auto& f : found)
            if (!known.count(all.cls[all.raw.index.at(f)])) {
                grew = true;
                break;
            }
        members = canonical_members(all, pool);
        if (members.size() > caps.max_states)
            throw too_big();
        if (!grew)
            break;
    }
    Nucleus n = assemble(groupoid, members, caps.closure_cap);
    // certificate indices refer to the final order, which is unchanged by
    // the last pass
    n.certificates = std::move(certs);
    if (verify_certificates(groupoid, n, caps.probe_depth, caps.closure_cap) != 0)
        throw Error(ErrorKind::NotContractingWithinCap, "certificate probe failed");
    return n;
}

std::optional<std::size_t> nucleus_member(const Groupoid& groupoid, const Nucleus& nucleus, const MachineState& g,
                                          std::size_t cap)
{
    return groupoid.find_equivalent(nucleus.states, g, cap);
}

std::size_t verify_certificates(const Groupoid& groupoid, const Nucleus& nucleus, unsigned probe_depth,
                                std::size_t cap)
{
    std::size_t failures = 0;
    const auto& graph = groupoid.graph();
    for (const auto& cert : nucleus.certificates) {
        MachineState gh = groupoid.compose(nucleus.states[cert.g], nucleus.states[cert.h]);
        std::set<MachineState> level{gh}, probed;
        for (unsigned depth = 0; depth <= probe_depth; ++depth) {
            if (depth >= cert.depth)
                probed.insert(level.begin(), level.end());
            std::set<MachineState> next;
            for (const auto& s : level)
                for (auto e : graph.edges_with_range(s.d()))
                    next.insert(groupoid.apply(s, e).second);
            level = std::move(next);
        }
        if (probed.empty())
            continue;
        std::vector<MachineState> roots = nucleus.states;
        roots.insert(roots.end(), probed.begin(), probed.end());
        RawMachine raw = raw_closure(groupoid, roots, cap);
        auto cls = bisimulation_classes(raw);
        std::set<std::size_t> member_classes;
        for (const auto& s : nucleus.states)
            member_classes.insert(cls[raw.index.at(s)]);
        for (const auto& s : probed)
            if (!member_classes.count(cls[raw.index.at(s)])) {
                ++failures;
                break;
            }
    }
    return failures;
}

std::vector<bool> is_minimal_on_cycles(const Nucleus& nucleus)
{
    const std::size_t n = nucleus.size();
    std::vector<bool> out(n, false);
    for (std::size_t start = 0; start < n; ++start) {
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> stack;
        for (const auto& s : nucleus.transitions[start])
            if (!seen[s.target]) {
                seen[s.target] = true;
                stack.push_back(s.target);
            }
        while (!stack.empty() && !seen[start]) {
            std::size_t v = stack.back();
            stack.pop_back();
            for (const auto& s : nucleus.transitions[v])
                if (!seen[s.target]) {
                    seen[s.target] = true;
                    stack.push_back(s.target);
                }
        }
        out[start] = seen[start];
    }
    return out;
}

MooreDiagram moore_diagram(const Groupoid& groupoid, const Nucleus& nucleus)
{
    MooreDiagram d;
    for (std::size_t i = 0; i < nucleus.size(); ++i) {
        const auto& s = nucleus.states[i];
        d.names.push_back(groupoid.name(s));
        d.domain.push_back(s.d());
        d.codomain.push_back(s.c());
        d.words.push_back(groupoid.word_text(s));
        for (const auto& st : nucleus.transitions[i])
            d.edges.push_back({i, st.target, st.edge, st.image});
    }
    return d;
}

MooreDiagram moore_from_automaton(const EAutomaton& automaton)
{
    const auto& g = automaton.graph();
    MooreDiagram d;
    const std::size_t nv = g.vertex_count();
    for (auto v : g.vertices()) {
        d.names.push_back("id_" + g.vertex_name(v));
        d.domain.push_back(v);
        d.codomain.push_back(v);
        d.words.push_back("id:" + g.vertex_name(v));
    }
    for (std::uint32_t i = 0; i < automaton.state_count(); ++i) {
        const auto& s = automaton.state(i);
        d.names.push_back(s.id);
        d.domain.push_back(s.domain);
        d.codomain.push_back(s.codomain);
        d.words.push_back("");
    }
    auto node = [&](StateRef r) { return r.is_identity() ? r.index : nv + r.index; };
    for (std::size_t i = 0; i < d.names.size(); ++i) {
        StateRef ref = i < nv ? StateRef::identity(VertexId{static_cast<std::uint32_t>(i)})
                              : StateRef::proper(static_cast<std::uint32_t>(i - nv));
        for (auto e : g.edges_with_range(automaton.domain(ref))) {
            auto t = automaton.step(ref, e);
            d.edges.push_back({i, node(t.restriction), e, t.image});
        }
    }
    return d;
}

namespace {

std::string dot_quote(const std::string& s)
{
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\')
            out += '\\';
        out += ch;
    }
    return out + "\"";
}

} // namespace

std::string export_dot(const MooreDiagram& diagram, const DirectedGraph& graph)
{
    std::ostringstream out;
    out << "digraph moore {\n";
    for (const auto& n : diagram.names)
        out << "  " << dot_quote(n) << ";\n";
    for (const auto& e : diagram.edges)
        out << "  " << dot_quote(diagram.names[e.from]) << " -> " << dot_quote(diagram.names[e.to])
            << " [label=" << dot_quote("(" + graph.edge_name(e.edge) + "," + graph.edge_name(e.image) + ")")
            << "];\n";
    out << "}\n";
    return out.str();
}

nlohmann::json export_moore_json(const MooreDiagram& diagram, const DirectedGraph& graph)
{
    using nlohmann::json;
    std::vector<bool> is_identity(diagram.names.size(), false);
    for (std::size_t i = 0; i < diagram.names.size(); ++i)
        is_identity[i] = diagram.names[i] == "id_" + graph.vertex_name(diagram.domain[i]) &&
                         diagram.domain[i] == diagram.codomain[i];
    json states = json::array(), transitions = json::array();
    for (std::size_t i = 0; i < diagram.names.size(); ++i) {
        if (is_identity[i])
            continue;
        json s{{"id", diagram.names[i]},
               {"domain", graph.vertex_name(diagram.domain[i])},
               {"codomain", graph.vertex_name(diagram.codomain[i])}};
        if (!diagram.words[i].empty())
            s["word"] = diagram.words[i];
        states.push_back(std::move(s));
    }
    for (const auto& e : diagram.edges) {
        if (is_identity[e.from])
            continue;
        transitions.push_back({{"state", diagram.names[e.from]},
                               {"edge", graph.edge_name(e.edge)},
                               {"image", graph.edge_name(e.image)},
                               {"restriction", is_identity[e.to] ? graph.vertex_name(diagram.domain[e.to])
                                                                 : diagram.names[e.to]}});
    }
    return json{{"schema", "ssg-document/1"},
                {"graph", graph_to_json(graph)},
                {"automaton", {{"states", states}, {"transitions", transitions}}}};
}

MooreDiagram import_moore_json(const nlohmann::json& document)
{
    auto graph = std::make_shared<const DirectedGraph>(load_graph(document.at("graph")));
    EAutomaton a = load_automaton(document.at("automaton"), graph);
    MooreDiagram d = moore_from_automaton(a);
    const std::size_t nv = graph->vertex_count();
    const auto& states = document.at("automaton").at("states");
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i].contains("word"))
            d.words[nv + i] = states[i].at("word").get<std::string>();
    return d;
}

} // namespace ssg
