#include "ssg/groupoid.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <numeric>
#include <set>

#include "ssg/error.hpp"

namespace ssg {

namespace {

std::vector<Letter> reduce(const std::vector<Letter>& letters)
{
    std::vector<Letter> out;
    out.reserve(letters.size());
    for (auto l : letters) {
        if (!out.empty() && out.back().state == l.state && out.back().inverse != l.inverse)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

Letter flip(Letter l) { return {l.state, !l.inverse}; }

struct Token {
    bool is_identity = false;
    VertexId vertex;
    Letter letter;
};

class WordParser {
  public:
    WordParser(const Groupoid& groupoid, std::string_view text) : groupoid_(groupoid), text_(text) {}

    std::vector<Token> parse()
    {
        auto tokens = word();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return tokens;
    }

    VertexId d(const Token& t) const
    {
        if (t.is_identity)
            return t.vertex;
        const auto& s = groupoid_.automaton().state(t.letter.state);
        return t.letter.inverse ? s.codomain : s.domain;
    }
    VertexId c(const Token& t) const
    {
        if (t.is_identity)
            return t.vertex;
        const auto& s = groupoid_.automaton().state(t.letter.state);
        return t.letter.inverse ? s.domain : s.codomain;
    }

    void check_composable(const std::vector<Token>& tokens) const
    {
        for (std::size_t i = 0; i + 1 < tokens.size(); ++i)
            if (d(tokens[i]) != c(tokens[i + 1]))
                throw Error(ErrorKind::NonComposableWord,
                            "'" + std::string(text_) + "': d(" + label(tokens[i]) + ") != c(" + label(tokens[i + 1]) +
                                ")");
    }

  private:
    static constexpr std::size_t max_tokens = 1'000'000;

    [[noreturn]] void fail(const std::string& why) const
    {
        throw Error(ErrorKind::ParseError,
                    "word '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + why);
    }

    std::string label(const Token& t) const
    {
        const auto& a = groupoid_.automaton();
        if (t.is_identity)
            return "id:" + a.graph().vertex_name(t.vertex);
        return a.state(t.letter.state).id + (t.letter.inverse ? "^-1" : "");
    }

    bool peek(char ch) const { return pos_ < text_.size() && text_[pos_] == ch; }

    std::vector<Token> word()
    {
        auto tokens = term();
        while (peek('.')) {
            ++pos_;
            auto more = term();
            tokens.insert(tokens.end(), more.begin(), more.end());
            if (tokens.size() > max_tokens)
                fail("expansion too long");
        }
        return tokens;
    }

    std::vector<Token> term()
    {
        auto tokens = atom();
        while (peek('^')) {
            ++pos_;
            tokens = expand(tokens, integer());
        }
        return tokens;
    }

    long integer()
    {
        std::size_t start = pos_;
        if (peek('-') || peek('+'))
            ++pos_;
        std::size_t digits = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ == digits)
            fail("expected an integer exponent");
        if (pos_ - digits > 6)
            fail("exponent too large");
        return std::stol(std::string(text_.substr(start, pos_ - start)));
    }

    std::vector<Token> expand(const std::vector<Token>& base, long n)
    {
        check_composable(base);
        if (n == 0) {
            if (d(base.back()) != c(base.front()))
                throw Error(ErrorKind::NonComposableWord, "'" + std::string(text_) + "': zeroth power of a non-loop");
            Token t;
            t.is_identity = true;
            t.vertex = d(base.back());
            return {t};
        }
        std::vector<Token> unit = base;
        if (n < 0) {
            std::reverse(unit.begin(), unit.end());
            for (auto& t : unit)
                if (!t.is_identity)
                    t.letter = flip(t.letter);
        }
        const std::size_t reps = static_cast<std::size_t>(n < 0 ? -n : n);
        if (reps * unit.size() > max_tokens)
            fail("expansion too long");
        std::vector<Token> out;
        out.reserve(reps * unit.size());
        for (std::size_t i = 0; i < reps; ++i)
            out.insert(out.end(), unit.begin(), unit.end());
        return out;
    }

    std::vector<Token> atom()
    {
        if (peek('(')) {
            ++pos_;
            auto tokens = word();
            if (!peek(')'))
                fail("missing ')'");
            ++pos_;
            return tokens;
        }
        if (text_.substr(pos_, 3) == "id:") {
            pos_ += 3;
            std::string v = name();
            const auto& g = groupoid_.graph();
            if (!g.has_vertex(v))
                throw Error(ErrorKind::UnknownLetter, "'" + v + "' is not a vertex");
            Token t;
            t.is_identity = true;
            t.vertex = g.vertex(v);
            return {t};
        }
        std::string id = name();
        if (auto s = groupoid_.automaton().find_state(id)) {
            Token t;
            t.letter = {*s, false};
            return {t};
        }
        if (groupoid_.graph().has_vertex(id)) {
            Token t;
            t.is_identity = true;
            t.vertex = groupoid_.graph().vertex(id);
            return {t};
        }
        throw Error(ErrorKind::UnknownLetter, "'" + id + "' names no state or vertex");
    }

    std::string name()
    {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::string_view(".()^").find(text_[pos_]) == std::string_view::npos)
            ++pos_;
        if (pos_ == start)
            fail("expected a letter");
        return std::string(text_.substr(start, pos_ - start));
    }

    const Groupoid& groupoid_;
    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Groupoid::Groupoid(std::shared_ptr<const EAutomaton> automaton) : automaton_(std::move(automaton)) {}

VertexId Groupoid::letter_d(Letter l) const
{
    const auto& s = automaton_->state(l.state);
    return l.inverse ? s.codomain : s.domain;
}

VertexId Groupoid::letter_c(Letter l) const
{
    const auto& s = automaton_->state(l.state);
    return l.inverse ? s.domain : s.codomain;
}

MachineState Groupoid::generator(std::uint32_t state, bool inverse) const
{
    Letter l{state, inverse};
    return MachineState({l}, letter_d(l), letter_c(l));
}

MachineState Groupoid::from_letters(const std::vector<Letter>& letters) const
{
    if (letters.empty())
        throw Error(ErrorKind::NonComposableWord, "empty letter list has no unit");
    for (std::size_t i = 0; i + 1 < letters.size(); ++i)
        if (letter_d(letters[i]) != letter_c(letters[i + 1]))
            throw Error(ErrorKind::NonComposableWord, "letters " + std::to_string(i) + " and " +
                                                          std::to_string(i + 1) + " do not compose");
    return MachineState(reduce(letters), letter_d(letters.back()), letter_c(letters.front()));
}

MachineState Groupoid::from_ref(StateRef a) const
{
    return a.is_identity() ? identity(a.vertex()) : generator(a.index);
}

MachineState Groupoid::resolve(std::string_view word) const
{
    while (!word.empty() && std::isspace(static_cast<unsigned char>(word.front())))
        word.remove_prefix(1);
    while (!word.empty() && std::isspace(static_cast<unsigned char>(word.back())))
        word.remove_suffix(1);
    WordParser parser(*this, word);
    auto tokens = parser.parse();
    parser.check_composable(tokens);
    std::vector<Letter> letters;
    for (const auto& t : tokens)
        if (!t.is_identity)
            letters.push_back(t.letter);
    return MachineState(reduce(letters), parser.d(tokens.back()), parser.c(tokens.front()));
}

Groupoid::LetterStep Groupoid::step(Letter l, EdgeId e) const
{
    if (!l.inverse) {
        auto t = automaton_->step(StateRef::proper(l.state), e);
        return {t.image, t.restriction.is_identity(), Letter{t.restriction.index, false}};
    }
    EdgeId pre = automaton_->preimage(l.state, e);
    auto t = automaton_->step(StateRef::proper(l.state), pre);
    return {pre, t.restriction.is_identity(), Letter{t.restriction.index, true}};
}

std::pair<EdgeId, MachineState> Groupoid::apply(const MachineState& g, EdgeId e) const
{
    const auto& graph = this->graph();
    if (graph.range(e) != g.d())
        throw Error(ErrorKind::DomainMismatch, "edge " + graph.edge_name(e) + " is not in d(" + name(g) + ")E^1");
    const auto& w = g.word();
    std::vector<Letter> rest;
    rest.reserve(w.size());
    EdgeId cur = e;
    for (std::size_t i = w.size(); i-- > 0;) {
        auto st = step(w[i], cur);
        cur = st.image;
        if (!st.restricts_to_identity)
            rest.push_back(st.restriction);
    }
    std::reverse(rest.begin(), rest.end());
    return {cur, MachineState(reduce(rest), graph.source(e), graph.source(cur))};
}

std::pair<Path, MachineState> Groupoid::apply(const MachineState& g, const Path& mu) const
{
    const auto& graph = this->graph();
    if (mu.range() != g.d())
        throw Error(ErrorKind::DomainMismatch, "path " + graph.format_path(mu) + " is not in d(" + name(g) + ")E*");
    if (mu.empty())
        return {graph.empty_path(g.c()), g};
    std::vector<EdgeId> image;
    image.reserve(mu.length());
    MachineState cur = g;
    for (auto e : mu.edges()) {
        auto [img, next] = apply(cur, e);
        image.push_back(img);
        cur = std::move(next);
    }
    return {graph.make_path(image), cur};
}

MachineState Groupoid::compose(const MachineState& g, const MachineState& h) const
{
    if (g.d() != h.c())
        throw Error(ErrorKind::NotComposable, "d(" + name(g) + ") != c(" + name(h) + ")");
    std::vector<Letter> w = g.word();
    w.insert(w.end(), h.word().begin(), h.word().end());
    return MachineState(reduce(w), h.d(), g.c());
}

MachineState Groupoid::inverse(const MachineState& g) const
{
    std::vector<Letter> w(g.word().rbegin(), g.word().rend());
    for (auto& l : w)
        l = flip(l);
    return MachineState(std::move(w), g.c(), g.d());
}

MachineState Groupoid::power(const MachineState& g, long n) const
{
    if (n == 1)
        return g;
    if (g.d() != g.c())
        throw Error(ErrorKind::NotIsotropy, name(g) + " has d != c");
    if (n < 0)
        return power(inverse(g), -n);
    MachineState out = identity(g.d());
    for (long i = 0; i < n; ++i)
        out = compose(out, g);
    return out;
}

RawMachine raw_closure(const Groupoid& groupoid, const std::vector<MachineState>& roots, std::size_t cap)
{
    RawMachine m;
    auto add = [&](const MachineState& s) -> std::size_t {
        auto [it, fresh] = m.index.emplace(s, m.states.size());
        if (fresh) {
            if (m.states.size() >= cap)
                throw Error(ErrorKind::ClosureCapExceeded,
                            "restriction closure exceeds " + std::to_string(cap) + " states");
            m.states.push_back(s);
        }
        return it->second;
    };
    for (const auto& r : roots)
        add(r);
    const auto& graph = groupoid.graph();
    for (std::size_t i = 0; i < m.states.size(); ++i) {
        std::vector<ClosedMachine::Step> steps;
        const MachineState g = m.states[i];
        for (auto e : graph.edges_with_range(g.d())) {
            auto [img, rest] = groupoid.apply(g, e);
            steps.push_back({e, img, add(rest)});
        }
        m.transitions.push_back(std::move(steps));
    }
    return m;
}

std::vector<std::size_t> bisimulation_classes(const RawMachine& machine)
{
    const std::size_t n = machine.states.size();
    std::vector<std::size_t> cls(n);
    {
        std::map<std::tuple<std::uint32_t, std::uint32_t, std::vector<std::uint32_t>>, std::size_t> keys;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::uint32_t> images;
            for (const auto& s : machine.transitions[i])
                images.push_back(s.image.value);
            auto key = std::make_tuple(machine.states[i].d().value, machine.states[i].c().value, std::move(images));
            cls[i] = keys.emplace(std::move(key), keys.size()).first->second;
        }
    }
    std::size_t count = 0;
    for (auto c : cls)
        count = std::max(count, c + 1);
    while (true) {
        std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> keys;
        std::vector<std::size_t> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::size_t> succ;
            for (const auto& s : machine.transitions[i])
                succ.push_back(cls[s.target]);
            next[i] = keys.emplace(std::make_pair(cls[i], std::move(succ)), keys.size()).first->second;
        }
        const std::size_t next_count = keys.size();
        cls = std::move(next);
        if (next_count == count)
            return cls;
        count = next_count;
    }
}

ClosedMachine Groupoid::closure(const MachineState& g, std::size_t cap) const
{
    if (cap == 0)
        throw Error(ErrorKind::ClosureCapExceeded, "cap must be positive");
    RawMachine raw = raw_closure(*this, {g}, cap);
    auto cls = bisimulation_classes(raw);
    // classes numbered by first appearance in BFS order; root first
    std::map<std::size_t, std::size_t> renumber;
    std::vector<std::size_t> rep;
    for (std::size_t i = 0; i < raw.states.size(); ++i)
        if (renumber.emplace(cls[i], rep.size()).second)
            rep.push_back(i);
    ClosedMachine out;
    out.raw_size = raw.states.size();
    for (auto r : rep) {
        out.states.push_back(raw.states[r]);
        std::vector<ClosedMachine::Step> steps = raw.transitions[r];
        for (auto& s : steps)
            s.target = renumber.at(cls[s.target]);
        out.transitions.push_back(std::move(steps));
    }
    return out;
}

EqualityResult Groupoid::equal(const MachineState& g, const MachineState& h, std::size_t cap) const
{
    const auto& graph = this->graph();
    if (g.d() != h.d() || g.c() != h.c())
        return {false, std::nullopt};  // different units: no path to compare on
    if (g == h)
        return {true, std::nullopt};
    RawMachine raw = raw_closure(*this, {g, h}, cap);
    auto cls = bisimulation_classes(raw);
    const std::size_t ig = raw.index.at(g), ih = raw.index.at(h);
    if (cls[ig] == cls[ih])
        return {true, std::nullopt};

    // shortest separating path by BFS over pairs
    struct Item {
        std::size_t a, b;
        Path path;
    };
    std::deque<Item> queue;
    std::set<std::pair<std::size_t, std::size_t>> seen{{ig, ih}};
    queue.push_back({ig, ih, graph.empty_path(g.d())});
    while (!queue.empty()) {
        Item item = std::move(queue.front());
        queue.pop_front();
        const auto& ta = raw.transitions[item.a];
        const auto& tb = raw.transitions[item.b];
        if (raw.states[item.a].c() != raw.states[item.b].c())
            return {false, item.path};
        for (std::size_t k = 0; k < ta.size(); ++k)
            if (ta[k].image != tb[k].image)
                return {false, graph.extend(item.path, ta[k].edge)};
        for (std::size_t k = 0; k < ta.size(); ++k)
            if (seen.insert({ta[k].target, tb[k].target}).second)
                queue.push_back({ta[k].target, tb[k].target, graph.extend(item.path, ta[k].edge)});
    }
    throw Error(ErrorKind::ClosureCapExceeded, "inconsistent bisimulation classes");
}

bool Groupoid::is_identity(const MachineState& g, std::size_t cap) const
{
    return g.d() == g.c() && equal(g, identity(g.d()), cap).equal;
}

std::optional<std::size_t> Groupoid::find_equivalent(const std::vector<MachineState>& pool, const MachineState& g,
                                                     std::size_t cap) const
{
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (pool[i] == g)
            return i;
    std::vector<MachineState> roots = pool;
    roots.push_back(g);
    RawMachine raw = raw_closure(*this, roots, cap);
    auto cls = bisimulation_classes(raw);
    const std::size_t target = cls[raw.index.at(g)];
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (cls[raw.index.at(pool[i])] == target)
            return i;
    return std::nullopt;
}

std::optional<unsigned> Groupoid::order(const MachineState& g, unsigned cap) const
{
    if (g.d() != g.c())
        throw Error(ErrorKind::NotIsotropy, name(g) + " has d != c");
    MachineState p = g;
    for (unsigned n = 1; n <= cap; ++n) {
        if (is_identity(p))
            return n;
        p = compose(p, g);
    }
    return std::nullopt;
}

std::string Groupoid::name(const MachineState& g) const
{
    if (g.is_trivial_word())
        return "id_" + graph().vertex_name(g.d());
    std::string out;
    for (auto l : g.word()) {
        if (!out.empty())
            out += '.';
        out += "f_" + automaton_->state(l.state).id;
        if (l.inverse)
            out += "^-1";
    }
    return out;
}

std::string Groupoid::word_text(const MachineState& g) const
{
    if (g.is_trivial_word())
        return "id:" + graph().vertex_name(g.d());
    std::string out;
    for (auto l : g.word()) {
        if (!out.empty())
            out += '.';
        out += automaton_->state(l.state).id;
        if (l.inverse)
            out += "^-1";
    }
    return out;
}

std::vector<MachineState> Groupoid::words_up_to(std::size_t max_length) const
{
    std::vector<MachineState> out;
    for (auto v : graph().vertices())
        out.push_back(identity(v));
    std::vector<Letter> letters;
    for (std::uint32_t i = 0; i < automaton_->state_count(); ++i) {
        letters.push_back({i, false});
        letters.push_back({i, true});
    }
    std::vector<MachineState> level;
    if (max_length >= 1)
        for (auto l : letters)
            level.push_back(generator(l.state, l.inverse));
    for (std::size_t len = 1; len <= max_length; ++len) {
        out.insert(out.end(), level.begin(), level.end());
        if (len == max_length)
            break;
        std::vector<MachineState> next;
        for (const auto& w : level)
            for (auto l : letters) {
                if (letter_c(l) != w.d())
                    continue;
                if (w.word().back().state == l.state && w.word().back().inverse != l.inverse)
                    continue;
                std::vector<Letter> word = w.word();
                word.push_back(l);
                next.emplace_back(std::move(word), letter_d(l), w.c());
            }
        level = std::move(next);
    }
    return out;
}

OrbitData Groupoid::orbits() const
{
    const auto& graph = this->graph();
    const std::size_t nv = graph.vertex_count();
    std::vector<std::size_t> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::uint32_t i = 0; i < automaton_->state_count(); ++i) {
        const auto& s = automaton_->state(i);
        auto a = find(s.domain.value), b = find(s.codomain.value);
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    }

    OrbitData out;
    out.component_of.assign(nv, 0);
    std::map<std::size_t, std::size_t> comp_index;
    for (std::size_t v = 0; v < nv; ++v) {
        auto root = find(v);
        auto [it, fresh] = comp_index.emplace(root, out.components.size());
        if (fresh) {
            out.components.emplace_back();
            out.base.push_back(VertexId{static_cast<std::uint32_t>(v)});
        }
        out.components[it->second].push_back(VertexId{static_cast<std::uint32_t>(v)});
        out.component_of[v] = it->second;
    }

    out.transversal.assign(nv, MachineState());
    std::vector<bool> done(nv, false);
    for (auto x : out.base) {
        out.transversal[x.value] = identity(x);
        done[x.value] = true;
        std::deque<VertexId> queue{x};
        while (!queue.empty()) {
            VertexId u = queue.front();
            queue.pop_front();
            for (std::uint32_t i = 0; i < automaton_->state_count(); ++i)
                for (bool inv : {false, true}) {
                    Letter l{i, inv};
                    if (letter_d(l) != u)
                        continue;
                    VertexId y = letter_c(l);
                    if (done[y.value])
                        continue;
                    done[y.value] = true;
                    out.transversal[y.value] = compose(generator(i, inv), out.transversal[u.value]);
                    queue.push_back(y);
                }
        }
    }
    return out;
}

OrbitData Groupoid::with_transversal(const OrbitData& base, std::vector<MachineState> transversal) const
{
    const auto& graph = this->graph();
    if (transversal.size() != graph.vertex_count())
        throw Error(ErrorKind::DomainMismatch, "transversal needs one element per vertex");
    for (std::size_t v = 0; v < transversal.size(); ++v) {
        VertexId x = base.base[base.component_of[v]];
        const auto& k = transversal[v];
        if (k.d() != x || k.c().value != v)
            throw Error(ErrorKind::DomainMismatch, "transversal element " + name(k) + " does not run from " +
                                                       graph.vertex_name(x) + " to " +
                                                       graph.vertex_name(VertexId{static_cast<std::uint32_t>(v)}));
        if (VertexId{static_cast<std::uint32_t>(v)} == x && !is_identity(k))
            throw Error(ErrorKind::DomainMismatch, "transversal at a base vertex must be the identity");
    }
    OrbitData out = base;
    out.transversal = std::move(transversal);
    return out;
}

EAutomaton from_exel_pardo(std::shared_ptr<const DirectedGraph> graph_ptr, const ExelPardoData& data)
{
    const DirectedGraph& g = *graph_ptr;
    const std::size_t nk = data.elements.size(), nv = g.vertex_count(), ne = g.edge_count();
    auto fail = [](const std::string& which, const std::string& witness) {
        throw Error(ErrorKind::EPAxiomViolation, which + ": " + witness);
    };
    if (nk == 0 || data.product.size() != nk || data.sigma0.size() != nk || data.sigma1.size() != nk ||
        data.phi.size() != nk)
        fail("table shape", "tables must have one row per group element");
    for (std::size_t k = 0; k < nk; ++k) {
        if (data.product[k].size() != nk || data.sigma0[k].size() != nv || data.sigma1[k].size() != ne ||
            data.phi[k].size() != ne)
            fail("table shape", "row " + data.elements[k] + " has the wrong length");
        for (auto p : data.product[k])
            if (p && *p >= nk)
                fail("table shape", "product out of range");
        for (auto p : data.phi[k])
            if (p >= nk)
                fail("table shape", "cocycle value out of range");
        for (auto v : data.sigma0[k])
            if (v.value >= nv)
                fail("table shape", "vertex out of range");
        for (auto e : data.sigma1[k])
            if (e.value >= ne)
                fail("table shape", "edge out of range");
    }
    const auto& K = data.elements;
    auto vn = [&](std::size_t v) { return g.vertex_name(VertexId{static_cast<std::uint32_t>(v)}); };
    auto en = [&](std::size_t e) { return g.edge_name(EdgeId{static_cast<std::uint32_t>(e)}); };

    for (std::size_t v = 0; v < nv; ++v)
        if (data.sigma0[0][v].value != v)
            fail("identity acts trivially", "sigma0 moves " + vn(v));
    for (std::size_t e = 0; e < ne; ++e) {
        if (data.sigma1[0][e].value != e)
            fail("identity acts trivially", "sigma1 moves " + en(e));
        if (data.phi[0][e] != 0)
            fail("phi(identity, e) = identity", "e = " + en(e));
    }
    for (std::size_t k = 0; k < nk; ++k) {
        if (data.product[0][k] && *data.product[0][k] != k)
            fail("identity law", "1*" + K[k]);
        if (data.product[k][0] && *data.product[k][0] != k)
            fail("identity law", K[k] + "*1");
        std::set<std::uint32_t> vs, es;
        for (auto v : data.sigma0[k])
            vs.insert(v.value);
        for (auto e : data.sigma1[k])
            es.insert(e.value);
        if (vs.size() != nv)
            fail("sigma0 bijective", "k = " + K[k]);
        if (es.size() != ne)
            fail("sigma1 bijective", "k = " + K[k]);
        for (std::size_t e = 0; e < ne; ++e) {
            EdgeId eid{static_cast<std::uint32_t>(e)};
            EdgeId img = data.sigma1[k][e];
            if (g.range(img) != data.sigma0[k][g.range(eid).value])
                fail("r o sigma1 = sigma0 o r", "k = " + K[k] + ", e = " + en(e));
            if (g.source(img) != data.sigma0[k][g.source(eid).value])
                fail("s o sigma1 = sigma0 o s", "k = " + K[k] + ", e = " + en(e));
            const std::size_t p = data.phi[k][e];
            if (data.sigma0[p] != data.sigma0[k])
                fail("sigma0 of phi(k,e) = sigma0 of k", "k = " + K[k] + ", e = " + en(e));
        }
    }
    for (std::size_t k = 0; k < nk; ++k)
        for (std::size_t l = 0; l < nk; ++l) {
            if (!data.product[k][l])
                continue;
            const std::size_t kl = *data.product[k][l];
            const std::string pair = "k = " + K[k] + ", l = " + K[l];
            for (std::size_t v = 0; v < nv; ++v)
                if (data.sigma0[kl][v] != data.sigma0[k][data.sigma0[l][v].value])
                    fail("sigma0 is an action", pair + ", v = " + vn(v));
            for (std::size_t e = 0; e < ne; ++e) {
                const EdgeId le = data.sigma1[l][e];
                if (data.sigma1[kl][e] != data.sigma1[k][le.value])
                    fail("sigma1 is an action", pair + ", e = " + en(e));
                const auto& prod = data.product[data.phi[k][le.value]][data.phi[l][e]];
                if (prod && *prod != data.phi[kl][e])
                    fail("cocycle", pair + ", e = " + en(e));
            }
        }

    auto state_name = [&](std::size_t k, std::size_t v) { return K[k] + "@" + vn(v); };
    std::vector<StateSpec> states;
    std::vector<TransitionSpec> transitions;
    for (std::size_t k = 1; k < nk; ++k)
        for (std::size_t v = 0; v < nv; ++v) {
            states.push_back({state_name(k, v), vn(v), vn(data.sigma0[k][v].value)});
            for (auto e : g.edges_with_range(VertexId{static_cast<std::uint32_t>(v)})) {
                const std::size_t p = data.phi[k][e.value];
                const std::size_t s = g.source(e).value;
                transitions.push_back(
                    {state_name(k, v), g.edge_name(e), g.edge_name(data.sigma1[k][e.value]), p == 0 ? vn(s) : state_name(p, s)});
            }
        }
    return EAutomaton::create(std::move(graph_ptr), std::move(states), transitions);
}

} // namespace ssg
