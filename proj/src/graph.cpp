#include "ssg/graph.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <queue>
#include <set>

#include "ssg/error.hpp"

namespace ssg {

bool Path::is_prefix_of(const Path& other) const noexcept
{
    if (range_ != other.range_ || edges_.size() > other.edges_.size())
        return false;
    return std::equal(edges_.begin(), edges_.end(), other.edges_.begin());
}

std::strong_ordering operator<=>(const Path& a, const Path& b) noexcept
{
    if (auto c = a.edges_.size() <=> b.edges_.size(); c != 0)
        return c;
    if (auto c = a.range_ <=> b.range_; c != 0)
        return c;
    if (auto c = a.edges_ <=> b.edges_; c != 0)
        return c;
    return a.source_ <=> b.source_;
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) : n_(rows.size())
{
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
        if (row.size() != n_)
            throw Error(ErrorKind::InvalidMatrices, "matrix is not square");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

std::int64_t IntMatrix::row_sum(std::size_t i) const
{
    std::int64_t total = 0;
    for (std::size_t j = 0; j < n_; ++j)
        total += (*this)(i, j);
    return total;
}

IntMatrix IntMatrix::power(unsigned k) const
{
    IntMatrix result = identity(n_);
    IntMatrix base = *this;
    while (k > 0) {
        if (k & 1u)
            result = result * base;
        k >>= 1u;
        if (k > 0)
            base = base * base;
    }
    return result;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
{
    IntMatrix c(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
        for (std::size_t k = 0; k < a.n_; ++k) {
            const auto aik = a(i, k);
            if (aik == 0)
                continue;
            for (std::size_t j = 0; j < a.n_; ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

DirectedGraph DirectedGraph::create(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges,
                                    bool strict)
{
    DirectedGraph g;
    for (auto& name : vertices) {
        if (name.empty())
            throw Error(ErrorKind::ParseError, "empty vertex id");
        VertexId id{static_cast<std::uint32_t>(g.vertex_names_.size())};
        if (!g.vertex_index_.emplace(name, id).second)
            throw Error(ErrorKind::DuplicateId, "vertex '" + name + "' declared twice");
        g.vertex_names_.push_back(std::move(name));
    }
    g.by_range_.resize(g.vertex_names_.size());
    for (const auto& spec : edges) {
        if (spec.id.empty())
            throw Error(ErrorKind::ParseError, "empty edge id");
        auto lookup = [&](const std::string& v) {
            auto it = g.vertex_index_.find(v);
            if (it == g.vertex_index_.end())
                throw Error(ErrorKind::DanglingVertexRef, "edge '" + spec.id + "' references undeclared vertex '" + v + "'");
            return it->second;
        };
        EdgeId id{static_cast<std::uint32_t>(g.edges_.size())};
        if (g.vertex_index_.count(spec.id) || !g.edge_index_.emplace(spec.id, id).second)
            throw Error(ErrorKind::DuplicateId, "edge id '" + spec.id + "' is not unique");
        Edge e{spec.id, lookup(spec.range), lookup(spec.source)};
        g.by_range_[e.range.value].push_back(id);
        g.edges_.push_back(std::move(e));
    }
    if (strict) {
        for (std::size_t v = 0; v < g.by_range_.size(); ++v)
            if (g.by_range_[v].empty())
                throw Error(ErrorKind::SourceVertex, "vertex '" + g.vertex_names_[v] + "' receives no edges");
    }
    return g;
}

VertexId DirectedGraph::vertex(std::string_view name) const
{
    auto it = vertex_index_.find(std::string(name));
    if (it == vertex_index_.end())
        throw Error(ErrorKind::UnknownVertex, "unknown vertex '" + std::string(name) + "'");
    return it->second;
}

EdgeId DirectedGraph::edge_id(std::string_view name) const
{
    auto it = edge_index_.find(std::string(name));
    if (it == edge_index_.end())
        throw Error(ErrorKind::UnknownEdge, "unknown edge '" + std::string(name) + "'");
    return it->second;
}

bool DirectedGraph::has_vertex(std::string_view name) const { return vertex_index_.count(std::string(name)) > 0; }
bool DirectedGraph::has_edge(std::string_view name) const { return edge_index_.count(std::string(name)) > 0; }

std::vector<VertexId> DirectedGraph::vertices() const
{
    std::vector<VertexId> out(vertex_names_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = VertexId{static_cast<std::uint32_t>(i)};
    return out;
}

std::vector<EdgeId> DirectedGraph::edges() const
{
    std::vector<EdgeId> out(edges_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = EdgeId{static_cast<std::uint32_t>(i)};
    return out;
}

bool DirectedGraph::has_no_sources() const
{
    return std::none_of(by_range_.begin(), by_range_.end(), [](const auto& v) { return v.empty(); });
}

Path DirectedGraph::empty_path(VertexId v) const
{
    if (v.value >= vertex_names_.size())
        throw Error(ErrorKind::UnknownVertex, "vertex index out of range");
    return Path(v, v, {});
}

Path DirectedGraph::make_path(const std::vector<EdgeId>& edges) const
{
    if (edges.empty())
        throw Error(ErrorKind::NotComposable, "a path without edges needs an explicit vertex");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].value >= edges_.size())
            throw Error(ErrorKind::UnknownEdge, "edge index out of range");
        if (i + 1 < edges.size() && source(edges[i]) != range(edges[i + 1]))
            throw Error(ErrorKind::NotComposable,
                        "s(" + edge_name(edges[i]) + ") != r(" + edge_name(edges[i + 1]) + ")");
    }
    return Path(range(edges.front()), source(edges.back()), edges);
}

Path DirectedGraph::extend(const Path& path, EdgeId e) const
{
    if (range(e) != path.source())
        throw Error(ErrorKind::NotComposable, "cannot extend path by edge " + edge_name(e));
    auto edges = path.edges();
    edges.push_back(e);
    return Path(path.range(), source(e), std::move(edges));
}

Path DirectedGraph::concat(const Path& first, const Path& second) const
{
    if (first.source() != second.range())
        throw Error(ErrorKind::NotComposable, "s(" + format_path(first) + ") != r(" + format_path(second) + ")");
    auto edges = first.edges();
    edges.insert(edges.end(), second.edges().begin(), second.edges().end());
    return Path(first.range(), second.source(), std::move(edges));
}

Path DirectedGraph::suffix(const Path& path, std::size_t from) const
{
    if (from >= path.length())
        return empty_path(path.source());
    return make_path(std::vector<EdgeId>(path.edges().begin() + static_cast<std::ptrdiff_t>(from), path.edges().end()));
}

Path DirectedGraph::prefix(const Path& path, std::size_t length) const
{
    if (length == 0)
        return empty_path(path.range());
    if (length >= path.length())
        return path;
    return make_path(std::vector<EdgeId>(path.edges().begin(), path.edges().begin() + static_cast<std::ptrdiff_t>(length)));
}

Path DirectedGraph::parse_path(std::string_view text) const
{
    if (text.empty())
        throw Error(ErrorKind::ParseError, "empty path text");
    if (text.front() == '@')
        return empty_path(vertex(text.substr(1)));
    std::vector<EdgeId> edges;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto dot = text.find('.', start);
        auto token = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
        if (token.empty())
            throw Error(ErrorKind::ParseError, "empty edge id in path '" + std::string(text) + "'");
        edges.push_back(edge_id(token));
        if (dot == std::string_view::npos)
            break;
        start = dot + 1;
    }
    return make_path(edges);
}

std::string DirectedGraph::format_path(const Path& path) const
{
    if (path.empty())
        return "@" + vertex_name(path.range());
    std::string out;
    for (std::size_t i = 0; i < path.length(); ++i) {
        if (i)
            out += '.';
        out += edge_name(path[i]);
    }
    return out;
}

bool operator==(const DirectedGraph& a, const DirectedGraph& b)
{
    if (a.vertex_names_ != b.vertex_names_ || a.edges_.size() != b.edges_.size())
        return false;
    for (std::size_t i = 0; i < a.edges_.size(); ++i) {
        const auto& x = a.edges_[i];
        const auto& y = b.edges_[i];
        if (x.name != y.name || x.range != y.range || x.source != y.source)
            return false;
    }
    return true;
}

DirectedGraph load_graph(const nlohmann::json& section, bool strict)
{
    try {
        std::vector<std::string> vertices = section.at("vertices").get<std::vector<std::string>>();
        std::vector<EdgeSpec> edges;
        for (const auto& e : section.at("edges"))
            edges.push_back({e.at("id").get<std::string>(), e.at("range").get<std::string>(),
                             e.at("source").get<std::string>()});
        return DirectedGraph::create(std::move(vertices), edges, strict);
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorKind::ParseError, std::string("graph section: ") + ex.what());
    }
}

nlohmann::json graph_to_json(const DirectedGraph& graph)
{
    nlohmann::json out;
    out["vertices"] = nlohmann::json::array();
    for (auto v : graph.vertices())
        out["vertices"].push_back(graph.vertex_name(v));
    out["edges"] = nlohmann::json::array();
    for (auto e : graph.edges())
        out["edges"].push_back({{"id", graph.edge_name(e)},
                                {"range", graph.vertex_name(graph.range(e))},
                                {"source", graph.vertex_name(graph.source(e))}});
    return out;
}

IntMatrix vertex_matrix(const DirectedGraph& graph)
{
    IntMatrix b(graph.vertex_count());
    for (auto e : graph.edges())
        b(graph.range(e).value, graph.source(e).value) += 1;
    return b;
}

std::uint64_t count_paths(const DirectedGraph& graph, VertexId v, VertexId w, unsigned k)
{
    if (v.value >= graph.vertex_count() || w.value >= graph.vertex_count())
        throw Error(ErrorKind::UnknownVertex, "vertex index out of range");
    return static_cast<std::uint64_t>(vertex_matrix(graph).power(k)(v.value, w.value));
}

std::vector<Path> enumerate_paths(const DirectedGraph& graph, VertexId v, unsigned k)
{
    std::vector<Path> level{graph.empty_path(v)};
    for (unsigned depth = 0; depth < k; ++depth) {
        std::vector<Path> next;
        for (const auto& p : level)
            for (auto e : graph.edges_with_range(p.source()))
                next.push_back(graph.extend(p, e));
        level = std::move(next);
    }
    // Declaration order of vE^1 is already lexicographic on edge indices,
    // but edges_with_range need not be sorted when ids interleave.
    std::sort(level.begin(), level.end(),
              [](const Path& a, const Path& b) { return a.edges() < b.edges(); });
    return level;
}

std::vector<Path> enumerate_all_paths(const DirectedGraph& graph, unsigned max_length)
{
    std::vector<Path> out;
    for (unsigned k = 0; k <= max_length; ++k)
        for (auto v : graph.vertices()) {
            auto level = enumerate_paths(graph, v, k);
            out.insert(out.end(), std::make_move_iterator(level.begin()), std::make_move_iterator(level.end()));
        }
    return out;
}

bool is_irreducible(const IntMatrix& m)
{
    const std::size_t n = m.size();
    if (n == 0)
        return false;
    auto reach_all = [&](bool transpose) {
        std::vector<bool> seen(n, false);
        std::queue<std::size_t> todo;
        todo.push(0);
        seen[0] = true;
        while (!todo.empty()) {
            auto i = todo.front();
            todo.pop();
            for (std::size_t j = 0; j < n; ++j) {
                auto entry = transpose ? m(j, i) : m(i, j);
                if (entry > 0 && !seen[j]) {
                    seen[j] = true;
                    todo.push(j);
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    };
    if (!reach_all(false) || !reach_all(true))
        return false;
    // A single vertex is irreducible only with a loop.
    return n > 1 || m(0, 0) > 0;
}

bool is_strongly_connected(const DirectedGraph& graph)
{
    // Pairs (v, v) are joined by the empty path, so one vertex always passes.
    if (graph.vertex_count() == 1)
        return true;
    return is_irreducible(vertex_matrix(graph));
}

} // namespace ssg
