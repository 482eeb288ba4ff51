#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ssg {

struct VertexId {
    std::uint32_t value = 0;
    friend auto operator<=>(VertexId, VertexId) = default;
};

struct EdgeId {
    std::uint32_t value = 0;
    friend auto operator<=>(EdgeId, EdgeId) = default;
};

struct Edge {
    std::string name;
    VertexId range;
    VertexId source;
};

/// A finite path mu_1 ... mu_k with s(mu_i) = r(mu_{i+1}); the empty path
/// carries its vertex as both range and source.
class Path {
  public:
    VertexId range() const noexcept { return range_; }
    VertexId source() const noexcept { return source_; }
    std::size_t length() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return edges_.empty(); }
    const std::vector<EdgeId>& edges() const noexcept { return edges_; }
    EdgeId operator[](std::size_t i) const { return edges_[i]; }

    /// True when this path is an initial segment of `other`.
    bool is_prefix_of(const Path& other) const noexcept;

    friend bool operator==(const Path&, const Path&) = default;
    friend std::strong_ordering operator<=>(const Path& a, const Path& b) noexcept;

  private:
    friend class DirectedGraph;
    Path(VertexId range, VertexId source, std::vector<EdgeId> edges)
        : range_(range), source_(source), edges_(std::move(edges))
    {
    }

    VertexId range_;
    VertexId source_;
    std::vector<EdgeId> edges_;
};

/// Square non-negative integer matrix indexed by vertex declaration order.
class IntMatrix {
  public:
    IntMatrix() = default;
    explicit IntMatrix(std::size_t n) : n_(n), data_(n * n, 0) {}
    IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);

    static IntMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    std::int64_t& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    std::int64_t row_sum(std::size_t i) const;
    IntMatrix power(unsigned k) const;

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  private:
    std::size_t n_ = 0;
    std::vector<std::int64_t> data_;
};

struct EdgeSpec {
    std::string id;
    std::string range;
    std::string source;
};

class DirectedGraph {
  public:
    /// Validates ids and references. With `strict`, every vertex must receive
    /// at least one edge (no sources).
    static DirectedGraph create(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges,
                                bool strict = false);

    std::size_t vertex_count() const noexcept { return vertex_names_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    const std::string& vertex_name(VertexId v) const { return vertex_names_.at(v.value); }
    const std::string& edge_name(EdgeId e) const { return edges_.at(e.value).name; }
    const Edge& edge(EdgeId e) const { return edges_.at(e.value); }
    VertexId range(EdgeId e) const { return edges_.at(e.value).range; }
    VertexId source(EdgeId e) const { return edges_.at(e.value).source; }

    VertexId vertex(std::string_view name) const;
    EdgeId edge_id(std::string_view name) const;
    bool has_vertex(std::string_view name) const;
    bool has_edge(std::string_view name) const;

    std::vector<VertexId> vertices() const;
    std::vector<EdgeId> edges() const;

    /// vE^1, in declaration order.
    const std::vector<EdgeId>& edges_with_range(VertexId v) const { return by_range_.at(v.value); }
    bool has_no_sources() const;

    Path empty_path(VertexId v) const;
    /// Throws NotComposable unless s(e_i) = r(e_{i+1}); an empty list is not
    /// a path (use empty_path).
    Path make_path(const std::vector<EdgeId>& edges) const;
    Path extend(const Path& path, EdgeId e) const;
    Path concat(const Path& first, const Path& second) const;
    /// Edges from position `from` onward.
    Path suffix(const Path& path, std::size_t from) const;
    Path prefix(const Path& path, std::size_t length) const;

    /// Text form: dot-separated edge ids, or "@<vertex>" for an empty path.
    Path parse_path(std::string_view text) const;
    std::string format_path(const Path& path) const;

    friend bool operator==(const DirectedGraph& a, const DirectedGraph& b);

  private:
    std::vector<std::string> vertex_names_;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> by_range_;
    std::unordered_map<std::string, VertexId> vertex_index_;
    std::unordered_map<std::string, EdgeId> edge_index_;
};

/// Reads the "graph" section of a project document.
DirectedGraph load_graph(const nlohmann::json& section, bool strict = false);
nlohmann::json graph_to_json(const DirectedGraph& graph);

/// B(v, w) = |v E^1 w|.
IntMatrix vertex_matrix(const DirectedGraph& graph);

/// Number of paths of length k with range v and source w; equals B^k(v, w).
std::uint64_t count_paths(const DirectedGraph& graph, VertexId v, VertexId w, unsigned k);

/// All paths of length k with range v, in lexicographic order of edge
/// declaration index.
std::vector<Path> enumerate_paths(const DirectedGraph& graph, VertexId v, unsigned k);

/// All paths of length at most `max_length`, shortest first, each level
/// ordered by range vertex and then lexicographically.
std::vector<Path> enumerate_all_paths(const DirectedGraph& graph, unsigned max_length);

bool is_strongly_connected(const DirectedGraph& graph);
bool is_irreducible(const IntMatrix& m);

} // namespace ssg
