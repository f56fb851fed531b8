// graph.hpp — immutable undirected graph plus the metric/measure primitives
// everything else consumes: balls, distances, growth profiles, edge
// expansion, diameter.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwlab {

using Vertex = int32_t;

constexpr int64_t kInfiniteDistance = std::numeric_limits<int64_t>::max();

// Thrown when an exact computation is refused because the input exceeds a
// configured size cap.
struct cap_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Compressed adjacency. Immutable after construction; safe to share across
// threads. No self-loops, no parallel edges; adjacency lists sorted.
class Graph {
public:
    Graph() = default;

    // Builds from an undirected edge list. Validates vertex ids, rejects
    // self-loops and duplicate edges.
    static Graph from_edges(Vertex vertex_count, const std::vector<std::pair<Vertex, Vertex>>& edges);

    Vertex vertex_count() const { return static_cast<Vertex>(offsets_.empty() ? 0 : offsets_.size() - 1); }
    int64_t edge_count() const { return static_cast<int64_t>(neighbors_.size()) / 2; }

    int32_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

    std::span<const Vertex> neighbors(Vertex v) const {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }

    // Total degree of the whole vertex set (= 2|E|).
    int64_t total_degree() const { return static_cast<int64_t>(neighbors_.size()); }

    // Prefix sums of degrees; offsets()[v] is the number of half-edges
    // before vertex v. Used for degree-biased sampling.
    std::span<const int64_t> offsets() const { return offsets_; }

    bool is_connected() const;
    bool is_bipartite() const;

    void check_vertex(Vertex v) const {
        if (v < 0 || v >= vertex_count()) {
            throw std::invalid_argument("vertex id " + std::to_string(v) + " out of range");
        }
    }

private:
    std::vector<int64_t> offsets_;   // size V+1
    std::vector<Vertex> neighbors_;  // size 2E, sorted per vertex
};

// A subset of vertices with membership bitset and cached degree measure
// mu = sum of degrees of members.
class VertexSubset {
public:
    VertexSubset() = default;
    VertexSubset(const Graph& g, std::vector<Vertex> members);

    static VertexSubset all(const Graph& g);

    bool contains(Vertex v) const { return (bits_[static_cast<size_t>(v) >> 6] >> (v & 63)) & 1; }
    const std::vector<Vertex>& members() const { return members_; }
    size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    int64_t mu() const { return mu_; }
    bool is_all() const { return all_; }
    Vertex universe_size() const { return universe_; }

    // Position of v in members(), or -1. Needed by distribution vectors.
    int64_t index_of(Vertex v) const { return index_[v]; }

private:
    std::vector<uint64_t> bits_;
    std::vector<Vertex> members_;   // sorted ascending
    std::vector<int64_t> index_;    // dense vertex -> member position, -1 outside
    int64_t mu_ = 0;
    Vertex universe_ = 0;
    bool all_ = false;
};

// A rooted graph, optionally annotated with per-vertex level indices and
// tail-interior flags (populated by the recursive generator).
struct RootedGraph {
    Graph graph;
    Vertex root = 0;
    std::vector<int32_t> levels;      // empty, or one level per vertex
    std::vector<uint8_t> tail_flags;  // empty, or 1 for tail-interior vertices

    bool has_levels() const { return !levels.empty(); }
};

// Closed ball around a vertex: members in BFS discovery order with their
// exact hop distances. The distance map is defined only on the ball.
struct Ball {
    std::vector<Vertex> vertices;
    std::vector<int32_t> distances;  // parallel to vertices

    size_t size() const { return vertices.size(); }
    VertexSubset to_subset(const Graph& g) const { return VertexSubset(g, vertices); }
};

// { y : d(x,y) <= r } with exact distances. r may exceed the graph size;
// the search simply exhausts the component.
Ball bfs_ball(const Graph& g, Vertex x, int64_t r);

// Exact hop distance; kInfiniteDistance when disconnected.
int64_t distance(const Graph& g, Vertex x, Vertex y);

// Dense distances from x: result[v] = d(x,v), or -1 outside x's component.
std::vector<int32_t> distances_from(const Graph& g, Vertex x);

// log(|B_x(8^k)| / |B_x(8^(k-1))|), natural log. Always >= 0.
double growth_profile(const Graph& g, Vertex x, int k);

// |boundary edges of S| / mu(S). S must be nonempty.
double edge_expansion(const Graph& g, const VertexSubset& s);

enum class DiameterMode { exact, two_sweep_lower_bound };

struct DiameterResult {
    int64_t value = 0;
    DiameterMode mode = DiameterMode::exact;
    bool exact() const { return mode == DiameterMode::exact; }
};

// Exact mode runs all-sources BFS and is refused above `exact_cap` vertices.
// Two-sweep mode returns a lower bound (exact on trees). Requires a
// connected input.
DiameterResult diameter(const Graph& g, DiameterMode mode, Vertex exact_cap = 50'000);

// Eccentricity of x (max distance to any vertex); connected input.
int64_t eccentricity(const Graph& g, Vertex x);

} // namespace rwlab
