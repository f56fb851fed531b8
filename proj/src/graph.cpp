#include "rwlab/graph.hpp"

#include <algorithm>
#include <cmath>

namespace rwlab {

Graph Graph::from_edges(Vertex vertex_count, const std::vector<std::pair<Vertex, Vertex>>& edges) {
    if (vertex_count < 0) throw std::invalid_argument("negative vertex count");
    Graph g;
    g.offsets_.assign(static_cast<size_t>(vertex_count) + 1, 0);
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count) {
            throw std::invalid_argument("edge endpoint out of range");
        }
        if (u == v) throw std::invalid_argument("self-loops are not allowed");
        g.offsets_[u + 1]++;
        g.offsets_[v + 1]++;
    }
    for (size_t i = 1; i < g.offsets_.size(); ++i) g.offsets_[i] += g.offsets_[i - 1];
    g.neighbors_.resize(static_cast<size_t>(2) * edges.size());
    std::vector<int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : edges) {
        g.neighbors_[cursor[u]++] = v;
        g.neighbors_[cursor[v]++] = u;
    }
    for (Vertex v = 0; v < vertex_count; ++v) {
        auto begin = g.neighbors_.begin() + g.offsets_[v];
        auto end = g.neighbors_.begin() + g.offsets_[v + 1];
        std::sort(begin, end);
        if (std::adjacent_find(begin, end) != end) {
            throw std::invalid_argument("parallel edges are not allowed");
        }
    }
    return g;
}

bool Graph::is_connected() const {
    Vertex n = vertex_count();
    if (n <= 1) return true;
    std::vector<uint8_t> seen(n, 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    Vertex reached = 1;
    while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        for (Vertex w : neighbors(u)) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == n;
}

bool Graph::is_bipartite() const {
    Vertex n = vertex_count();
    std::vector<int8_t> color(n, -1);
    std::vector<Vertex> queue;
    for (Vertex s = 0; s < n; ++s) {
        if (color[s] != -1) continue;
        color[s] = 0;
        queue.assign(1, s);
        size_t head = 0;
        while (head < queue.size()) {
            Vertex u = queue[head++];
            for (Vertex w : neighbors(u)) {
                if (color[w] == -1) {
                    color[w] = static_cast<int8_t>(1 - color[u]);
                    queue.push_back(w);
                } else if (color[w] == color[u]) {
                    return false;
                }
            }
        }
    }
    return true;
}

VertexSubset::VertexSubset(const Graph& g, std::vector<Vertex> members) {
    universe_ = g.vertex_count();
    for (Vertex v : members) g.check_vertex(v);
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
        throw std::invalid_argument("duplicate vertex in subset");
    }
    members_ = std::move(members);
    bits_.assign((static_cast<size_t>(universe_) + 63) / 64, 0);
    index_.assign(universe_, -1);
    for (size_t i = 0; i < members_.size(); ++i) {
        Vertex v = members_[i];
        bits_[static_cast<size_t>(v) >> 6] |= uint64_t{1} << (v & 63);
        index_[v] = static_cast<int64_t>(i);
        mu_ += g.degree(v);
    }
    all_ = (static_cast<Vertex>(members_.size()) == universe_);
}

VertexSubset VertexSubset::all(const Graph& g) {
    std::vector<Vertex> everyone(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) everyone[v] = v;
    return VertexSubset(g, std::move(everyone));
}

namespace {

// Reusable BFS workspace. Stamped visitation avoids clearing a V-sized
// array on every call; distinct graphs of equal size are fine because the
// stamp only means "reached during the current call".
struct BfsScratch {
    std::vector<uint32_t> stamp;
    std::vector<int32_t> dist;
    std::vector<Vertex> queue;
    uint32_t current = 0;

    void begin(Vertex n) {
        if (static_cast<Vertex>(stamp.size()) < n) {
            stamp.assign(n, 0);
            dist.resize(n);
            current = 0;
        }
        if (++current == 0) {  // stamp wraparound
            std::fill(stamp.begin(), stamp.end(), 0);
            current = 1;
        }
        queue.clear();
    }
};

thread_local BfsScratch tls_bfs;

} // namespace

Ball bfs_ball(const Graph& g, Vertex x, int64_t r) {
    g.check_vertex(x);
    if (r < 0) throw std::invalid_argument("negative ball radius");
    auto& scr = tls_bfs;
    scr.begin(g.vertex_count());
    scr.queue.push_back(x);
    scr.stamp[x] = scr.current;
    scr.dist[x] = 0;
    size_t head = 0;
    while (head < scr.queue.size()) {
        Vertex u = scr.queue[head++];
        if (scr.dist[u] == r) continue;
        for (Vertex w : g.neighbors(u)) {
            if (scr.stamp[w] != scr.current) {
                scr.stamp[w] = scr.current;
                scr.dist[w] = scr.dist[u] + 1;
                scr.queue.push_back(w);
            }
        }
    }
    Ball ball;
    ball.vertices = scr.queue;
    ball.distances.resize(ball.vertices.size());
    for (size_t i = 0; i < ball.vertices.size(); ++i) ball.distances[i] = scr.dist[ball.vertices[i]];
    return ball;
}

int64_t distance(const Graph& g, Vertex x, Vertex y) {
    g.check_vertex(x);
    g.check_vertex(y);
    if (x == y) return 0;
    auto& scr = tls_bfs;
    scr.begin(g.vertex_count());
    scr.queue.push_back(x);
    scr.stamp[x] = scr.current;
    scr.dist[x] = 0;
    size_t head = 0;
    while (head < scr.queue.size()) {
        Vertex u = scr.queue[head++];
        for (Vertex w : g.neighbors(u)) {
            if (scr.stamp[w] != scr.current) {
                scr.stamp[w] = scr.current;
                scr.dist[w] = scr.dist[u] + 1;
                if (w == y) return scr.dist[w];
                scr.queue.push_back(w);
            }
        }
    }
    return kInfiniteDistance;
}

std::vector<int32_t> distances_from(const Graph& g, Vertex x) {
    g.check_vertex(x);
    std::vector<int32_t> dist(g.vertex_count(), -1);
    std::vector<Vertex> queue{x};
    dist[x] = 0;
    size_t head = 0;
    while (head < queue.size()) {
        Vertex u = queue[head++];
        for (Vertex w : g.neighbors(u)) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

double growth_profile(const Graph& g, Vertex x, int k) {
    if (k < 1) throw std::invalid_argument("growth profile needs k >= 1");
    if (k > 20) throw std::invalid_argument("8^k overflows the radius type");
    int64_t outer_radius = 1;
    for (int i = 0; i < k; ++i) outer_radius *= 8;
    auto outer = bfs_ball(g, x, outer_radius);
    // Inner ball sizes can be read off the same BFS.
    int64_t inner_radius = outer_radius / 8;
    size_t inner = 0;
    for (int32_t d : outer.distances) {
        if (d <= inner_radius) ++inner;
    }
    return std::log(static_cast<double>(outer.size()) / static_cast<double>(inner));
}

double edge_expansion(const Graph& g, const VertexSubset& s) {
    if (s.empty()) throw std::invalid_argument("edge expansion of an empty subset");
    int64_t boundary = 0;
    for (Vertex v : s.members()) {
        for (Vertex w : g.neighbors(v)) {
            if (!s.contains(w)) ++boundary;
        }
    }
    return static_cast<double>(boundary) / static_cast<double>(s.mu());
}

int64_t eccentricity(const Graph& g, Vertex x) {
    auto ball = bfs_ball(g, x, kInfiniteDistance - 1);
    if (static_cast<Vertex>(ball.size()) != g.vertex_count()) {
        throw std::domain_error("eccentricity requires a connected graph");
    }
    return *std::max_element(ball.distances.begin(), ball.distances.end());
}

DiameterResult diameter(const Graph& g, DiameterMode mode, Vertex exact_cap) {
    if (g.vertex_count() == 0) throw std::domain_error("diameter of the empty graph");
    if (!g.is_connected()) throw std::domain_error("diameter requires a connected graph");
    if (g.vertex_count() == 1) return {0, mode};
    if (mode == DiameterMode::exact) {
        if (g.vertex_count() > exact_cap) {
            throw cap_exceeded("exact diameter refused above " + std::to_string(exact_cap) +
                               " vertices; use two_sweep_lower_bound");
        }
        int64_t best = 0;
        for (Vertex v = 0; v < g.vertex_count(); ++v) best = std::max(best, eccentricity(g, v));
        return {best, DiameterMode::exact};
    }
    // Double BFS: farthest vertex from an arbitrary start, then its
    // eccentricity. Exact on trees, a lower bound in general.
    auto first = bfs_ball(g, 0, kInfiniteDistance - 1);
    Vertex far = first.vertices.back();
    return {eccentricity(g, far), DiameterMode::two_sweep_lower_bound};
}

} // namespace rwlab
