#include "rwlab/partition.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace rwlab {

namespace {

uint64_t fnv1a(const void* data, size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Members of the ground set within distance <= r of x (graph metric).
std::vector<Vertex> ground_ball(const Graph& g, const VertexSubset& ground, Vertex x, int64_t r) {
    auto ball = bfs_ball(g, x, r);
    std::vector<Vertex> out;
    out.reserve(ball.size());
    for (Vertex v : ball.vertices) {
        if (ground.contains(v)) out.push_back(v);
    }
    return out;
}

} // namespace

Partition ball_carving_partition(const Graph& g, const VertexSubset& ground, double tau, uint64_t seed,
                                 uint64_t stream) {
    if (tau <= 0) throw std::invalid_argument("tau must be positive");
    if (ground.empty()) throw std::invalid_argument("cannot partition an empty ground set");
    CounterRng rng(seed, stream);
    std::vector<Vertex> order = ground.members();
    shuffle(order, rng);
    double radius = tau / 4 + rng.next_double() * (tau / 4);
    auto ball_radius = static_cast<int64_t>(std::floor(radius));

    Partition p;
    p.tau = tau;
    p.radius = radius;
    p.perm_digest = fnv1a(order.data(), order.size() * sizeof(Vertex));
    p.block_of.assign(g.vertex_count(), -1);

    size_t assigned = 0;
    for (Vertex center : order) {
        if (assigned == ground.size()) break;
        std::vector<Vertex> block;
        for (Vertex v : ground_ball(g, ground, center, ball_radius)) {
            if (p.block_of[v] < 0) {
                p.block_of[v] = static_cast<int32_t>(p.blocks.size());
                block.push_back(v);
            }
        }
        if (!block.empty()) {
            assigned += block.size();
            p.blocks.push_back(std::move(block));
        }
    }
    return p;
}

void check_partition(const Graph& g, const VertexSubset& ground, const Partition& p) {
    std::vector<int64_t> seen(g.vertex_count(), 0);
    size_t covered = 0;
    for (const auto& block : p.blocks) {
        if (block.empty()) throw std::domain_error("empty block survived carving");
        for (Vertex v : block) {
            if (!ground.contains(v)) throw std::domain_error("block contains a non-ground vertex");
            if (seen[v]++) throw std::domain_error("blocks are not disjoint");
            ++covered;
        }
    }
    if (covered != ground.size()) throw std::domain_error("blocks do not cover the ground set");
    // Diameter check: every same-block partner must sit strictly below tau.
    for (const auto& block : p.blocks) {
        for (Vertex v : block) {
            auto ball = bfs_ball(g, v, static_cast<int64_t>(std::ceil(p.tau)));
            size_t close_partners = 0;
            for (size_t i = 0; i < ball.size(); ++i) {
                Vertex u = ball.vertices[i];
                if (p.block_of[u] == p.block_of[v] && static_cast<double>(ball.distances[i]) < p.tau) {
                    ++close_partners;
                }
            }
            if (close_partners != block.size()) {
                throw std::domain_error("block diameter reaches tau");
            }
        }
    }
}

double padding_epsilon(const Graph& g, const VertexSubset& ground, double tau, Vertex x) {
    auto outer = ground_ball(g, ground, x, static_cast<int64_t>(std::floor(5 * tau / 8)));
    auto inner = ground_ball(g, ground, x, static_cast<int64_t>(std::floor(tau / 8)));
    double ratio = 1.0 + std::log(static_cast<double>(outer.size()) / static_cast<double>(inner.size()));
    return 1.0 / (32.0 * ratio);
}

PaddingEstimate padding_probability(const Graph& g, const VertexSubset& ground, double tau, Vertex x,
                                    double epsilon, int64_t n_samples, uint64_t seed) {
    if (epsilon > 0.125) throw std::invalid_argument("padding analysis requires epsilon <= 1/8");
    if (epsilon < 0) throw std::invalid_argument("epsilon must be nonnegative");
    if (!ground.contains(x)) throw std::invalid_argument("x must belong to the ground set");
    if (n_samples < 1) throw std::invalid_argument("need at least one sample");

    auto outer = ground_ball(g, ground, x, static_cast<int64_t>(std::floor(5 * tau / 8)));
    auto inner = ground_ball(g, ground, x, static_cast<int64_t>(std::floor(tau / 8)));
    double bound = 16.0 * epsilon *
                   (1.0 + std::log(static_cast<double>(outer.size()) / static_cast<double>(inner.size())));

    auto pad_radius = static_cast<int64_t>(std::floor(epsilon * tau));
    auto pad_ball = ground_ball(g, ground, x, pad_radius);

    int64_t failures = 0;
    for (int64_t i = 0; i < n_samples; ++i) {
        auto p = ball_carving_partition(g, ground, tau, seed, static_cast<uint64_t>(i));
        int32_t mine = p.block_index(x);
        for (Vertex v : pad_ball) {
            if (p.block_index(v) != mine) {
                ++failures;
                break;
            }
        }
    }
    double rate = static_cast<double>(failures) / static_cast<double>(n_samples);
    double se = std::sqrt(rate * (1 - rate) / static_cast<double>(n_samples));
    return {rate, se, bound, n_samples};
}

// d(x, ground \ P(x)) for every ground vertex at once: a multi-source BFS
// where each ground vertex emits a wave labelled by its block, and each
// vertex settles at most two distinct labels. A ground vertex settles its
// own label at distance 0, so its second settled label is the nearest
// foreign block. Waves may travel through any vertex, matching the ambient
// graph metric. Returns -1 where no foreign block is reachable.
std::vector<int32_t> nearest_foreign_block_distance(const Graph& g, const VertexSubset& ground,
                                                    const Partition& p) {
    Vertex n = g.vertex_count();
    std::vector<std::array<int32_t, 2>> label(n, {-1, -1});
    std::vector<std::array<int32_t, 2>> dist(n, {-1, -1});

    struct Entry {
        Vertex v;
        int32_t block;
        int32_t d;
    };
    std::vector<Entry> queue;
    queue.reserve(ground.size() * 2);
    for (Vertex v : ground.members()) queue.push_back({v, p.block_of[v], 0});

    size_t head = 0;
    while (head < queue.size()) {
        auto [v, b, d] = queue[head++];
        auto& lv = label[v];
        if (lv[0] == b || lv[1] == b) continue;
        if (lv[1] >= 0) continue;  // two distinct labels settled already
        int slot = lv[0] < 0 ? 0 : 1;
        lv[slot] = b;
        dist[v][slot] = d;
        for (Vertex u : g.neighbors(v)) {
            auto& lu = label[u];
            if (lu[1] >= 0 || lu[0] == b) continue;
            queue.push_back({u, b, d + 1});
        }
    }

    std::vector<int32_t> out(ground.size(), -1);
    for (size_t i = 0; i < ground.size(); ++i) {
        Vertex v = ground.members()[i];
        // Slot 0 is always the vertex's own block (settled at distance 0).
        if (dist[v][1] >= 0) out[i] = dist[v][1];
    }
    return out;
}

CoordinateMap coordinate_map(const Graph& g, const VertexSubset& ground, const Partition& p,
                             CounterRng& bernoulli_rng) {
    CoordinateMap f;
    f.radius = p.radius;
    f.perm_digest = p.perm_digest;
    f.values.assign(ground.size(), 0.0);

    std::vector<uint8_t> alphas(p.blocks.size());
    for (size_t b = 0; b < p.blocks.size(); ++b) alphas[b] = bernoulli_rng.next_bit() ? 1 : 0;
    f.bernoulli_digest = fnv1a(alphas.data(), alphas.size());

    if (p.blocks.size() <= 1) return f;  // complement empty: map is zero

    auto foreign = nearest_foreign_block_distance(g, ground, p);
    for (size_t i = 0; i < ground.size(); ++i) {
        Vertex v = ground.members()[i];
        if (foreign[i] >= 0 && alphas[static_cast<size_t>(p.block_of[v])]) {
            f.values[i] = static_cast<double>(foreign[i]);
        }
    }
    return f;
}

CoordinateMap sample_coordinate_map(const Graph& g, const VertexSubset& ground, double tau,
                                    uint64_t seed, uint64_t stream) {
    auto p = ball_carving_partition(g, ground, tau, seed, stream);
    CounterRng rng(seed ^ 0x5bd1e995u, stream);
    return coordinate_map(g, ground, p, rng);
}

} // namespace rwlab
