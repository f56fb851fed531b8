// Test-only oracles: independent brute-force implementations used to pin
// expected values. Deliberately naive, never shared with library code.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rwlab/graph.hpp"
#include "rwlab/rng.hpp"
#include "rwlab/walk.hpp"

namespace oracle {

using rwlab::Graph;
using rwlab::Vertex;

// Dense all-pairs hop distances; -1 when unreachable.
inline std::vector<std::vector<int64_t>> all_pairs_distances(const Graph& g) {
    Vertex n = g.vertex_count();
    std::vector<std::vector<int64_t>> d(n, std::vector<int64_t>(n, -1));
    for (Vertex s = 0; s < n; ++s) {
        std::vector<Vertex> queue{s};
        d[s][s] = 0;
        size_t head = 0;
        while (head < queue.size()) {
            Vertex u = queue[head++];
            for (Vertex w : g.neighbors(u)) {
                if (d[s][w] < 0) {
                    d[s][w] = d[s][u] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    return d;
}

inline int64_t exact_diameter(const Graph& g) {
    auto d = all_pairs_distances(g);
    int64_t best = 0;
    for (const auto& row : d) {
        for (int64_t v : row) {
            if (v < 0) throw std::runtime_error("oracle diameter on a disconnected graph");
            best = std::max(best, v);
        }
    }
    return best;
}

inline int64_t ball_size(const Graph& g, Vertex x, int64_t r) {
    auto d = all_pairs_distances(g);
    int64_t c = 0;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (d[x][v] >= 0 && d[x][v] <= r) ++c;
    }
    return c;
}

// Dense transition matrix of the walk restricted to a subset, ordered by
// the subset's member list.
inline Eigen::MatrixXd dense_transition(const rwlab::RestrictedWalk& w) {
    const auto& s = w.subset();
    const Graph& g = w.graph();
    auto n = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Vertex x = s.members()[static_cast<size_t>(i)];
        double inv = 1.0 / g.degree(x);
        double hold = 0;
        for (Vertex y : g.neighbors(x)) {
            int64_t j = s.index_of(y);
            if (j >= 0) P(i, static_cast<Eigen::Index>(j)) += inv;
            else hold += inv;
        }
        P(i, i) += hold;
    }
    return P;
}

// Distribution after t steps via repeated dense multiplication.
inline Eigen::VectorXd dense_pushforward(const rwlab::RestrictedWalk& w, const Eigen::VectorXd& init,
                                         int64_t t) {
    Eigen::MatrixXd P = dense_transition(w);
    Eigen::VectorXd v = init;
    for (int64_t i = 0; i < t; ++i) v = P.transpose() * v;
    return v;
}

// Eigenvalues of the simple-walk transition matrix of a regular graph.
inline std::vector<double> transition_spectrum(const Graph& g) {
    Vertex n = g.vertex_count();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v : g.neighbors(u)) A(u, v) = 1.0 / g.degree(u);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
    std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    return out;
}

// Uniform random labelled tree (Pruefer sequence).
inline Graph random_tree(Vertex n, uint64_t seed) {
    if (n == 1) return Graph::from_edges(1, {});
    if (n == 2) return Graph::from_edges(2, {{0, 1}});
    rwlab::CounterRng rng(seed, 0);
    std::vector<Vertex> pruefer(static_cast<size_t>(n) - 2);
    for (auto& p : pruefer) p = static_cast<Vertex>(rng.below(static_cast<uint64_t>(n)));
    std::vector<int> degree(n, 1);
    for (Vertex p : pruefer) degree[p]++;
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::vector<bool> used(n, false);
    for (Vertex p : pruefer) {
        for (Vertex leaf = 0; leaf < n; ++leaf) {
            if (degree[leaf] == 1 && !used[leaf]) {
                edges.emplace_back(std::min(leaf, p), std::max(leaf, p));
                used[leaf] = true;
                degree[p]--;
                break;
            }
        }
    }
    Vertex a = -1, b = -1;
    for (Vertex v = 0; v < n; ++v) {
        if (!used[v] && degree[v] == 1) {
            if (a < 0) a = v;
            else b = v;
        }
    }
    edges.emplace_back(std::min(a, b), std::max(a, b));
    return Graph::from_edges(n, edges);
}

} // namespace oracle
