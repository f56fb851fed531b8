// partition.hpp — random low-diameter partitions by iterated ball carving,
// padding estimates, and the Bernoulli coordinate maps built on top of them.
//
// Carving rule: draw a uniformly random order of the ground set and a
// radius R uniform in [tau/4, tau/2); the i-th block is B(center_i, R)
// minus everything already taken. Every block has diameter < tau, and each
// point is "padded" (its epsilon*tau ball stays inside its own block) with
// probability bounded by an explicit volume-ratio expression.
#pragma once

#include <memory>

#include "rwlab/graph.hpp"
#include "rwlab/rng.hpp"

namespace rwlab {

struct Partition {
    std::vector<std::vector<Vertex>> blocks;  // in carve order, empty blocks dropped
    std::vector<int32_t> block_of;            // dense over vertices; -1 outside the ground set
    double tau = 0;
    double radius = 0;        // the sampled R
    uint64_t perm_digest = 0; // FNV-1a of the carving order

    int32_t block_index(Vertex v) const { return block_of[v]; }
};

// Distances are graph distances in g (paths may leave the ground set);
// balls are intersected with the ground set.
Partition ball_carving_partition(const Graph& g, const VertexSubset& ground, double tau, uint64_t seed,
                                 uint64_t stream = 0);

// Verifies blocks are disjoint, cover the ground set, and have diameter
// (in d_g, restricted to the ground set) strictly below tau.
void check_partition(const Graph& g, const VertexSubset& ground, const Partition& p);

// epsilon(x) from the padding analysis with delta = 1/2:
//   1 / (32 log(e |B(x, 5 tau/8)| / |B(x, tau/8)|)),
// ball sizes counted within the ground set.
double padding_epsilon(const Graph& g, const VertexSubset& ground, double tau, Vertex x);

struct PaddingEstimate {
    double failure_rate = 0;    // empirical Pr[B(x, eps*tau) not inside P(x)]
    double stderr_ = 0;
    double analytic_bound = 0;  // 16 eps log(e |B(5tau/8)| / |B(tau/8)|)
    int64_t n_samples = 0;
};

// Monte Carlo padding failure estimate vs. the analytic bound. Requires
// epsilon <= 1/8.
PaddingEstimate padding_probability(const Graph& g, const VertexSubset& ground, double tau, Vertex x,
                                    double epsilon, int64_t n_samples, uint64_t seed);

struct CoordinateMap {
    std::vector<double> values;   // parallel to ground.members()
    uint64_t bernoulli_digest = 0;
    double radius = 0;
    uint64_t perm_digest = 0;
};

// F(x) = alpha_{P(x)} * d(x, ground \ P(x)) with iid fair-bit alphas per
// block; 1-Lipschitz by construction. When a block swallows the whole
// ground set its coordinate is 0.
CoordinateMap coordinate_map(const Graph& g, const VertexSubset& ground, const Partition& p,
                             CounterRng& bernoulli_rng);

// Convenience: carve + draw alphas from the stream (seed, stream).
CoordinateMap sample_coordinate_map(const Graph& g, const VertexSubset& ground, double tau,
                                    uint64_t seed, uint64_t stream = 0);

} // namespace rwlab
