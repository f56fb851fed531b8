// embed.hpp — threshold embeddings: ensembles of sampled coordinate maps
// approximating a 1-Lipschitz map into Euclidean space with 1/sqrt(m)
// scaling, one ensemble per scale. Includes an exact enumeration oracle for
// tiny ground sets.
#pragma once

#include <filesystem>

#include "rwlab/partition.hpp"

namespace rwlab {

struct SampleProvenance {
    double radius = 0;
    uint64_t perm_digest = 0;
    uint64_t bernoulli_digest = 0;
};

class EmbeddingEnsemble {
public:
    EmbeddingEnsemble(std::shared_ptr<const VertexSubset> ground, double tau, int64_t m, uint64_t seed);

    const VertexSubset& ground() const { return *ground_; }
    double tau() const { return tau_; }
    int64_t sample_count() const { return m_; }
    uint64_t seed() const { return seed_; }
    const std::vector<SampleProvenance>& provenance() const { return provenance_; }

    // Raw coordinates of one vertex across all m samples (vertex-major).
    std::span<const float> coords_of(Vertex v) const {
        int64_t i = ground_->index_of(v);
        if (i < 0) throw std::invalid_argument("vertex outside the embedded ground set");
        return {coords_.data() + static_cast<size_t>(i) * m_, static_cast<size_t>(m_)};
    }

    // Squared distance of the scaled map: (1/m) sum_i (F_i(x) - F_i(y))^2.
    double distance_sq(Vertex x, Vertex y) const;

    // Same, with the standard error of the sample mean attached.
    std::pair<double, double> distance_sq_with_stderr(Vertex x, Vertex y) const;

    // The scaled image of one vertex (coordinates divided by sqrt(m)).
    std::vector<double> scaled_point(Vertex v) const;

    void set_sample(int64_t i, const CoordinateMap& f);

private:
    std::shared_ptr<const VertexSubset> ground_;
    double tau_;
    int64_t m_;
    uint64_t seed_;
    std::vector<float> coords_;  // [ground_index * m + sample]
    std::vector<SampleProvenance> provenance_;
};

// m independent (partition, Bernoulli) samples at scale tau.
EmbeddingEnsemble threshold_map(const Graph& g, const VertexSubset& ground, double tau, int64_t m,
                                uint64_t seed);

// One ensemble per scale 8^k, k = 1..k_max.
std::vector<EmbeddingEnsemble> scale_family(const Graph& g, const VertexSubset& ground, int k_max,
                                            int64_t m, uint64_t seed);

// The separation target at scale 8^k for pairs with d(x,y) >= 8^k:
// 8^k / (128 (1 + growth_profile(g, x, k))).
double colipschitz_target(const Graph& g, Vertex x, int k);

struct OracleValue {
    double value = 0;
    int64_t numerator = 0;   // exact rational value
    int64_t denominator = 1;
};

// Exact E|F(x)-F(y)|^2 for a single coordinate map on a tiny ground set
// (at most 6 points): enumerates all carving orders, integrates the radius
// over its breakpoint subdivision in exact rational arithmetic, and sums
// over the Bernoulli signs analytically. Independent of the sampling path.
OracleValue exact_pair_distance_sq(const Graph& g, const VertexSubset& ground, double tau, Vertex x,
                                   Vertex y);

// Serialization: "<stem>.ensemble.json" (metadata) + "<stem>.coords.bin"
// (float32, vertex-major).
void save_ensemble(const std::filesystem::path& stem, const EmbeddingEnsemble& e);
EmbeddingEnsemble load_ensemble(const std::filesystem::path& stem, const Graph& g);

} // namespace rwlab
