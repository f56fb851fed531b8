// generators.hpp — graph families: random regular expanders, edge
// subdivisions, tree-of-graphs composition, the recursive tower built from
// them, and standard test graphs.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rwlab/graph.hpp"

namespace rwlab {

struct ExpanderSpec {
    Vertex n = 0;                        // vertex count, even
    int degree = 3;
    double spectral_gap_threshold = 0.95;  // on the lazy walk's second eigenvalue
    int max_resample_attempts = 500;
    uint64_t seed = 0;
};

// Thrown when resampling gives up; carries the best gap seen.
struct generation_failure : std::runtime_error {
    double best_gap_seen;
    generation_failure(const std::string& what, double best_gap)
        : std::runtime_error(what), best_gap_seen(best_gap) {}
};

struct ExpanderResult {
    Graph graph;
    double lazy_second_eigenvalue = 0;  // certified by power iteration
    int attempts_used = 0;
    int64_t diameter = 0;               // exact
};

// Random d-regular simple connected non-bipartite graph via the pairing
// model, rejecting samples until the lazy-walk second eigenvalue modulus is
// at most the threshold. Deterministic given spec.seed.
ExpanderResult random_regular_expander(const ExpanderSpec& spec);

// Second-largest eigenvalue of the lazy transition matrix (I + A/d)/2 of a
// d-regular graph, by power iteration with the top eigenvector deflated.
double lazy_second_eigenvalue(const Graph& g, double tol = 1e-8, int max_iters = 200'000);

// Replace every edge by a path of length L through L-1 fresh vertices.
// Original vertex ids are preserved as a prefix; L=1 copies the graph.
Graph subdivide(const Graph& g, int64_t L);

// Bookkeeping from tree_compose: where each attached copy and tail went.
struct TreeComposeLayout {
    int64_t tail_length = 0;             // T = max(min_tail_length, 2 diam(H))
    std::vector<Vertex> copy_roots;      // root vertex of each attached copy
    std::vector<Vertex> copy_anchors;    // the base-graph vertex each copy hangs from
    std::vector<Vertex> copy_offsets;    // first vertex id of each copy's block
    std::vector<uint8_t> tail_interior;  // per vertex of the result
};

// "A tree of copies under a base": for every base vertex u except the root,
// attach a fresh copy of `h` by a path of length T from u to the copy's
// root. The result is rooted at the base root.
RootedGraph tree_compose(const RootedGraph& base, const RootedGraph& h, int64_t min_tail_length,
                         TreeComposeLayout* layout = nullptr);

struct HkParams {
    std::vector<Vertex> n_sequence;    // strictly increasing, all even
    bool enforce_paper_growth = false; // require n_j >= 2 n_{j-1}^2 with n_0 = 10
    int64_t min_tail_length = 1;
    int64_t vertex_budget = 5'000'000;
};

struct HkResult {
    RootedGraph graph;               // levels and tail flags populated
    double diameter_constant = 0;    // max over built expanders of diam / ln n
    std::vector<int64_t> level_sizes;
    std::vector<int64_t> expander_diameters;
};

// The recursive tower: level 0 is a single vertex; level j wraps a
// subdivided expander on n_j vertices around copies of level j-1, attached
// by tails of length max(min_tail_length, 2 diam(previous)).
HkResult build_hk(const HkParams& params, const ExpanderSpec& expander_template);

enum class StandardKind { path, cycle, grid, torus };

// dims: {n} for path/cycle, {rows, cols} for grid/torus.
Graph standard_graph(StandardKind kind, const std::vector<int64_t>& dims);

// Vertex sampled with probability deg(v) / sum of degrees.
Vertex root_sampler_local_limit(const Graph& g, uint64_t seed, uint64_t stream = 0);

// Attach a pendant path of the given length to each listed vertex.
// Helper for building subdivided expanders with boundary tails.
Graph attach_paths(const Graph& g, const std::vector<std::pair<Vertex, int64_t>>& tails);

} // namespace rwlab
