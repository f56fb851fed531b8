#include "rwlab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "rwlab/rng.hpp"

namespace rwlab {

double lazy_second_eigenvalue(const Graph& g, double tol, int max_iters) {
    Vertex n = g.vertex_count();
    if (n < 2) return 0.0;
    int d = g.degree(0);
    for (Vertex v = 1; v < n; ++v) {
        if (g.degree(v) != d) throw std::invalid_argument("lazy_second_eigenvalue expects a regular graph");
    }
    // (I + A/d)/2 is symmetric with top eigenvector all-ones; deflate it and
    // power-iterate. All lazy eigenvalues are >= 0, so no modulus games.
    CounterRng rng(0x9d2c5680u, 0);
    std::vector<double> v(n), w(n);
    for (Vertex i = 0; i < n; ++i) v[i] = rng.next_double() - 0.5;
    auto deflate = [&](std::vector<double>& x) {
        double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
        for (double& xi : x) xi -= mean;
    };
    auto norm = [&](const std::vector<double>& x) {
        double s = 0;
        for (double xi : x) s += xi * xi;
        return std::sqrt(s);
    };
    deflate(v);
    double nv = norm(v);
    if (nv == 0) {  // astronomically unlikely; reseed deterministically
        v[0] = 1;
        deflate(v);
        nv = norm(v);
    }
    for (double& x : v) x /= nv;
    double lambda = 0;
    int stable = 0;
    for (int it = 0; it < max_iters; ++it) {
        for (Vertex i = 0; i < n; ++i) {
            double acc = 0;
            for (Vertex j : g.neighbors(i)) acc += v[j];
            w[i] = 0.5 * v[i] + 0.5 * acc / d;
        }
        deflate(w);
        double nw = norm(w);
        if (nw == 0) return 0.0;
        double next = 0;
        for (Vertex i = 0; i < n; ++i) next += v[i] * w[i];  // Rayleigh quotient, |v|=1
        for (Vertex i = 0; i < n; ++i) v[i] = w[i] / nw;
        stable = (it > 0 && std::abs(next - lambda) <= tol) ? stable + 1 : 0;
        lambda = next;
        if (stable >= 3) return lambda;
    }
    return lambda;
}

namespace {

// One pairing-model draw: d half-edges per vertex, random perfect matching.
// Returns an empty optional when the sample has loops or parallel edges.
std::optional<Graph> pairing_sample(Vertex n, int d, CounterRng& rng) {
    std::vector<Vertex> half(static_cast<size_t>(n) * d);
    for (Vertex v = 0; v < n; ++v) {
        for (int i = 0; i < d; ++i) half[static_cast<size_t>(v) * d + i] = v;
    }
    shuffle(half, rng);
    std::set<std::pair<Vertex, Vertex>> seen;
    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(half.size() / 2);
    for (size_t i = 0; i < half.size(); i += 2) {
        Vertex u = half[i], v = half[i + 1];
        if (u == v) return std::nullopt;
        auto e = std::minmax(u, v);
        if (!seen.insert({e.first, e.second}).second) return std::nullopt;
        edges.emplace_back(e.first, e.second);
    }
    return Graph::from_edges(n, edges);
}

} // namespace

ExpanderResult random_regular_expander(const ExpanderSpec& spec) {
    if (spec.n <= 0 || spec.n % 2 != 0) throw std::invalid_argument("expander vertex count must be even and positive");
    if (spec.degree < 3) throw std::invalid_argument("expander degree must be at least 3");
    if ((static_cast<int64_t>(spec.n) * spec.degree) % 2 != 0) {
        throw std::invalid_argument("n * degree must be even");
    }
    if (spec.spectral_gap_threshold <= 0 || spec.spectral_gap_threshold >= 1) {
        throw std::invalid_argument("spectral gap threshold must lie in (0,1)");
    }
    double best_gap = 1.0;
    for (int attempt = 0; attempt < spec.max_resample_attempts; ++attempt) {
        CounterRng rng(spec.seed, static_cast<uint64_t>(attempt));
        auto sampled = pairing_sample(spec.n, spec.degree, rng);
        if (!sampled) continue;
        Graph& g = *sampled;
        if (!g.is_connected()) continue;
        if (g.is_bipartite()) continue;
        double lam = lazy_second_eigenvalue(g);
        best_gap = std::min(best_gap, lam);
        if (lam <= spec.spectral_gap_threshold) {
            ExpanderResult res;
            res.lazy_second_eigenvalue = lam;
            res.attempts_used = attempt + 1;
            res.diameter = diameter(g, DiameterMode::exact).value;
            res.graph = std::move(g);
            return res;
        }
    }
    throw generation_failure("expander generation exhausted " + std::to_string(spec.max_resample_attempts) +
                                 " attempts; best lazy eigenvalue seen " + std::to_string(best_gap),
                             best_gap);
}

Graph subdivide(const Graph& g, int64_t L) {
    if (L < 1) throw std::invalid_argument("subdivision factor must be >= 1");
    Vertex n = g.vertex_count();
    int64_t new_count = n + g.edge_count() * (L - 1);
    if (new_count > std::numeric_limits<Vertex>::max()) throw std::invalid_argument("subdivision too large");
    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(static_cast<size_t>(g.edge_count() * L));
    Vertex next = n;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v : g.neighbors(u)) {
            if (u >= v) continue;
            Vertex prev = u;
            for (int64_t i = 1; i < L; ++i) {
                edges.emplace_back(std::min(prev, next), std::max(prev, next));
                prev = next++;
            }
            edges.emplace_back(std::min(prev, v), std::max(prev, v));
        }
    }
    return Graph::from_edges(static_cast<Vertex>(new_count), edges);
}

RootedGraph tree_compose(const RootedGraph& base, const RootedGraph& h, int64_t min_tail_length,
                         TreeComposeLayout* layout) {
    if (min_tail_length < 1) throw std::invalid_argument("min_tail_length must be >= 1");
    const Graph& G = base.graph;
    const Graph& H = h.graph;
    if (!G.is_connected() || !H.is_connected()) {
        throw std::domain_error("tree_compose requires connected inputs");
    }
    int64_t diam_h = H.vertex_count() == 1 ? 0 : diameter(H, DiameterMode::exact).value;
    int64_t T = std::max(min_tail_length, 2 * diam_h);

    Vertex nG = G.vertex_count();
    Vertex nH = H.vertex_count();
    int64_t copies = nG - 1;
    int64_t total = nG + copies * (nH + T - 1);
    if (total > std::numeric_limits<Vertex>::max()) throw std::invalid_argument("composition too large");

    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(static_cast<size_t>(G.edge_count() + copies * (H.edge_count() + T)));
    for (Vertex u = 0; u < nG; ++u) {
        for (Vertex v : G.neighbors(u)) {
            if (u < v) edges.emplace_back(u, v);
        }
    }

    TreeComposeLayout lay;
    lay.tail_length = T;
    lay.tail_interior.assign(static_cast<size_t>(total), 0);

    Vertex next = nG;
    for (Vertex u = 0; u < nG; ++u) {
        if (u == base.root) continue;
        // Tail: path of length T from u to the copy's root, T-1 interior
        // vertices.
        Vertex prev = u;
        for (int64_t i = 1; i < T; ++i) {
            edges.emplace_back(std::min(prev, next), std::max(prev, next));
            lay.tail_interior[next] = 1;
            prev = next++;
        }
        Vertex copy_offset = next;
        Vertex copy_root = copy_offset + h.root;
        edges.emplace_back(std::min(prev, copy_root), std::max(prev, copy_root));
        for (Vertex a = 0; a < nH; ++a) {
            for (Vertex b : H.neighbors(a)) {
                if (a < b) edges.emplace_back(copy_offset + a, copy_offset + b);
            }
        }
        lay.copy_anchors.push_back(u);
        lay.copy_offsets.push_back(copy_offset);
        lay.copy_roots.push_back(copy_root);
        next += nH;
    }

    RootedGraph out;
    out.graph = Graph::from_edges(static_cast<Vertex>(total), edges);
    out.root = base.root;
    out.tail_flags = lay.tail_interior;
    if (layout) *layout = std::move(lay);
    return out;
}

HkResult build_hk(const HkParams& params, const ExpanderSpec& expander_template) {
    const auto& ns = params.n_sequence;
    for (size_t j = 0; j < ns.size(); ++j) {
        if (ns[j] <= 0 || ns[j] % 2 != 0) throw std::invalid_argument("n sequence entries must be even and positive");
        if (j > 0 && ns[j] <= ns[j - 1]) throw std::invalid_argument("n sequence must be strictly increasing");
    }
    if (params.enforce_paper_growth) {
        Vertex prev = 10;
        for (Vertex nk : ns) {
            if (static_cast<int64_t>(nk) < 2 * static_cast<int64_t>(prev) * prev) {
                throw std::invalid_argument("growth condition n_k >= 2 n_{k-1}^2 violated");
            }
            prev = nk;
        }
    }

    HkResult res;
    RootedGraph current;
    current.graph = Graph::from_edges(1, {});
    current.root = 0;
    current.levels = {0};
    current.tail_flags = {0};
    res.diameter_constant = 0;

    for (size_t j = 0; j < ns.size(); ++j) {
        ExpanderSpec spec = expander_template;
        spec.n = ns[j];
        spec.seed = expander_template.seed + j + 1;
        auto exp = random_regular_expander(spec);
        res.expander_diameters.push_back(exp.diameter);
        res.diameter_constant =
            std::max(res.diameter_constant, static_cast<double>(exp.diameter) / std::log(static_cast<double>(ns[j])));

        Graph stretched = subdivide(exp.graph, ns[j]);
        RootedGraph base{std::move(stretched), 0, {}, {}};

        // Budget check before composing.
        int64_t diam_h =
            current.graph.vertex_count() == 1 ? 0 : diameter(current.graph, DiameterMode::exact).value;
        int64_t T = std::max(params.min_tail_length, 2 * diam_h);
        int64_t predicted = base.graph.vertex_count() +
                            static_cast<int64_t>(base.graph.vertex_count() - 1) *
                                (current.graph.vertex_count() + T - 1);
        if (predicted > params.vertex_budget) {
            throw cap_exceeded("vertex budget exceeded: level " + std::to_string(j + 1) + " would have " +
                               std::to_string(predicted) + " vertices (budget " +
                               std::to_string(params.vertex_budget) + ")");
        }

        TreeComposeLayout lay;
        RootedGraph composed = tree_compose(base, current, params.min_tail_length, &lay);

        // Stamp levels: base-graph vertices and tail interiors get the new
        // level; copies inherit the previous tower's annotations.
        int32_t level = static_cast<int32_t>(j + 1);
        std::vector<int32_t> levels(composed.graph.vertex_count(), level);
        for (size_t c = 0; c < lay.copy_offsets.size(); ++c) {
            Vertex off = lay.copy_offsets[c];
            for (Vertex a = 0; a < current.graph.vertex_count(); ++a) {
                levels[off + a] = current.levels[a];
                composed.tail_flags[off + a] = current.tail_flags[a];
            }
        }
        composed.levels = std::move(levels);
        current = std::move(composed);
    }

    int32_t max_level = static_cast<int32_t>(ns.size());
    res.level_sizes.assign(max_level + 1, 0);
    for (int32_t lv : current.levels) res.level_sizes[lv]++;
    res.graph = std::move(current);
    return res;
}

Graph standard_graph(StandardKind kind, const std::vector<int64_t>& dims) {
    auto need = [&](size_t k) {
        if (dims.size() != k) throw std::invalid_argument("wrong number of dimensions");
        for (int64_t d : dims) {
            if (d <= 0) throw std::invalid_argument("dimensions must be positive");
        }
    };
    std::vector<std::pair<Vertex, Vertex>> edges;
    switch (kind) {
        case StandardKind::path: {
            need(1);
            Vertex n = static_cast<Vertex>(dims[0]);
            for (Vertex i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
            return Graph::from_edges(n, edges);
        }
        case StandardKind::cycle: {
            need(1);
            Vertex n = static_cast<Vertex>(dims[0]);
            if (n < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
            for (Vertex i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
            edges.emplace_back(0, n - 1);
            return Graph::from_edges(n, edges);
        }
        case StandardKind::grid:
        case StandardKind::torus: {
            need(2);
            int64_t rows = dims[0], cols = dims[1];
            if (kind == StandardKind::torus && (rows < 3 || cols < 3)) {
                throw std::invalid_argument("torus sides must be at least 3");
            }
            int64_t n64 = rows * cols;
            if (n64 > std::numeric_limits<Vertex>::max()) throw std::invalid_argument("grid too large");
            auto id = [&](int64_t r, int64_t c) { return static_cast<Vertex>(r * cols + c); };
            for (int64_t r = 0; r < rows; ++r) {
                for (int64_t c = 0; c < cols; ++c) {
                    if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
                    else if (kind == StandardKind::torus) edges.emplace_back(id(r, 0), id(r, c));
                    if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
                    else if (kind == StandardKind::torus) edges.emplace_back(id(0, c), id(r, c));
                }
            }
            return Graph::from_edges(static_cast<Vertex>(n64), edges);
        }
    }
    throw std::invalid_argument("unknown standard graph kind");
}

Vertex root_sampler_local_limit(const Graph& g, uint64_t seed, uint64_t stream) {
    if (g.vertex_count() == 0) throw std::invalid_argument("empty graph");
    if (g.total_degree() == 0) return 0;
    CounterRng rng(seed, stream);
    int64_t r = static_cast<int64_t>(rng.below(static_cast<uint64_t>(g.total_degree())));
    // offsets() is exactly the degree prefix-sum array.
    auto off = g.offsets();
    auto it = std::upper_bound(off.begin(), off.end(), r);
    return static_cast<Vertex>(it - off.begin() - 1);
}

Graph attach_paths(const Graph& g, const std::vector<std::pair<Vertex, int64_t>>& tails) {
    Vertex n = g.vertex_count();
    int64_t total = n;
    for (auto& [v, len] : tails) {
        g.check_vertex(v);
        if (len < 1) throw std::invalid_argument("tail length must be >= 1");
        total += len;
    }
    if (total > std::numeric_limits<Vertex>::max()) throw std::invalid_argument("result too large");
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v : g.neighbors(u)) {
            if (u < v) edges.emplace_back(u, v);
        }
    }
    Vertex next = n;
    for (auto& [v, len] : tails) {
        Vertex prev = v;
        for (int64_t i = 0; i < len; ++i) {
            edges.emplace_back(std::min(prev, next), std::max(prev, next));
            prev = next++;
        }
    }
    return Graph::from_edges(static_cast<Vertex>(total), edges);
}

} // namespace rwlab
