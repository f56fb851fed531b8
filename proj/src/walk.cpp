#include "rwlab/walk.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace rwlab {

DistributionVector::DistributionVector(std::shared_ptr<const VertexSubset> support,
                                       std::vector<double> probabilities)
    : support_(std::move(support)), p_(std::move(probabilities)) {
    if (p_.size() != support_->size()) {
        throw std::invalid_argument("probability vector does not match support size");
    }
}

DistributionVector DistributionVector::point_mass(std::shared_ptr<const VertexSubset> support, Vertex x) {
    int64_t i = support->index_of(x);
    if (i < 0) throw std::invalid_argument("point mass vertex outside support");
    std::vector<double> p(support->size(), 0.0);
    p[static_cast<size_t>(i)] = 1.0;
    return DistributionVector(std::move(support), std::move(p));
}

void DistributionVector::validate(double tol) const {
    double total = 0;
    for (double x : p_) {
        if (x < -tol) throw std::domain_error("negative probability entry");
        total += x;
    }
    if (std::abs(total - 1.0) > tol) {
        throw std::domain_error("probabilities sum to " + std::to_string(total));
    }
}

RestrictedWalk::RestrictedWalk(const Graph& g, VertexSubset s) : g_(&g) {
    if (s.empty()) throw std::invalid_argument("restricted walk needs a nonempty subset");
    if (s.universe_size() != g.vertex_count()) {
        throw std::invalid_argument("subset universe does not match the graph");
    }
    s_ = std::make_shared<const VertexSubset>(std::move(s));
    degree_prefix_.resize(s_->size() + 1);
    degree_prefix_[0] = 0;
    for (size_t i = 0; i < s_->size(); ++i) {
        degree_prefix_[i + 1] = degree_prefix_[i] + g.degree(s_->members()[i]);
    }
}

DistributionVector RestrictedWalk::transition(Vertex x) const {
    if (!s_->contains(x)) throw std::invalid_argument("transition from a vertex outside the subset");
    std::vector<double> p(s_->size(), 0.0);
    if (g_->degree(x) == 0) {  // isolated vertex holds forever
        p[static_cast<size_t>(s_->index_of(x))] = 1.0;
        return DistributionVector(s_, std::move(p));
    }
    double inv_deg = 1.0 / g_->degree(x);
    double hold = 0;
    for (Vertex y : g_->neighbors(x)) {
        int64_t i = s_->index_of(y);
        if (i >= 0) p[static_cast<size_t>(i)] += inv_deg;
        else hold += inv_deg;
    }
    p[static_cast<size_t>(s_->index_of(x))] += hold;
    return DistributionVector(s_, std::move(p));
}

double RestrictedWalk::hold_probability(Vertex x) const {
    if (!s_->contains(x)) throw std::invalid_argument("vertex outside the subset");
    int64_t outside = 0;
    for (Vertex y : g_->neighbors(x)) {
        if (!s_->contains(y)) ++outside;
    }
    return static_cast<double>(outside) / g_->degree(x);
}

DistributionVector RestrictedWalk::stationary() const {
    std::vector<double> p(s_->size());
    double mu = static_cast<double>(s_->mu());
    for (size_t i = 0; i < s_->size(); ++i) p[i] = g_->degree(s_->members()[i]) / mu;
    return DistributionVector(s_, std::move(p));
}

Vertex RestrictedWalk::sample_stationary(CounterRng& rng) const {
    if (s_->mu() == 0) return s_->members()[0];  // all members isolated
    int64_t r = static_cast<int64_t>(rng.below(static_cast<uint64_t>(s_->mu())));
    auto it = std::upper_bound(degree_prefix_.begin(), degree_prefix_.end(), r);
    return s_->members()[static_cast<size_t>(it - degree_prefix_.begin() - 1)];
}

std::vector<Trajectory> sample_trajectories(const RestrictedWalk& w, WalkStart start, int64_t t,
                                            int64_t count, uint64_t master_seed) {
    std::vector<Trajectory> out;
    out.reserve(static_cast<size_t>(count));
    for_each_trajectory(w, start, t, count, master_seed, [&](const Trajectory& traj) { out.push_back(traj); });
    return out;
}

DistributionVector exact_pushforward(const RestrictedWalk& w, const DistributionVector& init, int64_t t,
                                     const WalkCaps& caps) {
    if (t < 0) throw std::invalid_argument("negative time");
    const auto& s = w.subset();
    if (static_cast<int64_t>(s.size()) > caps.pushforward_states) {
        throw cap_exceeded("exact pushforward refused on " + std::to_string(s.size()) +
                           " states (cap " + std::to_string(caps.pushforward_states) + ")");
    }
    if (&init.support() != &s && init.support().members() != s.members()) {
        throw std::invalid_argument("initial distribution lives on a different subset");
    }
    const Graph& g = w.graph();
    std::vector<double> cur = init.probabilities();
    std::vector<double> next(cur.size());
    for (int64_t step = 0; step < t; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (size_t i = 0; i < s.size(); ++i) {
            double mass = cur[i];
            if (mass == 0) continue;
            Vertex x = s.members()[i];
            double share = mass / g.degree(x);
            double hold = 0;
            for (Vertex y : g.neighbors(x)) {
                int64_t j = s.index_of(y);
                if (j >= 0) next[static_cast<size_t>(j)] += share;
                else hold += share;
            }
            next[i] += hold;
        }
        cur.swap(next);
    }
    DistributionVector out(w.subset_ptr(), std::move(cur));
    out.validate();
    return out;
}

namespace {

std::vector<MsdResult> msd_exact_impl(const RestrictedWalk& w, Vertex start, std::vector<int64_t> ts,
                                      const WalkCaps& caps) {
    std::sort(ts.begin(), ts.end());
    const auto& s = w.subset();
    if (static_cast<int64_t>(s.size()) > caps.pushforward_states) {
        throw cap_exceeded("exact MSD refused on " + std::to_string(s.size()) + " states");
    }
    auto dist_all = distances_from(w.graph(), start);
    std::vector<double> d2(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        int32_t d = dist_all[s.members()[i]];
        if (d < 0) throw std::domain_error("subset not reachable from the start vertex");
        d2[i] = static_cast<double>(d) * d;
    }
    auto cur = DistributionVector::point_mass(w.subset_ptr(), start);
    std::vector<MsdResult> out;
    int64_t now = 0;
    for (int64_t t : ts) {
        if (t < now) throw std::invalid_argument("time grid must be nonnegative");
        cur = exact_pushforward(w, cur, t - now, caps);
        now = t;
        double acc = 0;
        const auto& p = cur.probabilities();
        for (size_t i = 0; i < p.size(); ++i) acc += p[i] * d2[i];
        out.push_back({acc, 0.0, 0});
    }
    return out;
}

} // namespace

MsdResult msd_exact(const RestrictedWalk& w, Vertex start, int64_t t, const WalkCaps& caps) {
    return msd_exact_impl(w, start, {t}, caps)[0];
}

std::vector<MsdResult> msd_exact_grid(const RestrictedWalk& w, Vertex start,
                                      const std::vector<int64_t>& ts, const WalkCaps& caps) {
    return msd_exact_impl(w, start, ts, caps);
}

namespace {

// Exact endpoint distances for a batch of (x0, xt) pairs: one BFS per
// distinct start.
std::vector<int64_t> endpoint_distances(const Graph& g, const std::vector<std::pair<Vertex, Vertex>>& pairs) {
    std::vector<size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return pairs[a].first < pairs[b].first; });
    std::vector<int64_t> out(pairs.size());
    std::vector<int32_t> dist;
    Vertex have = -1;
    for (size_t idx : order) {
        Vertex x0 = pairs[idx].first;
        if (x0 != have) {
            dist = distances_from(g, x0);
            have = x0;
        }
        int32_t d = dist[pairs[idx].second];
        if (d < 0) throw std::domain_error("endpoint not reachable");
        out[idx] = d;
    }
    return out;
}

MsdResult summarize_squared(const std::vector<double>& values) {
    double n = static_cast<double>(values.size());
    double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double var = 0;
    for (double v : values) var += (v - mean) * (v - mean);
    var = values.size() > 1 ? var / (n - 1) : 0.0;
    return {mean, std::sqrt(var / n), static_cast<int64_t>(values.size())};
}

} // namespace

MsdResult msd_monte_carlo(const RestrictedWalk& w, WalkStart start, int64_t t, int64_t count,
                          uint64_t seed) {
    return msd_monte_carlo_grid(w, start, {t}, count, seed)[0];
}

std::vector<MsdResult> msd_monte_carlo_grid(const RestrictedWalk& w, WalkStart start,
                                            const std::vector<int64_t>& ts, int64_t count, uint64_t seed) {
    if (ts.empty()) return {};
    int64_t t_max = *std::max_element(ts.begin(), ts.end());
    std::vector<std::vector<std::pair<Vertex, Vertex>>> pairs(ts.size());
    for (auto& p : pairs) p.reserve(static_cast<size_t>(count));
    for_each_trajectory(w, start, t_max, count, seed, [&](const Trajectory& traj) {
        for (size_t k = 0; k < ts.size(); ++k) {
            pairs[k].emplace_back(traj.vertices[0], traj.vertices[static_cast<size_t>(ts[k])]);
        }
    });
    std::vector<MsdResult> out;
    for (size_t k = 0; k < ts.size(); ++k) {
        auto d = endpoint_distances(w.graph(), pairs[k]);
        std::vector<double> sq(d.size());
        for (size_t i = 0; i < d.size(); ++i) sq[i] = static_cast<double>(d[i]) * static_cast<double>(d[i]);
        out.push_back(summarize_squared(sq));
    }
    return out;
}

double entropy(const DistributionVector& dist) {
    double h = 0;
    for (double p : dist.probabilities()) {
        if (p > 0) h -= p * std::log(p);
    }
    return h;
}

double conditional_entropy_from_stationary(const RestrictedWalk& w, int64_t s, const WalkCaps& caps) {
    const auto& sub = w.subset();
    if (static_cast<int64_t>(sub.size()) > caps.joint_entropy_states) {
        throw cap_exceeded("entropy computation refused on " + std::to_string(sub.size()) + " states");
    }
    auto pi = w.stationary();
    double acc = 0;
    for (size_t i = 0; i < sub.size(); ++i) {
        auto row = exact_pushforward(w, DistributionVector::point_mass(w.subset_ptr(), sub.members()[i]), s, caps);
        acc += pi.probabilities()[i] * entropy(row);
    }
    return acc;
}

double joint_entropy_stationary(const RestrictedWalk& w, int64_t t, const WalkCaps& caps) {
    if (t < 1) throw std::invalid_argument("joint entropy needs t >= 1");
    const auto& sub = w.subset();
    if (static_cast<int64_t>(sub.size()) > caps.joint_entropy_states) {
        throw cap_exceeded("joint entropy refused on " + std::to_string(sub.size()) + " states");
    }
    auto pi = w.stationary();
    double h = 0;
    for (size_t i = 0; i < sub.size(); ++i) {
        double px = pi.probabilities()[i];
        if (px == 0) continue;
        auto row = exact_pushforward(w, DistributionVector::point_mass(w.subset_ptr(), sub.members()[i]),
                                     t - 1, caps);
        for (double q : row.probabilities()) {
            double joint = px * q;
            if (joint > 0) h -= joint * std::log(joint);
        }
    }
    return h;
}

double hitting_time_max(const Graph& g, const WalkCaps& caps) {
    Vertex n = g.vertex_count();
    if (n > caps.linear_solve_states) {
        throw cap_exceeded("hitting time refused on " + std::to_string(n) + " states");
    }
    if (!g.is_connected()) throw std::domain_error("hitting time requires a connected graph");
    if (n == 1) return 0.0;

    double best = 0;
    int max_deg = 0;
    for (Vertex v = 0; v < n; ++v) max_deg = std::max(max_deg, static_cast<int>(g.degree(v)));

    // For each target y solve the grounded Laplacian system
    //   deg(x) h(x) - sum_{z ~ x, z != y} h(z) = deg(x),  h(y) = 0,
    // which is symmetric positive definite.
    for (Vertex y = 0; y < n; ++y) {
        std::vector<Vertex> col(n, -1);
        Vertex m = 0;
        for (Vertex v = 0; v < n; ++v) {
            if (v != y) col[v] = m++;
        }
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<size_t>(g.total_degree()));
        Eigen::VectorXd rhs(m);
        for (Vertex v = 0; v < n; ++v) {
            if (v == y) continue;
            trip.emplace_back(col[v], col[v], static_cast<double>(g.degree(v)));
            rhs[col[v]] = static_cast<double>(g.degree(v));
            for (Vertex z : g.neighbors(v)) {
                if (z != y) trip.emplace_back(col[v], col[z], -1.0);
            }
        }
        Eigen::SparseMatrix<double> L(m, m);
        L.setFromTriplets(trip.begin(), trip.end());
        Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> solver(L);
        if (solver.info() != Eigen::Success) throw std::runtime_error("hitting time factorization failed");
        Eigen::VectorXd h = solver.solve(rhs);
        best = std::max(best, h.maxCoeff());
    }
    double bound = 2.0 * max_deg * static_cast<double>(n) * static_cast<double>(n);
    if (best > bound * (1 + 1e-9)) {
        throw std::runtime_error("hitting time exceeds the 2 * maxdeg * |V|^2 bound; numerical failure");
    }
    return best;
}

int64_t mixing_time_tv(const Graph& g, double eps, bool lazy, const WalkCaps& caps, int64_t max_steps,
                       int64_t start_sample, uint64_t seed) {
    Vertex n = g.vertex_count();
    if (n > caps.linear_solve_states) {
        throw cap_exceeded("mixing time refused on " + std::to_string(n) + " states");
    }
    if (!g.is_connected()) throw std::domain_error("mixing time requires a connected graph");
    if (!lazy && g.is_bipartite()) {
        throw std::domain_error("bipartite chain is periodic; rerun with lazy=true");
    }
    std::vector<double> pi(n);
    double mu = static_cast<double>(g.total_degree());
    for (Vertex v = 0; v < n; ++v) pi[v] = g.degree(v) / mu;

    std::vector<Vertex> starts;
    if (start_sample > 0 && start_sample < n) {
        CounterRng rng(seed, 0);
        for (int64_t i = 0; i < start_sample; ++i) starts.push_back(static_cast<Vertex>(rng.below(n)));
    } else {
        starts.resize(n);
        std::iota(starts.begin(), starts.end(), 0);
    }

    int64_t worst = 0;
    std::vector<double> cur(n), next(n);
    for (Vertex s : starts) {
        std::fill(cur.begin(), cur.end(), 0.0);
        cur[s] = 1.0;
        int64_t t = 0;
        while (true) {
            double tv = 0;
            for (Vertex v = 0; v < n; ++v) tv += std::abs(cur[v] - pi[v]);
            tv *= 0.5;
            if (tv <= eps) break;
            if (t >= max_steps) {
                throw std::runtime_error("mixing time did not converge within " + std::to_string(max_steps) +
                                         " steps");
            }
            std::fill(next.begin(), next.end(), 0.0);
            for (Vertex v = 0; v < n; ++v) {
                double mass = cur[v];
                if (mass == 0) continue;
                double share = mass / g.degree(v);
                for (Vertex w : g.neighbors(v)) next[w] += share;
            }
            if (lazy) {
                for (Vertex v = 0; v < n; ++v) next[v] = 0.5 * cur[v] + 0.5 * next[v];
            }
            cur.swap(next);
            ++t;
        }
        worst = std::max(worst, t);
    }
    return worst;
}

EscapeStats escape_statistics(const RootedGraph& rg, int64_t t, int64_t count, uint64_t seed) {
    auto w = RestrictedWalk::whole_graph(rg.graph);
    std::vector<std::pair<Vertex, Vertex>> pairs;
    std::vector<uint8_t> avoided;
    pairs.reserve(static_cast<size_t>(count));
    avoided.reserve(static_cast<size_t>(count));
    for_each_trajectory(w, WalkStart::stationary(), t, count, seed, [&](const Trajectory& traj) {
        bool hit = false;
        for (Vertex v : traj.vertices) {
            if (v == rg.root) {
                hit = true;
                break;
            }
        }
        avoided.push_back(hit ? 0 : 1);
        pairs.emplace_back(traj.vertices.front(), traj.vertices.back());
    });
    auto d = endpoint_distances(rg.graph, pairs);
    std::vector<double> contrib(d.size()), visited(d.size());
    for (size_t i = 0; i < d.size(); ++i) {
        contrib[i] = avoided[i] ? static_cast<double>(d[i]) * static_cast<double>(d[i]) : 0.0;
        visited[i] = avoided[i] ? 0.0 : 1.0;
    }
    auto m = summarize_squared(contrib);
    auto p = summarize_squared(visited);
    return {m.value, m.stderr_, p.value, p.stderr_, m.n_samples};
}

bool verify_detailed_balance(const RestrictedWalk& w, double tol) {
    const auto& s = w.subset();
    const Graph& g = w.graph();
    double mu = static_cast<double>(s.mu());
    for (Vertex x : s.members()) {
        double pix = g.degree(x) / mu;
        for (Vertex y : g.neighbors(x)) {
            if (!s.contains(y)) continue;
            double piy = g.degree(y) / mu;
            double forward = pix / g.degree(x);
            double backward = piy / g.degree(y);
            if (std::abs(forward - backward) > tol) return false;
        }
    }
    return true;
}

} // namespace rwlab
