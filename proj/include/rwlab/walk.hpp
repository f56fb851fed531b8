// walk.hpp — simple and restricted random walks: exact distribution
// pushforward, Monte Carlo trajectories, mean-square displacement, entropy,
// hitting and mixing times.
//
// The restricted walk confined to a subset S moves to each neighbor inside
// S with probability 1/deg(x) and holds in place with the probability mass
// of neighbors outside S. It is reversible with stationary measure
// pi(x) = deg(x) / mu(S).
#pragma once

#include <functional>
#include <memory>

#include "rwlab/graph.hpp"
#include "rwlab/rng.hpp"

namespace rwlab {

struct WalkCaps {
    int64_t pushforward_states = 200'000;
    int64_t joint_entropy_states = 5'000;
    int64_t linear_solve_states = 5'000;
};

class DistributionVector {
public:
    DistributionVector(std::shared_ptr<const VertexSubset> support, std::vector<double> probabilities);

    static DistributionVector point_mass(std::shared_ptr<const VertexSubset> support, Vertex x);

    const VertexSubset& support() const { return *support_; }
    std::shared_ptr<const VertexSubset> support_ptr() const { return support_; }
    const std::vector<double>& probabilities() const { return p_; }
    std::vector<double>& probabilities() { return p_; }

    // Probability of a vertex; zero outside the support.
    double at_vertex(Vertex v) const {
        int64_t i = support_->index_of(v);
        return i < 0 ? 0.0 : p_[static_cast<size_t>(i)];
    }

    // Entries nonnegative, total mass 1 within tol.
    void validate(double tol = 1e-12) const;

private:
    std::shared_ptr<const VertexSubset> support_;
    std::vector<double> p_;
};

class RestrictedWalk {
public:
    RestrictedWalk(const Graph& g, VertexSubset s);

    static RestrictedWalk whole_graph(const Graph& g) { return RestrictedWalk(g, VertexSubset::all(g)); }

    const Graph& graph() const { return *g_; }
    const VertexSubset& subset() const { return *s_; }
    std::shared_ptr<const VertexSubset> subset_ptr() const { return s_; }

    // Exact one-step law from x (x must belong to S).
    DistributionVector transition(Vertex x) const;

    double hold_probability(Vertex x) const;

    // pi(x) = deg(x)/mu(S).
    DistributionVector stationary() const;

    // One Monte Carlo step: pick a uniform incident edge; follow it if the
    // other endpoint is in S, otherwise hold. Isolated vertices hold.
    Vertex step(Vertex x, CounterRng& rng) const {
        auto nb = g_->neighbors(x);
        if (nb.empty()) return x;
        Vertex y = nb[rng.below(nb.size())];
        return s_->contains(y) ? y : x;
    }

    // Draws from the stationary measure (degree-biased over S).
    Vertex sample_stationary(CounterRng& rng) const;

private:
    const Graph* g_;
    std::shared_ptr<const VertexSubset> s_;
    std::vector<int64_t> degree_prefix_;  // for stationary sampling
};

struct Trajectory {
    std::vector<Vertex> vertices;  // length t+1
    uint64_t master_seed = 0;
    uint64_t index = 0;
};

struct WalkStart {
    enum class Kind { fixed, stationary } kind = Kind::fixed;
    Vertex vertex = 0;

    static WalkStart at(Vertex v) { return {Kind::fixed, v}; }
    static WalkStart stationary() { return {Kind::stationary, -1}; }
};

// Calls f(const Trajectory&) once per trajectory; the vertex buffer is
// reused between calls. Trajectory i is a pure function of
// (master_seed, i), independent of evaluation order.
template <class F>
void for_each_trajectory(const RestrictedWalk& w, WalkStart start, int64_t t, int64_t count,
                         uint64_t master_seed, F&& f) {
    if (t < 0 || count < 1) throw std::invalid_argument("need t >= 0 and count >= 1");
    Trajectory traj;
    traj.master_seed = master_seed;
    traj.vertices.resize(static_cast<size_t>(t) + 1);
    for (int64_t i = 0; i < count; ++i) {
        CounterRng rng(master_seed, static_cast<uint64_t>(i));
        Vertex x = start.kind == WalkStart::Kind::fixed ? start.vertex : w.sample_stationary(rng);
        traj.index = static_cast<uint64_t>(i);
        traj.vertices[0] = x;
        for (int64_t s = 1; s <= t; ++s) {
            x = w.step(x, rng);
            traj.vertices[static_cast<size_t>(s)] = x;
        }
        f(static_cast<const Trajectory&>(traj));
    }
}

std::vector<Trajectory> sample_trajectories(const RestrictedWalk& w, WalkStart start, int64_t t,
                                            int64_t count, uint64_t master_seed);

// Law of Z_t by t sparse transition applications. Refused above the
// pushforward cap.
DistributionVector exact_pushforward(const RestrictedWalk& w, const DistributionVector& init, int64_t t,
                                     const WalkCaps& caps = {});

struct MsdResult {
    double value = 0;
    double stderr_ = 0;  // zero for exact mode
    int64_t n_samples = 0;
};

// E[d(start, Z_t)^2] exactly, via pushforward against BFS distances.
MsdResult msd_exact(const RestrictedWalk& w, Vertex start, int64_t t, const WalkCaps& caps = {});

// One sweep evaluating the exact MSD at several times.
std::vector<MsdResult> msd_exact_grid(const RestrictedWalk& w, Vertex start,
                                      const std::vector<int64_t>& ts, const WalkCaps& caps = {});

// Monte Carlo MSD with standard error. Distances are exact (BFS per
// distinct trajectory start).
MsdResult msd_monte_carlo(const RestrictedWalk& w, WalkStart start, int64_t t, int64_t count,
                          uint64_t seed);

std::vector<MsdResult> msd_monte_carlo_grid(const RestrictedWalk& w, WalkStart start,
                                            const std::vector<int64_t>& ts, int64_t count, uint64_t seed);

// Shannon entropy, natural log, 0 log 0 = 0.
double entropy(const DistributionVector& dist);

// H(Z_s | Z_0) with Z_0 stationary: the pi-average of s-step row entropies.
double conditional_entropy_from_stationary(const RestrictedWalk& w, int64_t s, const WalkCaps& caps = {});

// H(Z_1, Z_t) for the stationary walk, summed over pairs.
double joint_entropy_stationary(const RestrictedWalk& w, int64_t t, const WalkCaps& caps = {});

// max over targets y and sources x of the expected hitting time of y from
// x, by one linear solve per target. Checks the 2 * maxdeg * |V|^2 bound.
double hitting_time_max(const Graph& g, const WalkCaps& caps = {});

// Least t with max-over-starts total variation distance to stationarity at
// most eps. With lazy=false a bipartite input is rejected (periodic chain).
// start_sample > 0 restricts to that many sampled starts, making the result
// a lower bound.
int64_t mixing_time_tv(const Graph& g, double eps, bool lazy, const WalkCaps& caps = {},
                       int64_t max_steps = 1'000'000, int64_t start_sample = 0, uint64_t seed = 0);

struct EscapeStats {
    double msd_root_avoided = 0;  // E[d(X_0,X_t)^2  1{root never visited}]
    double msd_root_avoided_stderr = 0;
    double p_root_visited = 0;
    double p_root_visited_stderr = 0;
    int64_t n_samples = 0;
};

// Monte Carlo, stationary start, simple walk on the rooted graph.
EscapeStats escape_statistics(const RootedGraph& rg, int64_t t, int64_t count, uint64_t seed);

// Detailed balance pi(x) P(x,y) = pi(y) P(y,x), checked exhaustively.
bool verify_detailed_balance(const RestrictedWalk& w, double tol = 1e-12);

} // namespace rwlab
