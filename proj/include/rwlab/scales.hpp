// scales.hpp — the analytic pipeline: martingale decomposition of walk
// increments, subgaussian tail checks, the multi-scale speed bound,
// stationary-averaged growth profiles, tempered/insulated triple detection,
// scale scanning, mass-transport averaging, and the graphic-Markov-type
// probe.
#pragma once

#include <functional>

#include "rwlab/embed.hpp"
#include "rwlab/walk.hpp"

namespace rwlab {

// Scale window attached to a time horizon n: the smallest k with
// 8^k >= sqrt(2n) up to the smallest k with 8^k >= 2n.
struct ScaleWindow {
    int64_t n = 1;
    int k_lo = 1;
    int k_hi = 1;

    static ScaleWindow for_time(int64_t n);
};

int64_t pow8(int k);

// A map from vertices into R^d.
using PointFn = std::function<std::vector<double>(Vertex)>;

PointFn point_fn_of(const CoordinateMap& f, std::shared_ptr<const VertexSubset> ground);
PointFn scaled_point_fn_of(const EmbeddingEnsemble& e);

struct MartingaleDecomposition {
    std::vector<std::vector<double>> forward_increments;   // n vectors
    std::vector<std::vector<double>> backward_increments;  // n vectors
    std::vector<double> forward_total;                     // A_n
    std::vector<double> backward_total;                    // B_n
    std::vector<double> endpoint_difference;               // f(Z_2n) - f(Z_0)
    double max_increment_norm = 0;
    // max norm of (A_n - B_n) - (f(Z_2n) - f(Z_0)); zero up to rounding.
    double identity_residual = 0;
};

// Splits f along a stationary reversible trajectory of even length 2n into
// a forward and a backward martingale with A_n - B_n = f(Z_2n) - f(Z_0) and
// increment norms at most 2 Lip(f). Conditional expectations are exact
// one-step sums from the walk's transition rule.
MartingaleDecomposition martingale_decompose(const Trajectory& traj, const PointFn& f,
                                             const RestrictedWalk& w);

struct TailRow {
    double lambda = 0;
    double empirical = 0;
    double stderr_ = 0;
    double bound = 0;  // 4 exp(-lambda^2 / (32 n lip^2))
};

// Empirical Pr(||f(Z_2n) - f(Z_0)|| >= lambda) against the subgaussian
// bound, from stationary Monte Carlo trajectories.
std::vector<TailRow> azuma_tail_check(const RestrictedWalk& w, const PointFn& f, double lip, int64_t n,
                                      const std::vector<double>& lambdas, int64_t n_samples,
                                      uint64_t seed);

// 2n + 256 sum_{k in window} 8^{2k} exp(-8^{2k} / (32 n f(k)^2)).
double speed_bound_rhs(int64_t n, const std::function<double(int)>& scale_fn);

// The scale function used with averaged profiles: f(k) = 128 (1 + lambda *
// mean_profile[k]); profile entries beyond the vector count as 0.
std::function<double(int)> averaged_profile_scale_fn(double lambda, std::vector<double> mean_profile,
                                                     int first_k);

// Stationary-averaged growth profiles over a subset.
class GrowthSummary {
public:
    GrowthSummary(const Graph& g, VertexSubset s, int k_min, int k_max);

    const VertexSubset& subset() const { return *s_; }
    int k_min() const { return k_min_; }
    int k_max() const { return k_max_; }

    double profile_of(size_t member_index, int k) const { return profile_[idx(k)][member_index]; }
    double mean_profile(int k) const { return mean_[idx(k)]; }
    std::vector<double> mean_profile_vector() const { return mean_; }

    // Members x with phi_x(k) <= lambda * mean(k).
    std::vector<uint8_t> controlled(int k, double lambda) const;

    // Intersection over k >= k0 of controlled(k, lambda 2^{k-k0}); returns
    // the membership mask and its stationary mass (>= 1 - 2/lambda).
    std::pair<std::vector<uint8_t>, double> uniformly_controlled(int k0, double lambda) const;

    double stationary_weight(size_t member_index) const { return pi_[member_index]; }

private:
    size_t idx(int k) const {
        if (k < k_min_ || k > k_max_) throw std::invalid_argument("scale outside the computed range");
        return static_cast<size_t>(k - k_min_);
    }
    std::shared_ptr<const VertexSubset> s_;
    int k_min_, k_max_;
    std::vector<double> pi_;
    std::vector<std::vector<double>> profile_;  // [k - k_min][member]
    std::vector<double> mean_;
};

// theta(ell) = sum_{k=ell}^{3 ell} profile(k) 2^{ell-k} on a raw profile
// (profile[k-1] holds scale k; missing entries count as 0).
double tail_weighted_growth(const std::vector<double>& profile, int ell);

struct TemperReport {
    int64_t n = 0;
    double lambda = 0;
    int64_t r = 0;
    bool tempered = false;
    std::vector<double> margins;      // lambda 2^{k-k_lo} - mean profile, per k in window
    bool insulated = false;
    double shell_ratio = 0;           // mu(B(r) \ B(r-2n)) / mu(B(r))
    double shell_bound = 0;           // 1 / (4 lambda)
    double stationary_shell_mass = 0; // pi(shell), <= 1/(2 lambda) when insulated
    std::string note;
};

TemperReport temper_insulate_check(const Graph& g, Vertex rho, int64_t n, double lambda, int64_t r);

struct ScanConfig {
    std::vector<int64_t> base_radii;  // geometric anchors (override of the 8^k ladder)
    int radii_per_base = 3;
    int64_t shell_width = 0;          // 0: use 2 * max n of the grid
    std::vector<int> ell_grid{1};
    std::vector<int64_t> n_grid{64, 256};  // clamped per ell to [8^{2l}, 8^{2l+2}]
    WalkCaps caps{};
};

struct ScanRow {
    size_t base_index = 0;
    int64_t r = 0;
    int ell = 0;
    int64_t n = 0;
    double doubling_term = 0;
    double shell_term = 0;
    double profile_term = 0;   // theta at (r, ell)
    double entropy_term = 0;   // H(2n) - H(2n-1) from the root
    double total = 0;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    ScanRow best;
    double grid_mean = 0;
};

// Evaluates the per-instance scale functional over the grid and returns the
// minimizing tuple; the minimum is at most the grid average by averaging.
ScanResult scan_good_scales(const RootedGraph& rg, const ScanConfig& cfg);

struct MassTransportResult {
    double lhs = 0;  // E[ mu(B(R))/mu(B(2R)) 1_A(rho) ]
    double rhs = 0;  // E[ mu({x in B(R) : A(x)}) / mu(B(R)) ]
};

// Finite-graph mass-transport inequality with a degree-biased root; the
// left side never exceeds the right.
MassTransportResult mass_transport_check(const Graph& g, int64_t R,
                                         const std::function<bool(Vertex)>& predicate);

struct MarkovTypeRow {
    size_t subset_index = 0;
    int64_t t = 0;
    double msd = 0;
    double ratio = 0;  // sqrt(msd / t)
};

struct MarkovTypeEstimate {
    double M = 0;  // max ratio over rows
    std::vector<MarkovTypeRow> rows;
};

// Lower estimate of the graphic Markov type 2 constant: exact stationary
// MSD of the restricted walk over each subset and time.
MarkovTypeEstimate graphic_markov_type_probe(const Graph& g, const std::vector<VertexSubset>& subsets,
                                             const std::vector<int64_t>& t_grid, const WalkCaps& caps = {});

} // namespace rwlab
