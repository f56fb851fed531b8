#include "rwlab/scales.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace rwlab {

int64_t pow8(int k) {
    if (k < 0 || k > 20) throw std::invalid_argument("8^k out of range");
    int64_t r = 1;
    for (int i = 0; i < k; ++i) r *= 8;
    return r;
}

ScaleWindow ScaleWindow::for_time(int64_t n) {
    if (n < 1) throw std::invalid_argument("time horizon must be positive");
    ScaleWindow w;
    w.n = n;
    // smallest k with 64^k >= 2n  (8^k >= sqrt(2n)), exact in integers
    int k = 0;
    int64_t p = 1;
    while (p < 2 * n) {
        p *= 64;
        ++k;
    }
    w.k_lo = std::max(k, 1);
    k = 0;
    p = 1;
    while (p < 2 * n) {
        p *= 8;
        ++k;
    }
    w.k_hi = std::max(k, 1);
    return w;
}

PointFn point_fn_of(const CoordinateMap& f, std::shared_ptr<const VertexSubset> ground) {
    auto values = std::make_shared<std::vector<double>>(f.values);
    return [values, ground](Vertex v) {
        int64_t i = ground->index_of(v);
        if (i < 0) throw std::invalid_argument("vertex outside the map's ground set");
        return std::vector<double>{(*values)[static_cast<size_t>(i)]};
    };
}

PointFn scaled_point_fn_of(const EmbeddingEnsemble& e) {
    return [&e](Vertex v) { return e.scaled_point(v); };
}

namespace {

double norm_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

std::vector<double> minus(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

} // namespace

MartingaleDecomposition martingale_decompose(const Trajectory& traj, const PointFn& f,
                                             const RestrictedWalk& w) {
    if (traj.vertices.size() < 3 || traj.vertices.size() % 2 == 0) {
        throw std::invalid_argument("martingale decomposition needs a trajectory of even time length 2n");
    }
    int64_t two_n = static_cast<int64_t>(traj.vertices.size()) - 1;
    int64_t n = two_n / 2;

    // One-step conditional expectation g(x) = E[f(Z') | Z = x]; by
    // reversibility the same kernel serves the backward filtration.
    auto conditional = [&](Vertex x) {
        auto row = w.transition(x);
        const auto& sub = w.subset();
        std::vector<double> acc;
        for (size_t i = 0; i < sub.size(); ++i) {
            double p = row.probabilities()[i];
            if (p == 0) continue;
            auto fv = f(sub.members()[i]);
            if (acc.empty()) acc.assign(fv.size(), 0.0);
            for (size_t c = 0; c < fv.size(); ++c) acc[c] += p * fv[c];
        }
        return acc;
    };

    std::vector<std::vector<double>> fz(traj.vertices.size());
    std::vector<std::vector<double>> gz(traj.vertices.size());
    for (size_t s = 0; s < traj.vertices.size(); ++s) {
        fz[s] = f(traj.vertices[s]);
        gz[s] = conditional(traj.vertices[s]);
    }

    MartingaleDecomposition out;
    size_t dim = fz[0].size();
    out.forward_total.assign(dim, 0.0);
    out.backward_total.assign(dim, 0.0);
    for (int64_t t = 1; t <= n; ++t) {
        auto a = minus(fz[static_cast<size_t>(2 * t)], gz[static_cast<size_t>(2 * t - 1)]);
        auto b = minus(fz[static_cast<size_t>(two_n - 2 * t)], gz[static_cast<size_t>(two_n - 2 * t + 1)]);
        out.max_increment_norm = std::max({out.max_increment_norm, norm_of(a), norm_of(b)});
        for (size_t c = 0; c < dim; ++c) {
            out.forward_total[c] += a[c];
            out.backward_total[c] += b[c];
        }
        out.forward_increments.push_back(std::move(a));
        out.backward_increments.push_back(std::move(b));
    }
    out.endpoint_difference = minus(fz.back(), fz.front());
    std::vector<double> resid(dim);
    for (size_t c = 0; c < dim; ++c) {
        resid[c] = out.forward_total[c] - out.backward_total[c] - out.endpoint_difference[c];
    }
    out.identity_residual = norm_of(resid);
    return out;
}

std::vector<TailRow> azuma_tail_check(const RestrictedWalk& w, const PointFn& f, double lip, int64_t n,
                                      const std::vector<double>& lambdas, int64_t n_samples,
                                      uint64_t seed) {
    if (n < 1 || n_samples < 1) throw std::invalid_argument("need n >= 1 and samples >= 1");
    std::vector<int64_t> exceed(lambdas.size(), 0);
    for_each_trajectory(w, WalkStart::stationary(), 2 * n, n_samples, seed, [&](const Trajectory& traj) {
        auto diff = minus(f(traj.vertices.back()), f(traj.vertices.front()));
        double d = norm_of(diff);
        for (size_t i = 0; i < lambdas.size(); ++i) {
            if (d >= lambdas[i]) ++exceed[i];
        }
    });
    std::vector<TailRow> out;
    for (size_t i = 0; i < lambdas.size(); ++i) {
        double p = static_cast<double>(exceed[i]) / static_cast<double>(n_samples);
        double se = std::sqrt(p * (1 - p) / static_cast<double>(n_samples));
        double bound = 4.0 * std::exp(-(lambdas[i] * lambdas[i]) /
                                      (32.0 * static_cast<double>(n) * lip * lip));
        out.push_back({lambdas[i], p, se, bound});
    }
    return out;
}

double speed_bound_rhs(int64_t n, const std::function<double(int)>& scale_fn) {
    auto win = ScaleWindow::for_time(n);
    double acc = 2.0 * static_cast<double>(n);
    for (int k = win.k_lo; k <= win.k_hi; ++k) {
        double p2k = static_cast<double>(pow8(k));
        p2k *= p2k;  // 8^{2k}
        double fk = scale_fn(k);
        double term;
        if (fk <= 0) {
            term = 0;  // the exceedance event is impossible for a zero scale function
        } else {
            term = 256.0 * p2k * std::exp(-p2k / (32.0 * static_cast<double>(n) * fk * fk));
        }
        acc += term;
    }
    return acc;
}

std::function<double(int)> averaged_profile_scale_fn(double lambda, std::vector<double> mean_profile,
                                                     int first_k) {
    return [lambda, prof = std::move(mean_profile), first_k](int k) {
        double bar = 0;
        int i = k - first_k;
        if (i >= 0 && i < static_cast<int>(prof.size())) bar = prof[static_cast<size_t>(i)];
        return 128.0 * (1.0 + lambda * bar);
    };
}

GrowthSummary::GrowthSummary(const Graph& g, VertexSubset s, int k_min, int k_max)
    : s_(std::make_shared<const VertexSubset>(std::move(s))), k_min_(k_min), k_max_(k_max) {
    if (k_min < 1 || k_max < k_min) throw std::invalid_argument("bad scale range");
    if (s_->empty()) throw std::invalid_argument("empty subset");
    size_t nk = static_cast<size_t>(k_max - k_min + 1);
    profile_.assign(nk, std::vector<double>(s_->size(), 0.0));
    mean_.assign(nk, 0.0);
    pi_.resize(s_->size());
    double mu = static_cast<double>(s_->mu());
    for (size_t i = 0; i < s_->size(); ++i) pi_[i] = g.degree(s_->members()[i]) / mu;

    // Saturation shortcut: once the ball radius provably covers the whole
    // component, |B| = |V| without a search. One reference BFS gives both
    // the eccentricity bound and per-vertex distances.
    Vertex ref = s_->members()[0];
    auto ref_dist = distances_from(g, ref);
    int64_t ref_ecc = 0;
    int64_t component = 0;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (ref_dist[v] >= 0) {
            ++component;
            ref_ecc = std::max<int64_t>(ref_ecc, ref_dist[v]);
        }
    }

    int64_t top_radius = pow8(k_max);
    std::vector<int64_t> counts(static_cast<size_t>(k_max) + 1);
    for (size_t i = 0; i < s_->size(); ++i) {
        Vertex x = s_->members()[i];
        if (ref_dist[x] < 0) throw std::domain_error("subset spans multiple components");
        int64_t sat = ref_dist[x] + ref_ecc;  // ecc(x) <= d(x, ref) + ecc(ref)
        int64_t need = std::min(top_radius, sat);
        auto ball = bfs_ball(g, x, need);
        for (int k = 0; k <= k_max; ++k) {
            int64_t radius = pow8(k);
            if (radius >= sat) {
                counts[static_cast<size_t>(k)] = component;
            } else {
                int64_t c = 0;
                for (int32_t dd : ball.distances) {
                    if (dd <= radius) ++c;
                }
                counts[static_cast<size_t>(k)] = c;
            }
        }
        for (int k = k_min; k <= k_max; ++k) {
            double phi = std::log(static_cast<double>(counts[static_cast<size_t>(k)]) /
                                  static_cast<double>(counts[static_cast<size_t>(k - 1)]));
            profile_[static_cast<size_t>(k - k_min)][i] = phi;
            mean_[static_cast<size_t>(k - k_min)] += pi_[i] * phi;
        }
    }
}

std::vector<uint8_t> GrowthSummary::controlled(int k, double lambda) const {
    const auto& prof = profile_[idx(k)];
    double cutoff = lambda * mean_[idx(k)];
    std::vector<uint8_t> out(prof.size());
    for (size_t i = 0; i < prof.size(); ++i) out[i] = prof[i] <= cutoff ? 1 : 0;
    return out;
}

std::pair<std::vector<uint8_t>, double> GrowthSummary::uniformly_controlled(int k0, double lambda) const {
    std::vector<uint8_t> mask(s_->size(), 1);
    double factor = lambda;
    for (int k = k0; k <= k_max_; ++k) {
        auto ck = controlled(k, factor);
        for (size_t i = 0; i < mask.size(); ++i) mask[i] &= ck[i];
        factor *= 2;
    }
    double mass = 0;
    for (size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) mass += pi_[i];
    }
    return {std::move(mask), mass};
}

double tail_weighted_growth(const std::vector<double>& profile, int ell) {
    if (ell < 1) throw std::invalid_argument("ell must be >= 1");
    double acc = 0;
    double weight = 1.0;
    for (int k = ell; k <= 3 * ell; ++k) {
        double phi = (k - 1) < static_cast<int>(profile.size()) ? profile[static_cast<size_t>(k - 1)] : 0.0;
        acc += phi * weight;
        weight *= 0.5;
    }
    return acc;
}

TemperReport temper_insulate_check(const Graph& g, Vertex rho, int64_t n, double lambda, int64_t r) {
    if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
    TemperReport rep;
    rep.n = n;
    rep.lambda = lambda;
    rep.r = r;

    auto win = ScaleWindow::for_time(n);
    auto ball = bfs_ball(g, rho, r);
    GrowthSummary summary(g, ball.to_subset(g), win.k_lo, win.k_hi);

    rep.tempered = true;
    double allowance = lambda;  // lambda * 2^{k - k_lo}
    for (int k = win.k_lo; k <= win.k_hi; ++k) {
        double margin = allowance - summary.mean_profile(k);
        rep.margins.push_back(margin);
        if (margin < 0) rep.tempered = false;
        allowance *= 2;
    }

    rep.shell_bound = 1.0 / (4.0 * lambda);
    if (r <= 2 * n) {
        rep.insulated = false;
        rep.note = "shell radius r - 2n is not positive; triple cannot be insulated";
        rep.shell_ratio = 1.0;
        rep.stationary_shell_mass = 1.0;
        return rep;
    }
    int64_t mu_ball = 0, mu_shell = 0;
    for (size_t i = 0; i < ball.size(); ++i) {
        int32_t deg = g.degree(ball.vertices[i]);
        mu_ball += deg;
        if (ball.distances[i] > r - 2 * n) mu_shell += deg;
    }
    rep.shell_ratio = static_cast<double>(mu_shell) / static_cast<double>(mu_ball);
    rep.insulated = rep.shell_ratio <= rep.shell_bound;
    rep.stationary_shell_mass = rep.shell_ratio;  // pi over B(r) equals the mu ratio
    return rep;
}

namespace {

// Entropy of the t-step law from a point start, evaluated at several times
// in one sweep.
std::vector<double> entropy_curve_from(const RootedGraph& rg, const std::vector<int64_t>& times,
                                       const WalkCaps& caps) {
    auto w = RestrictedWalk::whole_graph(rg.graph);
    std::vector<int64_t> sorted(times);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    auto cur = DistributionVector::point_mass(w.subset_ptr(), rg.root);
    std::vector<std::pair<int64_t, double>> at;
    int64_t now = 0;
    for (int64_t t : sorted) {
        cur = exact_pushforward(w, cur, t - now, caps);
        now = t;
        at.emplace_back(t, entropy(cur));
    }
    std::vector<double> out;
    out.reserve(times.size());
    for (int64_t t : times) {
        for (auto& [tt, h] : at) {
            if (tt == t) {
                out.push_back(h);
                break;
            }
        }
    }
    return out;
}

} // namespace

ScanResult scan_good_scales(const RootedGraph& rg, const ScanConfig& cfg) {
    if (cfg.base_radii.size() < 1) throw std::invalid_argument("scan needs at least one base radius");
    const Graph& g = rg.graph;

    // Ball measures at every radius we will touch.
    auto mu_ball = [&](int64_t radius) {
        auto b = bfs_ball(g, rg.root, radius);
        int64_t mu = 0;
        for (Vertex v : b.vertices) mu += g.degree(v);
        return mu;
    };

    int64_t max_n = *std::max_element(cfg.n_grid.begin(), cfg.n_grid.end());
    int64_t w = cfg.shell_width > 0 ? cfg.shell_width : 2 * max_n;

    // Entropy increments H(2n) - H(2n-1) from the root, shared by all rows.
    std::vector<int64_t> times;
    std::vector<std::pair<int, int64_t>> ell_n;  // clamped n per ell
    for (int ell : cfg.ell_grid) {
        int64_t lo = pow8(2 * ell), hi = pow8(2 * ell + 2);
        for (int64_t n : cfg.n_grid) {
            int64_t cn = std::clamp(n, lo, hi);
            ell_n.emplace_back(ell, cn);
            times.push_back(2 * cn);
            times.push_back(2 * cn - 1);
        }
    }
    auto hs = entropy_curve_from(rg, times, cfg.caps);
    std::map<int64_t, double> entropy_at;
    for (size_t i = 0; i < times.size(); ++i) entropy_at[times[i]] = hs[i];

    ScanResult res;
    for (size_t bi = 0; bi < cfg.base_radii.size(); ++bi) {
        int64_t base = cfg.base_radii[bi];
        // Doubling surrogate: two anchors up the geometric ladder.
        size_t up = std::min(bi + 2, cfg.base_radii.size() - 1);
        double doubling = up > bi
                              ? std::log(static_cast<double>(mu_ball(cfg.base_radii[up])) /
                                         static_cast<double>(mu_ball(base)))
                              : 0.0;
        for (int j = 1; j <= cfg.radii_per_base; ++j) {
            int64_t r = base + j * w;
            double shell = std::log(static_cast<double>(mu_ball(r)) / static_cast<double>(mu_ball(r - w)));
            // theta needs mean profiles up to scale 3*max(ell) over B(r).
            int k_top = 3 * (*std::max_element(cfg.ell_grid.begin(), cfg.ell_grid.end()));
            GrowthSummary summary(g, bfs_ball(g, rg.root, r).to_subset(g), 1, k_top);
            std::vector<double> prof(static_cast<size_t>(k_top));
            for (int k = 1; k <= k_top; ++k) prof[static_cast<size_t>(k - 1)] = summary.mean_profile(k);
            for (auto [ell, n] : ell_n) {
                ScanRow row;
                row.base_index = bi;
                row.r = r;
                row.ell = ell;
                row.n = n;
                row.doubling_term = doubling;
                row.shell_term = shell;
                row.profile_term = tail_weighted_growth(prof, ell);
                row.entropy_term = entropy_at[2 * n] - entropy_at[2 * n - 1];
                row.total = row.doubling_term + row.shell_term + row.profile_term + row.entropy_term;
                res.rows.push_back(row);
            }
        }
    }
    res.best = *std::min_element(res.rows.begin(), res.rows.end(),
                                 [](const ScanRow& a, const ScanRow& b) { return a.total < b.total; });
    double sum = 0;
    for (const auto& row : res.rows) sum += row.total;
    res.grid_mean = sum / static_cast<double>(res.rows.size());
    return res;
}

MassTransportResult mass_transport_check(const Graph& g, int64_t R,
                                         const std::function<bool(Vertex)>& predicate) {
    MassTransportResult out;
    double mu_total = static_cast<double>(g.total_degree());
    for (Vertex rho = 0; rho < g.vertex_count(); ++rho) {
        double weight = g.degree(rho) / mu_total;  // degree-biased root
        auto ball = bfs_ball(g, rho, R);
        int64_t mu_r = 0, mu_hits = 0;
        for (Vertex v : ball.vertices) {
            mu_r += g.degree(v);
            if (predicate(v)) mu_hits += g.degree(v);
        }
        auto ball2 = bfs_ball(g, rho, 2 * R);
        int64_t mu_2r = 0;
        for (Vertex v : ball2.vertices) mu_2r += g.degree(v);
        if (predicate(rho)) {
            out.lhs += weight * static_cast<double>(mu_r) / static_cast<double>(mu_2r);
        }
        out.rhs += weight * static_cast<double>(mu_hits) / static_cast<double>(mu_r);
    }
    return out;
}

MarkovTypeEstimate graphic_markov_type_probe(const Graph& g, const std::vector<VertexSubset>& subsets,
                                             const std::vector<int64_t>& t_grid, const WalkCaps& caps) {
    MarkovTypeEstimate est;
    for (size_t si = 0; si < subsets.size(); ++si) {
        const auto& s = subsets[si];
        if (s.size() == 1) {
            for (int64_t t : t_grid) est.rows.push_back({si, t, 0.0, 0.0});
            continue;
        }
        RestrictedWalk w(g, s);
        auto pi = w.stationary();
        std::vector<double> acc(t_grid.size(), 0.0);
        for (size_t i = 0; i < s.size(); ++i) {
            auto msd = msd_exact_grid(w, s.members()[i], t_grid, caps);
            for (size_t k = 0; k < t_grid.size(); ++k) {
                acc[k] += pi.probabilities()[i] * msd[k].value;
            }
        }
        for (size_t k = 0; k < t_grid.size(); ++k) {
            double ratio = std::sqrt(acc[k] / static_cast<double>(t_grid[k]));
            est.rows.push_back({si, t_grid[k], acc[k], ratio});
            est.M = std::max(est.M, ratio);
        }
    }
    return est;
}

} // namespace rwlab
