#include "rwlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace rwlab {

void write_csv(const std::filesystem::path& path, const std::vector<CsvRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "t,statistic,value,stderr,n_samples,seed\n";
    char buf[64];
    for (const auto& r : rows) {
        out << r.t << "," << r.statistic << ",";
        std::snprintf(buf, sizeof(buf), "%.17g", r.value);
        out << buf << ",";
        std::snprintf(buf, sizeof(buf), "%.17g", r.stderr_);
        out << buf << "," << r.n_samples << "," << r.seed << "\n";
    }
}

uint64_t config_hash(const nlohmann::json& config) {
    std::string s = config.dump();
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_manifest(const std::filesystem::path& path, const std::string& experiment,
                    const nlohmann::json& config, const std::vector<std::string>& outputs,
                    int64_t wall_ms) {
    nlohmann::json m;
    m["experiment"] = experiment;
    m["config"] = config;
    m["config_hash"] = config_hash(config);
    m["tool_version"] = "0.1.0";
    m["outputs"] = outputs;
    m["wall_ms"] = wall_ms;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << m.dump(2) << "\n";
}

std::vector<MsdResult> torus_displacement_msd(int64_t side, const std::vector<int64_t>& t_grid,
                                              int64_t count, uint64_t seed) {
    if (side < 3 || count < 1) throw std::invalid_argument("bad torus control parameters");
    std::vector<int64_t> sorted(t_grid);
    std::sort(sorted.begin(), sorted.end());
    auto wrap = [&](int64_t d) {
        d %= side;
        if (d < 0) d += side;
        return std::min(d, side - d);
    };
    std::vector<std::vector<double>> sq(t_grid.size(), std::vector<double>(static_cast<size_t>(count)));
    for (int64_t i = 0; i < count; ++i) {
        CounterRng rng(seed, static_cast<uint64_t>(i));
        int64_t dr = 0, dc = 0;
        size_t next = 0;
        for (int64_t step = 0; step <= sorted.back(); ++step) {
            while (next < sorted.size() && sorted[next] == step) {
                double d = static_cast<double>(wrap(dr) + wrap(dc));
                sq[next][static_cast<size_t>(i)] = d * d;
                ++next;
            }
            switch (rng.below(4)) {
                case 0: ++dr; break;
                case 1: --dr; break;
                case 2: ++dc; break;
                default: --dc; break;
            }
        }
    }
    std::vector<MsdResult> out;
    for (size_t k = 0; k < sorted.size(); ++k) {
        double n = static_cast<double>(count);
        double mean = std::accumulate(sq[k].begin(), sq[k].end(), 0.0) / n;
        double var = 0;
        for (double v : sq[k]) var += (v - mean) * (v - mean);
        var = count > 1 ? var / (n - 1) : 0;
        out.push_back({mean, std::sqrt(var / n), count});
    }
    // Reorder to the caller's grid.
    std::vector<MsdResult> reordered;
    for (int64_t t : t_grid) {
        for (size_t k = 0; k < sorted.size(); ++k) {
            if (sorted[k] == t) {
                reordered.push_back(out[k]);
                break;
            }
        }
    }
    return reordered;
}

double slow_growth(double t) { return std::log(std::log(t + std::exp(std::exp(1.0)))); }

nlohmann::json ExceptionalConfig::to_json() const {
    return {{"n_list", n_list},       {"samples", samples},
            {"seed", seed},           {"ratio_factor", ratio_factor},
            {"torus_side", torus_side}, {"flat_tolerance", flat_tolerance},
            {"degree", degree},       {"gap_threshold", gap_threshold},
            {"significance_fraction", significance_fraction}};
}

nlohmann::json ExceptionalReport::to_json() const {
    auto rows_json = [](const std::vector<ExceptionalRow>& rows) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
            arr.push_back({{"n", r.n},
                           {"t", r.t},
                           {"msd", r.msd},
                           {"msd_stderr", r.msd_stderr},
                           {"ratio", r.ratio},
                           {"ratio_stderr", r.ratio_stderr},
                           {"superdiffusive_threshold", r.superdiffusive_threshold}});
        }
        return arr;
    };
    return {{"expander_rows", rows_json(expander_rows)},
            {"torus_rows", rows_json(torus_rows)},
            {"ratios_increasing", ratios_increasing},
            {"ratio_max_min", ratio_max_min},
            {"ratio_max_min_conservative", ratio_max_min_conservative},
            {"factor_met", factor_met},
            {"torus_flat", torus_flat},
            {"significant", significant},
            {"factor_required", factor_required}};
}

ExceptionalReport run_exceptional(const ExceptionalConfig& cfg) {
    if (cfg.n_list.size() < 2) throw std::invalid_argument("need at least two expander sizes");
    ExceptionalReport rep;
    rep.factor_required = cfg.ratio_factor;

    std::vector<int64_t> t_grid;
    for (size_t i = 0; i < cfg.n_list.size(); ++i) {
        Vertex n = cfg.n_list[i];
        auto t = static_cast<int64_t>(std::ceil(static_cast<double>(n) * n * std::log(static_cast<double>(n))));
        t_grid.push_back(t);

        ExpanderSpec spec;
        spec.n = n;
        spec.degree = cfg.degree;
        spec.spectral_gap_threshold = cfg.gap_threshold;
        spec.seed = cfg.seed + i;
        auto exp = random_regular_expander(spec);
        Graph stretched = subdivide(exp.graph, n);
        auto w = RestrictedWalk::whole_graph(stretched);
        auto msd = msd_monte_carlo(w, WalkStart::stationary(), t, cfg.samples, cfg.seed * 1000 + i);

        ExceptionalRow row;
        row.n = n;
        row.t = t;
        row.msd = msd.value;
        row.msd_stderr = msd.stderr_;
        row.ratio = msd.value / static_cast<double>(t);
        row.ratio_stderr = msd.stderr_ / static_cast<double>(t);
        row.superdiffusive_threshold =
            static_cast<double>(t) * std::log(static_cast<double>(t)) / slow_growth(static_cast<double>(t));
        rep.expander_rows.push_back(row);
    }

    for (size_t i = 0; i < t_grid.size(); ++i) {
        auto msd = torus_displacement_msd(cfg.torus_side, {t_grid[i]}, cfg.samples,
                                          cfg.seed * 2000 + i)[0];
        ExceptionalRow row;
        row.n = cfg.torus_side;
        row.t = t_grid[i];
        row.msd = msd.value;
        row.msd_stderr = msd.stderr_;
        row.ratio = msd.value / static_cast<double>(t_grid[i]);
        row.ratio_stderr = msd.stderr_ / static_cast<double>(t_grid[i]);
        row.superdiffusive_threshold = static_cast<double>(t_grid[i]) *
                                       std::log(static_cast<double>(t_grid[i])) /
                                       slow_growth(static_cast<double>(t_grid[i]));
        rep.torus_rows.push_back(row);
    }

    rep.ratios_increasing = true;
    for (size_t i = 1; i < rep.expander_rows.size(); ++i) {
        if (rep.expander_rows[i].ratio <= rep.expander_rows[i - 1].ratio) rep.ratios_increasing = false;
    }
    const auto& first = rep.expander_rows.front();
    const auto& last = rep.expander_rows.back();
    rep.ratio_max_min = last.ratio / first.ratio;
    rep.ratio_max_min_conservative =
        (last.ratio - 3 * last.ratio_stderr) / (first.ratio + 3 * first.ratio_stderr);
    rep.factor_met = rep.ratio_max_min_conservative >= cfg.ratio_factor;

    double tmin = std::numeric_limits<double>::max(), tmax = 0;
    double tmin_se = 0, tmax_se = 0;
    for (const auto& r : rep.torus_rows) {
        if (r.ratio < tmin) {
            tmin = r.ratio;
            tmin_se = r.ratio_stderr;
        }
        if (r.ratio > tmax) {
            tmax = r.ratio;
            tmax_se = r.ratio_stderr;
        }
    }
    double flat_conservative = (tmax - 3 * tmax_se) / (tmin + 3 * tmin_se);
    rep.torus_flat = flat_conservative <= 1.0 + cfg.flat_tolerance;

    rep.significant = true;
    for (const auto& r : rep.expander_rows) {
        if (3 * r.msd_stderr > cfg.significance_fraction * r.msd) rep.significant = false;
    }
    return rep;
}

nlohmann::json PlanarConfig::to_json() const {
    return {{"side", side},   {"t_grid", t_grid}, {"probe_box_sides", probe_box_sides},
            {"starts", starts}, {"slack", slack},   {"seed", seed}};
}

nlohmann::json PlanarReport::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows) {
        rows_json.push_back({{"t", r.t},
                             {"box_rows", r.box_rows},
                             {"box_cols", r.box_cols},
                             {"phi", r.phi},
                             {"phi_threshold", r.phi_threshold},
                             {"feasible", r.feasible},
                             {"min_msd", r.min_msd},
                             {"budget", r.budget},
                             {"within_budget", r.within_budget}});
    }
    nlohmann::json probe = nlohmann::json::array();
    for (const auto& r : probe_rows) {
        probe.push_back({{"subset", r.subset_index}, {"t", r.t}, {"msd", r.msd}, {"ratio", r.ratio}});
    }
    return {{"M", M}, {"probe", probe}, {"rows", rows_json}, {"all_within", all_within}};
}

namespace {

// Square box anchored away from the grid boundary, so every member keeps
// its full degree.
VertexSubset interior_box(const Graph& grid, int64_t side, int64_t k, int64_t row0, int64_t col0) {
    std::vector<Vertex> members;
    members.reserve(static_cast<size_t>(k * k));
    for (int64_t r = row0; r < row0 + k; ++r) {
        for (int64_t c = col0; c < col0 + k; ++c) {
            members.push_back(static_cast<Vertex>(r * side + c));
        }
    }
    return VertexSubset(grid, std::move(members));
}

VertexSubset strip(const Graph& grid, int64_t side, int64_t k) {
    std::vector<Vertex> members;
    members.reserve(static_cast<size_t>(k * side));
    for (int64_t r = 0; r < k; ++r) {
        for (int64_t c = 0; c < side; ++c) members.push_back(static_cast<Vertex>(r * side + c));
    }
    return VertexSubset(grid, std::move(members));
}

} // namespace

PlanarReport run_planar_dichotomy(const PlanarConfig& cfg) {
    PlanarReport rep;
    Graph grid = standard_graph(StandardKind::grid, {cfg.side, cfg.side});

    // Markov-type probe over interior boxes.
    std::vector<VertexSubset> probe_subsets;
    std::vector<int64_t> probe_ts;
    for (int64_t k : cfg.probe_box_sides) {
        if (k + 2 > cfg.side) continue;
        probe_subsets.push_back(interior_box(grid, cfg.side, k, 1, 1));
    }
    int64_t max_box = *std::max_element(cfg.probe_box_sides.begin(), cfg.probe_box_sides.end());
    for (int64_t t = 1; t <= max_box * max_box; t *= 4) probe_ts.push_back(t);
    auto probe = graphic_markov_type_probe(grid, probe_subsets, probe_ts, cfg.caps);
    rep.M = probe.M;
    rep.probe_rows = probe.rows;

    auto whole = RestrictedWalk::whole_graph(grid);
    CounterRng start_rng(cfg.seed, 0);

    rep.all_within = true;
    for (int64_t t : cfg.t_grid) {
        PlanarRow row;
        row.t = t;
        row.phi_threshold = (rep.M / static_cast<double>(t)) * (rep.M / static_cast<double>(t));

        // Candidates ordered by mu: interior squares, strips, full grid.
        struct Candidate {
            VertexSubset s;
            int64_t rows, cols;
        };
        std::vector<Candidate> candidates;
        for (int64_t k = 4; k + 2 <= cfg.side; k *= 2) {
            candidates.push_back({interior_box(grid, cfg.side, k, 1, 1), k, k});
        }
        for (int64_t k = 4; k < cfg.side; k *= 2) {
            candidates.push_back({strip(grid, cfg.side, k), k, cfg.side});
        }
        candidates.push_back({VertexSubset::all(grid), cfg.side, cfg.side});
        std::sort(candidates.begin(), candidates.end(),
                  [](const Candidate& a, const Candidate& b) { return a.s.mu() < b.s.mu(); });

        const Candidate* chosen = nullptr;
        for (const auto& c : candidates) {
            double phi = edge_expansion(grid, c.s);
            if (phi <= row.phi_threshold) {
                chosen = &c;
                row.phi = phi;
                break;
            }
        }
        if (!chosen) {
            row.feasible = false;
            rep.all_within = false;
            rep.rows.push_back(row);
            continue;
        }
        row.feasible = true;
        row.box_rows = chosen->rows;
        row.box_cols = chosen->cols;

        // Min over sampled starts (degree-biased within S) of the simple
        // walk's exact MSD.
        RestrictedWalk on_s(grid, chosen->s);
        double min_msd = std::numeric_limits<double>::max();
        for (int64_t i = 0; i < cfg.starts; ++i) {
            Vertex x = on_s.sample_stationary(start_rng);
            min_msd = std::min(min_msd, msd_exact(whole, x, t, cfg.caps).value);
        }
        row.min_msd = min_msd;
        row.budget = 2.0 * rep.M * rep.M * static_cast<double>(t) * (1.0 + cfg.slack);
        row.within_budget = min_msd <= row.budget;
        if (!row.within_budget) rep.all_within = false;
        rep.rows.push_back(row);
    }
    return rep;
}

nlohmann::json DiffusiveConfig::to_json() const {
    return {{"n_grid", n_grid}, {"lambda_grid", lambda_grid}, {"r_grid", r_grid},
            {"rho", rho},       {"start_sample", start_sample}, {"seed", seed}};
}

nlohmann::json DiffusiveReport::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows) {
        rows_json.push_back({{"n", r.report.n},
                             {"lambda", r.report.lambda},
                             {"r", r.report.r},
                             {"tempered", r.report.tempered},
                             {"insulated", r.report.insulated},
                             {"shell_ratio", r.report.shell_ratio},
                             {"msd_on_controlled", r.restricted_msd_on_controlled},
                             {"budget", r.budget},
                             {"within_budget", r.within_budget},
                             {"controlled_mass", r.controlled_mass},
                             {"frac_exceeding_paper_threshold", r.frac_exceeding_paper_threshold}});
    }
    return {{"rows", rows_json}};
}

DiffusiveReport run_diffusive_vs_bound(const RootedGraph& rg, const DiffusiveConfig& cfg) {
    DiffusiveReport rep;
    const Graph& g = rg.graph;
    for (int64_t n : cfg.n_grid) {
        auto win = ScaleWindow::for_time(n);
        for (int64_t r : cfg.r_grid) {
            for (double lambda : cfg.lambda_grid) {
                TripleRow row;
                row.report = temper_insulate_check(g, cfg.rho, n, lambda, r);
                if (row.report.tempered && row.report.insulated) {
                    auto ball = bfs_ball(g, cfg.rho, r);
                    RestrictedWalk w(g, ball.to_subset(g));
                    GrowthSummary summary(g, w.subset(), win.k_lo, win.k_hi);
                    auto [mask, mass] = summary.uniformly_controlled(win.k_lo, lambda);
                    row.controlled_mass = mass;

                    std::vector<double> profile;
                    for (int k = win.k_lo; k <= win.k_hi; ++k) profile.push_back(summary.mean_profile(k));
                    row.budget = speed_bound_rhs(n, averaged_profile_scale_fn(lambda, profile, win.k_lo));

                    const auto& sub = w.subset();
                    double msd_masked = 0;
                    double frac_exceed = 0;
                    double paper_threshold = std::pow(lambda, 13.0) * static_cast<double>(n);
                    bool exact = static_cast<int64_t>(sub.size()) <= cfg.exact_start_cap;
                    if (exact) {
                        for (size_t i = 0; i < sub.size(); ++i) {
                            if (!mask[i]) continue;
                            double m = msd_exact(w, sub.members()[i], 2 * n, cfg.caps).value;
                            msd_masked += summary.stationary_weight(i) * m;
                            if (m >= paper_threshold) frac_exceed += summary.stationary_weight(i);
                        }
                    } else {
                        CounterRng rng(cfg.seed, 7);
                        double weight = 1.0 / static_cast<double>(cfg.start_sample);
                        for (int64_t i = 0; i < cfg.start_sample; ++i) {
                            Vertex x = w.sample_stationary(rng);
                            int64_t mi = sub.index_of(x);
                            if (!mask[static_cast<size_t>(mi)]) continue;
                            double m = msd_exact(w, x, 2 * n, cfg.caps).value;
                            msd_masked += weight * m;
                            if (m >= paper_threshold) frac_exceed += weight;
                        }
                    }
                    row.restricted_msd_on_controlled = msd_masked;
                    row.frac_exceeding_paper_threshold = frac_exceed;
                    row.within_budget = msd_masked <= row.budget;
                }
                rep.rows.push_back(row);
            }
        }
    }
    return rep;
}

} // namespace rwlab
