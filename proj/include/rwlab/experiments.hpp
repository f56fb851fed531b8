// experiments.hpp — named, config-driven, seed-reproducible experiments
// tying the modules together, with CSV/JSON artifact emission.
#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "rwlab/generators.hpp"
#include "rwlab/scales.hpp"

namespace rwlab {

struct CsvRow {
    int64_t t = 0;
    std::string statistic;
    double value = 0;
    double stderr_ = 0;
    int64_t n_samples = 0;
    uint64_t seed = 0;
};

// Deterministic byte output for fixed rows: fixed column order, %.17g.
void write_csv(const std::filesystem::path& path, const std::vector<CsvRow>& rows);

uint64_t config_hash(const nlohmann::json& config);

// Manifest beside results: config + hash, seeds, versions, wall time.
void write_manifest(const std::filesystem::path& path, const std::string& experiment,
                    const nlohmann::json& config, const std::vector<std::string>& outputs,
                    int64_t wall_ms);

// Mean-square displacement of the torus walk via lattice displacement
// tracking (the torus walk is the +-1 coordinate walk; distances come from
// the wrapped L1 metric, no graph needed).
std::vector<MsdResult> torus_displacement_msd(int64_t side, const std::vector<int64_t>& t_grid,
                                              int64_t count, uint64_t seed);

// Slowly growing normalizer used in superdiffusivity reports.
double slow_growth(double t);

struct ExceptionalConfig {
    std::vector<Vertex> n_list{64, 128, 256};
    int64_t samples = 2000;
    uint64_t seed = 1;
    double ratio_factor = 1.5;       // required r(max)/r(min)
    int64_t torus_side = 2048;
    double flat_tolerance = 0.25;
    int degree = 3;
    double gap_threshold = 0.98;  // lazy eigenvalue; cubic graphs cannot beat ~0.97 at scale
    double significance_fraction = 0.1;  // 3 sigma below this fraction of MSD

    nlohmann::json to_json() const;
};

struct ExceptionalRow {
    int64_t n = 0;         // expander size, or torus side for control rows
    int64_t t = 0;         // probe time ceil(n^2 ln n)
    double msd = 0;
    double msd_stderr = 0;
    double ratio = 0;      // msd / t
    double ratio_stderr = 0;
    double superdiffusive_threshold = 0;  // t ln t / slow_growth(t)
};

struct ExceptionalReport {
    std::vector<ExceptionalRow> expander_rows;
    std::vector<ExceptionalRow> torus_rows;
    bool ratios_increasing = false;
    double ratio_max_min = 0;
    double ratio_max_min_conservative = 0;  // 3 sigma against us on both ends
    bool factor_met = false;
    bool torus_flat = false;
    bool significant = false;
    double factor_required = 0;

    nlohmann::json to_json() const;
};

// Stretched expanders probed at t = ceil(n^2 ln n) from stationary starts,
// with a torus control on the same time grid.
ExceptionalReport run_exceptional(const ExceptionalConfig& cfg);

struct PlanarConfig {
    int64_t side = 128;
    std::vector<int64_t> t_grid{16, 64, 256};
    std::vector<int64_t> probe_box_sides{8, 16, 32};
    int64_t starts = 12;
    double slack = 0.2;
    uint64_t seed = 3;
    WalkCaps caps{};

    nlohmann::json to_json() const;
};

struct PlanarRow {
    int64_t t = 0;
    int64_t box_rows = 0, box_cols = 0;  // chosen set S (equal to side,side for the full grid)
    double phi = 0;
    double phi_threshold = 0;  // (M/t)^2
    bool feasible = false;
    double min_msd = 0;
    double budget = 0;  // 2 M^2 t (1 + slack)
    bool within_budget = false;
};

struct PlanarReport {
    double M = 0;
    std::vector<MarkovTypeRow> probe_rows;
    std::vector<PlanarRow> rows;
    bool all_within = false;

    nlohmann::json to_json() const;
};

// Grid family: pick a low-expansion box per time, then check the walk is
// somewhere at most diffusive against the Markov-type budget.
PlanarReport run_planar_dichotomy(const PlanarConfig& cfg);

struct DiffusiveConfig {
    std::vector<int64_t> n_grid{16};
    std::vector<double> lambda_grid{2, 4, 8};
    std::vector<int64_t> r_grid;
    Vertex rho = 0;
    int64_t exact_start_cap = 5000;
    int64_t start_sample = 256;
    uint64_t seed = 5;
    WalkCaps caps{};

    nlohmann::json to_json() const;
};

struct TripleRow {
    TemperReport report;
    double restricted_msd_on_controlled = 0;  // E[d^2(Z_2n,Z_0) 1{Z_0 controlled}]
    double budget = 0;                        // multi-scale speed bound
    bool within_budget = false;
    double controlled_mass = 0;               // pi(S up)
    double frac_exceeding_paper_threshold = 0; // pi-mass of starts above lambda^13 n
};

struct DiffusiveReport {
    std::vector<TripleRow> rows;
    nlohmann::json to_json() const;
};

// For every triple in the grid: tempered/insulated verdicts; for passing
// triples, the measured restricted-walk MSD over controlled starts against
// the multi-scale budget.
DiffusiveReport run_diffusive_vs_bound(const RootedGraph& rg, const DiffusiveConfig& cfg);

} // namespace rwlab
