// rwlab — command-line front end: graph generation, walk statistics,
// embeddings, scale scans, and the headline experiments. Every subcommand
// is deterministic for a fixed config and seed and writes a manifest beside
// its results.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rwlab/embed.hpp"
#include "rwlab/experiments.hpp"
#include "rwlab/graph_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rwlab;

namespace {

struct OutputTracker {
    fs::path dir;
    std::vector<std::string> files;

    fs::path reserve(const std::string& name) {
        files.push_back(name);
        return dir / name;
    }
    void rollback() {
        for (const auto& f : files) {
            std::error_code ec;
            fs::remove(dir / f, ec);
        }
    }
};

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    return json::parse(in);
}

// "a..b", "a..b..step", or a comma list.
std::vector<int64_t> parse_grid(const std::string& text) {
    std::vector<int64_t> out;
    auto dots = text.find("..");
    if (dots != std::string::npos) {
        int64_t lo = std::stoll(text.substr(0, dots));
        std::string rest = text.substr(dots + 2);
        int64_t step = 1;
        auto dots2 = rest.find("..");
        int64_t hi;
        if (dots2 != std::string::npos) {
            hi = std::stoll(rest.substr(0, dots2));
            step = std::stoll(rest.substr(dots2 + 2));
        } else {
            hi = std::stoll(rest);
        }
        if (step < 1) throw std::runtime_error("grid step must be positive");
        for (int64_t v = lo; v <= hi; v += step) out.push_back(v);
        return out;
    }
    size_t pos = 0;
    while (pos < text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        out.push_back(std::stoll(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

int64_t elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
        .count();
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

int cmd_gen(const std::string& kind, std::vector<int64_t> dims, Vertex n, int degree, int64_t subdiv,
            std::vector<int64_t> n_seq, uint64_t seed, const fs::path& out_dir, const std::string& name) {
    auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);
    OutputTracker tracker{out_dir, {}};
    try {
        RootedGraph rg;
        json prov;
        prov["generator"] = kind;
        prov["seed"] = seed;
        if (kind == "path" || kind == "cycle" || kind == "grid" || kind == "torus") {
            StandardKind sk = kind == "path"    ? StandardKind::path
                              : kind == "cycle" ? StandardKind::cycle
                              : kind == "grid"  ? StandardKind::grid
                                                : StandardKind::torus;
            rg.graph = standard_graph(sk, dims);
            prov["dims"] = dims;
        } else if (kind == "expander") {
            ExpanderSpec spec;
            spec.n = n;
            spec.degree = degree;
            spec.seed = seed;
            auto res = random_regular_expander(spec);
            prov["lazy_second_eigenvalue"] = res.lazy_second_eigenvalue;
            prov["attempts"] = res.attempts_used;
            prov["diameter"] = res.diameter;
            prov["n"] = n;
            prov["degree"] = degree;
            if (subdiv > 1) {
                rg.graph = subdivide(res.graph, subdiv);
                prov["subdivided_by"] = subdiv;
            } else {
                rg.graph = std::move(res.graph);
            }
        } else if (kind == "hk") {
            HkParams params;
            params.n_sequence.assign(n_seq.begin(), n_seq.end());
            ExpanderSpec tmpl;
            tmpl.degree = degree;
            tmpl.seed = seed;
            auto res = build_hk(params, tmpl);
            prov["n_sequence"] = n_seq;
            prov["degree"] = degree;
            prov["diameter_constant"] = res.diameter_constant;
            prov["level_sizes"] = res.level_sizes;
            prov["expander_diameters"] = res.expander_diameters;
            rg = std::move(res.graph);
        } else {
            throw std::runtime_error("unknown kind " + kind);
        }
        tracker.reserve(name + ".graph.txt");
        tracker.reserve(name + ".meta.json");
        save_rooted_graph(out_dir / name, rg, prov);
        json config{{"kind", kind}, {"dims", dims},   {"n", n},           {"degree", degree},
                    {"subdivide", subdiv}, {"n_seq", n_seq}, {"seed", seed}, {"name", name}};
        write_manifest(out_dir / (name + ".manifest.json"), "gen", config, tracker.files, elapsed_ms(t0));
        std::cout << "wrote " << (out_dir / (name + ".graph.txt")).string() << " ("
                  << rg.graph.vertex_count() << " vertices, " << rg.graph.edge_count() << " edges)\n";
        return 0;
    } catch (const std::exception& e) {
        tracker.rollback();
        std::cerr << "gen failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_walk(const std::string& graph_file, const std::string& grid_text, const std::string& mode,
             int64_t start, int64_t samples, uint64_t seed, const fs::path& out_dir,
             const std::string& name) {
    auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);
    OutputTracker tracker{out_dir, {}};
    try {
        auto rg = load_rooted_graph(graph_file);
        auto w = RestrictedWalk::whole_graph(rg.graph);
        auto ts = parse_grid(grid_text);
        std::vector<CsvRow> rows;
        if (mode == "exact") {
            Vertex v = start < 0 ? rg.root : static_cast<Vertex>(start);
            auto res = msd_exact_grid(w, v, ts);
            for (size_t i = 0; i < ts.size(); ++i) {
                rows.push_back({ts[i], "msd_exact", res[i].value, 0.0, 0, seed});
            }
        } else if (mode == "mc") {
            auto begin = start < 0 ? WalkStart::stationary() : WalkStart::at(static_cast<Vertex>(start));
            auto res = msd_monte_carlo_grid(w, begin, ts, samples, seed);
            for (size_t i = 0; i < ts.size(); ++i) {
                rows.push_back({ts[i], "msd_mc", res[i].value, res[i].stderr_, res[i].n_samples, seed});
            }
        } else {
            throw std::runtime_error("mode must be exact or mc");
        }
        write_csv(tracker.reserve(name + ".csv"), rows);
        json config{{"graph", graph_file}, {"t_grid", grid_text}, {"mode", mode},
                    {"start", start},      {"samples", samples},  {"seed", seed}};
        write_manifest(out_dir / (name + ".manifest.json"), "walk", config, tracker.files, elapsed_ms(t0));
        std::cout << "wrote " << (out_dir / (name + ".csv")).string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        tracker.rollback();
        std::cerr << "walk failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_embed(const std::string& graph_file, double tau, int64_t m, uint64_t seed,
              const fs::path& out_dir, const std::string& name) {
    auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);
    OutputTracker tracker{out_dir, {}};
    try {
        auto rg = load_rooted_graph(graph_file);
        auto ground = VertexSubset::all(rg.graph);
        auto ensemble = threshold_map(rg.graph, ground, tau, m, seed);
        tracker.reserve(name + ".ensemble.json");
        tracker.reserve(name + ".coords.bin");
        save_ensemble(out_dir / name, ensemble);
        json config{{"graph", graph_file}, {"tau", tau}, {"m", m}, {"seed", seed}};
        write_manifest(out_dir / (name + ".manifest.json"), "embed", config, tracker.files, elapsed_ms(t0));
        std::cout << "wrote ensemble " << (out_dir / name).string() << " (tau=" << tau << ", m=" << m
                  << ")\n";
        return 0;
    } catch (const std::exception& e) {
        tracker.rollback();
        std::cerr << "embed failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_scan(const std::string& graph_file, const std::string& radii_text, int radii_per_base,
             int64_t shell_width, const std::string& ells_text, const std::string& ns_text,
             const fs::path& out_dir, const std::string& name) {
    auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);
    OutputTracker tracker{out_dir, {}};
    try {
        auto rg = load_rooted_graph(graph_file);
        ScanConfig cfg;
        cfg.base_radii = parse_grid(radii_text);
        cfg.radii_per_base = radii_per_base;
        cfg.shell_width = shell_width;
        cfg.ell_grid.clear();
        for (int64_t e : parse_grid(ells_text)) cfg.ell_grid.push_back(static_cast<int>(e));
        cfg.n_grid = parse_grid(ns_text);
        auto res = scan_good_scales(rg, cfg);

        std::vector<CsvRow> rows;
        for (const auto& r : res.rows) {
            rows.push_back({r.n, "psi_total_r" + std::to_string(r.r) + "_l" + std::to_string(r.ell),
                            r.total, 0.0, 0, 0});
        }
        write_csv(tracker.reserve(name + ".csv"), rows);
        json best{{"r", res.best.r},
                  {"ell", res.best.ell},
                  {"n", res.best.n},
                  {"doubling_term", res.best.doubling_term},
                  {"shell_term", res.best.shell_term},
                  {"profile_term", res.best.profile_term},
                  {"entropy_term", res.best.entropy_term},
                  {"total", res.best.total},
                  {"grid_mean", res.grid_mean}};
        write_json(tracker.reserve(name + ".best.json"), best);
        json config{{"graph", graph_file}, {"base_radii", radii_text}, {"radii_per_base", radii_per_base},
                    {"shell_width", shell_width}, {"ells", ells_text}, {"ns", ns_text}};
        write_manifest(out_dir / (name + ".manifest.json"), "scan", config, tracker.files, elapsed_ms(t0));
        std::cout << "best tuple: r=" << res.best.r << " ell=" << res.best.ell << " n=" << res.best.n
                  << " total=" << res.best.total << "\n";
        return 0;
    } catch (const std::exception& e) {
        tracker.rollback();
        std::cerr << "scan failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_exceptional(const ExceptionalConfig& cfg, const fs::path& out_dir, const std::string& name) {
    auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);
    OutputTracker tracker{out_dir, {}};
    try {
        auto rep = run_exceptional(cfg);
        std::vector<CsvRow> rows;
        for (const auto& r : rep.expander_rows) {
            rows.push_back({r.t, "msd_stretched_n" + std::to_string(r.n), r.msd, r.msd_stderr,
                            cfg.samples, cfg.seed});
        }
        for (const auto& r : rep.torus_rows) {
            rows.push_back({r.t, "msd_torus_control", r.msd, r.msd_stderr, cfg.samples, cfg.seed});
        }
        write_csv(tracker.reserve(name + ".csv"), rows);
        write_json(tracker.reserve(name + ".report.json"), rep.to_json());
        write_manifest(out_dir / (name + ".manifest.json"), "exceptional", cfg.to_json(), tracker.files,
                       elapsed_ms(t0));
        std::cout << "ratio(max)/ratio(min) = " << rep.ratio_max_min
                  << " (conservative " << rep.ratio_max_min_conservative << ", required "
                  << cfg.ratio_factor << ")\n"
                  << "increasing=" << rep.ratios_increasing << " factor_met=" << rep.factor_met
                  << " torus_flat=" << rep.torus_flat << " significant=" << rep.significant << "\n";
        return 0;
    } catch (const std::exception& e) {
        tracker.rollback();
        std::cerr << "exceptional failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_planar(const PlanarConfig& cfg, const fs::path& out_dir, const std::string& name) {
    auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);
    OutputTracker tracker{out_dir, {}};
    try {
        auto rep = run_planar_dichotomy(cfg);
        std::vector<CsvRow> rows;
        for (const auto& r : rep.rows) {
            rows.push_back({r.t, "min_msd", r.min_msd, 0.0, cfg.starts, cfg.seed});
            rows.push_back({r.t, "budget", r.budget, 0.0, 0, cfg.seed});
        }
        write_csv(tracker.reserve(name + ".csv"), rows);
        write_json(tracker.reserve(name + ".report.json"), rep.to_json());
        write_manifest(out_dir / (name + ".manifest.json"), "planar", cfg.to_json(), tracker.files,
                       elapsed_ms(t0));
        std::cout << "M=" << rep.M << " all_within=" << rep.all_within << "\n";
        return 0;
    } catch (const std::exception& e) {
        tracker.rollback();
        std::cerr << "planar failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_report(const fs::path& dir) {
    if (!fs::exists(dir)) {
        std::cerr << "no such directory " << dir << "\n";
        return 1;
    }
    int found = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        auto p = entry.path();
        if (p.string().size() < 14 || p.string().find("manifest.json") == std::string::npos) continue;
        std::ifstream in(p);
        json m = json::parse(in);
        std::cout << p.filename().string() << ": experiment=" << m.value("experiment", "?")
                  << " hash=" << m.value("config_hash", uint64_t{0}) << " wall_ms="
                  << m.value("wall_ms", int64_t{0}) << " outputs=" << m["outputs"].size() << "\n";
        ++found;
    }
    if (!found) std::cout << "no manifests under " << dir.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph random-walk laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file with per-subcommand defaults");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a graph family member");
    std::string kind = "torus";
    std::vector<int64_t> dims;
    Vertex n = 64;
    int degree = 3;
    int64_t subdiv = 1;
    std::vector<int64_t> n_seq;
    uint64_t seed = 1;
    std::string out_dir = "out";
    std::string name = "graph";
    gen->add_option("--kind", kind, "path|cycle|grid|torus|expander|hk");
    gen->add_option("--dims", dims, "dimensions for standard kinds");
    gen->add_option("--n", n, "expander vertex count");
    gen->add_option("--degree", degree, "expander degree");
    gen->add_option("--subdivide", subdiv, "subdivide expander edges by this length");
    gen->add_option("--n-seq", n_seq, "recursive tower size sequence");
    gen->add_option("--seed", seed);
    gen->add_option("--out", out_dir);
    gen->add_option("--name", name);

    // walk
    auto* walk = app.add_subcommand("walk", "mean-square displacement of the simple walk");
    std::string graph_file, t_grid = "1..64", mode = "exact";
    int64_t start = -1, samples = 1000;
    walk->add_option("--graph", graph_file)->required();
    walk->add_option("--t-grid", t_grid);
    walk->add_option("--mode", mode, "exact|mc");
    walk->add_option("--start", start, "start vertex; -1 = root (exact) or stationary (mc)");
    walk->add_option("--samples", samples);
    walk->add_option("--seed", seed);
    walk->add_option("--out", out_dir);
    walk->add_option("--name", name);

    // embed
    auto* embed = app.add_subcommand("embed", "threshold embedding ensemble");
    double tau = 8;
    int64_t m = 256;
    embed->add_option("--graph", graph_file)->required();
    embed->add_option("--tau", tau);
    embed->add_option("--m", m);
    embed->add_option("--seed", seed);
    embed->add_option("--out", out_dir);
    embed->add_option("--name", name);

    // scan
    auto* scan = app.add_subcommand("scan", "scale functional scan");
    std::string radii = "8,16,32", ells = "1", ns = "16,64";
    int radii_per_base = 2;
    int64_t shell_width = 0;
    scan->add_option("--graph", graph_file)->required();
    scan->add_option("--base-radii", radii);
    scan->add_option("--radii-per-base", radii_per_base);
    scan->add_option("--shell-width", shell_width);
    scan->add_option("--ells", ells);
    scan->add_option("--ns", ns);
    scan->add_option("--out", out_dir);
    scan->add_option("--name", name);

    // exceptional
    auto* exceptional = app.add_subcommand("exceptional", "superdiffusive window experiment");
    ExceptionalConfig ec;
    std::vector<int64_t> n_list;
    exceptional->add_option("--n-list", n_list, "expander sizes");
    exceptional->add_option("--samples", ec.samples);
    exceptional->add_option("--seed", ec.seed);
    exceptional->add_option("--factor", ec.ratio_factor);
    exceptional->add_option("--torus-side", ec.torus_side);
    exceptional->add_option("--out", out_dir);
    exceptional->add_option("--name", name);

    // planar
    auto* planar = app.add_subcommand("planar", "amenable grid pipeline");
    PlanarConfig pc;
    planar->add_option("--side", pc.side);
    planar->add_option("--t-grid", t_grid);
    planar->add_option("--starts", pc.starts);
    planar->add_option("--slack", pc.slack);
    planar->add_option("--seed", pc.seed);
    planar->add_option("--out", out_dir);
    planar->add_option("--name", name);

    // report
    auto* report = app.add_subcommand("report", "summarize manifests in a directory");
    std::string report_dir = "out";
    report->add_option("--dir", report_dir);

    CLI11_PARSE(app, argc, argv);

    try {
        json file_cfg = load_config_file(config_path);
        if (gen->parsed()) {
            auto c = file_cfg.value("gen", json::object());
            if (dims.empty() && c.contains("dims")) dims = c["dims"].get<std::vector<int64_t>>();
            return cmd_gen(kind, dims, n, degree, subdiv, n_seq, seed, out_dir, name);
        }
        if (walk->parsed()) return cmd_walk(graph_file, t_grid, mode, start, samples, seed, out_dir, name);
        if (embed->parsed()) return cmd_embed(graph_file, tau, m, seed, out_dir, name);
        if (scan->parsed()) {
            return cmd_scan(graph_file, radii, radii_per_base, shell_width, ells, ns, out_dir, name);
        }
        if (exceptional->parsed()) {
            if (!n_list.empty()) {
                ec.n_list.clear();
                for (int64_t v : n_list) ec.n_list.push_back(static_cast<Vertex>(v));
            }
            return cmd_exceptional(ec, out_dir, name);
        }
        if (planar->parsed()) {
            pc.t_grid = parse_grid(t_grid);
            return cmd_planar(pc, out_dir, name);
        }
        if (report->parsed()) return cmd_report(report_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
