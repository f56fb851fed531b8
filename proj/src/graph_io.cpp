#include "rwlab/graph_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rwlab {

void write_graph(std::ostream& out, const Graph& g) {
    out << "graph " << g.vertex_count() << " " << g.edge_count() << "\n";
    for (Vertex u = 0; u < g.vertex_count(); ++u) {
        for (Vertex v : g.neighbors(u)) {
            if (u < v) out << u << " " << v << "\n";
        }
    }
}

Graph read_graph(std::istream& in) {
    std::string tag;
    Vertex n = 0;
    int64_t m = 0;
    if (!(in >> tag >> n >> m) || tag != "graph") {
        throw std::runtime_error("malformed graph header");
    }
    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(static_cast<size_t>(m));
    for (int64_t i = 0; i < m; ++i) {
        Vertex u, v;
        if (!(in >> u >> v)) throw std::runtime_error("truncated edge list");
        if (u >= v) throw std::runtime_error("edge list must satisfy u < v");
        edges.emplace_back(u, v);
    }
    return Graph::from_edges(n, edges);
}

void save_graph(const std::filesystem::path& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_graph(out, g);
}

Graph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_graph(in);
}

nlohmann::json metadata_for(const RootedGraph& rg, const nlohmann::json& provenance) {
    nlohmann::json meta;
    meta["root"] = rg.root;
    if (rg.has_levels()) meta["levels"] = rg.levels;
    if (!rg.tail_flags.empty()) meta["tail_flags"] = rg.tail_flags;
    meta["provenance"] = provenance;
    return meta;
}

RootedGraph apply_metadata(Graph g, const nlohmann::json& meta) {
    RootedGraph rg;
    rg.graph = std::move(g);
    rg.root = meta.value("root", Vertex{0});
    rg.graph.check_vertex(rg.root);
    if (meta.contains("levels")) {
        rg.levels = meta["levels"].get<std::vector<int32_t>>();
        if (static_cast<Vertex>(rg.levels.size()) != rg.graph.vertex_count()) {
            throw std::runtime_error("levels array does not cover every vertex");
        }
    }
    if (meta.contains("tail_flags")) {
        rg.tail_flags = meta["tail_flags"].get<std::vector<uint8_t>>();
        if (static_cast<Vertex>(rg.tail_flags.size()) != rg.graph.vertex_count()) {
            throw std::runtime_error("tail_flags array does not cover every vertex");
        }
    }
    return rg;
}

std::filesystem::path save_rooted_graph(const std::filesystem::path& stem, const RootedGraph& rg,
                                        const nlohmann::json& provenance) {
    auto graph_path = stem;
    graph_path += ".graph.txt";
    auto meta_path = stem;
    meta_path += ".meta.json";
    save_graph(graph_path, rg.graph);
    std::ofstream metaout(meta_path);
    if (!metaout) throw std::runtime_error("cannot open " + meta_path.string() + " for writing");
    metaout << metadata_for(rg, provenance).dump(2) << "\n";
    return graph_path;
}

RootedGraph load_rooted_graph(const std::filesystem::path& graph_path) {
    Graph g = load_graph(graph_path);
    auto meta_path = graph_path;
    auto stem = graph_path.string();
    const std::string suffix = ".graph.txt";
    if (stem.size() > suffix.size() && stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0) {
        stem.resize(stem.size() - suffix.size());
    }
    meta_path = stem + ".meta.json";
    if (!std::filesystem::exists(meta_path)) return RootedGraph{std::move(g), 0, {}, {}};
    std::ifstream metain(meta_path);
    nlohmann::json meta = nlohmann::json::parse(metain);
    return apply_metadata(std::move(g), meta);
}

} // namespace rwlab
