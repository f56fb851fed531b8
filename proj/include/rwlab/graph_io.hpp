// graph_io.hpp — the plain-text graph format and its JSON metadata sidecar.
//
// Format:  header line "graph <vertex_count> <edge_count>", then one
// "u v" pair per line, 0-indexed, u < v, sorted. Metadata (root, levels,
// generator provenance) travels in a sidecar JSON object.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "rwlab/graph.hpp"

#include <nlohmann/json_fwd.hpp>

namespace rwlab {

void write_graph(std::ostream& out, const Graph& g);
Graph read_graph(std::istream& in);

void save_graph(const std::filesystem::path& path, const Graph& g);
Graph load_graph(const std::filesystem::path& path);

// Sidecar metadata. `provenance` is free-form (generator name, parameters,
// seed, empirical constants).
nlohmann::json metadata_for(const RootedGraph& rg, const nlohmann::json& provenance);

// Reassembles a RootedGraph from a graph plus its sidecar object.
RootedGraph apply_metadata(Graph g, const nlohmann::json& meta);

// Writes "<stem>.graph.txt" and "<stem>.meta.json"; returns the graph path.
std::filesystem::path save_rooted_graph(const std::filesystem::path& stem, const RootedGraph& rg,
                                        const nlohmann::json& provenance);
RootedGraph load_rooted_graph(const std::filesystem::path& graph_path);

} // namespace rwlab
