#pragma once

#include <filesystem>
#include <string>

#include "horolab/graph.hpp"

namespace horolab {

// Graph file format, version 1:
//
//   {"version":1,
//    "vertices":[{"id":0,"label":"e","meta":{...}}, ...],
//    "edges":[[u,v], ...],
//    "metadata":{...}}
//
// `label` and `meta` are omitted when absent. Vertices appear in id order,
// edges satisfy u < v and are sorted. The canonical text is the compact dump
// of this document followed by a single newline.
Json graph_to_json(const Graph& g);
Graph graph_from_json(const Json& doc);

std::string graph_to_text(const Graph& g);
void write_graph_file(const Graph& g, const std::filesystem::path& path);
Graph read_graph_file(const std::filesystem::path& path);

// Undirected DOT. Vertices whose metadata carries an integer "level" get a
// `level` attribute and a fill color chosen from the level.
std::string graph_to_dot(const Graph& g, const std::string& name = "G");

}  // namespace horolab
