#include "horolab/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "horolab/error.hpp"

namespace horolab {

Json graph_to_json(const Graph& g) {
  Json vertices = Json::array();
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    Json entry = Json::object();
    entry["id"] = v;
    const auto id = static_cast<VertexId>(v);
    if (!g.label(id).empty()) entry["label"] = g.label(id);
    if (!g.vertex_meta(id).is_null()) entry["meta"] = g.vertex_meta(id);
    vertices.push_back(std::move(entry));
  }
  Json edges = Json::array();
  for (auto [u, v] : g.edges()) edges.push_back(Json::array({u, v}));
  Json doc = Json::object();
  doc["version"] = 1;
  doc["vertices"] = std::move(vertices);
  doc["edges"] = std::move(edges);
  doc["metadata"] = g.metadata();
  return doc;
}

Graph graph_from_json(const Json& doc) {
  auto fail = [](const std::string& what) { throw InputError("graph file: " + what); };
  if (!doc.is_object()) fail("document is not an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "version" && key != "vertices" && key != "edges" && key != "metadata") fail("unknown field '" + key + "'");
  }
  if (!doc.contains("version") || doc["version"] != 1) fail("unsupported or missing version (expected 1)");
  if (!doc.contains("vertices") || !doc["vertices"].is_array()) fail("missing 'vertices' array");
  if (!doc.contains("edges") || !doc["edges"].is_array()) fail("missing 'edges' array");

  const auto& vertices = doc["vertices"];
  const std::size_t n = vertices.size();
  GraphBuilder b(n);
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& entry = vertices[i];
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_number_integer()) {
      fail("vertices[" + std::to_string(i) + "] lacks an integer id");
    }
    const auto id = entry["id"].get<std::int64_t>();
    if (id < 0 || static_cast<std::size_t>(id) >= n || seen[static_cast<std::size_t>(id)]) {
      fail("vertex ids must be exactly 0.." + std::to_string(n == 0 ? 0 : n - 1) + " without gaps or repeats");
    }
    seen[static_cast<std::size_t>(id)] = true;
    for (const auto& [key, value] : entry.items()) {
      if (key == "id") continue;
      if (key == "label") {
        if (!value.is_string()) fail("vertices[" + std::to_string(i) + "].label is not a string");
        b.set_label(static_cast<VertexId>(id), value.get<std::string>());
      } else if (key == "meta") {
        if (!value.is_object()) fail("vertices[" + std::to_string(i) + "].meta is not an object");
        b.set_vertex_meta(static_cast<VertexId>(id), value);
      } else {
        fail("vertices[" + std::to_string(i) + "] has unknown field '" + key + "'");
      }
    }
  }

  std::vector<Edge> seen_edges;
  for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
    const auto& e = doc["edges"][i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      fail("edges[" + std::to_string(i) + "] is not a pair of ids");
    }
    const auto u = e[0].get<std::int64_t>();
    const auto v = e[1].get<std::int64_t>();
    if (!(u < v)) fail("edges[" + std::to_string(i) + "] must satisfy id < id");
    if (u < 0 || static_cast<std::size_t>(v) >= n) fail("edges[" + std::to_string(i) + "] references an unknown vertex");
    seen_edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
    b.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v));
  }
  std::sort(seen_edges.begin(), seen_edges.end());
  if (std::adjacent_find(seen_edges.begin(), seen_edges.end()) != seen_edges.end()) fail("parallel edges");

  if (doc.contains("metadata")) {
    if (!doc["metadata"].is_object()) fail("'metadata' is not an object");
    for (const auto& [key, value] : doc["metadata"].items()) b.set_metadata(key, value);
  }
  return std::move(b).build();
}

std::string graph_to_text(const Graph& g) { return graph_to_json(g).dump() + "\n"; }

void write_graph_file(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  out << graph_to_text(g);
}

Graph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open graph file '" + path.string() + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("graph file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return graph_from_json(doc);
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string graph_to_dot(const Graph& g, const std::string& name) {
  static constexpr const char* kPalette[] = {"#ffffff", "#deebf7", "#c6dbef", "#9ecae1", "#6baed6",
                                             "#4292c6", "#2171b5", "#08519c", "#08306b"};
  std::ostringstream out;
  out << "graph \"" << dot_escape(name) << "\" {\n";
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const auto id = static_cast<VertexId>(v);
    out << "  " << v << " [label=\"" << dot_escape(g.label(id).empty() ? std::to_string(v) : g.label(id)) << "\"";
    const Json& meta = g.vertex_meta(id);
    if (meta.is_object() && meta.contains("level") && meta["level"].is_number_integer()) {
      const auto level = meta["level"].get<int>();
      out << ", level=" << level << ", style=filled, fillcolor=\"" << kPalette[std::clamp(level, 0, 8)] << "\"";
    }
    out << "];\n";
  }
  for (auto [u, v] : g.edges()) out << "  " << u << " -- " << v << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace horolab
