#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace horolab {

using VertexId = std::int32_t;
using Dist = std::int32_t;
using Edge = std::pair<VertexId, VertexId>;
using Json = nlohmann::ordered_json;

inline constexpr Dist kUnreachable = std::numeric_limits<Dist>::max();

// Finite simple undirected graph on the dense ids 0..n-1.
//
// Adjacency lists are sorted by id and symmetric; there are no loops and no
// parallel edges. A Graph is immutable once built; use GraphBuilder.
class Graph {
 public:
  Graph() = default;

  std::size_t num_vertices() const { return adjacency_.size(); }
  std::size_t num_edges() const { return num_edges_; }

  std::span<const VertexId> neighbors(VertexId v) const;
  bool has_vertex(VertexId v) const { return v >= 0 && static_cast<std::size_t>(v) < adjacency_.size(); }
  bool has_edge(VertexId u, VertexId v) const;

  // Empty string when the vertex carries no label.
  const std::string& label(VertexId v) const;
  bool has_labels() const { return !labels_.empty(); }

  // Null when the vertex carries no metadata object.
  const Json& vertex_meta(VertexId v) const;
  bool has_vertex_meta() const { return !vertex_meta_.empty(); }

  const Json& metadata() const { return metadata_; }

  // Edges as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  // Throws InputError when v is not a vertex.
  void check_vertex(VertexId v) const;

 private:
  friend class GraphBuilder;

  std::vector<std::vector<VertexId>> adjacency_;
  std::vector<std::string> labels_;
  std::vector<Json> vertex_meta_;
  Json metadata_ = Json::object();
  std::size_t num_edges_ = 0;
};

class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t num_vertices);

  // Adding an existing edge is a no-op; loops and unknown ids throw InputError.
  void add_edge(VertexId u, VertexId v);
  void set_label(VertexId v, std::string label);
  void set_vertex_meta(VertexId v, Json meta);
  void set_metadata(std::string key, Json value);

  std::size_t num_vertices() const { return adjacency_.size(); }

  Graph build() &&;

 private:
  void check(VertexId v) const;

  std::vector<std::vector<VertexId>> adjacency_;
  std::vector<std::string> labels_;
  std::vector<Json> vertex_meta_;
  Json metadata_ = Json::object();
};

// A walk given by its vertex sequence. length() counts edges.
struct Path {
  std::vector<VertexId> vertices;

  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  bool empty() const { return vertices.empty(); }
  friend bool operator==(const Path&, const Path&) = default;
};

// Throws InputError unless p is nonempty and consecutive vertices are adjacent.
void validate_path(const Graph& g, const Path& p);

Graph induced_subgraph(const Graph& g, std::span<const VertexId> vertices);

// Named families. Sizes are vertex counts.
Graph path_graph(std::size_t num_vertices);
Graph cycle_graph(std::size_t num_vertices);
Graph complete_graph(std::size_t num_vertices);
Graph grid_graph(std::size_t rows, std::size_t cols);
// Complete binary tree with `depth` levels below the root (2^(depth+1)-1 vertices).
Graph binary_tree(std::size_t depth);
Graph petersen_graph();
// Random spanning tree plus independent extra edges with probability p.
Graph random_connected_graph(std::size_t num_vertices, double extra_edge_probability, std::mt19937_64& rng);

}  // namespace horolab
