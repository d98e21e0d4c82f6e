#include "horolab/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "horolab/error.hpp"

namespace horolab {

namespace {

const std::string kNoLabel;
const Json kNoMeta;

}  // namespace

std::span<const VertexId> Graph::neighbors(VertexId v) const {
  check_vertex(v);
  return adjacency_[static_cast<std::size_t>(v)];
}

bool Graph::has_edge(VertexId u, VertexId v) const {
  if (!has_vertex(u) || !has_vertex(v)) return false;
  const auto& nu = adjacency_[static_cast<std::size_t>(u)];
  return std::binary_search(nu.begin(), nu.end(), v);
}

const std::string& Graph::label(VertexId v) const {
  check_vertex(v);
  return labels_.empty() ? kNoLabel : labels_[static_cast<std::size_t>(v)];
}

const Json& Graph::vertex_meta(VertexId v) const {
  check_vertex(v);
  return vertex_meta_.empty() ? kNoMeta : vertex_meta_[static_cast<std::size_t>(v)];
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (std::size_t u = 0; u < adjacency_.size(); ++u) {
    for (VertexId v : adjacency_[u]) {
      if (static_cast<VertexId>(u) < v) out.emplace_back(static_cast<VertexId>(u), v);
    }
  }
  return out;
}

void Graph::check_vertex(VertexId v) const {
  if (!has_vertex(v)) {
    throw InputError("unknown vertex id " + std::to_string(v) + " (graph has " +
                     std::to_string(adjacency_.size()) + " vertices)");
  }
}

GraphBuilder::GraphBuilder(std::size_t num_vertices) : adjacency_(num_vertices) {}

void GraphBuilder::check(VertexId v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= adjacency_.size()) {
    throw InputError("unknown vertex id " + std::to_string(v));
  }
}

void GraphBuilder::add_edge(VertexId u, VertexId v) {
  check(u);
  check(v);
  if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
  adjacency_[static_cast<std::size_t>(u)].push_back(v);
  adjacency_[static_cast<std::size_t>(v)].push_back(u);
}

void GraphBuilder::set_label(VertexId v, std::string label) {
  check(v);
  if (labels_.empty()) labels_.resize(adjacency_.size());
  labels_[static_cast<std::size_t>(v)] = std::move(label);
}

void GraphBuilder::set_vertex_meta(VertexId v, Json meta) {
  check(v);
  if (vertex_meta_.empty()) vertex_meta_.resize(adjacency_.size());
  vertex_meta_[static_cast<std::size_t>(v)] = std::move(meta);
}

void GraphBuilder::set_metadata(std::string key, Json value) { metadata_[std::move(key)] = std::move(value); }

Graph GraphBuilder::build() && {
  Graph g;
  std::size_t twice_edges = 0;
  for (auto& nbrs : adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    nbrs.shrink_to_fit();
    twice_edges += nbrs.size();
  }
  g.adjacency_ = std::move(adjacency_);
  g.labels_ = std::move(labels_);
  g.vertex_meta_ = std::move(vertex_meta_);
  g.metadata_ = std::move(metadata_);
  g.num_edges_ = twice_edges / 2;
  return g;
}

void validate_path(const Graph& g, const Path& p) {
  if (p.vertices.empty()) throw InputError("path has no vertices");
  for (VertexId v : p.vertices) g.check_vertex(v);
  for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
    if (!g.has_edge(p.vertices[i], p.vertices[i + 1])) {
      throw InputError("path step " + std::to_string(i) + " (" + std::to_string(p.vertices[i]) + " -> " +
                       std::to_string(p.vertices[i + 1]) + ") is not an edge");
    }
  }
}

Graph induced_subgraph(const Graph& g, std::span<const VertexId> vertices) {
  std::vector<VertexId> local(g.num_vertices(), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    g.check_vertex(vertices[i]);
    if (local[static_cast<std::size_t>(vertices[i])] != -1) throw InputError("duplicate vertex in subset");
    local[static_cast<std::size_t>(vertices[i])] = static_cast<VertexId>(i);
  }
  GraphBuilder b(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (VertexId w : g.neighbors(vertices[i])) {
      const VertexId j = local[static_cast<std::size_t>(w)];
      if (j > static_cast<VertexId>(i)) b.add_edge(static_cast<VertexId>(i), j);
    }
    if (g.has_labels()) b.set_label(static_cast<VertexId>(i), g.label(vertices[i]));
  }
  return std::move(b).build();
}

Graph path_graph(std::size_t num_vertices) {
  GraphBuilder b(num_vertices);
  for (std::size_t i = 0; i + 1 < num_vertices; ++i) b.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
  return std::move(b).build();
}

Graph cycle_graph(std::size_t num_vertices) {
  if (num_vertices < 3) throw InputError("a cycle needs at least 3 vertices");
  GraphBuilder b(num_vertices);
  for (std::size_t i = 0; i < num_vertices; ++i) {
    b.add_edge(static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % num_vertices));
  }
  return std::move(b).build();
}

Graph complete_graph(std::size_t num_vertices) {
  GraphBuilder b(num_vertices);
  for (std::size_t i = 0; i < num_vertices; ++i) {
    for (std::size_t j = i + 1; j < num_vertices; ++j) b.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(j));
  }
  return std::move(b).build();
}

Graph grid_graph(std::size_t rows, std::size_t cols) {
  GraphBuilder b(rows * cols);
  auto id = [cols](std::size_t r, std::size_t c) { return static_cast<VertexId>(r * cols + c); };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) b.add_edge(id(r, c), id(r, c + 1));
      if (r + 1 < rows) b.add_edge(id(r, c), id(r + 1, c));
    }
  }
  return std::move(b).build();
}

Graph binary_tree(std::size_t depth) {
  const std::size_t n = (std::size_t{1} << (depth + 1)) - 1;
  GraphBuilder b(n);
  for (std::size_t v = 1; v < n; ++v) b.add_edge(static_cast<VertexId>((v - 1) / 2), static_cast<VertexId>(v));
  return std::move(b).build();
}

Graph petersen_graph() {
  GraphBuilder b(10);
  for (VertexId i = 0; i < 5; ++i) {
    b.add_edge(i, (i + 1) % 5);
    b.add_edge(i, i + 5);
    b.add_edge(i + 5, (i + 2) % 5 + 5);
  }
  return std::move(b).build();
}

Graph random_connected_graph(std::size_t num_vertices, double extra_edge_probability, std::mt19937_64& rng) {
  GraphBuilder b(num_vertices);
  std::vector<VertexId> order(num_vertices);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 1; i < num_vertices; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    b.add_edge(order[i], order[pick(rng)]);
  }
  std::bernoulli_distribution extra(extra_edge_probability);
  for (std::size_t u = 0; u < num_vertices; ++u) {
    for (std::size_t v = u + 1; v < num_vertices; ++v) {
      if (extra(rng)) b.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v));
    }
  }
  return std::move(b).build();
}

}  // namespace horolab
