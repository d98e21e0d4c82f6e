#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "horolab/graph.hpp"

namespace horolab {

// Exact hop distances from `source`; unreachable vertices get kUnreachable.
std::vector<Dist> bfs_distances(const Graph& g, VertexId source);

// Multi-source BFS: distance to the nearest member of `sources`.
std::vector<Dist> bfs_distances(const Graph& g, std::span<const VertexId> sources);

// BFS truncated at `radius`. Vertices further away keep kUnreachable.
// `visited` receives the reached vertices in BFS order when non-null.
std::vector<Dist> bfs_distances_within(const Graph& g, VertexId source, Dist radius,
                                       std::vector<VertexId>* visited = nullptr);

bool is_connected(const Graph& g);

// Reusable BFS for many small searches on one large graph: each run costs
// O(visited) rather than O(|V|).
class BoundedBfs {
 public:
  explicit BoundedBfs(std::size_t num_vertices) : dist_(num_vertices, kUnreachable) {}

  // Distances up to `radius` from the nearest source; others read kUnreachable.
  void run(const Graph& g, std::span<const VertexId> sources, Dist radius);
  void run(const Graph& g, VertexId source, Dist radius) { run(g, std::span<const VertexId>(&source, 1), radius); }

  Dist operator[](VertexId v) const { return dist_[static_cast<std::size_t>(v)]; }
  // Reached vertices in BFS order.
  const std::vector<VertexId>& visited() const { return touched_; }

 private:
  std::vector<Dist> dist_;
  std::vector<VertexId> touched_;
};

// Eager all-pairs hop metric. Rows are filled concurrently when threads > 1;
// the result does not depend on the thread count.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(const Graph& g, unsigned threads = 1);

  std::size_t size() const { return n_; }
  Dist operator()(VertexId u, VertexId v) const { return data_[static_cast<std::size_t>(u) * n_ + v]; }
  std::span<const Dist> row(VertexId u) const { return {data_.data() + static_cast<std::size_t>(u) * n_, n_}; }
  Dist diameter() const;

 private:
  std::size_t n_ = 0;
  std::vector<Dist> data_;
};

// Same vertex set, edge (u, v) iff 0 < d_g(u, v) <= t.
Graph rips_graph(const Graph& g, Dist t);

struct GeodesicList {
  std::vector<Path> paths;
  bool truncated = false;
};

// All geodesics from u to v in DFS order over id-sorted neighbor lists.
// At most `cap` paths are returned; `truncated` is set when more exist.
GeodesicList enumerate_geodesics(const Graph& g, VertexId u, VertexId v, std::size_t cap);

// First geodesic of enumerate_geodesics(g, u, v, ...), without enumerating the rest.
Path first_geodesic(const Graph& g, VertexId u, VertexId v);

// max(max_a d(a, B), max_b d(b, A)).
Dist hausdorff_distance(const Graph& g, std::span<const VertexId> a, std::span<const VertexId> b);
Dist hausdorff_distance(const DistanceMatrix& d, std::span<const VertexId> a, std::span<const VertexId> b);

}  // namespace horolab
