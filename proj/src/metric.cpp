#include "horolab/metric.hpp"

#include <algorithm>
#include <thread>

#include "horolab/error.hpp"

namespace horolab {

namespace {

void bfs_into(const Graph& g, std::span<const VertexId> sources, Dist radius, std::vector<Dist>& dist,
              std::vector<VertexId>& queue) {
  queue.clear();
  for (VertexId s : sources) {
    g.check_vertex(s);
    if (dist[static_cast<std::size_t>(s)] != 0) {
      dist[static_cast<std::size_t>(s)] = 0;
      queue.push_back(s);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId u = queue[head];
    const Dist du = dist[static_cast<std::size_t>(u)];
    if (du >= radius) continue;
    for (VertexId w : g.neighbors(u)) {
      Dist& dw = dist[static_cast<std::size_t>(w)];
      if (dw == kUnreachable) {
        dw = du + 1;
        queue.push_back(w);
      }
    }
  }
}

}  // namespace

std::vector<Dist> bfs_distances(const Graph& g, VertexId source) {
  const VertexId sources[] = {source};
  return bfs_distances(g, std::span<const VertexId>(sources));
}

std::vector<Dist> bfs_distances(const Graph& g, std::span<const VertexId> sources) {
  std::vector<Dist> dist(g.num_vertices(), kUnreachable);
  std::vector<VertexId> queue;
  queue.reserve(g.num_vertices());
  bfs_into(g, sources, kUnreachable, dist, queue);
  return dist;
}

std::vector<Dist> bfs_distances_within(const Graph& g, VertexId source, Dist radius, std::vector<VertexId>* visited) {
  std::vector<Dist> dist(g.num_vertices(), kUnreachable);
  std::vector<VertexId> local;
  std::vector<VertexId>& queue = visited ? *visited : local;
  const VertexId sources[] = {source};
  bfs_into(g, sources, radius, dist, queue);
  return dist;
}

bool is_connected(const Graph& g) {
  if (g.num_vertices() == 0) return true;
  const auto dist = bfs_distances(g, VertexId{0});
  return std::none_of(dist.begin(), dist.end(), [](Dist d) { return d == kUnreachable; });
}

DistanceMatrix::DistanceMatrix(const Graph& g, unsigned threads) : n_(g.num_vertices()), data_(n_ * n_, kUnreachable) {
  auto fill = [&](std::size_t begin, std::size_t stride) {
    std::vector<Dist> dist(n_);
    std::vector<VertexId> queue;
    queue.reserve(n_);
    for (std::size_t s = begin; s < n_; s += stride) {
      std::fill(dist.begin(), dist.end(), kUnreachable);
      const VertexId sources[] = {static_cast<VertexId>(s)};
      bfs_into(g, sources, kUnreachable, dist, queue);
      std::copy(dist.begin(), dist.end(), data_.begin() + static_cast<std::ptrdiff_t>(s * n_));
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n_, 1))));
  if (threads == 1) {
    fill(0, 1);
    return;
  }
  std::vector<std::jthread> workers;
  for (unsigned t = 0; t < threads; ++t) workers.emplace_back(fill, t, threads);
}

Dist DistanceMatrix::diameter() const {
  Dist best = 0;
  for (Dist d : data_) best = std::max(best, d);
  return best;
}

Graph rips_graph(const Graph& g, Dist t) {
  if (t < 1) throw InputError("Rips scale must be >= 1, got " + std::to_string(t));
  if (!is_connected(g)) throw InputError("Rips graph requires a connected graph");
  GraphBuilder b(g.num_vertices());
  std::vector<VertexId> visited;
  for (std::size_t u = 0; u < g.num_vertices(); ++u) {
    auto dist = bfs_distances_within(g, static_cast<VertexId>(u), t, &visited);
    for (VertexId w : visited) {
      if (w > static_cast<VertexId>(u)) b.add_edge(static_cast<VertexId>(u), w);
    }
  }
  return std::move(b).build();
}

GeodesicList enumerate_geodesics(const Graph& g, VertexId u, VertexId v, std::size_t cap) {
  if (cap == 0) throw InputError("geodesic cap must be positive");
  g.check_vertex(u);
  g.check_vertex(v);
  const auto to_target = bfs_distances(g, v);
  if (to_target[static_cast<std::size_t>(u)] == kUnreachable) {
    throw InputError("vertices " + std::to_string(u) + " and " + std::to_string(v) + " lie in different components");
  }

  GeodesicList out;
  std::vector<VertexId> current{u};
  // Iterative DFS; frame i holds the index of the next neighbor to try at depth i.
  std::vector<std::size_t> next{0};
  while (!next.empty()) {
    const VertexId at = current.back();
    if (at == v) {
      if (out.paths.size() == cap) {
        out.truncated = true;
        break;
      }
      out.paths.push_back(Path{current});
      current.pop_back();
      next.pop_back();
      continue;
    }
    auto nbrs = g.neighbors(at);
    std::size_t& i = next.back();
    const Dist want = to_target[static_cast<std::size_t>(at)] - 1;
    while (i < nbrs.size() && to_target[static_cast<std::size_t>(nbrs[i])] != want) ++i;
    if (i == nbrs.size()) {
      current.pop_back();
      next.pop_back();
      continue;
    }
    current.push_back(nbrs[i++]);
    next.push_back(0);
  }
  return out;
}

Path first_geodesic(const Graph& g, VertexId u, VertexId v) {
  g.check_vertex(u);
  const auto to_target = bfs_distances(g, v);
  if (to_target[static_cast<std::size_t>(u)] == kUnreachable) {
    throw InputError("vertices " + std::to_string(u) + " and " + std::to_string(v) + " lie in different components");
  }
  Path p{{u}};
  VertexId at = u;
  while (at != v) {
    for (VertexId w : g.neighbors(at)) {
      if (to_target[static_cast<std::size_t>(w)] == to_target[static_cast<std::size_t>(at)] - 1) {
        at = w;
        break;
      }
    }
    p.vertices.push_back(at);
  }
  return p;
}

namespace {

void require_nonempty(std::span<const VertexId> a, std::span<const VertexId> b) {
  if (a.empty() || b.empty()) throw InputError("Hausdorff distance of an empty vertex set");
}

Dist directed(std::span<const VertexId> from, const std::vector<Dist>& to_set) {
  Dist worst = 0;
  for (VertexId x : from) worst = std::max(worst, to_set[static_cast<std::size_t>(x)]);
  return worst;
}

}  // namespace

Dist hausdorff_distance(const Graph& g, std::span<const VertexId> a, std::span<const VertexId> b) {
  require_nonempty(a, b);
  return std::max(directed(a, bfs_distances(g, b)), directed(b, bfs_distances(g, a)));
}

Dist hausdorff_distance(const DistanceMatrix& d, std::span<const VertexId> a, std::span<const VertexId> b) {
  require_nonempty(a, b);
  auto one_side = [&d](std::span<const VertexId> from, std::span<const VertexId> to) {
    Dist worst = 0;
    for (VertexId x : from) {
      Dist nearest = kUnreachable;
      for (VertexId y : to) nearest = std::min(nearest, d(x, y));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(one_side(a, b), one_side(b, a));
}

}  // namespace horolab

namespace horolab {

void BoundedBfs::run(const Graph& g, std::span<const VertexId> sources, Dist radius) {
  for (VertexId v : touched_) dist_[static_cast<std::size_t>(v)] = kUnreachable;
  touched_.clear();
  if (g.num_vertices() != dist_.size()) dist_.assign(g.num_vertices(), kUnreachable);
  for (VertexId s : sources) {
    g.check_vertex(s);
    if (dist_[static_cast<std::size_t>(s)] == kUnreachable) {
      dist_[static_cast<std::size_t>(s)] = 0;
      touched_.push_back(s);
    }
  }
  for (std::size_t head = 0; head < touched_.size(); ++head) {
    const VertexId x = touched_[head];
    const Dist dx = dist_[static_cast<std::size_t>(x)];
    if (dx >= radius) continue;
    for (VertexId y : g.neighbors(x)) {
      if (dist_[static_cast<std::size_t>(y)] == kUnreachable) {
        dist_[static_cast<std::size_t>(y)] = dx + 1;
        touched_.push_back(y);
      }
    }
  }
}

}  // namespace horolab
