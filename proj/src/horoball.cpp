#include "horolab/horoball.hpp"

#include <algorithm>
#include <cstdlib>

#include "horolab/error.hpp"

namespace horolab {

namespace {

// ceil(d / 2^m) for d >= 0.
Dist ceil_shift(Dist d, int m) {
  if (d == 0) return 0;
  if (m >= 30) return 1;
  return static_cast<Dist>((static_cast<std::int64_t>(d) + (std::int64_t{1} << m) - 1) >> m);
}

void check_depth(int depth) {
  if (depth < 1) throw InputError("horoball depth must be >= 1, got " + std::to_string(depth));
  if (depth > 30) throw InputError("horoball depth must be <= 30");
}

Path vertical(const RestrictedHoroball& h, VertexId base, int from, int to) {
  Path p;
  const int step = from <= to ? 1 : -1;
  for (int k = from;; k += step) {
    p.vertices.push_back(h.vertex(base, k));
    if (k == to) break;
  }
  return p;
}

}  // namespace

Dist level_reach(int level) {
  if (level < 0) return 0;
  if (level >= 30) return kUnreachable - 1;
  return Dist{1} << level;
}

RestrictedHoroball::RestrictedHoroball(Graph base, int depth, unsigned threads) : base_(std::move(base)), depth_(depth) {
  check_depth(depth);
  if (base_.num_vertices() == 0) throw InputError("horoball base graph is empty");
  if (!is_connected(base_)) throw InputError("horoball base graph must be connected");
  base_metric_ = DistanceMatrix(base_, threads);

  const std::size_t nb = base_.num_vertices();
  GraphBuilder b(nb * static_cast<std::size_t>(depth_ + 1));
  for (int k = 0; k <= depth_; ++k) {
    const Dist reach = level_reach(k);
    for (std::size_t u = 0; u < nb; ++u) {
      const auto bu = static_cast<VertexId>(u);
      if (k < depth_) b.add_edge(vertex(bu, k), vertex(bu, k + 1));
      const auto row = base_metric_.row(bu);
      for (std::size_t w = u + 1; w < nb; ++w) {
        if (row[w] <= reach) b.add_edge(vertex(bu, k), vertex(static_cast<VertexId>(w), k));
      }
    }
  }
  b.set_metadata("kind", "restricted_horoball");
  b.set_metadata("depth", depth_);
  carrier_ = std::move(b).build();
}

VertexId RestrictedHoroball::vertex(VertexId base_vertex, int level) const {
  base_.check_vertex(base_vertex);
  if (level < 0 || level > depth_) throw InputError("level " + std::to_string(level) + " outside 0.." + std::to_string(depth_));
  return static_cast<VertexId>(static_cast<std::size_t>(level) * base_.num_vertices() + static_cast<std::size_t>(base_vertex));
}

LeveledVertex RestrictedHoroball::locate(VertexId v) const {
  carrier_.check_vertex(v);
  const auto nb = static_cast<VertexId>(base_.num_vertices());
  return {v % nb, static_cast<int>(v / nb)};
}

std::vector<VertexId> RestrictedHoroball::levels_at_least(int min_level) const {
  std::vector<VertexId> out;
  for (int k = std::max(min_level, 0); k <= depth_; ++k) {
    auto level = level_set(k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::vector<VertexId> RestrictedHoroball::level_set(int level) const {
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < base_.num_vertices(); ++v) out.push_back(vertex(static_cast<VertexId>(v), level));
  return out;
}

Graph RestrictedHoroball::annotated_carrier() const {
  GraphBuilder b(carrier_.num_vertices());
  for (auto [u, v] : carrier_.edges()) b.add_edge(u, v);
  for (std::size_t v = 0; v < carrier_.num_vertices(); ++v) {
    const auto at = locate(static_cast<VertexId>(v));
    const std::string base_label = base_.label(at.base).empty() ? std::to_string(at.base) : base_.label(at.base);
    b.set_label(static_cast<VertexId>(v), "(" + base_label + "," + std::to_string(at.level) + ")");
    b.set_vertex_meta(static_cast<VertexId>(v), Json{{"kind", "horo"}, {"alpha", 0}, {"base", at.base}, {"level", at.level}});
  }
  for (const auto& [key, value] : carrier_.metadata().items()) b.set_metadata(key, value);
  return std::move(b).build();
}

RestrictedHoroball build_restricted_horoball(Graph base, int depth) { return RestrictedHoroball(std::move(base), depth); }

Dist horoball_distance(const RestrictedHoroball& h, VertexId v1, VertexId v2) {
  const auto a = h.locate(v1);
  const auto b = h.locate(v2);
  if (a.base == b.base) return std::abs(a.level - b.level);
  const Dist d = h.base_metric()(a.base, b.base);
  Dist best = kUnreachable;
  for (int m = std::max(a.level, b.level); m <= h.depth(); ++m) {
    best = std::min(best, (m - a.level) + (m - b.level) + ceil_shift(d, m));
  }
  return best;
}

Path GeodesicNormalForm::path() const {
  Path p = ascent;
  p.vertices.insert(p.vertices.end(), crossing.vertices.begin() + 1, crossing.vertices.end());
  p.vertices.insert(p.vertices.end(), descent.vertices.begin() + 1, descent.vertices.end());
  return p;
}

GeodesicNormalForm normal_form_geodesic(const RestrictedHoroball& h, VertexId v1, VertexId v2) {
  const auto a = h.locate(v1);
  const auto b = h.locate(v2);
  const int low = std::max(a.level, b.level);
  const Dist d = h.base_metric()(a.base, b.base);

  int top = low;
  if (a.base != b.base) {
    const Dist best = horoball_distance(h, v1, v2);
    std::optional<int> chosen;
    std::optional<int> largest_optimal;
    for (int m = low; m <= h.depth(); ++m) {
      const Dist cross = ceil_shift(d, m);
      if ((m - a.level) + (m - b.level) + cross != best) continue;
      largest_optimal = m;
      if (!chosen && (cross <= 3 || m == h.depth())) chosen = m;
    }
    top = chosen ? *chosen : *largest_optimal;
  }

  GeodesicNormalForm nf;
  nf.top_level = top;
  nf.ascent = vertical(h, a.base, a.level, top);
  nf.descent = vertical(h, b.base, top, b.level);
  nf.crossing.vertices.push_back(h.vertex(a.base, top));
  if (a.base != b.base) {
    const Path base_geodesic = first_geodesic(h.base(), a.base, b.base);
    const std::size_t step = static_cast<std::size_t>(std::min<Dist>(level_reach(top), d));
    for (std::size_t i = step; i < base_geodesic.length(); i += step) {
      nf.crossing.vertices.push_back(h.vertex(base_geodesic.vertices[i], top));
    }
    nf.crossing.vertices.push_back(h.vertex(b.base, top));
  }
  return nf;
}

SegmentClassification classify_segments(const RestrictedHoroball& h, const Path& p) {
  validate_path(h.carrier(), p);
  SegmentClassification out;
  for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
    const auto from = h.locate(p.vertices[i]);
    const auto to = h.locate(p.vertices[i + 1]);
    SegmentKind kind = SegmentKind::horizontal;
    if (to.level == from.level + 1) {
      kind = SegmentKind::ascending;
    } else if (to.level + 1 == from.level) {
      kind = SegmentKind::descending;
    }
    if (!out.segments.empty() && out.segments.back().kind == kind && out.segments.back().end == i) {
      out.segments.back().end = i + 1;
    } else {
      out.segments.push_back(Segment{kind, from.level, i, i + 1});
    }
  }
  return out;
}

bool ShapeReport::passed(std::string_view ids) const {
  return std::all_of(clauses.begin(), clauses.end(),
                     [&](const ShapeClause& c) { return c.ok || ids.find(c.id) == std::string_view::npos; });
}

const ShapeClause& ShapeReport::clause(char id) const {
  for (const auto& c : clauses) {
    if (c.id == id) return c;
  }
  throw InputError(std::string("no shape clause '") + id + "'");
}

ShapeReport verify_geodesic_shape(const RestrictedHoroball& h, const Path& p, const DistanceMatrix* carrier_metric) {
  validate_path(h.carrier(), p);
  const VertexId first = p.vertices.front();
  const VertexId last = p.vertices.back();
  const Dist d = carrier_metric ? (*carrier_metric)(first, last) : bfs_distances(h.carrier(), first)[static_cast<std::size_t>(last)];
  if (static_cast<Dist>(p.length()) != d) {
    throw PreconditionError("path of length " + std::to_string(p.length()) + " is not a geodesic (endpoint distance " +
                            std::to_string(d) + ")");
  }

  const auto segs = classify_segments(h, p).segments;
  int max_level = 0;
  int min_level = h.depth();
  for (VertexId v : p.vertices) {
    max_level = std::max(max_level, h.level(v));
    min_level = std::min(min_level, h.level(v));
  }

  ShapeReport report;
  auto add = [&](char id, std::string description, bool ok, std::string detail = {}) {
    report.clauses.push_back(ShapeClause{id, std::move(description), ok, ok ? std::string{} : std::move(detail)});
  };
  auto where = [](const Segment& s) {
    return "segment [" + std::to_string(s.begin) + "," + std::to_string(s.end) + "] at level " + std::to_string(s.level);
  };

  {
    bool descended = false;
    std::string detail;
    for (const auto& s : segs) {
      if (s.kind == SegmentKind::descending) descended = true;
      if (s.kind == SegmentKind::ascending && descended && detail.empty()) detail = "ascending " + where(s) + " after a descent";
    }
    add('a', "no ascending segment after a descending segment", detail.empty(), detail);
  }
  {
    std::string detail;
    for (const auto& s : segs) {
      if (s.kind == SegmentKind::horizontal && s.length() >= 2 && s.level != max_level && detail.empty()) {
        detail = "horizontal " + where(s) + " below the top level " + std::to_string(max_level);
      }
    }
    add('b', "horizontal segments of length >= 2 lie at the highest level met", detail.empty(), detail);
  }
  {
    std::string detail;
    for (const auto& s : segs) {
      if (s.kind == SegmentKind::horizontal && s.length() >= 6 && s.level != h.depth() && detail.empty()) {
        detail = "horizontal " + where(s) + " of length " + std::to_string(s.length());
      }
    }
    add('c', "horizontal segments of length >= 6 lie at level n", detail.empty(), detail);
  }
  {
    const auto up = std::count_if(segs.begin(), segs.end(), [](const Segment& s) { return s.kind == SegmentKind::ascending; });
    const auto down = std::count_if(segs.begin(), segs.end(), [](const Segment& s) { return s.kind == SegmentKind::descending; });
    add('d', "at most two maximal ascending and two maximal descending segments", up <= 2 && down <= 2,
        std::to_string(up) + " ascending, " + std::to_string(down) + " descending");
  }
  {
    const int floor = std::min(h.level(first), h.level(last));
    add('e', "never below the lower endpoint level", min_level >= floor,
        "visits level " + std::to_string(min_level) + " below " + std::to_string(floor));
  }
  {
    std::string detail;
    for (const auto& s : segs) {
      if (s.kind == SegmentKind::horizontal && s.length() >= 2 && s.level < h.depth() && max_level > s.level && detail.empty()) {
        detail = "horizontal " + where(s) + " but the path reaches level " + std::to_string(max_level);
      }
    }
    add('f', "a long horizontal segment below level n bounds the levels visited", detail.empty(), detail);
  }
  {
    std::size_t extra = 0;
    for (const auto& s : segs) {
      if (s.kind == SegmentKind::horizontal && s.level != max_level) extra += s.length();
    }
    add('g', "at most one horizontal edge outside the highest level", extra <= 1,
        std::to_string(extra) + " horizontal edges below level " + std::to_string(max_level));
  }
  return report;
}

Subgraph Subgraph::induced(const Graph& g, std::vector<VertexId> vertices) {
  Subgraph s;
  std::vector<VertexId> sorted = vertices;
  std::sort(sorted.begin(), sorted.end());
  for (VertexId u : sorted) {
    for (VertexId w : g.neighbors(u)) {
      if (u < w && std::binary_search(sorted.begin(), sorted.end(), w)) s.edges.emplace_back(u, w);
    }
  }
  s.vertices = std::move(vertices);
  return s;
}

AugmentedSpace::AugmentedSpace(Graph base, std::vector<Subgraph> family, int depth)
    : base_(std::move(base)), family_(std::move(family)), depth_(depth) {
  check_depth(depth);
  const std::size_t nb = base_.num_vertices();

  // Validate members and build their local graphs.
  std::vector<Graph> local_graphs;
  for (std::size_t alpha = 0; alpha < family_.size(); ++alpha) {
    const auto& m = family_[alpha];
    const std::string who = "family member " + std::to_string(alpha);
    if (m.vertices.empty()) throw InputError(who + " is empty");
    std::vector<std::pair<VertexId, VertexId>> sorted;
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
      if (!base_.has_vertex(m.vertices[i])) throw InputError(who + " is not a subgraph of the base: unknown vertex " + std::to_string(m.vertices[i]));
      sorted.emplace_back(m.vertices[i], static_cast<VertexId>(i));
    }
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end(), [](auto& x, auto& y) { return x.first == y.first; }) != sorted.end()) {
      throw InputError(who + " repeats a vertex");
    }
    auto local_of = [&](VertexId v) -> std::optional<VertexId> {
      auto it = std::lower_bound(sorted.begin(), sorted.end(), std::make_pair(v, VertexId{-1}));
      if (it == sorted.end() || it->first != v) return std::nullopt;
      return it->second;
    };
    GraphBuilder lb(m.vertices.size());
    for (auto [u, v] : m.edges) {
      const auto lu = local_of(u);
      const auto lv = local_of(v);
      if (!lu || !lv || !base_.has_edge(u, v)) {
        throw InputError(who + " is not a subgraph of the base: edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
      }
      lb.add_edge(*lu, *lv);
    }
    Graph local = std::move(lb).build();
    if (!is_connected(local)) throw InputError(who + " is not connected");
    local_graphs.push_back(std::move(local));
    sorted_members_.push_back(std::move(sorted));
  }

  std::size_t total = nb;
  for (const auto& m : family_) {
    block_start_.push_back(static_cast<VertexId>(total));
    total += m.vertices.size() * static_cast<std::size_t>(depth_);
  }

  GraphBuilder b(total);
  provenance_.resize(total);
  for (std::size_t v = 0; v < nb; ++v) provenance_[v] = Provenance{Provenance::Kind::gamma, -1, static_cast<VertexId>(v), 0};
  for (auto [u, v] : base_.edges()) b.add_edge(u, v);

  std::vector<VertexId> visited;
  for (std::size_t alpha = 0; alpha < family_.size(); ++alpha) {
    const auto& m = family_[alpha];
    const auto& local = local_graphs[alpha];
    const std::size_t size = m.vertices.size();
    auto id = [&](std::size_t i, int level) {
      return level == 0 ? m.vertices[i]
                        : static_cast<VertexId>(block_start_[alpha] + static_cast<std::size_t>(level - 1) * size + i);
    };
    for (int k = 1; k <= depth_; ++k) {
      for (std::size_t i = 0; i < size; ++i) {
        provenance_[static_cast<std::size_t>(id(i, k))] = Provenance{Provenance::Kind::horo, static_cast<int>(alpha), m.vertices[i], k};
        b.add_edge(id(i, k - 1), id(i, k));
      }
    }
    // Horizontal edges at level k reach base distance 2^k; one truncated BFS
    // per member vertex serves every level.
    const Dist reach = level_reach(depth_);
    for (std::size_t i = 0; i < size; ++i) {
      const auto dist = bfs_distances_within(local, static_cast<VertexId>(i), reach, &visited);
      for (VertexId w : visited) {
        if (static_cast<std::size_t>(w) <= i) continue;
        const Dist dw = dist[static_cast<std::size_t>(w)];
        for (int k = 1; k <= depth_; ++k) {
          if (dw <= level_reach(k)) b.add_edge(id(i, k), id(static_cast<std::size_t>(w), k));
        }
      }
    }
  }
  b.set_metadata("kind", "restricted_augmentation");
  b.set_metadata("depth", depth_);
  b.set_metadata("family_size", family_.size());
  carrier_ = std::move(b).build();
}

std::optional<VertexId> AugmentedSpace::lift(std::size_t alpha, VertexId base_vertex, int level) const {
  if (alpha >= family_.size()) throw InputError("family index out of range");
  if (level < 0 || level > depth_) throw InputError("level outside 0..n");
  const auto& sorted = sorted_members_[alpha];
  auto it = std::lower_bound(sorted.begin(), sorted.end(), std::make_pair(base_vertex, VertexId{-1}));
  if (it == sorted.end() || it->first != base_vertex) return std::nullopt;
  if (level == 0) return base_vertex;
  return static_cast<VertexId>(block_start_[alpha] + static_cast<std::size_t>(level - 1) * family_[alpha].vertices.size() +
                               static_cast<std::size_t>(it->second));
}

std::vector<VertexId> AugmentedSpace::level_set(std::size_t alpha, int level) const {
  std::vector<VertexId> out;
  for (VertexId v : member(alpha).vertices) out.push_back(*lift(alpha, v, level));
  return out;
}

Graph AugmentedSpace::annotated_carrier() const {
  GraphBuilder b(carrier_.num_vertices());
  for (auto [u, v] : carrier_.edges()) b.add_edge(u, v);
  for (std::size_t v = 0; v < carrier_.num_vertices(); ++v) {
    const auto& p = provenance_[v];
    const auto id = static_cast<VertexId>(v);
    const std::string base_label = base_.label(p.base).empty() ? std::to_string(p.base) : base_.label(p.base);
    if (p.kind == Provenance::Kind::gamma) {
      b.set_label(id, base_label);
      b.set_vertex_meta(id, Json{{"kind", "gamma"}, {"base", p.base}, {"level", 0}});
    } else {
      b.set_label(id, "(" + base_label + "," + std::to_string(p.level) + ")@" + std::to_string(p.alpha));
      b.set_vertex_meta(id, Json{{"kind", "horo"}, {"alpha", p.alpha}, {"base", p.base}, {"level", p.level}});
    }
  }
  for (const auto& [key, value] : carrier_.metadata().items()) b.set_metadata(key, value);
  return std::move(b).build();
}

AugmentedSpace build_augmented(Graph base, std::vector<Subgraph> family, int depth) {
  return AugmentedSpace(std::move(base), std::move(family), depth);
}

}  // namespace horolab
