#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "horolab/graph.hpp"
#include "horolab/metric.hpp"

namespace horolab {

struct LeveledVertex {
  VertexId base = 0;
  int level = 0;
  friend bool operator==(const LeveledVertex&, const LeveledVertex&) = default;
};

// Largest base distance joined by a horizontal edge at `level`, saturating.
Dist level_reach(int level);

// n-restricted combinatorial horoball over a connected base graph, levels 0..n.
//
// Carrier vertex (v, k) has id k * |base| + v. Vertical edges join (v, k) and
// (v, k + 1); horizontal edges at level k join (v, k) and (w, k) whenever
// 0 < d_base(v, w) <= 2^k.
class RestrictedHoroball {
 public:
  RestrictedHoroball(Graph base, int depth, unsigned threads = 1);

  const Graph& base() const { return base_; }
  const Graph& carrier() const { return carrier_; }
  const DistanceMatrix& base_metric() const { return base_metric_; }
  int depth() const { return depth_; }

  VertexId vertex(VertexId base_vertex, int level) const;
  LeveledVertex locate(VertexId v) const;
  int level(VertexId v) const { return locate(v).level; }

  // Carrier vertices at levels >= min_level.
  std::vector<VertexId> levels_at_least(int min_level) const;
  std::vector<VertexId> level_set(int level) const;

  // Copy of the carrier with labels "(v,k)" and metadata
  // {"kind":"horo","alpha":0,"base":v,"level":k}.
  Graph annotated_carrier() const;

 private:
  Graph base_;
  DistanceMatrix base_metric_;
  int depth_ = 0;
  Graph carrier_;
};

RestrictedHoroball build_restricted_horoball(Graph base, int depth);

// Closed form: |k - l| when x = y, otherwise
// min over m in [max(k, l), n] of (m - k) + (m - l) + ceil(d(x, y) / 2^m).
Dist horoball_distance(const RestrictedHoroball& h, VertexId v1, VertexId v2);

// Ascend, cross one level, descend.
struct GeodesicNormalForm {
  Path ascent;    // vertical, from v1 up to the crossing level
  Path crossing;  // horizontal, at top_level
  Path descent;   // vertical, down to v2
  int top_level = 0;

  Path path() const;
  std::size_t length() const { return ascent.length() + crossing.length() + descent.length(); }
};

// Crosses at the smallest optimal level whose crossing has at most 3 edges
// (or at the top level n); the crossing samples the first base geodesic every
// 2^m steps.
GeodesicNormalForm normal_form_geodesic(const RestrictedHoroball& h, VertexId v1, VertexId v2);

enum class SegmentKind { ascending, descending, horizontal };

struct Segment {
  SegmentKind kind = SegmentKind::horizontal;
  int level = 0;            // level of a horizontal segment; starting level otherwise
  std::size_t begin = 0;    // index into the path's vertex list
  std::size_t end = 0;      // inclusive
  std::size_t length() const { return end - begin; }
};

struct SegmentClassification {
  std::vector<Segment> segments;
};

// Maximal runs of ascending, descending and horizontal edges. Throws
// InputError when p is not a path in the carrier.
SegmentClassification classify_segments(const RestrictedHoroball& h, const Path& p);

struct ShapeClause {
  char id = 'a';
  std::string description;
  bool ok = true;
  std::string detail;
};

struct ShapeReport {
  // Clauses a-f are the geodesic shape laws; clause g counts horizontal edges
  // outside the top-level crossing (at most one allowed).
  std::vector<ShapeClause> clauses;

  bool passed(std::string_view ids = "abcdef") const;
  const ShapeClause& clause(char id) const;
};

// Throws PreconditionError unless p is a geodesic of the carrier. Pass the
// carrier metric to avoid a BFS per call.
ShapeReport verify_geodesic_shape(const RestrictedHoroball& h, const Path& p,
                                  const DistanceMatrix* carrier_metric = nullptr);

// A family member: vertex set plus edges, both in base ids.
struct Subgraph {
  std::vector<VertexId> vertices;
  std::vector<Edge> edges;

  static Subgraph induced(const Graph& g, std::vector<VertexId> vertices);
};

struct Provenance {
  enum class Kind { gamma, horo };
  Kind kind = Kind::gamma;
  int alpha = -1;       // family index for horoball vertices
  VertexId base = 0;    // vertex of the base graph
  int level = 0;
};

// n-restricted augmentation: the base graph with an n-restricted horoball
// glued along every family member, level 0 identified with the member.
//
// Ids 0..|base|-1 are base vertices; then, for each member in order and each
// level 1..n, one block of |member| vertices in member order.
class AugmentedSpace {
 public:
  AugmentedSpace(Graph base, std::vector<Subgraph> family, int depth);

  const Graph& base() const { return base_; }
  const Graph& carrier() const { return carrier_; }
  int depth() const { return depth_; }
  std::size_t family_size() const { return family_.size(); }
  const Subgraph& member(std::size_t alpha) const { return family_.at(alpha); }
  const Provenance& provenance(VertexId v) const { return provenance_.at(static_cast<std::size_t>(v)); }

  // Carrier vertex over `base_vertex` at `level` in horoball alpha; level 0 is
  // the base vertex itself. Nullopt if base_vertex is not in the member.
  std::optional<VertexId> lift(std::size_t alpha, VertexId base_vertex, int level) const;

  // Vertex ids of level `level` of horoball alpha, in member order.
  std::vector<VertexId> level_set(std::size_t alpha, int level) const;

  Graph annotated_carrier() const;

 private:
  Graph base_;
  std::vector<Subgraph> family_;
  std::vector<std::vector<std::pair<VertexId, VertexId>>> sorted_members_;  // (base id, local index)
  std::vector<VertexId> block_start_;
  int depth_ = 0;
  Graph carrier_;
  std::vector<Provenance> provenance_;
};

AugmentedSpace build_augmented(Graph base, std::vector<Subgraph> family, int depth);

}  // namespace horolab
