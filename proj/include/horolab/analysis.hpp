#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "horolab/cayley.hpp"
#include "horolab/graph.hpp"
#include "horolab/metric.hpp"
#include "horolab/rational.hpp"

namespace horolab {

// Resolution of every fitted constant: values are rounded up to multiples of 1/64.
inline constexpr std::int64_t kFitResolution = 64;

struct DeltaSample {
  // count == 0 means every quadruple.
  std::size_t count = 0;
  std::uint64_t seed = 0;

  static DeltaSample all() { return {}; }
  static DeltaSample random(std::size_t count, std::uint64_t seed) { return {count, seed}; }
};

struct HyperbolicityEstimate {
  Dist twice_delta = 0;  // delta is a half-integer
  std::uint64_t quadruples_checked = 0;
  bool exhaustive = false;

  Rational delta() const { return Rational(twice_delta, 2); }
};

// Four-point condition: for each quadruple the two largest of the three pair
// sums differ by at most 2 delta. Exhaustive mode scans w < x < y < z.
HyperbolicityEstimate four_point_delta(const DistanceMatrix& d, const DeltaSample& sample = DeltaSample::all(),
                                       unsigned threads = 1);
HyperbolicityEstimate four_point_delta(const Graph& g, const DeltaSample& sample = DeltaSample::all(),
                                       unsigned threads = 1);

// Which pairs (u, v) of S a convexity scan examines.
struct PairFilter {
  bool interior = false;
  Dist radius = 0;
  VertexId origin = 0;

  static PairFilter all() { return {}; }
  // Pairs with min(d(o, u), d(o, v)) + d(u, v) <= radius, so that every
  // geodesic between them stays inside the radius-R ball about o.
  static PairFilter interior_of(Dist radius, VertexId origin) { return {true, radius, origin}; }

  bool admits(Dist du_origin, Dist dv_origin, Dist duv) const;
};

struct ConvexityWitness {
  VertexId u = 0;
  VertexId v = 0;
  VertexId w = 0;              // off S, on a geodesic from u to v
  Dist distance_to_set = 0;
  friend bool operator==(const ConvexityWitness&, const ConvexityWitness&) = default;
};

struct ConvexityOptions {
  PairFilter filter = PairFilter::all();
  std::size_t max_witnesses = 64;
  // When positive, the quasiconvexity constant is measured over enumerated
  // geodesics (at most this many per pair); otherwise it is read off the
  // betweenness scan, which covers the same vertices.
  std::size_t geodesic_cap = 0;
  // d(origin, .) for every vertex, when the caller already has it; otherwise
  // the interior filter runs its own BFS.
  std::span<const Dist> origin_distances;
};

struct ConvexityReport {
  Dist defect = 0;  // max distance to S of a witness; 0 iff convex over the checked pairs
  std::vector<ConvexityWitness> witnesses;  // first max_witnesses in scan order
  std::uint64_t witness_count = 0;
  Dist quasiconvexity_constant = 0;
  std::uint64_t pairs_checked = 0;
  bool geodesics_truncated = false;

  bool convex() const { return witness_count == 0; }
};

// Betweenness scan: w is a witness for (u, v) iff w is not in S and
// d(u, w) + d(w, v) = d(u, v). Throws InputError when S is empty or meets
// two components.
ConvexityReport convexity_defect(const Graph& g, std::span<const VertexId> set,
                                 const ConvexityOptions& options = {});

struct LocalGeodesicCheck {
  bool ok = true;
  std::optional<std::size_t> first_violation;  // start index of the first bad window
  Dist window_distance = 0;                    // endpoint distance of that window
};

// Every window of min(r, length) edges is a geodesic.
LocalGeodesicCheck is_r_local_geodesic(const Graph& g, const Path& p, std::size_t r);

struct QuasigeodesicFit {
  bool finite = true;
  Rational exact;  // minimal L
  Rational grid;   // exact rounded up to the fit resolution
  std::uint64_t pairs_checked = 0;
};

// Smallest L >= 1 with |i-j|/L - C <= d(p_i, p_j) <= L|i-j| + C for all i, j.
QuasigeodesicFit quasigeodesic_fit(const Graph& g, const Path& p, const Rational& additive_budget);

struct OrbitPoint {
  Element element;
  Dist displacement = 0;  // d(x0, g x0)
};

// Indices (ascending) of the orbit points with displacement <= t. Throws
// InputError when t is below the smallest nonzero displacement ("S_t does not
// generate within ball") or when a selected element's inverse is missing.
std::vector<std::size_t> displacement_generating_set(const Group& group, std::span<const OrbitPoint> orbit, Dist t);

struct QiFit {
  Rational scale;
  Rational additive_budget;
  bool infinite = false;
  Rational multiplicative_exact;  // minimal K >= 1
  Rational multiplicative;        // rounded up to the fit resolution
  std::uint64_t pairs_checked = 0;
};

// Minimal K with dx/K - C <= scale * dy <= K dx + C over index-aligned samples.
QiFit qi_distortion(std::span<const Dist> dx, std::span<const Dist> dy, const Rational& scale,
                    const Rational& additive_budget);

}  // namespace horolab
