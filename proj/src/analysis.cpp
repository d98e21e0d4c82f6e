#include "horolab/analysis.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <thread>
#include <unordered_map>

#include "horolab/error.hpp"

namespace horolab {

namespace {

Dist quadruple_defect(const DistanceMatrix& d, VertexId w, VertexId x, VertexId y, VertexId z) {
  std::array<Dist, 3> s{d(w, x) + d(y, z), d(w, y) + d(x, z), d(w, z) + d(x, y)};
  std::sort(s.begin(), s.end());
  return s[2] - s[1];
}

void check_finite(const DistanceMatrix& d) {
  for (std::size_t u = 0; u < d.size(); ++u) {
    for (Dist x : d.row(static_cast<VertexId>(u))) {
      if (x == kUnreachable) throw InputError("four-point delta needs a connected graph");
    }
  }
}

}  // namespace

HyperbolicityEstimate four_point_delta(const DistanceMatrix& d, const DeltaSample& sample, unsigned threads) {
  check_finite(d);
  const auto n = static_cast<VertexId>(d.size());
  HyperbolicityEstimate est;
  if (sample.count > 0) {
    if (n == 0) return est;
    std::mt19937_64 rng(sample.seed);
    std::uniform_int_distribution<VertexId> pick(0, n - 1);
    for (std::size_t i = 0; i < sample.count; ++i) {
      const VertexId w = pick(rng), x = pick(rng), y = pick(rng), z = pick(rng);
      est.twice_delta = std::max(est.twice_delta, quadruple_defect(d, w, x, y, z));
    }
    est.quadruples_checked = sample.count;
    return est;
  }

  threads = std::max(1u, threads);
  std::vector<Dist> best(threads, 0);
  std::vector<std::uint64_t> counts(threads, 0);
  auto scan = [&](unsigned part) {
    for (VertexId w = static_cast<VertexId>(part); w < n; w += static_cast<VertexId>(threads)) {
      for (VertexId x = w + 1; x < n; ++x) {
        for (VertexId y = x + 1; y < n; ++y) {
          for (VertexId z = y + 1; z < n; ++z) {
            best[part] = std::max(best[part], quadruple_defect(d, w, x, y, z));
            ++counts[part];
          }
        }
      }
    }
  };
  {
    std::vector<std::jthread> workers;
    for (unsigned part = 1; part < threads; ++part) workers.emplace_back(scan, part);
    scan(0);
  }
  est.twice_delta = *std::max_element(best.begin(), best.end());
  for (auto c : counts) est.quadruples_checked += c;
  est.exhaustive = true;
  return est;
}

HyperbolicityEstimate four_point_delta(const Graph& g, const DeltaSample& sample, unsigned threads) {
  if (!is_connected(g)) throw InputError("four-point delta needs a connected graph");
  return four_point_delta(DistanceMatrix(g, threads), sample, threads);
}

bool PairFilter::admits(Dist du_origin, Dist dv_origin, Dist duv) const {
  if (duv == kUnreachable) return false;
  if (!interior) return true;
  const Dist near = std::min(du_origin, dv_origin);
  return near != kUnreachable && static_cast<std::int64_t>(near) + duv <= radius;
}

ConvexityReport convexity_defect(const Graph& g, std::span<const VertexId> set, const ConvexityOptions& options) {
  if (set.empty()) throw InputError("convexity_defect: empty vertex set");
  std::vector<VertexId> members(set.begin(), set.end());
  for (VertexId v : members) g.check_vertex(v);
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  const std::size_t n = g.num_vertices();
  std::vector<char> in_set(n, 0);
  for (VertexId v : members) in_set[static_cast<std::size_t>(v)] = 1;

  const PairFilter& filter = options.filter;
  std::vector<Dist> origin_dist;
  Dist radius = kUnreachable - 1;
  if (filter.interior) {
    g.check_vertex(filter.origin);
    BoundedBfs ws(n);
    const bool given = !options.origin_distances.empty();
    if (given && options.origin_distances.size() != n) throw InputError("convexity_defect: origin distances have the wrong size");
    if (!given) ws.run(g, filter.origin, filter.radius);
    origin_dist.assign(members.size(), kUnreachable);
    Dist nearest = kUnreachable;
    for (std::size_t i = 0; i < members.size(); ++i) {
      origin_dist[i] = given ? options.origin_distances[static_cast<std::size_t>(members[i])] : ws[members[i]];
      nearest = std::min(nearest, origin_dist[i]);
    }
    if (nearest == kUnreachable || nearest >= filter.radius) return {};
    radius = filter.radius - nearest;
  }

  ConvexityReport report;
  BoundedBfs from_u(n);
  std::vector<char> marked(n, 0);
  std::vector<VertexId> stack, interval, pair_witnesses;
  std::vector<VertexId> witness_vertices;
  std::vector<char> is_witness(n, 0);
  std::vector<std::pair<VertexId, VertexId>> admitted;
  Dist max_pair_distance = 0;

  for (std::size_t i = 0; i < members.size(); ++i) {
    const VertexId u = members[i];
    from_u.run(g, u, radius);
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      const VertexId v = members[j];
      const Dist duv = from_u[v];
      if (!filter.interior && duv == kUnreachable) {
        throw InputError("convexity_defect: vertex set meets more than one component");
      }
      if (!filter.admits(filter.interior ? origin_dist[i] : 0, filter.interior ? origin_dist[j] : 0, duv)) continue;
      ++report.pairs_checked;
      max_pair_distance = std::max(max_pair_distance, duv);
      if (options.geodesic_cap > 0) admitted.emplace_back(u, v);

      // Walk the interval I(u, v) backwards from v along decreasing d(u, .).
      interval.clear();
      stack.assign(1, v);
      marked[static_cast<std::size_t>(v)] = 1;
      interval.push_back(v);
      while (!stack.empty()) {
        const VertexId y = stack.back();
        stack.pop_back();
        const Dist dy = from_u[y];
        for (VertexId x : g.neighbors(y)) {
          if (!marked[static_cast<std::size_t>(x)] && from_u[x] == dy - 1) {
            marked[static_cast<std::size_t>(x)] = 1;
            interval.push_back(x);
            stack.push_back(x);
          }
        }
      }
      pair_witnesses.clear();
      for (VertexId x : interval) {
        marked[static_cast<std::size_t>(x)] = 0;
        if (!in_set[static_cast<std::size_t>(x)]) pair_witnesses.push_back(x);
      }
      std::sort(pair_witnesses.begin(), pair_witnesses.end());
      report.witness_count += pair_witnesses.size();
      for (VertexId w : pair_witnesses) {
        if (report.witnesses.size() < options.max_witnesses) report.witnesses.push_back({u, v, w, 0});
        if (!is_witness[static_cast<std::size_t>(w)]) {
          is_witness[static_cast<std::size_t>(w)] = 1;
          witness_vertices.push_back(w);
        }
      }
    }
  }

  if (witness_vertices.empty() && admitted.empty()) return report;

  BoundedBfs to_set(n);
  to_set.run(g, members, max_pair_distance);
  for (VertexId w : witness_vertices) report.defect = std::max(report.defect, to_set[w]);
  for (auto& wit : report.witnesses) wit.distance_to_set = to_set[wit.w];

  if (options.geodesic_cap == 0) {
    report.quasiconvexity_constant = report.defect;
  } else {
    for (auto [u, v] : admitted) {
      const auto list = enumerate_geodesics(g, u, v, options.geodesic_cap);
      report.geodesics_truncated = report.geodesics_truncated || list.truncated;
      for (const auto& p : list.paths) {
        for (VertexId x : p.vertices) report.quasiconvexity_constant = std::max(report.quasiconvexity_constant, to_set[x]);
      }
    }
  }
  return report;
}

LocalGeodesicCheck is_r_local_geodesic(const Graph& g, const Path& p, std::size_t r) {
  validate_path(g, p);
  if (r == 0) throw InputError("is_r_local_geodesic: r must be >= 1");
  const std::size_t window = std::min(r, p.length());
  LocalGeodesicCheck out;
  if (window == 0) return out;
  std::unordered_map<VertexId, std::vector<Dist>> rows;
  for (std::size_t i = 0; i + window <= p.length(); ++i) {
    auto it = rows.find(p.vertices[i]);
    if (it == rows.end()) it = rows.emplace(p.vertices[i], bfs_distances(g, p.vertices[i])).first;
    const Dist d = it->second[static_cast<std::size_t>(p.vertices[i + window])];
    if (static_cast<std::size_t>(d) != window) {
      out.ok = false;
      out.first_violation = i;
      out.window_distance = d;
      return out;
    }
  }
  return out;
}

QuasigeodesicFit quasigeodesic_fit(const Graph& g, const Path& p, const Rational& additive_budget) {
  validate_path(g, p);
  if (additive_budget < Rational(0)) throw InputError("quasigeodesic_fit: additive budget must be >= 0");
  QuasigeodesicFit fit;
  fit.exact = Rational(1);
  std::unordered_map<VertexId, std::vector<Dist>> rows;
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    auto it = rows.find(p.vertices[i]);
    if (it == rows.end()) it = rows.emplace(p.vertices[i], bfs_distances(g, p.vertices[i])).first;
    for (std::size_t j = i + 1; j < p.vertices.size(); ++j) {
      ++fit.pairs_checked;
      const Rational span(static_cast<std::int64_t>(j - i));
      const Rational d(it->second[static_cast<std::size_t>(p.vertices[j])]);
      // Lower side: span <= L (d + C).
      const Rational lower = d + additive_budget;
      if (lower == Rational(0)) {
        fit.finite = false;
      } else {
        fit.exact = std::max(fit.exact, span / lower);
      }
      // Upper side: d - C <= L span.
      fit.exact = std::max(fit.exact, (d - additive_budget) / span);
    }
  }
  if (!fit.finite) {
    fit.exact = fit.grid = Rational(0);
  } else {
    fit.grid = fit.exact.ceil_to_grid(kFitResolution);
  }
  return fit;
}

std::vector<std::size_t> displacement_generating_set(const Group& group, std::span<const OrbitPoint> orbit, Dist t) {
  Dist min_nonzero = kUnreachable;
  std::unordered_map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    if (orbit[i].displacement < 0) throw InputError("displacement_generating_set: negative displacement");
    if (orbit[i].displacement > 0) min_nonzero = std::min(min_nonzero, orbit[i].displacement);
    where.emplace(group.format(orbit[i].element), i);
  }
  if (min_nonzero == kUnreachable || t < min_nonzero) {
    throw InputError("S_t does not generate within ball: t = " + std::to_string(t) +
                     " is below the smallest nonzero displacement");
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    if (orbit[i].displacement > t) continue;
    const auto inv = where.find(group.format(group.inverse(orbit[i].element)));
    if (inv == where.end()) {
      throw InputError("displacement_generating_set: inverse of " + group.format(orbit[i].element) + " missing from orbit");
    }
    if (orbit[inv->second].displacement > t) {
      throw InputError("displacement_generating_set: " + group.format(orbit[i].element) +
                       " and its inverse have different displacements");
    }
    out.push_back(i);
  }
  return out;
}

QiFit qi_distortion(std::span<const Dist> dx, std::span<const Dist> dy, const Rational& scale,
                    const Rational& additive_budget) {
  if (dx.size() != dy.size()) throw InputError("qi_distortion: samples are not aligned");
  if (scale <= Rational(0)) throw InputError("qi_distortion: scale must be positive");
  if (additive_budget < Rational(0)) throw InputError("qi_distortion: additive budget must be >= 0");
  QiFit fit;
  fit.scale = scale;
  fit.additive_budget = additive_budget;
  fit.multiplicative_exact = Rational(1);
  for (std::size_t i = 0; i < dx.size(); ++i) {
    if (dx[i] == kUnreachable || dy[i] == kUnreachable) throw InputError("qi_distortion: unreachable sample");
    ++fit.pairs_checked;
    const Rational x(dx[i]);
    const Rational y = scale * Rational(dy[i]);
    // scale*dy <= K dx + C
    const Rational over = y - additive_budget;
    if (over > Rational(0)) {
      if (dx[i] == 0) {
        fit.infinite = true;
      } else {
        fit.multiplicative_exact = std::max(fit.multiplicative_exact, over / x);
      }
    }
    // dx / K - C <= scale*dy  <=>  dx <= K (scale*dy + C)
    const Rational under = y + additive_budget;
    if (dx[i] > 0) {
      if (under == Rational(0)) {
        fit.infinite = true;
      } else {
        fit.multiplicative_exact = std::max(fit.multiplicative_exact, x / under);
      }
    }
  }
  if (fit.infinite) {
    fit.multiplicative_exact = fit.multiplicative = Rational(0);
  } else {
    fit.multiplicative = fit.multiplicative_exact.ceil_to_grid(kFitResolution);
  }
  return fit;
}

}  // namespace horolab
