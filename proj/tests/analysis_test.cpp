#include <gtest/gtest.h>

#include <random>

#include "horolab/analysis.hpp"
#include "horolab/error.hpp"
#include "horolab/horoball.hpp"
#include "oracles.hpp"

namespace horolab {
namespace {

TEST(Delta, TreesAndEdgesAreZero) {
  const auto tree = four_point_delta(binary_tree(4));
  EXPECT_EQ(tree.twice_delta, 0);
  EXPECT_TRUE(tree.exhaustive);
  EXPECT_EQ(four_point_delta(path_graph(2)).twice_delta, 0);
  std::mt19937_64 rng(43);
  EXPECT_EQ(four_point_delta(random_connected_graph(30, 0.0, rng)).twice_delta, 0);
}

TEST(Delta, CycleTwelveMatchesNaiveScan) {
  const Graph c12 = cycle_graph(12);
  const auto est = four_point_delta(c12);
  EXPECT_EQ(est.twice_delta, oracle::naive_twice_delta(oracle::floyd_warshall(c12)));
  EXPECT_EQ(est.twice_delta, 6);
  EXPECT_EQ(est.delta(), Rational(3));
  EXPECT_EQ(est.quadruples_checked, 495u);
}

TEST(Delta, MatchesNaiveScanOnSmallGraphs) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 25; ++trial) {
    const Graph g = random_connected_graph(6 + trial % 9, 0.2, rng);
    const auto naive = oracle::naive_twice_delta(oracle::floyd_warshall(g));
    EXPECT_EQ(four_point_delta(g).twice_delta, naive);
    EXPECT_EQ(four_point_delta(g, DeltaSample::all(), 3).twice_delta, naive);
  }
}

TEST(Delta, SamplingIsSeededAndBounded) {
  std::mt19937_64 rng(53);
  const Graph g = random_connected_graph(25, 0.15, rng);
  const auto full = four_point_delta(g);
  const auto a = four_point_delta(g, DeltaSample::random(2000, 9));
  const auto b = four_point_delta(g, DeltaSample::random(2000, 9));
  EXPECT_FALSE(a.exhaustive);
  EXPECT_EQ(a.quadruples_checked, 2000u);
  EXPECT_EQ(a.twice_delta, b.twice_delta);
  EXPECT_LE(a.twice_delta, full.twice_delta);
}

TEST(Delta, RejectsDisconnected) {
  GraphBuilder b(3);
  b.add_edge(0, 1);
  EXPECT_THROW(four_point_delta(std::move(b).build()), InputError);
}

TEST(Convexity, SubtreeOfTreeIsConvex) {
  const Graph t = binary_tree(3);
  const std::vector<VertexId> subtree{1, 3, 4, 7, 8};
  const auto r = convexity_defect(t, subtree);
  EXPECT_EQ(r.defect, 0);
  EXPECT_TRUE(r.convex());
  EXPECT_TRUE(r.witnesses.empty());
}

TEST(Convexity, ThreeVerticesOfSquare) {
  const auto r = convexity_defect(cycle_graph(4), std::vector<VertexId>{0, 1, 2});
  ASSERT_EQ(r.witnesses.size(), 1u);
  EXPECT_EQ(r.witnesses[0], (ConvexityWitness{0, 2, 3, 1}));
  EXPECT_EQ(r.defect, 1);
  EXPECT_EQ(r.pairs_checked, 3u);
}

TEST(Convexity, TopLevelOfHoroballIsConvex) {
  const RestrictedHoroball h(path_graph(17), 3);
  const auto r = convexity_defect(h.carrier(), h.level_set(3));
  EXPECT_EQ(r.defect, 0);
  EXPECT_EQ(r.pairs_checked, 17u * 16 / 2);
}

TEST(Convexity, EmptySetAndComponents) {
  EXPECT_THROW(convexity_defect(path_graph(3), std::vector<VertexId>{}), InputError);
  GraphBuilder b(4);
  b.add_edge(0, 1);
  b.add_edge(2, 3);
  EXPECT_THROW(convexity_defect(std::move(b).build(), std::vector<VertexId>{0, 2}), InputError);
}

TEST(Convexity, BetweennessAgreesWithGeodesicEnumeration) {
  std::mt19937_64 rng(59);
  std::bernoulli_distribution coin(0.4);
  int convex_cases = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Graph g = random_connected_graph(10 + trial % 8, 0.12, rng);
    const auto fw = oracle::floyd_warshall(g);
    std::vector<VertexId> set;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
      if (coin(rng)) set.push_back(static_cast<VertexId>(v));
    }
    if (set.empty()) set.push_back(0);
    ConvexityOptions opts;
    opts.geodesic_cap = 100000;
    const auto r = convexity_defect(g, set, opts);
    EXPECT_EQ(r.convex(), oracle::convex_by_geodesics(g, fw, set));
    EXPECT_EQ(r.defect == 0, r.witnesses.empty());
    EXPECT_EQ(r.quasiconvexity_constant, r.defect);
    convex_cases += r.convex();
  }
  EXPECT_GT(convex_cases, 0);
}

TEST(Convexity, InteriorFilterRestrictsPairs) {
  const Graph g = path_graph(10);
  const std::vector<VertexId> set{0, 4, 8};
  ConvexityOptions opts;
  opts.filter = PairFilter::interior_of(5, 0);
  const auto r = convexity_defect(g, set, opts);
  EXPECT_EQ(r.pairs_checked, 1u);  // only (0, 4): 0 + 4 <= 5
  EXPECT_EQ(r.defect, 2);
  std::vector<Dist> origin(10);
  for (int v = 0; v < 10; ++v) origin[static_cast<std::size_t>(v)] = v;
  opts.origin_distances = origin;
  EXPECT_EQ(convexity_defect(g, set, opts).witnesses, r.witnesses);
}

Path arc(std::size_t from, std::size_t edges, std::size_t n) {
  Path p;
  for (std::size_t i = 0; i <= edges; ++i) p.vertices.push_back(static_cast<VertexId>((from + i) % n));
  return p;
}

TEST(LocalGeodesic, CycleArcs) {
  const Graph c8 = cycle_graph(8);
  EXPECT_TRUE(is_r_local_geodesic(c8, arc(0, 5, 8), 3).ok);
  const auto bad = is_r_local_geodesic(c8, arc(0, 5, 8), 5);
  EXPECT_FALSE(bad.ok);
  EXPECT_EQ(bad.first_violation, 0u);
  EXPECT_EQ(bad.window_distance, 3);
  const auto five = is_r_local_geodesic(c8, arc(0, 6, 8), 5);
  EXPECT_FALSE(five.ok);
  EXPECT_EQ(five.first_violation, 0u);
}

TEST(LocalGeodesic, GeodesicsPassForEveryR) {
  const Graph g = grid_graph(4, 4);
  const Path p = first_geodesic(g, 0, 15);
  for (std::size_t r = 1; r <= 8; ++r) EXPECT_TRUE(is_r_local_geodesic(g, p, r).ok);
  EXPECT_THROW(is_r_local_geodesic(g, p, 0), InputError);
}

TEST(QuasigeodesicFit, Examples) {
  const Graph c8 = cycle_graph(8);
  const auto geo = quasigeodesic_fit(c8, arc(0, 4, 8), Rational(0));
  EXPECT_TRUE(geo.finite);
  EXPECT_EQ(geo.exact, Rational(1));
  const auto five = quasigeodesic_fit(c8, arc(0, 5, 8), Rational(0));
  EXPECT_EQ(five.exact, Rational(5, 3));
  EXPECT_EQ(five.grid, Rational(107, 64));
  EXPECT_EQ(five.pairs_checked, 15u);
  const auto closed = quasigeodesic_fit(c8, arc(0, 8, 8), Rational(0));
  EXPECT_FALSE(closed.finite);
  EXPECT_TRUE(quasigeodesic_fit(c8, arc(0, 8, 8), Rational(1)).finite);
}

TEST(QuasigeodesicFit, MonotoneInBudget) {
  const Graph c12 = cycle_graph(12);
  Rational last(1000);
  for (int c = 0; c <= 6; ++c) {
    const auto fit = quasigeodesic_fit(c12, arc(0, 11, 12), Rational(c));
    ASSERT_TRUE(fit.finite);
    EXPECT_LE(fit.exact, last);
    last = fit.exact;
  }
}

std::vector<OrbitPoint> z2_orbit(const CayleyBall& ball) {
  std::vector<OrbitPoint> orbit;
  for (std::size_t v = 0; v < ball.elements.size(); ++v) orbit.push_back({ball.elements[v], ball.word_length[v]});
  return orbit;
}

TEST(DisplacementSet, UnitAndRadiusTwoBalls) {
  const auto ball = cayley_ball(GroupSpec::free_abelian(2), 6);
  const Group g(ball.spec);
  const auto orbit = z2_orbit(ball);
  EXPECT_EQ(displacement_generating_set(g, orbit, 1).size(), 5u);
  EXPECT_EQ(displacement_generating_set(g, orbit, 2).size(), 13u);
  EXPECT_THROW(displacement_generating_set(g, orbit, 0), InputError);
}

TEST(DisplacementSet, NestedAndSymmetric) {
  const auto ball = cayley_ball(GroupSpec::free_product({GroupSpec::free_abelian(2), GroupSpec::free(1)}), 5);
  const Group g(ball.spec);
  const auto orbit = z2_orbit(ball);
  std::vector<std::size_t> previous;
  for (Dist t = 1; t <= 5; ++t) {
    const auto s = displacement_generating_set(g, orbit, t);
    EXPECT_TRUE(std::includes(s.begin(), s.end(), previous.begin(), previous.end()));
    for (std::size_t i : s) {
      const auto inv = ball.find(g.inverse(orbit[i].element), g);
      ASSERT_TRUE(inv.has_value());
      EXPECT_TRUE(std::binary_search(s.begin(), s.end(), static_cast<std::size_t>(*inv)));
    }
    previous = s;
  }
}

TEST(QiDistortion, IdentityAndScaling) {
  const std::vector<Dist> d{0, 1, 2, 5, 7};
  const auto id = qi_distortion(d, d, Rational(1), Rational(0));
  EXPECT_FALSE(id.infinite);
  EXPECT_EQ(id.multiplicative, Rational(1));
  EXPECT_EQ(id.pairs_checked, 5u);
  std::vector<Dist> tripled;
  for (Dist x : d) tripled.push_back(3 * x);
  EXPECT_EQ(qi_distortion(tripled, d, Rational(3), Rational(0)).multiplicative, Rational(1));
}

TEST(QiDistortion, SatisfiesInvariantAndIsMonotoneInBudget) {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<Dist> pick(0, 30);
  std::vector<Dist> dx(200), dy(200);
  for (std::size_t i = 0; i < dx.size(); ++i) {
    dx[i] = pick(rng);
    dy[i] = dx[i] == 0 ? 0 : 1 + pick(rng) / 2;
  }
  const Rational lambda(3, 2);
  Rational last(1 << 20);
  for (int c = 0; c <= 8; ++c) {
    const auto fit = qi_distortion(dx, dy, lambda, Rational(c));
    ASSERT_FALSE(fit.infinite);
    const Rational K = fit.multiplicative;
    for (std::size_t i = 0; i < dx.size(); ++i) {
      const Rational x(dx[i]), y = lambda * Rational(dy[i]);
      ASSERT_LE(x / K - Rational(c), y);
      ASSERT_LE(y, K * x + Rational(c));
    }
    EXPECT_LE(fit.multiplicative_exact, last);
    last = fit.multiplicative_exact;
  }
}

TEST(QiDistortion, CollapsedPairsAreInfinite) {
  const std::vector<Dist> dx{0, 3}, dy{2, 3};
  EXPECT_TRUE(qi_distortion(dx, dy, Rational(1), Rational(0)).infinite);
  EXPECT_FALSE(qi_distortion(dx, dy, Rational(1), Rational(2)).infinite);
  EXPECT_THROW(qi_distortion(dx, std::vector<Dist>{1}, Rational(1), Rational(0)), InputError);
}

}  // namespace
}  // namespace horolab
