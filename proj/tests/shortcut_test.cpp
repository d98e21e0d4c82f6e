#include <gtest/gtest.h>

#include <random>

#include "horolab/error.hpp"
#include "horolab/shortcut.hpp"
#include "oracles.hpp"

namespace horolab {
namespace {

ShortcutQuery query(std::size_t n, Rational K, LambdaRange lambda) {
  ShortcutQuery q;
  q.n = n;
  q.K = K;
  q.lambda = lambda;
  return q;
}

TEST(CycleDistance, Wraps) {
  EXPECT_EQ(cycle_distance(8, 0, 7), 1);
  EXPECT_EQ(cycle_distance(8, 2, 6), 4);
  EXPECT_EQ(cycle_distance(5, 4, 1), 2);
}

TEST(LambdaRange, Grid) {
  EXPECT_EQ((LambdaRange{Rational(2), Rational(3), Rational(1, 4)}).grid().size(), 5u);
  EXPECT_TRUE((LambdaRange{Rational(3), Rational(2), Rational(1, 4)}).grid().empty());
  EXPECT_EQ(LambdaRange::single(Rational(3, 2)).grid(), std::vector<Rational>{Rational(3, 2)});
}

TEST(CycleSearch, IdentityOnCycle) {
  const Graph c8 = cycle_graph(8);
  const auto r = bilipschitz_cycle_search(c8, query(8, Rational(1), LambdaRange::single(Rational(1))));
  ASSERT_EQ(r.status, SearchStatus::found);
  EXPECT_TRUE(r.exhaustive);
  EXPECT_EQ(r.witness->images, (std::vector<VertexId>{0, 1, 2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(r.witness->K_achieved, Rational(1));
}

TEST(CycleSearch, PathHasNoNearIsometricCycle) {
  const Graph p10 = path_graph(10);
  const auto r = bilipschitz_cycle_search(p10, query(6, Rational(6, 5), {Rational(2), Rational(4), Rational(1, 4)}));
  EXPECT_EQ(r.status, SearchStatus::none);
  EXPECT_TRUE(r.exhaustive);
  EXPECT_EQ(r.cells.size(), 9u);
}

TEST(CycleSearch, LatticeSquareInGrid) {
  const Graph grid = grid_graph(9, 9);
  const DistanceMatrix d(grid);
  const auto r = bilipschitz_cycle_search(grid, d, query(4, Rational(2), LambdaRange::single(Rational(2))));
  ASSERT_EQ(r.status, SearchStatus::found);
  EXPECT_LE(r.witness->K_achieved, Rational(2));
  // The lattice square with side 2 is isometric at scale 2.
  const std::vector<VertexId> square{0, 2, 20, 18};
  const auto k = embedding_distortion(d, square, Rational(2), Rational(2));
  ASSERT_TRUE(k.has_value());
  EXPECT_EQ(*k, Rational(1));
}

TEST(CycleSearch, EveryWitnessReverifies) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = random_connected_graph(18, 0.1, rng);
    const DistanceMatrix d(g);
    const auto r = bilipschitz_cycle_search(g, d, query(5, Rational(3, 2), {Rational(1), Rational(2), Rational(1, 2)}));
    for (const auto& cell : r.cells) {
      if (cell.witness) EXPECT_TRUE(embedding_distortion(d, cell.witness->images, cell.lambda, Rational(3, 2)).has_value());
    }
  }
}

TEST(CycleSearch, CapGivesUnknownNotNone) {
  const Graph p10 = path_graph(10);
  auto q = query(6, Rational(6, 5), LambdaRange::single(Rational(2)));
  q.node_cap = 3;
  const auto r = bilipschitz_cycle_search(p10, q);
  EXPECT_EQ(r.status, SearchStatus::unknown);
  EXPECT_FALSE(r.exhaustive);
}

TEST(CycleSearch, RejectsMalformedQueries) {
  const Graph c = cycle_graph(6);
  EXPECT_THROW(bilipschitz_cycle_search(c, query(2, Rational(2), LambdaRange::single(Rational(1)))), InputError);
  EXPECT_THROW(bilipschitz_cycle_search(c, query(4, Rational(1, 2), LambdaRange::single(Rational(1)))), InputError);
  EXPECT_THROW(bilipschitz_cycle_search(c, query(4, Rational(2), {Rational(1), Rational(2), Rational(0)})), InputError);
}

TEST(CycleSearch, OrbitRepresentativesDoNotChangeTheAnswer) {
  const Graph c10 = cycle_graph(10);
  const DistanceMatrix d(c10);
  for (std::size_t n : {4u, 5u, 6u}) {
    auto q = query(n, Rational(3, 2), {Rational(1), Rational(3), Rational(1, 2)});
    const auto all = bilipschitz_cycle_search(c10, d, q);
    q.first_images = {0};
    const auto reps = bilipschitz_cycle_search(c10, d, q);
    ASSERT_EQ(all.cells.size(), reps.cells.size());
    for (std::size_t i = 0; i < all.cells.size(); ++i) EXPECT_EQ(all.cells[i].status, reps.cells[i].status);
  }
}

TEST(CycleSearch, AgreesWithNaiveEnumeration) {
  std::mt19937_64 rng(71);
  const LambdaRange lambdas{Rational(1, 2), Rational(5, 2), Rational(1, 2)};
  std::vector<Graph> targets{cycle_graph(7), path_graph(6), petersen_graph(), grid_graph(2, 4)};
  for (int i = 0; i < 3; ++i) targets.push_back(random_connected_graph(8, 0.2, rng));
  for (const auto& g : targets) {
    const DistanceMatrix d(g);
    const auto fw = oracle::floyd_warshall(g);
    for (std::size_t n : {3u, 4u, 5u}) {
      for (const Rational K : {Rational(1), Rational(6, 5), Rational(2)}) {
        const auto r = bilipschitz_cycle_search(g, d, query(n, K, lambdas));
        for (const auto& cell : r.cells) {
          ASSERT_NE(cell.status, SearchStatus::unknown);
          const bool naive = oracle::naive_cycle_embedding_exists(fw, n, cell.lambda.num(), cell.lambda.den(), K.num(), K.den());
          ASSERT_EQ(cell.status == SearchStatus::found, naive)
              << "n=" << n << " K=" << K.to_string() << " lambda=" << cell.lambda.to_string();
        }
      }
    }
  }
}

TEST(Profile, TreeHasNoLongBilipschitzCycles) {
  const Graph tree = binary_tree(5);
  const auto profile = shortcut_profile(tree, DistanceMatrix(tree), Rational(13, 10), {8, 9, 10},
                                        {Rational(1), Rational(2), Rational(1, 2)});
  ASSERT_EQ(profile.rows.size(), 3u);
  for (const auto& row : profile.rows) {
    EXPECT_EQ(row.status, SearchStatus::none) << row.n;
    EXPECT_TRUE(row.exhaustive);
    EXPECT_FALSE(row.best_lambda.has_value());
  }
}

TEST(Profile, CycleTwentyFourNeedsLambdaTimesNEqualTwentyFour) {
  const Graph c24 = cycle_graph(24);
  const auto profile = shortcut_profile(c24, DistanceMatrix(c24), Rational(1), {6, 8, 10, 12, 24},
                                        {Rational(1), Rational(4), Rational(1)});
  for (const auto& row : profile.rows) {
    for (const auto& cell : row.search.cells) {
      const bool analytic = cell.lambda * Rational(static_cast<std::int64_t>(row.n)) == Rational(24);
      EXPECT_EQ(cell.status == SearchStatus::found, analytic) << "n=" << row.n << " lambda=" << cell.lambda.to_string();
      if (cell.witness) {
        // Equally spaced images.
        const auto& f = cell.witness->images;
        for (std::size_t i = 0; i + 1 < f.size(); ++i) EXPECT_EQ(cycle_distance(24, f[i], f[i + 1]), 24 / static_cast<Dist>(row.n));
      }
    }
  }
}

TEST(Profile, EmptyRangeIsNotSearched) {
  const Graph c = cycle_graph(6);
  const auto profile = shortcut_profile(c, DistanceMatrix(c), Rational(2), {4, 5}, {Rational(3), Rational(2), Rational(1, 4)});
  ASSERT_EQ(profile.rows.size(), 2u);
  for (const auto& row : profile.rows) {
    EXPECT_EQ(row.status, SearchStatus::not_searched);
    EXPECT_FALSE(row.exhaustive);
  }
  EXPECT_NE(profile_to_csv(profile).find("not searched"), std::string::npos);
}

TEST(Profile, BestLambdaIsLargestFound) {
  const Graph c12 = cycle_graph(12);
  const auto profile = shortcut_profile(c12, DistanceMatrix(c12), Rational(3, 2), {4}, {Rational(1), Rational(4), Rational(1)});
  ASSERT_TRUE(profile.rows[0].best_lambda.has_value());
  Rational largest(0);
  for (const auto& cell : profile.rows[0].search.cells) {
    if (cell.status == SearchStatus::found) largest = cell.lambda;
  }
  EXPECT_EQ(*profile.rows[0].best_lambda, largest);
  const Json j = profile_to_json(profile);
  EXPECT_EQ(j[0]["n"], 4);
  // On C_12 a bilipschitz square needs lambda >= 2.
  EXPECT_EQ(j[0]["cells"][0]["status"], "none");
  EXPECT_FALSE(j[0]["cells"][0].contains("witness"));
  EXPECT_TRUE(j[0]["cells"][1].contains("witness"));
}

}  // namespace
}  // namespace horolab
