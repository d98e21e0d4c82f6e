#include <gtest/gtest.h>

#include <random>

#include "horolab/error.hpp"
#include "horolab/graph.hpp"
#include "horolab/graph_io.hpp"
#include "horolab/metric.hpp"
#include "horolab/rational.hpp"
#include "oracles.hpp"

namespace horolab {
namespace {

TEST(Graph, BuilderDeduplicatesAndSorts) {
  GraphBuilder b(4);
  b.add_edge(2, 0);
  b.add_edge(0, 2);
  b.add_edge(3, 1);
  const Graph g = std::move(b).build();
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_TRUE(g.has_edge(0, 2));
  EXPECT_TRUE(g.has_edge(2, 0));
  EXPECT_FALSE(g.has_edge(0, 1));
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 2}, {1, 3}}));
}

TEST(Graph, BuilderRejectsLoopsAndUnknownIds) {
  GraphBuilder b(3);
  EXPECT_THROW(b.add_edge(1, 1), InputError);
  EXPECT_THROW(b.add_edge(0, 3), InputError);
  EXPECT_THROW(b.add_edge(-1, 0), InputError);
}

TEST(Graph, AdjacencyIsSymmetricOnRandomGraphs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = random_connected_graph(30, 0.1, rng);
    for (std::size_t u = 0; u < g.num_vertices(); ++u) {
      for (VertexId v : g.neighbors(static_cast<VertexId>(u))) {
        EXPECT_NE(v, static_cast<VertexId>(u));
        EXPECT_TRUE(g.has_edge(v, static_cast<VertexId>(u)));
      }
    }
    EXPECT_TRUE(is_connected(g));
  }
}

TEST(Graph, NamedFamilies) {
  EXPECT_EQ(path_graph(5).num_edges(), 4u);
  EXPECT_EQ(cycle_graph(8).num_edges(), 8u);
  EXPECT_EQ(complete_graph(6).num_edges(), 15u);
  EXPECT_EQ(grid_graph(3, 4).num_vertices(), 12u);
  EXPECT_EQ(grid_graph(3, 4).num_edges(), 17u);
  EXPECT_EQ(binary_tree(3).num_vertices(), 15u);
  EXPECT_EQ(petersen_graph().num_edges(), 15u);
}

TEST(Graph, ValidatePath) {
  const Graph g = cycle_graph(5);
  EXPECT_NO_THROW(validate_path(g, Path{{0, 1, 2}}));
  EXPECT_THROW(validate_path(g, Path{{0, 2}}), InputError);
  EXPECT_THROW(validate_path(g, Path{}), InputError);
  EXPECT_EQ((Path{{0, 1, 2}}).length(), 2u);
}

TEST(Metric, CycleAntipodeAndPathEnd) {
  EXPECT_EQ(bfs_distances(cycle_graph(8), 0)[4], 4);
  EXPECT_EQ(bfs_distances(path_graph(5), 0)[4], 4);
}

TEST(Metric, UnreachableSentinel) {
  GraphBuilder b(3);
  b.add_edge(0, 1);
  const Graph g = std::move(b).build();
  EXPECT_EQ(bfs_distances(g, 0)[2], kUnreachable);
  EXPECT_FALSE(is_connected(g));
  EXPECT_THROW(rips_graph(g, 2), InputError);
}

TEST(Metric, DistanceMatrixMatchesFloydWarshall) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = random_connected_graph(35, 0.08, rng);
    const auto fw = oracle::floyd_warshall(g);
    for (unsigned threads : {1u, 3u}) {
      const DistanceMatrix d(g, threads);
      for (std::size_t u = 0; u < g.num_vertices(); ++u)
        for (std::size_t v = 0; v < g.num_vertices(); ++v)
          ASSERT_EQ(d(static_cast<VertexId>(u), static_cast<VertexId>(v)), fw[u][v]);
    }
  }
}

TEST(Metric, TriangleInequalityOnSampledTriples) {
  std::mt19937_64 rng(3);
  const Graph g = random_connected_graph(60, 0.05, rng);
  const DistanceMatrix d(g);
  std::uniform_int_distribution<VertexId> pick(0, 59);
  for (int i = 0; i < 10000; ++i) {
    const VertexId x = pick(rng), y = pick(rng), z = pick(rng);
    ASSERT_EQ(d(x, y), d(y, x));
    ASSERT_LE(d(x, z), d(x, y) + d(y, z));
  }
}

TEST(Metric, BoundedBfsStopsAtRadius) {
  const Graph g = path_graph(10);
  BoundedBfs bfs(g.num_vertices());
  bfs.run(g, 5, 2);
  EXPECT_EQ(bfs[3], 2);
  EXPECT_EQ(bfs[7], 2);
  EXPECT_EQ(bfs[8], kUnreachable);
  EXPECT_EQ(bfs.visited().size(), 5u);
  bfs.run(g, 0, 1);
  EXPECT_EQ(bfs[5], kUnreachable);
  EXPECT_EQ(bfs[1], 1);
}

TEST(Rips, PathNineVerticesScaleTwo) {
  const Graph r = rips_graph(path_graph(9), 2);
  EXPECT_EQ(bfs_distances(r, 0)[8], 4);
}

TEST(Rips, ScaleOneIsIdentity) {
  const Graph g = petersen_graph();
  EXPECT_EQ(rips_graph(g, 1).edges(), g.edges());
}

TEST(Rips, LargeScaleIsComplete) {
  EXPECT_EQ(rips_graph(path_graph(9), 8).num_edges(), 36u);
}

TEST(Rips, MetricIdentityAndRoughIsometry) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    const Graph g = random_connected_graph(40, 0.06, rng);
    const DistanceMatrix d(g);
    for (Dist t : {1, 2, 3, 5}) {
      const DistanceMatrix dr(rips_graph(g, t));
      for (VertexId u = 0; u < 40; ++u)
        for (VertexId v = 0; v < 40; ++v) {
          ASSERT_EQ(dr(u, v), (d(u, v) + t - 1) / t);
          ASSERT_LE(std::abs(t * dr(u, v) - d(u, v)), t - 1);
        }
    }
  }
}

TEST(Geodesics, EvenCycleHasTwo) {
  const auto list = enumerate_geodesics(cycle_graph(4), 0, 2, 100);
  EXPECT_EQ(list.paths.size(), 2u);
  EXPECT_FALSE(list.truncated);
  EXPECT_EQ(list.paths[0], (Path{{0, 1, 2}}));
}

TEST(Geodesics, GridCornersHaveSix) {
  const Graph g = grid_graph(3, 3);
  const auto list = enumerate_geodesics(g, 0, 8, 100);
  EXPECT_EQ(list.paths.size(), 6u);
  for (const auto& p : list.paths) EXPECT_EQ(p.length(), 4u);
}

TEST(Geodesics, SameEndpoints) {
  const auto list = enumerate_geodesics(cycle_graph(5), 3, 3, 10);
  ASSERT_EQ(list.paths.size(), 1u);
  EXPECT_EQ(list.paths[0].vertices, std::vector<VertexId>{3});
}

TEST(Geodesics, CapSetsTruncated) {
  const auto list = enumerate_geodesics(grid_graph(3, 3), 0, 8, 4);
  EXPECT_EQ(list.paths.size(), 4u);
  EXPECT_TRUE(list.truncated);
  EXPECT_THROW(enumerate_geodesics(grid_graph(3, 3), 0, 8, 0), InputError);
}

TEST(Geodesics, FirstGeodesicIsFirstEnumerated) {
  std::mt19937_64 rng(2);
  const Graph g = random_connected_graph(25, 0.15, rng);
  for (VertexId v = 0; v < 25; ++v) {
    EXPECT_EQ(first_geodesic(g, 0, v), enumerate_geodesics(g, 0, v, 1).paths.front());
  }
}

TEST(Geodesics, CoverTheIntervalAndMatchBruteForce) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const Graph g = random_connected_graph(16, 0.2, rng);
    const auto fw = oracle::floyd_warshall(g);
    for (VertexId u = 0; u < 16; u += 3) {
      for (VertexId v = 0; v < 16; ++v) {
        const auto list = enumerate_geodesics(g, u, v, 100000);
        const auto brute = oracle::all_geodesics(g, fw, u, v);
        ASSERT_FALSE(list.truncated);
        ASSERT_EQ(list.paths.size(), brute.size());
        std::set<VertexId> covered;
        for (const auto& p : list.paths) {
          ASSERT_EQ(static_cast<Dist>(p.length()), fw[u][v]);
          covered.insert(p.vertices.begin(), p.vertices.end());
        }
        for (VertexId w = 0; w < 16; ++w) {
          EXPECT_EQ(covered.count(w) == 1, fw[u][w] + fw[w][v] == fw[u][v]);
        }
      }
    }
  }
}

TEST(Hausdorff, Basics) {
  const Graph g = cycle_graph(8);
  const std::vector<VertexId> a{0, 1, 2, 3, 4}, b{0, 7, 6, 5, 4};
  EXPECT_EQ(hausdorff_distance(g, a, a), 0);
  EXPECT_EQ(hausdorff_distance(g, a, b), 2);
  const std::vector<VertexId> u{1}, v{6};
  EXPECT_EQ(hausdorff_distance(g, u, v), 3);
  EXPECT_EQ(hausdorff_distance(DistanceMatrix(g), a, b), 2);
  EXPECT_THROW(hausdorff_distance(g, std::vector<VertexId>{}, a), InputError);
}

TEST(GraphIo, RoundTripIsByteStable) {
  GraphBuilder b(3);
  b.add_edge(0, 1);
  b.add_edge(1, 2);
  b.set_label(0, "e");
  b.set_vertex_meta(2, Json{{"level", 1}});
  b.set_metadata("name", "demo");
  const Graph g = std::move(b).build();
  const std::string text = graph_to_text(g);
  EXPECT_EQ(text,
            "{\"version\":1,\"vertices\":[{\"id\":0,\"label\":\"e\"},{\"id\":1},{\"id\":2,\"meta\":{\"level\":1}}],"
            "\"edges\":[[0,1],[1,2]],\"metadata\":{\"name\":\"demo\"}}\n");
  EXPECT_EQ(graph_to_text(graph_from_json(Json::parse(text))), text);
}

TEST(GraphIo, RejectsMalformedDocuments) {
  auto bad = [](const char* text) { return graph_from_json(Json::parse(text)); };
  EXPECT_THROW(bad(R"({"version":2,"vertices":[],"edges":[],"metadata":{}})"), InputError);
  EXPECT_THROW(bad(R"({"version":1,"vertices":[{"id":1}],"edges":[],"metadata":{}})"), InputError);
  EXPECT_THROW(bad(R"({"version":1,"vertices":[{"id":0},{"id":1}],"edges":[[1,0]],"metadata":{}})"), InputError);
  EXPECT_THROW(bad(R"({"version":1,"vertices":[{"id":0},{"id":1}],"edges":[[0,1],[0,1]],"metadata":{}})"), InputError);
  EXPECT_THROW(bad(R"({"version":1,"vertices":[],"edges":[],"metadata":{},"extra":1})"), InputError);
}

TEST(GraphIo, DotCarriesLevels) {
  GraphBuilder b(2);
  b.add_edge(0, 1);
  b.set_vertex_meta(1, Json{{"level", 2}});
  const std::string dot = graph_to_dot(std::move(b).build());
  EXPECT_NE(dot.find("graph \"G\" {"), std::string::npos);
  EXPECT_NE(dot.find("level=2"), std::string::npos);
  EXPECT_NE(dot.find("0 -- 1"), std::string::npos);
}

TEST(Rational, ParseArithmeticAndGrid) {
  EXPECT_EQ(Rational::parse("6/5"), Rational(6, 5));
  EXPECT_EQ(Rational::parse("1.25"), Rational(5, 4));
  EXPECT_EQ(Rational::parse("-3"), Rational(-3));
  EXPECT_EQ(Rational(2, 4).to_string(), "1/2");
  EXPECT_EQ(Rational(4, 2).to_string(), "2");
  EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
  EXPECT_LT(Rational(2, 3), Rational(3, 4));
  EXPECT_EQ(Rational(5, 3).ceil_to_grid(64), Rational(107, 64));
  EXPECT_EQ(Rational(3, 2).ceil_to_grid(64), Rational(3, 2));
  EXPECT_THROW(Rational(1, 0), InputError);
  EXPECT_THROW(Rational::parse("x"), InputError);
}

}  // namespace
}  // namespace horolab
