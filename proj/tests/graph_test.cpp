#include <gtest/gtest.h>

#include <sstream>

#include "kspdg/shortest_path.hpp"
#include "kspdg/yen.hpp"
#include "test_support.hpp"

using namespace kspdg;

TEST(Graph, ParallelEdgesKeepMinimum) {
  std::vector<EdgeSpec> specs{{0, 1, 7}, {1, 0, 3}, {1, 2, 4}};
  Graph g = Graph::from_edges(3, specs);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.weight(g.find_edge(0, 1)), 3 * kMilli);
  EXPECT_EQ(g.initial_weight(g.find_edge(1, 0)), 3);
  EXPECT_EQ(g.find_edge(0, 2), kNoEdge);
}

TEST(Graph, RejectsBadEdges) {
  std::vector<EdgeSpec> loop{{1, 1, 2}};
  EXPECT_THROW(Graph::from_edges(2, loop), ParameterError);
  std::vector<EdgeSpec> range{{0, 5, 2}};
  EXPECT_THROW(Graph::from_edges(2, range), ParameterError);
  std::vector<EdgeSpec> zero{{0, 1, 0}};
  EXPECT_THROW(Graph::from_edges(2, zero), ParameterError);
}

TEST(Graph, DimacsRoundTrip) {
  Graph g = oracle::random_graph(30, 20, 5);
  std::stringstream buf;
  emit_dimacs(g, buf);
  DimacsStats st;
  Graph back = parse_dimacs(buf, &st);
  EXPECT_EQ(back, g);
  EXPECT_EQ(st.arcs_read, 2 * g.edge_count());
}

TEST(Graph, DimacsErrors) {
  std::istringstream no_header("a 1 2 3\n");
  EXPECT_THROW(parse_dimacs(no_header), ParseError);
  std::istringstream bad_arc("p sp 3 2\na 1 x 3\n");
  EXPECT_THROW(parse_dimacs(bad_arc), ParseError);
}

TEST(Graph, DimacsIsOneBased) {
  std::istringstream in("c tiny\np sp 3 4\na 1 2 5\na 2 1 5\na 2 3 2\na 3 2 2\n");
  Graph g = parse_dimacs(in);
  ASSERT_EQ(g.vertex_count(), 3u);
  EXPECT_NE(g.find_edge(0, 1), kNoEdge);
  EXPECT_EQ(g.weight(g.find_edge(1, 2)), 2 * kMilli);
}

TEST(Graph, Components) {
  std::vector<EdgeSpec> specs{{0, 1, 1}, {2, 3, 1}};
  auto comp = connected_components(Graph::from_edges(5, specs));
  EXPECT_EQ(comp[0], comp[1]);
  EXPECT_EQ(comp[2], comp[3]);
  EXPECT_NE(comp[0], comp[2]);
  EXPECT_NE(comp[4], comp[0]);
}

TEST(ShortestPath, MatchesReferenceDijkstra) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Graph g = oracle::random_graph(40, 30, seed);
    auto cost = [&](EdgeId e) { return g.weight(e); };
    for (VertexId t = 1; t < 40; t += 7) {
      auto p = shortest_path(g, cost, 0, t);
      ASSERT_TRUE(p);
      EXPECT_EQ(p->distance, oracle::reference_distance(g, 0, t, [](EdgeId) { return true; }));
      EXPECT_EQ(path_distance(g, p->vertices), p->distance);
    }
  }
}

TEST(Yen, MatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Graph g = oracle::random_graph(10, 8, seed, 5);
    auto all = oracle::all_simple_paths(g, 0, 9);
    auto got = yen_ksp(g, 0, 9, 12);
    ASSERT_EQ(got.size(), std::min<std::size_t>(12, all.size())) << "seed " << seed;
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i], all[i]) << "seed " << seed << " rank " << i;
  }
}

TEST(Yen, UnreachableAndZeroK) {
  std::vector<EdgeSpec> specs{{0, 1, 1}};
  Graph g = Graph::from_edges(3, specs);
  EXPECT_TRUE(yen_ksp(g, 0, 2, 3).empty());
  EXPECT_THROW(yen_ksp(g, 0, 1, 0), ParameterError);
}
