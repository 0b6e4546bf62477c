#include <gtest/gtest.h>

#include <set>

#include "kspdg/partition.hpp"
#include "test_support.hpp"

using namespace kspdg;

namespace {

void check_invariants(const Graph& g, const Partition& p, std::size_t z) {
  std::vector<std::size_t> owners(g.edge_count(), 0);
  std::vector<std::set<SubgraphId>> seen(g.vertex_count());
  for (SubgraphId id = 0; id < p.subgraph_count(); ++id) {
    const auto& sg = p.subgraph(id);
    EXPECT_LE(sg.vertex_count(), z);
    for (VertexId l = 0; l < sg.vertex_count(); ++l) seen[sg.global_of(l)].insert(id);
    for (const auto& e : sg.edges()) {
      ++owners[e.global];
      EXPECT_EQ(p.edge_owner(e.global), id);
      EXPECT_TRUE(sg.contains(g.edge(e.global).u));
      EXPECT_TRUE(sg.contains(g.edge(e.global).v));
    }
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) EXPECT_EQ(owners[e], 1u) << "edge " << e;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    ASSERT_FALSE(seen[v].empty()) << "vertex " << v << " uncovered";
    std::set<SubgraphId> listed(p.subgraphs_of(v).begin(), p.subgraphs_of(v).end());
    EXPECT_EQ(listed, seen[v]);
    EXPECT_EQ(p.is_boundary(v), seen[v].size() >= 2);
    for (SubgraphId id : seen[v]) EXPECT_EQ(p.subgraph(id).is_boundary(v), p.is_boundary(v));
  }
}

}  // namespace

TEST(Partition, InvariantsOnRandomGraphs) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Graph g = seed % 2 ? oracle::random_graph(120, 90, seed) : random_road_graph(150, seed);
    for (std::size_t z : {2u, 5u, 17u, 60u}) {
      SCOPED_TRACE("seed " + std::to_string(seed) + " z " + std::to_string(z));
      check_invariants(g, partition_bfs(g, z), z);
    }
  }
}

TEST(Partition, SingleSubgraphWhenLarge) {
  Graph g = oracle::random_graph(20, 10, 3);
  Partition p = partition_bfs(g, 100);
  EXPECT_EQ(p.subgraph_count(), 1u);
  EXPECT_EQ(p.boundary_vertex_count(), 0u);
  EXPECT_TRUE(boundary_pairs(p, 0).empty());
}

TEST(Partition, PathGraphSplits) {
  std::vector<EdgeSpec> specs;
  for (VertexId v = 0; v + 1 < 7; ++v) specs.push_back({v, v + 1, 1});
  Graph g = Graph::from_edges(7, specs);
  Partition p = partition_bfs(g, 3);
  check_invariants(g, p, 3);
  // 0-1-2 | 2-3-4 | 4-5-6
  EXPECT_EQ(p.subgraph_count(), 3u);
  EXPECT_TRUE(p.is_boundary(2));
  EXPECT_TRUE(p.is_boundary(4));
  EXPECT_EQ(p.boundary_vertex_count(), 2u);
  EXPECT_EQ(p.common_subgraphs(2, 4), std::vector<SubgraphId>{1});
}

TEST(Partition, BoundaryPairsAreLexicographic) {
  Graph g = random_road_graph(200, 4);
  Partition p = partition_bfs(g, 30);
  for (SubgraphId id = 0; id < p.subgraph_count(); ++id) {
    auto pairs = boundary_pairs(p, id);
    auto b = p.subgraph(id).boundary_vertices();
    EXPECT_EQ(pairs.size(), b.size() * (b.empty() ? 0 : b.size() - 1) / 2);
    EXPECT_TRUE(std::is_sorted(pairs.begin(), pairs.end()));
    for (auto [a, c] : pairs) EXPECT_LT(a, c);
  }
  EXPECT_THROW(boundary_pairs(p, static_cast<SubgraphId>(p.subgraph_count())), LookupError);
}

TEST(Partition, RejectsTinyBound) {
  Graph g = oracle::random_graph(5, 2, 1);
  EXPECT_THROW(partition_bfs(g, 1), ParameterError);
}

TEST(Partition, CsvDump) {
  std::vector<EdgeSpec> specs{{0, 1, 1}, {1, 2, 1}};
  Graph g = Graph::from_edges(3, specs);
  std::ostringstream out;
  dump_partition_csv(partition_bfs(g, 2), out);
  EXPECT_EQ(out.str(), "subgraph_id,vertex_id,is_boundary\n0,0,0\n0,1,1\n1,1,1\n1,2,0\n");
}
