#include <gtest/gtest.h>

#include <random>

#include "kspdg/dtlp_index.hpp"
#include "kspdg/shortest_path.hpp"
#include "kspdg/workload.hpp"
#include "test_support.hpp"

using namespace kspdg;

TEST(Skeleton, MinRuleIgnoresOrder) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<VertexId> v(0, 5);
  std::uniform_int_distribution<SubgraphId> sg(0, 3);
  std::uniform_int_distribution<Weight> w(1, 50);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LbdUpdate> ups;
    for (int i = 0; i < 30; ++i) {
      VertexId a = v(rng), b = v(rng);
      if (a != b) ups.push_back({0, VertexPair(a, b), sg(rng), w(rng)});
    }
    // Only the last write per (pair, sg) counts; keep the final values in
    // both orders by replaying last writes after a shuffle.
    SkeletonGraph in_order, shuffled;
    for (const auto& u : ups) in_order.apply(u);
    std::map<std::pair<VertexPair, SubgraphId>, Weight> last;
    for (const auto& u : ups) last[{u.pair, u.sg}] = u.lbd;
    auto copy = ups;
    std::shuffle(copy.begin(), copy.end(), rng);
    for (const auto& u : copy) shuffled.apply(u);
    for (const auto& [key, lbd] : last) shuffled.apply_lbd_update(key.first, key.second, lbd);
    EXPECT_EQ(in_order, shuffled);
    for (const auto& [pair, e] : in_order.edges()) {
      Weight m = kInfinity;
      for (auto [id, x] : e.contributions) m = std::min(m, x);
      EXPECT_EQ(e.weight, m);
    }
  }
}

TEST(Skeleton, ReplaceRuleCanOverEstimate) {
  SkeletonGraph min_rule, replace(SkeletonUpdateRule::kReplaceOrMin);
  VertexPair p(1, 2);
  for (auto* g : {&min_rule, &replace}) {
    g->apply_lbd_update(p, 0, 5);
    g->apply_lbd_update(p, 1, 7);
    g->apply_lbd_update(p, 0, 9);
  }
  EXPECT_EQ(min_rule.find(p)->weight, 7);
  EXPECT_EQ(replace.find(p)->weight, 9);
}

TEST(Skeleton, AttachAndReleaseLeaveNoTrace) {
  SkeletonGraph g;
  g.apply_lbd_update(VertexPair(1, 2), 0, 4);
  g.apply_lbd_update(VertexPair(2, 3), 1, 6);
  SkeletonGraph before = g;
  std::vector<std::pair<VertexId, Weight>> edges{{1, 3}, {2, 1}, {3, kInfinity}};
  auto h = g.attach_query_vertex(9, edges);
  EXPECT_TRUE(g.contains(9));
  SkeletonView view = g.view();
  EXPECT_EQ(view.vertex_count(), 4u);
  EXPECT_EQ(view.edge_count(), 4u);  // two persistent, two finite attachments
  EXPECT_EQ(g.attach_query_vertex(2, edges), 0u);
  g.release(h);
  EXPECT_FALSE(g.contains(9));
  EXPECT_EQ(g, before);
}

TEST(SkeletonView, RaiseAndFilter) {
  SkeletonGraph g;
  g.apply_lbd_update(VertexPair(10, 20), 0, 4);
  g.apply_lbd_update(VertexPair(20, 30), 0, 6);
  SkeletonView v = g.view();
  VertexId a = v.local_of(10), b = v.local_of(20);
  EXPECT_FALSE(v.raise_weight(10, 20, 3));
  EXPECT_TRUE(v.raise_weight(10, 20, 8));
  EXPECT_EQ(v.weight(v.neighbors(a)[0].edge), 8);
  EXPECT_TRUE(v.raise_weight(20, 10, kInfinity));
  EXPECT_TRUE(v.neighbors(a).empty());
  EXPECT_EQ(v.neighbors(b).size(), 1u);
  SkeletonView f = g.view().filtered([](VertexId x, VertexId y) { return x != 30 && y != 30; });
  EXPECT_EQ(f.neighbors(f.local_of(20)).size(), 1u);
  EXPECT_TRUE(f.neighbors(f.local_of(30)).empty());
  EXPECT_EQ(v.local_of(15), kNoVertex);
}

TEST(Skeleton, DistancesNeverExceedGraphDistances) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    Graph g = random_road_graph(180, seed);
    DtlpOptions opt;
    opt.z = 25;
    opt.xi = 3;
    DtlpIndex idx(g, opt);
    DynamicsConfig dc;
    dc.seed = seed;
    dc.snapshots = 3;
    for (const auto& step : group_trace(generate_weight_stream(g, dc))) idx.apply_batch(step.batch);
    SkeletonView view = idx.skeleton().view();
    auto bv = idx.boundary_vertices();
    auto cost = [&](EdgeId e) { return idx.graph().weight(e); };
    for (std::size_t i = 0; i < bv.size(); i += 5) {
      auto real = distances_from(idx.graph(), cost, bv[i]);
      auto sk = distances_from(view, view.weight_fn(), view.local_of(bv[i]));
      for (VertexId b : bv) EXPECT_LE(sk[view.local_of(b)], real[b]) << "seed " << seed;
    }
  }
}

TEST(Skeleton, IncrementalMatchesRebuild) {
  Graph g = random_road_graph(250, 3);
  DtlpOptions opt;
  opt.z = 40;
  opt.xi = 4;
  DtlpIndex idx(g, opt);
  DynamicsConfig dc;
  dc.seed = 12;
  dc.snapshots = 10;
  for (const auto& step : group_trace(generate_weight_stream(g, dc))) {
    idx.apply_batch(step.batch);
    DtlpIndex fresh(idx.graph(), opt);
    ASSERT_EQ(idx.table(), fresh.table());
    ASSERT_EQ(idx.skeleton(), fresh.skeleton());
  }
}

TEST(Skeleton, CsvSkipsInfiniteEdges) {
  SkeletonGraph g;
  g.apply_lbd_update(VertexPair(1, 2), 3, 1500);
  g.apply_lbd_update(VertexPair(2, 4), 0, kInfinity);
  std::ostringstream out;
  g.dump_csv(out);
  EXPECT_EQ(out.str(), "u,v,weight,argmin_sg\n1,2,1.500,3\n");
}
