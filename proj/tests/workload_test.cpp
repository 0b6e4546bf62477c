#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "kspdg/workload.hpp"
#include "test_support.hpp"

using namespace kspdg;

namespace {

/// Graph with exactly `m` edges: a path plus chords.
Graph graph_with_edges(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::set<VertexPair> used;
  std::vector<EdgeSpec> specs;
  std::uniform_int_distribution<VertexId> v(0, static_cast<VertexId>(n - 1));
  std::uniform_int_distribution<Weight> w(1, 100);
  for (VertexId i = 0; i + 1 < n; ++i) {
    used.insert(VertexPair(i, i + 1));
    specs.push_back({i, i + 1, w(rng)});
  }
  while (specs.size() < m) {
    VertexId a = v(rng), b = v(rng);
    if (a != b && used.insert(VertexPair(a, b)).second) specs.push_back({a, b, w(rng)});
  }
  return Graph::from_edges(n, specs);
}

}  // namespace

TEST(WeightStream, HalfTheEdgesPerSnapshot) {
  Graph g = graph_with_edges(300, 1000, 1);
  ASSERT_EQ(g.edge_count(), 1000u);
  DynamicsConfig dc;
  dc.alpha = 0.5;
  dc.tau = 0.5;
  dc.snapshots = 3;
  auto steps = group_trace(generate_weight_stream(g, dc));
  ASSERT_EQ(steps.size(), 3u);
  std::vector<Weight> w(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) w[e] = g.weight(e);
  for (const auto& step : steps) {
    EXPECT_EQ(step.batch.size(), 500u);
    std::set<EdgeId> distinct;
    for (const auto& d : step.batch) {
      distinct.insert(d.edge);
      w[d.edge] += d.delta;
      // anchored at the initial weight: within [0.5, 1.5] * w0
      EXPECT_GE(2 * w[d.edge], g.initial_weight(d.edge) * kMilli - 1);
      EXPECT_LE(2 * w[d.edge], 3 * g.initial_weight(d.edge) * kMilli + 1);
    }
    EXPECT_EQ(distinct.size(), 500u);
  }
}

TEST(WeightStream, DeterministicAndValidated) {
  Graph g = random_road_graph(100, 2);
  DynamicsConfig dc;
  dc.snapshots = 4;
  dc.seed = 77;
  EXPECT_EQ(generate_weight_stream(g, dc), generate_weight_stream(g, dc));
  dc.alpha = 1.5;
  EXPECT_THROW(generate_weight_stream(g, dc), ParameterError);
  dc.alpha = 0.5;
  dc.tau = 1.0;
  EXPECT_THROW(generate_weight_stream(g, dc), ParameterError);
  dc.tau = 0.0;
  for (const auto& ev : generate_weight_stream(g, dc)) EXPECT_EQ(std::get<UpdateEvent>(ev).delta, 0);
}

TEST(Trace, RoundTrip) {
  std::vector<TraceEvent> ev{UpdateEvent{1, 4, -250}, UpdateEvent{1, 7, 1000}, QueryEvent{2, 0, 9, 3},
                             UpdateEvent{5, 4, 250}};
  std::stringstream buf;
  write_trace(buf, ev);
  EXPECT_EQ(parse_trace(buf), ev);
  std::istringstream bad("t=1 teleport 3 4\n");
  EXPECT_THROW(parse_trace(bad), ParseError);
  std::istringstream comments("# header\n\nt=0 query 1 2 1\n");
  EXPECT_EQ(parse_trace(comments).size(), 1u);
}

TEST(Trace, GroupsSameTickUpdates) {
  std::vector<TraceEvent> ev{UpdateEvent{1, 4, 1}, UpdateEvent{1, 7, 1}, QueryEvent{1, 0, 9, 3},
                             UpdateEvent{1, 2, 1}, UpdateEvent{2, 2, 1}};
  auto steps = group_trace(ev);
  ASSERT_EQ(steps.size(), 4u);
  EXPECT_EQ(steps[0].batch.size(), 2u);
  EXPECT_TRUE(steps[1].query);
  EXPECT_EQ(steps[2].batch.size(), 1u);
  EXPECT_EQ(steps[3].tick, 2u);
}

TEST(Queries, ConnectedDistinctPairs) {
  std::vector<EdgeSpec> specs{{0, 1, 1}, {1, 2, 1}, {3, 4, 1}};
  Graph g = Graph::from_edges(5, specs);
  auto comp = connected_components(g);
  auto qs = generate_queries(g, 50, 3, 5);
  ASSERT_EQ(qs.size(), 50u);
  for (const auto& q : qs) {
    EXPECT_NE(q.s, q.t);
    EXPECT_EQ(comp[q.s], comp[q.t]);
    EXPECT_EQ(q.k, 3u);
  }
  std::stringstream buf;
  write_queries_csv(buf, qs);
  auto back = parse_queries_csv(buf);
  ASSERT_EQ(back.size(), qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) EXPECT_EQ(back[i], qs[i]);
  std::istringstream bad("query_id,s,t,k\n0,1,2\n");
  EXPECT_THROW(parse_queries_csv(bad), ParseError);
}

TEST(Config, ParsesKeysAndRejectsUnknown) {
  std::istringstream in("# defaults\nz = 60\nxi=10\nk_default=4 # inline\ntargeted_routing=on\nupdate_rule=replace\n");
  RunConfig c = parse_config(in);
  EXPECT_EQ(c.z, 60u);
  EXPECT_EQ(c.xi, 10u);
  EXPECT_EQ(c.k_default, 4u);
  EXPECT_TRUE(c.targeted_routing);
  EXPECT_EQ(c.update_rule, SkeletonUpdateRule::kReplaceOrMin);
  EXPECT_EQ(c.sim_config().dtlp.z, 60u);
  std::istringstream unknown("zz=1\n");
  EXPECT_THROW(parse_config(unknown), ParseError);
  std::istringstream no_eq("z 5\n");
  EXPECT_THROW(parse_config(no_eq), ParseError);
  std::istringstream neg("xi=-2\n");
  EXPECT_THROW(parse_config(neg), ParseError);
}

TEST(RoadGraph, ConnectedAndSeeded) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Graph g = random_road_graph(300, seed);
    auto comp = connected_components(g);
    EXPECT_TRUE(std::all_of(comp.begin(), comp.end(), [&](auto c) { return c == comp[0]; }));
    EXPECT_EQ(g, random_road_graph(300, seed));
    for (const auto& e : g.edges()) {
      EXPECT_GE(e.initial, 1);
      EXPECT_LE(e.initial, 100);
    }
  }
}

TEST(Replay, RejectsBatchThatWouldGoNonPositive) {
  std::vector<EdgeSpec> specs{{0, 1, 2}, {1, 2, 2}};
  Graph g = Graph::from_edges(3, specs);
  std::vector<TraceEvent> ev{UpdateEvent{1, 0, 500}, UpdateEvent{1, 1, -5000}, QueryEvent{2, 0, 2, 1},
                             UpdateEvent{3, 0, 1000}, QueryEvent{4, 0, 2, 1}};
  std::vector<Weight> seen;
  replay_trace(g, ev, [&](const Graph& cur, const QueryEvent& q) {
    seen.push_back(yen_ksp(cur, q.s, q.t, q.k)[0].distance);
  });
  EXPECT_EQ(seen, (std::vector<Weight>{4000, 5000}));
}
