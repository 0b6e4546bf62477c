#include <gtest/gtest.h>

#include <random>

#include "kspdg/dtlp_index.hpp"
#include "kspdg/workload.hpp"
#include "test_support.hpp"

using namespace kspdg;

namespace {

/// Lists for `segments` segments between anchors 100, 101, ...; interior
/// vertices come from a small pool so that some joins repeat a vertex.
std::vector<SegmentList> random_lists(std::size_t segments, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 5), len(0, 2);
  std::uniform_int_distribution<VertexId> pool(0, 5);
  std::uniform_int_distribution<Weight> w(1, 6);
  std::vector<SegmentList> out(segments);
  for (std::size_t j = 0; j < segments; ++j) {
    std::set<std::vector<VertexId>> seen;
    for (int i = count(rng); i > 0; --i) {
      Path p;
      p.vertices.push_back(static_cast<VertexId>(100 + j));
      for (int x = len(rng); x > 0; --x) p.vertices.push_back(pool(rng));
      p.vertices.push_back(static_cast<VertexId>(101 + j));
      if (!is_simple(p.vertices) || !seen.insert(p.vertices).second) continue;
      p.distance = w(rng);
      out[j].paths.push_back(p);
    }
    std::sort(out[j].paths.begin(), out[j].paths.end(), path_less);
    out[j].exhausted = true;
  }
  return out;
}

std::vector<Path> brute_join(const std::vector<SegmentList>& lists) {
  std::vector<Path> out{Path{}};
  for (std::size_t j = 0; j < lists.size(); ++j) {
    std::vector<Path> next;
    for (const auto& head : out)
      for (const auto& p : lists[j].paths) {
        Path q = head;
        q.vertices.insert(q.vertices.end(), p.vertices.begin() + (j == 0 ? 0 : 1), p.vertices.end());
        q.distance += p.distance;
        next.push_back(q);
      }
    out = std::move(next);
  }
  std::erase_if(out, [](const Path& p) { return !is_simple(p.vertices); });
  std::sort(out.begin(), out.end(), path_less);
  return out;
}

/// Drains a cursor, growing the hidden lists one path at a time on request.
std::vector<Path> drain(const std::vector<SegmentList>& full, bool grow) {
  std::vector<SegmentList> shown = full;
  if (grow)
    for (auto& l : shown) {
      l.paths.resize(1);
      l.exhausted = l.paths.size() == full[&l - shown.data()].paths.size();
    }
  std::vector<const SegmentList*> ptrs;
  for (const auto& l : shown) ptrs.push_back(&l);
  JoinCursor cur(ptrs);
  std::vector<Path> out;
  Weight last = 0;
  while (cur.bound() < kInfinity) {
    EXPECT_GE(cur.bound(), last);
    auto r = cur.advance();
    if (auto* p = std::get_if<Path>(&r)) {
      EXPECT_GE(p->distance, last);
      last = p->distance;
      out.push_back(*p);
    } else if (auto* more = std::get_if<JoinNeedsMore>(&r)) {
      auto& l = shown[more->segment];
      const auto& src = full[more->segment].paths;
      l.paths.push_back(src[l.paths.size()]);
      l.exhausted = l.paths.size() == src.size();
      cur.extended(more->segment);
    }
  }
  std::sort(out.begin(), out.end(), path_less);
  return out;
}

}  // namespace

TEST(JoinCursor, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    auto lists = random_lists(1 + trial % 4, rng);
    bool any_empty = false;
    for (const auto& l : lists) any_empty = any_empty || l.paths.empty();
    if (any_empty) continue;
    auto expect = brute_join(lists);
    EXPECT_EQ(drain(lists, false), expect) << "trial " << trial;
    EXPECT_EQ(drain(lists, true), expect) << "trial " << trial;
  }
}

TEST(BestFirstJoin, TopKAndRequests) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    auto lists = random_lists(3, rng);
    bool any_empty = false;
    for (const auto& l : lists) any_empty = any_empty || l.paths.empty();
    if (any_empty) continue;
    auto expect = brute_join(lists);
    for (std::size_t k : {1u, 3u, 10u}) {
      auto got = best_first_join(lists, k);
      ASSERT_TRUE(std::holds_alternative<std::vector<Path>>(got));
      auto paths = std::get<std::vector<Path>>(got);
      std::vector<Path> want(expect.begin(), expect.begin() + static_cast<std::ptrdiff_t>(std::min(k, expect.size())));
      EXPECT_EQ(oracle::distances(paths), oracle::distances(want));
    }
  }
  std::vector<SegmentList> open(2);
  open[0].paths.push_back({{100, 101}, 1});
  EXPECT_EQ(std::get<JoinNeedsMore>(best_first_join(open, 1)).segment, 1u);
}

TEST(CandidateList, KeepsBestDistinct) {
  CandidateList l(2);
  EXPECT_TRUE(l.insert({{0, 2}, 5}));
  EXPECT_FALSE(l.insert({{0, 2}, 5}));
  EXPECT_TRUE(l.insert({{0, 1, 2}, 7}));
  EXPECT_EQ(l.dist(), 7);
  EXPECT_TRUE(l.insert({{0, 3, 2}, 6}));
  EXPECT_FALSE(l.insert({{0, 4, 2}, 9}));
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l.paths()[1].distance, 6);
}

TEST(BoundarySequence, KeepsEndsAndBoundary) {
  std::vector<EdgeSpec> specs;
  for (VertexId v = 0; v + 1 < 7; ++v) specs.push_back({v, v + 1, 1});
  Graph g = Graph::from_edges(7, specs);
  Partition part = partition_bfs(g, 3);  // boundary vertices 2 and 4
  std::vector<VertexId> p{0, 1, 2, 3, 4, 5, 6};
  EXPECT_EQ(boundary_sequence(p, part), (std::vector<VertexId>{0, 2, 4, 6}));
  std::vector<VertexId> inner{2, 3, 4};
  EXPECT_EQ(boundary_sequence(inner, part), (std::vector<VertexId>{2, 4}));
}

TEST(Pyen, MatchesYenOnSubgraphs) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    Graph g = random_road_graph(160, seed);
    Partition part = partition_bfs(g, 40);
    for (SubgraphId id = 0; id < part.subgraph_count(); ++id) {
      Subgraph sg(part.subgraph_ptr(id), g);
      const auto& topo = sg.topology();
      if (topo.vertex_count() < 2) continue;
      VertexId s = topo.global_of(0), t = topo.global_of(static_cast<VertexId>(topo.vertex_count() - 1));
      for (std::size_t k : {1u, 4u, 12u}) {
        auto want = yen_ksp(topo, sg.weight_fn(), topo.local_of(s), topo.local_of(t), k);
        for (auto& p : want) p.vertices = sg.to_global(p.vertices);
        for (bool prune : {true, false})
          for (std::size_t threads : {1u, 3u}) {
            PyenOptions opt{prune, threads};
            EXPECT_EQ(pyen_ksp(sg, s, t, k, opt).paths, want) << "seed " << seed << " sg " << id << " k " << k;
          }
      }
    }
  }
}

TEST(Pyen, PathGraphAndReuse) {
  std::vector<EdgeSpec> line{{0, 1, 1}, {1, 2, 1}};
  Graph g = Graph::from_edges(3, line);
  Partition part = partition_bfs(g, 3);
  Subgraph sg(part.subgraph_ptr(0), g);
  EXPECT_EQ(pyen_ksp(sg, 0, 2, 5).paths.size(), 1u);

  // second path 0-3-1-2 shares the suffix 1-2 of the first
  std::vector<EdgeSpec> specs{{0, 1, 1}, {1, 2, 1}, {0, 3, 1}, {3, 1, 1}};
  Graph h = Graph::from_edges(4, specs);
  Partition hp = partition_bfs(h, 4);
  Subgraph hs(hp.subgraph_ptr(0), h);
  auto res = pyen_ksp(hs, 0, 2, 2);
  ASSERT_EQ(res.paths.size(), 2u);
  EXPECT_EQ(res.paths[1].vertices, (std::vector<VertexId>{0, 3, 1, 2}));
  EXPECT_GT(res.stats.reuse_hits, 0u);
}

TEST(Pyen, ForbiddenVertices) {
  std::vector<EdgeSpec> specs{{0, 1, 1}, {1, 2, 1}, {0, 3, 5}, {3, 2, 5}};
  Graph g = Graph::from_edges(4, specs);
  Partition part = partition_bfs(g, 4);
  Subgraph sg(part.subgraph_ptr(0), g);
  std::vector<VertexId> forbid{1};
  auto res = pyen_ksp(sg, 0, 2, 3, {}, forbid);
  ASSERT_EQ(res.paths.size(), 1u);
  EXPECT_EQ(res.paths[0].vertices, (std::vector<VertexId>{0, 3, 2}));
}

TEST(KspDg, MatchesYenOnGraph) {
  std::mt19937_64 rng(99);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Graph g = seed % 2 ? random_road_graph(60 + seed * 3, seed) : oracle::random_graph(60 + seed * 3, 40, seed);
    DtlpOptions opt;
    opt.z = 8 + seed % 20;
    opt.xi = 2 + seed % 6;
    DtlpIndex idx(g, opt);
    if (seed % 3 == 0) {
      DynamicsConfig dc;
      dc.seed = seed;
      idx.apply_batch(group_trace(generate_weight_stream(g, dc))[0].batch);
    }
    std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(g.vertex_count() - 1));
    for (std::size_t k : {1u, 2u, 5u, 10u}) {
      VertexId s = pick(rng), t = pick(rng);
      if (s == t) continue;
      auto want = yen_ksp(idx.graph(), s, t, k);
      auto got = idx.query(s, t, k);
      EXPECT_EQ(got.paths, want) << "seed " << seed << " " << s << "->" << t << " k " << k;
      EXPECT_EQ(got.stats.lemma_violations, 0u);
      ASSERT_FALSE(got.reference_distances.empty());
      EXPECT_LE(got.reference_distances[0], want[0].distance);
      EXPECT_TRUE(std::is_sorted(got.reference_distances.begin(), got.reference_distances.end()));
      for (const auto& p : got.paths) EXPECT_EQ(path_distance(idx.graph(), p.vertices), p.distance);
    }
  }
}

TEST(KspDg, AdjacentPairStopsAfterOneReference) {
  // 0-1 direct (1) is strictly shorter than anything else
  std::vector<EdgeSpec> specs{{0, 1, 1}, {1, 2, 10}, {2, 3, 10}, {3, 0, 10}, {2, 4, 10}, {4, 5, 10}, {5, 3, 10}};
  Graph g = Graph::from_edges(6, specs);
  DtlpOptions opt;
  opt.z = 3;
  opt.xi = 2;
  DtlpIndex idx(g, opt);
  auto r = idx.query(0, 1, 1);
  ASSERT_EQ(r.paths.size(), 1u);
  EXPECT_EQ(r.paths[0].vertices, (std::vector<VertexId>{0, 1}));
  EXPECT_EQ(r.stats.iterations, 1u);
}

TEST(KspDg, IsolatedEndpoint) {
  std::vector<EdgeSpec> specs{{0, 1, 1}, {1, 2, 1}, {2, 3, 1}};
  Graph g = Graph::from_edges(5, specs);
  DtlpOptions opt;
  opt.z = 2;
  DtlpIndex idx(g, opt);
  auto r = idx.query(0, 4, 3);
  EXPECT_TRUE(r.unreachable);
  EXPECT_TRUE(r.paths.empty());
  EXPECT_THROW(idx.query(0, 9, 1), LookupError);
}

TEST(KspDg, FewerPathsThanK) {
  Graph g = random_road_graph(80, 6, 1);
  DtlpOptions opt;
  opt.z = 12;
  DtlpIndex idx(g, opt);
  for (VertexId t = 1; t < 80; t += 9) {
    auto want = yen_ksp(idx.graph(), 0, t, 30);
    EXPECT_EQ(idx.query(0, t, 30).paths, want) << "t " << t;
  }
}

TEST(KspDg, ReferencesRefineToTheirBoundarySequence) {
  Graph g = random_road_graph(150, 13);
  DtlpOptions opt;
  opt.z = 20;
  DtlpIndex idx(g, opt);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<VertexId> pick(0, 149);
  for (int q = 0; q < 20; ++q) {
    VertexId s = pick(rng), t = pick(rng);
    if (s == t) continue;
    auto r = idx.query(s, t, 6);
    for (const auto& p : r.paths) {
      auto seq = boundary_sequence(p.vertices, idx.partition());
      EXPECT_EQ(seq.front(), s);
      EXPECT_EQ(seq.back(), t);
      for (std::size_t i = 1; i + 1 < seq.size(); ++i) EXPECT_TRUE(idx.partition().is_boundary(seq[i]));
    }
  }
}
