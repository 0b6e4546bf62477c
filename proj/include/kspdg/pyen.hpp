#pragma once

#include <algorithm>
#include <queue>
#include <set>
#include <span>
#include <thread>
#include <vector>

#include "kspdg/subgraph.hpp"
#include "kspdg/yen.hpp"

namespace kspdg {

struct PyenOptions {
  bool prune = true;
  std::size_t threads = 1;
};

struct PyenStats {
  std::size_t spur_searches = 0;
  std::size_t reuse_hits = 0;
  std::size_t pruned_tasks = 0;

  PyenStats& operator+=(const PyenStats& o) {
    spur_searches += o.spur_searches;
    reuse_hits += o.reuse_hits;
    pruned_tasks += o.pruned_tasks;
    return *this;
  }
};

struct PyenResult {
  std::vector<Path> paths;
  PyenStats stats;
};

/// Distance to t and next hop toward t for every vertex, from one reverse
/// shortest-path tree over the search graph. Next hops pick the smallest
/// neighbour id among tight arcs.
struct ReuseIndex {
  std::vector<Weight> dist;
  std::vector<VertexId> next;
  std::vector<EdgeId> next_edge;
};

namespace detail {

template <GraphView G, class Cost>
ReuseIndex build_reuse_index(const G& g, const Cost& cost, VertexId t, const Blocked* forbidden) {
  SearchWorkspace ws;
  dijkstra(g, cost, t, forbidden, kNoVertex, ws);
  ReuseIndex r;
  r.dist = std::move(ws.dist);
  r.next.assign(g.vertex_count(), kNoVertex);
  r.next_edge.assign(g.vertex_count(), kNoEdge);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (v == t || r.dist[v] >= kInfinity) continue;
    for (const Arc& a : g.neighbors(v)) {
      if (forbidden && (forbidden->vertex(a.to) || forbidden->edge(a.edge))) continue;
      if (r.dist[a.to] < kInfinity && r.dist[a.to] + cost(a.edge) == r.dist[v]) {
        r.next[v] = a.to;
        r.next_edge[v] = a.edge;
        break;
      }
    }
  }
  return r;
}

/// Per-thread state for spur searches.
struct SpurWorkspace {
  std::vector<Weight> g;
  std::vector<VertexId> parent;
  std::vector<VertexId> touched;
  Blocked blocked;

  void prepare(std::size_t n) {
    if (g.size() != n) {
      g.assign(n, kInfinity);
      parent.assign(n, kNoVertex);
      touched.clear();
      return;
    }
    for (VertexId v : touched) {
      g[v] = kInfinity;
      parent[v] = kNoVertex;
    }
    touched.clear();
  }
};

struct SpurTask {
  std::size_t l = 0;
  Weight root_dist = 0;
  std::optional<Path> candidate;
  PyenStats stats;
};

}  // namespace detail

/// Yen-order k loopless shortest paths using a reuse index and pruned,
/// goal-directed spur searches. Returns the same list as yen_ksp. Vertices
/// in `forbidden` are removed from the graph for the whole search.
template <GraphView G, class Cost>
PyenResult pyen_ksp(const G& g, const Cost& cost, VertexId s, VertexId t, std::size_t k,
                    const PyenOptions& opt = {}, std::span<const VertexId> forbidden = {}) {
  if (k == 0) throw ParameterError("k must be at least 1");
  PyenResult res;
  const std::size_t n = g.vertex_count();
  Blocked base;
  base.reset(n, g.edge_count());
  for (VertexId v : forbidden) base.block_vertex(v);
  if (base.vertex(s) || base.vertex(t)) return res;
  if (s == t) {
    res.paths.push_back({{s}, 0});
    return res;
  }
  const ReuseIndex reuse = detail::build_reuse_index(g, cost, t, &base);
  if (reuse.dist[s] >= kInfinity) return res;

  std::vector<Path> accepted;
  {
    Path p;
    p.distance = reuse.dist[s];
    for (VertexId x = s; x != kNoVertex; x = reuse.next[x]) p.vertices.push_back(x);
    accepted.push_back(std::move(p));
  }
  struct Less {
    bool operator()(const Path& a, const Path& b) const { return path_less(a, b); }
  };
  std::set<Path, Less> candidates;
  std::set<std::vector<VertexId>> seen{accepted[0].vertices};

  auto edge_between = [&](VertexId a, VertexId b) {
    for (const Arc& arc : g.neighbors(a))
      if (arc.to == b) return arc.edge;
    return kNoEdge;
  };

  auto run_task = [&](const Path& p, detail::SpurTask& task, Weight bound, detail::SpurWorkspace& ws) {
    const std::size_t l = task.l;
    const VertexId dev = p.vertices[l];
    if (opt.prune && bound < kInfinity && task.root_dist + reuse.dist[dev] > bound) {
      ++task.stats.pruned_tasks;
      return;
    }
    ++task.stats.spur_searches;
    Blocked& blk = ws.blocked;
    blk.reset(n, g.edge_count());
    for (VertexId v : forbidden) blk.block_vertex(v);
    for (std::size_t i = 0; i < l; ++i) blk.block_vertex(p.vertices[i]);
    for (const Path& q : accepted)
      if (q.vertices.size() > l + 1 && std::equal(p.vertices.begin(), p.vertices.begin() + l + 1, q.vertices.begin()))
        blk.block_edge(edge_between(q.vertices[l], q.vertices[l + 1]));

    auto suffix_ok = [&](VertexId x) {
      for (VertexId y = x; y != t; y = reuse.next[y]) {
        if (blk.edge(reuse.next_edge[y])) return false;
        VertexId z = reuse.next[y];
        if (blk.vertex(z) || z == dev) return false;
      }
      return true;
    };

    ws.prepare(n);
    using Item = std::pair<Weight, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    ws.g[dev] = 0;
    ws.touched.push_back(dev);
    open.push({reuse.dist[dev], dev});
    const Weight limit = (opt.prune && bound < kInfinity) ? bound - task.root_dist : kInfinity;
    while (!open.empty()) {
      auto [f, x] = open.top();
      open.pop();
      if (f != ws.g[x] + reuse.dist[x]) continue;
      if (f > limit) {
        ++task.stats.pruned_tasks;
        return;
      }
      if (x == t || suffix_ok(x)) {
        if (x != t) ++task.stats.reuse_hits;
        std::vector<VertexId> head;
        for (VertexId y = x; y != kNoVertex; y = ws.parent[y]) head.push_back(y);
        Path c;
        c.vertices.assign(p.vertices.begin(), p.vertices.begin() + static_cast<std::ptrdiff_t>(l));
        c.vertices.insert(c.vertices.end(), head.rbegin(), head.rend());
        for (VertexId y = reuse.next[x]; y != kNoVertex; y = reuse.next[y]) c.vertices.push_back(y);
        c.distance = task.root_dist + f;
        task.candidate = std::move(c);
        return;
      }
      for (const Arc& a : g.neighbors(x)) {
        if (blk.edge(a.edge) || blk.vertex(a.to) || reuse.dist[a.to] >= kInfinity) continue;
        Weight ng = ws.g[x] + cost(a.edge);
        if (ng < ws.g[a.to]) {
          if (ws.g[a.to] == kInfinity) ws.touched.push_back(a.to);
          ws.g[a.to] = ng;
          ws.parent[a.to] = x;
          open.push({ng + reuse.dist[a.to], a.to});
        }
      }
    }
  };

  const std::size_t threads = std::max<std::size_t>(1, opt.threads);
  std::vector<detail::SpurWorkspace> workspaces(threads);

  auto expand = [&](const Path& p, Weight bound) {
    std::vector<detail::SpurTask> tasks(p.vertices.size() - 1);
    Weight rd = 0;
    for (std::size_t l = 0; l < tasks.size(); ++l) {
      tasks[l].l = l;
      tasks[l].root_dist = rd;
      rd += cost(edge_between(p.vertices[l], p.vertices[l + 1]));
    }
    if (threads == 1 || tasks.size() < 2) {
      for (auto& task : tasks) run_task(p, task, bound, workspaces[0]);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
          for (std::size_t i = w; i < tasks.size(); i += threads) run_task(p, tasks[i], bound, workspaces[w]);
        });
    }
    for (auto& task : tasks) {
      res.stats += task.stats;
      if (task.candidate && seen.insert(task.candidate->vertices).second) candidates.insert(std::move(*task.candidate));
    }
  };

  // Bound for this round: a spur longer than it cannot reach the answer.
  auto round_bound = [&]() -> Weight {
    if (accepted.size() >= k) return accepted[k - 1].distance;
    std::size_t need = k - accepted.size();
    if (candidates.size() < need) return kInfinity;
    return std::next(candidates.begin(), static_cast<std::ptrdiff_t>(need - 1))->distance;
  };

  // The first path is already the lexicographic minimum of its distance.
  if (k > 1) {
    while (true) {
      expand(accepted.back(), round_bound());
      if (candidates.empty()) break;
      const Path& best = *candidates.begin();
      if (accepted.size() >= k && best.distance > accepted[k - 1].distance) break;
      accepted.push_back(best);
      candidates.erase(candidates.begin());
    }
    // Spur choices among equal-distance paths may differ from Yen's, so the
    // whole tie class at rank k was collected; order it and cut.
    std::sort(accepted.begin(), accepted.end(), path_less);
    if (accepted.size() > k) accepted.resize(k);
  }
  res.paths = std::move(accepted);
  return res;
}

/// PYen between two global vertices of a subgraph under its current weights.
/// Paths come back in global ids; vertices in `forbidden` (global) are
/// avoided.
inline PyenResult pyen_ksp(const Subgraph& sg, VertexId s, VertexId t, std::size_t k, const PyenOptions& opt = {},
                           std::span<const VertexId> forbidden = {}) {
  const auto& topo = sg.topology();
  VertexId ls = topo.local_of(s), lt = topo.local_of(t);
  if (ls == kNoVertex || lt == kNoVertex) throw LookupError("query vertex outside subgraph " + std::to_string(sg.id()));
  std::vector<VertexId> local_forbidden;
  for (VertexId v : forbidden)
    if (VertexId l = topo.local_of(v); l != kNoVertex && v != s && v != t) local_forbidden.push_back(l);
  auto res = pyen_ksp(topo, sg.weight_fn(), ls, lt, k, opt, local_forbidden);
  for (auto& p : res.paths) p.vertices = sg.to_global(p.vertices);
  return res;
}

}  // namespace kspdg
