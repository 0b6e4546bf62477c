#pragma once

#include <concepts>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "kspdg/graph.hpp"

namespace kspdg {

/// Anything with dense vertex ids and an arc list per vertex: Graph,
/// SubgraphTopology and the skeleton's CSR view all qualify.
template <class G>
concept GraphView = requires(const G& g, VertexId v) {
  { g.vertex_count() } -> std::convertible_to<std::size_t>;
  { g.edge_count() } -> std::convertible_to<std::size_t>;
  { g.neighbors(v) } -> std::convertible_to<std::span<const Arc>>;
};

/// Vertex/edge exclusion masks, reset in O(1) by bumping an epoch.
class Blocked {
 public:
  void reset(std::size_t vertices, std::size_t edges) {
    if (vertex_.size() != vertices) vertex_.assign(vertices, 0);
    if (edge_.size() != edges) edge_.assign(edges, 0);
    if (++epoch_ == 0) {
      std::fill(vertex_.begin(), vertex_.end(), 0);
      std::fill(edge_.begin(), edge_.end(), 0);
      epoch_ = 1;
    }
  }
  void block_vertex(VertexId v) { vertex_[v] = epoch_; }
  void block_edge(EdgeId e) { edge_[e] = epoch_; }
  bool vertex(VertexId v) const { return vertex_[v] == epoch_; }
  bool edge(EdgeId e) const { return edge_[e] == epoch_; }

 private:
  std::vector<std::uint32_t> vertex_, edge_;
  std::uint32_t epoch_ = 0;
};

/// Reusable distance array with sparse reset.
struct SearchWorkspace {
  std::vector<Weight> dist;
  std::vector<VertexId> touched;

  void prepare(std::size_t n) {
    if (dist.size() != n) {
      dist.assign(n, kInfinity);
      touched.clear();
      return;
    }
    for (VertexId v : touched) dist[v] = kInfinity;
    touched.clear();
  }
  void set(VertexId v, Weight d) {
    if (dist[v] == kInfinity) touched.push_back(v);
    dist[v] = d;
  }
};

/// Dijkstra from `source` over unblocked vertices/edges. Stops once `stop_at`
/// is settled (pass kNoVertex for a full tree). Distances land in `ws.dist`.
template <GraphView G, class Cost>
void dijkstra(const G& g, const Cost& cost, VertexId source, const Blocked* blocked, VertexId stop_at,
              SearchWorkspace& ws) {
  ws.prepare(g.vertex_count());
  using Item = std::pair<Weight, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  ws.set(source, 0);
  pq.push({0, source});
  while (!pq.empty()) {
    auto [d, x] = pq.top();
    pq.pop();
    if (d != ws.dist[x]) continue;
    if (x == stop_at) return;
    for (const Arc& a : g.neighbors(x)) {
      if (blocked && (blocked->edge(a.edge) || blocked->vertex(a.to))) continue;
      Weight nd = d + cost(a.edge);
      if (nd < ws.dist[a.to]) {
        ws.set(a.to, nd);
        pq.push({nd, a.to});
      }
    }
  }
}

/// Lexicographically smallest among the shortest `from`→`to` paths, given
/// distances to `to` that are exact for every vertex closer to `to` than
/// `from` (e.g. a reverse Dijkstra stopped at `from`).
template <GraphView G, class Cost>
std::optional<Path> greedy_lex_path(const G& g, const Cost& cost, VertexId from, VertexId to,
                                    const std::vector<Weight>& dist_to, const Blocked* blocked) {
  if (dist_to[from] >= kInfinity) return std::nullopt;
  Path p;
  p.distance = dist_to[from];
  p.vertices.push_back(from);
  VertexId x = from;
  while (x != to) {
    VertexId next = kNoVertex;
    for (const Arc& a : g.neighbors(x)) {
      if (blocked && (blocked->edge(a.edge) || blocked->vertex(a.to))) continue;
      if (dist_to[a.to] < kInfinity && dist_to[a.to] + cost(a.edge) == dist_to[x]) {
        next = a.to;
        break;  // arcs are sorted by neighbour id
      }
    }
    if (next == kNoVertex) return std::nullopt;
    p.vertices.push_back(next);
    x = next;
  }
  return p;
}

/// Shortest path with lexicographic tie-break, or nullopt if unreachable.
template <GraphView G, class Cost>
std::optional<Path> shortest_path(const G& g, const Cost& cost, VertexId s, VertexId t,
                                  const Blocked* blocked = nullptr) {
  SearchWorkspace ws;
  dijkstra(g, cost, t, blocked, s, ws);
  return greedy_lex_path(g, cost, s, t, ws.dist, blocked);
}

/// Full single-source distances.
template <GraphView G, class Cost>
std::vector<Weight> distances_from(const G& g, const Cost& cost, VertexId s) {
  SearchWorkspace ws;
  dijkstra(g, cost, s, nullptr, kNoVertex, ws);
  return ws.dist;
}

}  // namespace kspdg
