#pragma once

#include <optional>
#include <set>
#include <vector>

#include "kspdg/shortest_path.hpp"

namespace kspdg {

/// Classic Yen enumeration of loopless s→t paths in ascending
/// (distance, vertex sequence) order. Resumable: each next() yields the
/// following path. Spur paths are the lexicographically smallest shortest
/// paths of their residual graph, which makes the order exact under ties.
///
/// Residual rules at deviation vertex v_l of the last accepted path: remove
/// the root prefix vertices before v_l and, for every accepted path sharing
/// the root prefix, its edge leaving v_l.
template <GraphView G, class Cost>
class YenEnumerator {
 public:
  YenEnumerator(const G& g, Cost cost, VertexId s, VertexId t) : g_(&g), cost_(std::move(cost)), s_(s), t_(t) {}

  std::optional<Path> next() {
    if (peeked_) {
      auto p = std::move(peeked_);
      peeked_.reset();
      return p;
    }
    return advance();
  }

  /// Distance of the path next() would return, without consuming it.
  std::optional<Weight> peek_distance() {
    if (!peeked_) peeked_ = advance();
    return peeked_ ? std::optional<Weight>(peeked_->distance) : std::nullopt;
  }

  std::size_t spur_searches() const { return spur_searches_; }

 private:
  std::optional<Path> advance() {
    if (done_) return std::nullopt;
    if (accepted_.empty()) {
      if (s_ == t_) {
        done_ = true;
        return Path{{s_}, 0};
      }
      auto first = shortest_path(*g_, cost_, s_, t_);
      if (!first) {
        done_ = true;
        return std::nullopt;
      }
      seen_.insert(first->vertices);
      accepted_.push_back(*first);
      return first;
    }
    expand(accepted_.back());
    if (candidates_.empty()) {
      done_ = true;
      return std::nullopt;
    }
    Path best = *candidates_.begin();
    candidates_.erase(candidates_.begin());
    accepted_.push_back(best);
    return best;
  }

  void expand(const Path& p) {
    const std::size_t edges = g_->edge_count();
    Weight root_dist = 0;
    for (std::size_t l = 0; l + 1 < p.vertices.size(); ++l) {
      blocked_.reset(g_->vertex_count(), edges);
      for (std::size_t i = 0; i < l; ++i) blocked_.block_vertex(p.vertices[i]);
      for (const Path& q : accepted_) {
        if (q.vertices.size() > l + 1 && std::equal(p.vertices.begin(), p.vertices.begin() + l + 1, q.vertices.begin()))
          block_edge_between(q.vertices[l], q.vertices[l + 1]);
      }
      ++spur_searches_;
      dijkstra(*g_, cost_, t_, &blocked_, p.vertices[l], ws_);
      if (auto spur = greedy_lex_path(*g_, cost_, p.vertices[l], t_, ws_.dist, &blocked_)) {
        Path cand;
        cand.vertices.assign(p.vertices.begin(), p.vertices.begin() + l);
        cand.vertices.insert(cand.vertices.end(), spur->vertices.begin(), spur->vertices.end());
        cand.distance = root_dist + spur->distance;
        if (seen_.insert(cand.vertices).second) candidates_.insert(std::move(cand));
      }
      root_dist += arc_cost(p.vertices[l], p.vertices[l + 1]);
    }
  }

  void block_edge_between(VertexId a, VertexId b) {
    for (const Arc& arc : g_->neighbors(a))
      if (arc.to == b) blocked_.block_edge(arc.edge);
  }

  Weight arc_cost(VertexId a, VertexId b) const {
    Weight best = kInfinity;
    for (const Arc& arc : g_->neighbors(a))
      if (arc.to == b) best = std::min(best, static_cast<Weight>(cost_(arc.edge)));
    return best;
  }

  struct Less {
    bool operator()(const Path& a, const Path& b) const { return path_less(a, b); }
  };

  const G* g_;
  Cost cost_;
  VertexId s_, t_;
  bool done_ = false;
  std::vector<Path> accepted_;
  std::set<Path, Less> candidates_;
  std::set<std::vector<VertexId>> seen_;
  std::optional<Path> peeked_;
  Blocked blocked_;
  SearchWorkspace ws_;
  std::size_t spur_searches_ = 0;
};

template <GraphView G, class Cost>
YenEnumerator(const G&, Cost, VertexId, VertexId) -> YenEnumerator<G, Cost>;

/// The k loopless shortest paths between s and t, ascending by
/// (distance, vertex sequence).
template <GraphView G, class Cost>
std::vector<Path> yen_ksp(const G& g, const Cost& cost, VertexId s, VertexId t, std::size_t k) {
  if (k == 0) throw ParameterError("k must be at least 1");
  YenEnumerator<G, Cost> yen(g, cost, s, t);
  std::vector<Path> out;
  while (out.size() < k) {
    auto p = yen.next();
    if (!p) break;
    out.push_back(std::move(*p));
  }
  return out;
}

/// Yen on a Graph under its current weights.
inline std::vector<Path> yen_ksp(const Graph& g, VertexId s, VertexId t, std::size_t k) {
  return yen_ksp(g, [&g](EdgeId e) { return g.weight(e); }, s, t, k);
}

}  // namespace kspdg
