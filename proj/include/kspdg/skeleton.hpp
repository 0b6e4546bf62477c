#pragma once

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <vector>

#include "kspdg/bounds.hpp"
#include "kspdg/shortest_path.hpp"

namespace kspdg {

/// One lower-bound change as published by a subgraph.
struct LbdUpdate {
  std::uint64_t seq = 0;
  VertexPair pair;
  SubgraphId sg = 0;
  Weight lbd = kInfinity;

  friend bool operator==(const LbdUpdate&, const LbdUpdate&) = default;
};

enum class SkeletonUpdateRule : std::uint8_t {
  kMinOverContributions,
  // Overwrite when the update comes from the current argmin subgraph, else
  // keep the smaller value. Can leave a stale over-estimate.
  kReplaceOrMin,
};

/// Read-only CSR copy of a skeleton, usable by the path searches. Local
/// vertex i is vertices[i] (global id, ascending).
class SkeletonView {
 public:
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return weights_.size(); }
  std::span<const Arc> neighbors(VertexId v) const { return adjacency_[v]; }
  Weight weight(EdgeId e) const { return weights_[e]; }
  VertexId global_of(VertexId local) const { return vertices_[local]; }
  VertexId local_of(VertexId global) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), global);
    return (it != vertices_.end() && *it == global) ? static_cast<VertexId>(it - vertices_.begin()) : kNoVertex;
  }
  auto weight_fn() const {
    return [this](EdgeId e) { return weights_[e]; };
  }

  /// Raises the weight of edge (u, v), given in global ids, to `w`, or
  /// removes the edge when w is kInfinity. Returns whether anything changed.
  bool raise_weight(VertexId u, VertexId v, Weight w) {
    VertexId lu = local_of(u), lv = local_of(v);
    if (lu == kNoVertex || lv == kNoVertex) return false;
    auto it = std::find_if(adjacency_[lu].begin(), adjacency_[lu].end(), [&](const Arc& a) { return a.to == lv; });
    if (it == adjacency_[lu].end() || weights_[it->edge] >= w) return false;
    if (w >= kInfinity) {
      adjacency_[lu].erase(it);
      std::erase_if(adjacency_[lv], [&](const Arc& a) { return a.to == lu; });
    } else {
      weights_[it->edge] = w;
    }
    return true;
  }

  /// Copy without the edges for which keep(global u, global v) is false.
  template <class Keep>
  SkeletonView filtered(Keep&& keep) const {
    SkeletonView out = *this;
    for (VertexId v = 0; v < out.adjacency_.size(); ++v)
      std::erase_if(out.adjacency_[v], [&](const Arc& a) { return !keep(vertices_[v], vertices_[a.to]); });
    return out;
  }

 private:
  friend class SkeletonGraph;
  std::vector<VertexId> vertices_;
  std::vector<std::vector<Arc>> adjacency_;
  std::vector<Weight> weights_;
};

class SkeletonGraph {
 public:
  struct EdgeState {
    std::map<SubgraphId, Weight> contributions;
    Weight weight = kInfinity;
    SubgraphId argmin = 0;

    friend bool operator==(const EdgeState&, const EdgeState&) = default;
  };

  using AttachmentId = std::uint64_t;

  explicit SkeletonGraph(SkeletonUpdateRule rule = SkeletonUpdateRule::kMinOverContributions) : rule_(rule) {}

  void add_vertex(VertexId v) { vertices_.insert(v); }
  bool contains(VertexId v) const { return vertices_.contains(v) || transient_vertices_.contains(v); }

  /// Records a subgraph's new lbd for a pair. Returns whether the edge
  /// weight changed.
  bool apply_lbd_update(VertexPair pair, SubgraphId sg, Weight lbd) {
    vertices_.insert(pair.first);
    vertices_.insert(pair.second);
    EdgeState& e = edges_[pair];
    Weight old = e.weight;
    bool fresh = e.contributions.empty();
    e.contributions[sg] = lbd;
    if (rule_ == SkeletonUpdateRule::kReplaceOrMin && !fresh) {
      if (sg == e.argmin) {
        e.weight = lbd;
      } else if (lbd < e.weight) {
        e.weight = lbd;
        e.argmin = sg;
      }
    } else {
      e.weight = kInfinity;
      e.argmin = e.contributions.begin()->first;
      for (auto [id, w] : e.contributions)
        if (w < e.weight) {
          e.weight = w;
          e.argmin = id;
        }
    }
    return e.weight != old;
  }

  bool apply(const LbdUpdate& u) { return apply_lbd_update(u.pair, u.sg, u.lbd); }

  /// Adds `v` with transient edges to the given vertices. A vertex already
  /// in the skeleton gets no edges (id 0 is the no-op handle).
  AttachmentId attach_query_vertex(VertexId v, std::span<const std::pair<VertexId, Weight>> edges) {
    if (vertices_.contains(v)) return 0;
    AttachmentId id = ++next_attachment_;
    auto& list = attachments_[id];
    list.vertex = v;
    ++transient_vertices_[v];
    for (auto [b, w] : edges)
      if (w < kInfinity) list.edges.emplace_back(VertexPair(v, b), w);
    return id;
  }

  /// Removes everything an attachment added.
  void release(AttachmentId id) {
    auto it = attachments_.find(id);
    if (it == attachments_.end()) return;
    if (--transient_vertices_[it->second.vertex] == 0) transient_vertices_.erase(it->second.vertex);
    attachments_.erase(it);
    if (attachments_.empty()) next_attachment_ = 0;
  }

  /// Persistent edges with finite weight plus every live attachment. A pair
  /// present several times keeps its smallest weight.
  SkeletonView view() const {
    SkeletonView out;
    std::set<VertexId> all(vertices_.begin(), vertices_.end());
    for (const auto& [v, n] : transient_vertices_) all.insert(v);
    out.vertices_.assign(all.begin(), all.end());
    out.adjacency_.resize(out.vertices_.size());
    std::map<VertexPair, Weight> merged;
    for (const auto& [pair, e] : edges_)
      if (e.weight < kInfinity) merged[pair] = e.weight;
    for (const auto& [id, a] : attachments_)
      for (const auto& [pair, w] : a.edges) {
        auto [it, fresh] = merged.emplace(pair, w);
        if (!fresh) it->second = std::min(it->second, w);
      }
    for (const auto& [pair, w] : merged) {
      auto e = static_cast<EdgeId>(out.weights_.size());
      out.weights_.push_back(w);
      VertexId a = out.local_of(pair.first), b = out.local_of(pair.second);
      out.adjacency_[a].push_back({b, e});
      out.adjacency_[b].push_back({a, e});
    }
    for (auto& list : out.adjacency_)
      std::sort(list.begin(), list.end(), [](const Arc& x, const Arc& y) { return x.to < y.to; });
    return out;
  }

  const std::set<VertexId>& vertices() const { return vertices_; }
  const std::map<VertexPair, EdgeState>& edges() const { return edges_; }
  SkeletonUpdateRule rule() const { return rule_; }

  const EdgeState* find(VertexPair pair) const {
    auto it = edges_.find(pair);
    return it == edges_.end() ? nullptr : &it->second;
  }

  /// CSV `u,v,weight,argmin_sg` over edges with finite weight.
  void dump_csv(std::ostream& out) const {
    out << "u,v,weight,argmin_sg\n";
    for (const auto& [pair, e] : edges_)
      if (e.weight < kInfinity)
        out << pair.first << ',' << pair.second << ',' << format_weight(e.weight) << ',' << e.argmin << '\n';
  }

  friend bool operator==(const SkeletonGraph& a, const SkeletonGraph& b) {
    return a.vertices_ == b.vertices_ && a.edges_ == b.edges_ && a.transient_vertices_ == b.transient_vertices_ &&
           a.attachments_ == b.attachments_ && a.next_attachment_ == b.next_attachment_;
  }

 private:
  struct Attachment {
    VertexId vertex = kNoVertex;
    std::vector<std::pair<VertexPair, Weight>> edges;

    friend bool operator==(const Attachment&, const Attachment&) = default;
  };

  SkeletonUpdateRule rule_;
  std::set<VertexId> vertices_;
  std::map<VertexPair, EdgeState> edges_;
  std::map<VertexId, std::size_t> transient_vertices_;
  std::map<AttachmentId, Attachment> attachments_;
  AttachmentId next_attachment_ = 0;
};

/// Skeleton with one edge per table pair, plus any extra vertices (boundary
/// vertices that belong to no pair).
inline SkeletonGraph build_skeleton(const MbdTable& table, std::span<const VertexId> extra_vertices = {},
                                    SkeletonUpdateRule rule = SkeletonUpdateRule::kMinOverContributions) {
  SkeletonGraph g(rule);
  for (VertexId v : extra_vertices) g.add_vertex(v);
  for (const auto& [pair, entry] : table.entries())
    for (auto [sg, lbd] : entry.lbds) g.apply_lbd_update(pair, sg, lbd);
  return g;
}

inline void write_lbd_update(std::ostream& out, const LbdUpdate& u) {
  out << u.seq << ',' << u.pair.first << ',' << u.pair.second << ',' << u.sg << ',' << format_weight(u.lbd) << '\n';
}

}  // namespace kspdg
