#pragma once

#include <map>
#include <span>
#include <vector>

#include "kspdg/bounds.hpp"
#include "kspdg/mptree.hpp"

namespace kspdg {

struct WeightDelta {
  EdgeId edge;  // global id
  Weight delta;

  friend bool operator==(const WeightDelta&, const WeightDelta&) = default;
};

struct LbdChange {
  VertexPair pair;
  Weight old_lbd;
  Weight new_lbd;
};

/// Bounds from a non-boundary vertex `v` to every boundary vertex of the
/// subgraph (and to `also`, when it is an interior vertex of it too).
inline std::vector<std::pair<VertexId, Weight>> attachment_bounds(const Subgraph& sg, VertexId v, VertexId also,
                                                                  std::size_t xi) {
  std::vector<std::pair<VertexId, Weight>> out;
  const auto& topo = sg.topology();
  auto targets = topo.boundary_vertices();
  if (also != kNoVertex && also != v && topo.contains(also) && !topo.is_boundary(also)) targets.push_back(also);
  for (VertexId b : targets) {
    if (b == v) continue;
    out.emplace_back(b, compute_bounding_paths(sg, VertexPair(v, b), xi).lower.lbd);
  }
  return out;
}

/// Everything one subgraph owns: live weights, bounding-path sets of all
/// boundary pairs, their EBP index and its compacted tree.
class SubgraphIndex {
 public:
  SubgraphIndex(Subgraph sg, std::span<const VertexPair> pairs, std::size_t xi, const CompactionOptions& opt = {})
      : sg_(std::move(sg)), xi_(xi) {
    PathId next = 0;
    for (const auto& pr : pairs) {
      sets_.push_back(compute_bounding_paths(sg_, pr, xi_, next));
      next += static_cast<PathId>(sets_.back().paths.size());
    }
    for (std::uint32_t s = 0; s < sets_.size(); ++s) {
      set_of_pair_.emplace(sets_[s].endpoints, s);
      for (std::uint32_t i = 0; i < sets_[s].paths.size(); ++i) locator_.push_back({s, i});
    }
    std::vector<PathEdges> pe;
    for (const auto& set : sets_)
      for (const auto& p : set.paths) pe.push_back({p.id, p.edges});
    ebp_ = build_ebp(pe);
    tree_ = compact_ebp(ebp_, opt);
  }

  const Subgraph& subgraph() const { return sg_; }
  SubgraphId id() const { return sg_.id(); }
  std::size_t xi() const { return xi_; }
  const std::vector<BoundingPathSet>& sets() const { return sets_; }
  const EbpIndex& ebp() const { return ebp_; }
  const GmpTree& tree() const { return tree_; }

  const BoundingPathSet& set_for(VertexPair pair) const {
    auto it = set_of_pair_.find(pair);
    if (it == set_of_pair_.end()) throw LookupError("pair not held by subgraph " + std::to_string(id()));
    return sets_[it->second];
  }

  const BoundingPath& path(PathId id) const {
    auto [s, i] = locator_.at(id);
    return sets_[s].paths[i];
  }

  /// Applies a batch of weight changes to this subgraph's edges and
  /// maintains every bound. The batch is rejected whole if any weight would
  /// drop to zero or below. Returns the pairs whose lbd moved.
  std::vector<LbdChange> refresh_bounds(std::span<const WeightDelta> batch) {
    std::map<EdgeId, Weight> delta;  // local edge → summed change
    for (const auto& d : batch) {
      EdgeId le = sg_.topology().local_edge_of(d.edge);
      if (le == kNoEdge)
        throw LookupError("edge " + std::to_string(d.edge) + " not in subgraph " + std::to_string(id()));
      delta[le] += d.delta;
    }
    std::vector<std::pair<EdgeId, Weight>> next;
    for (auto [le, dw] : delta) {
      Weight w = sg_.weight(le) + dw;
      if (w <= 0) throw ParameterError("update would make edge " + std::to_string(sg_.topology().edges()[le].global) +
                                       " non-positive");
      next.emplace_back(le, w);
    }
    sg_.set_weights(next);
    for (auto [le, dw] : delta) {
      if (dw == 0 || !tree_.contains(le)) continue;
      for (PathId p : tree_.retrieve_paths(le)) {
        auto [s, i] = locator_[p];
        sets_[s].paths[i].actual += dw;
      }
    }
    std::vector<LbdChange> changed;
    for (auto& set : sets_) {
      Weight old = set.lower.lbd;
      for (auto& p : set.paths) p.bound = sg_.bound_distance(p.phi);
      set.lower = lower_bound(set);
      if (set.lower.lbd != old) changed.push_back({set.endpoints, old, set.lower.lbd});
    }
    return changed;
  }

  std::vector<std::pair<VertexId, Weight>> attachment_bounds(VertexId v, VertexId also = kNoVertex) const {
    return kspdg::attachment_bounds(sg_, v, also, xi_);
  }

 private:
  Subgraph sg_;
  std::size_t xi_;
  std::vector<BoundingPathSet> sets_;
  std::map<VertexPair, std::uint32_t> set_of_pair_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> locator_;
  EbpIndex ebp_;
  GmpTree tree_;
};

}  // namespace kspdg
