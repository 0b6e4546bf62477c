#pragma once

#include <algorithm>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "kspdg/partition.hpp"

namespace kspdg {

/// Ascending multiset of vfrag unit weights of one subgraph, stored as runs:
/// every edge contributes `initial` vfrags of unit weight weight/initial.
/// Runs are ordered by unit weight, so the m smallest unit weights are some
/// whole runs plus a prefix of the next one.
class SortedUnitWeights {
 public:
  SortedUnitWeights() = default;

  SortedUnitWeights(std::span<const LocalEdge> edges, std::span<const Weight> weights) { rebuild(edges, weights); }

  void rebuild(std::span<const LocalEdge> edges, std::span<const Weight> weights) {
    order_.resize(edges.size());
    std::iota(order_.begin(), order_.end(), EdgeId{0});
    std::sort(order_.begin(), order_.end(), [&](EdgeId a, EdgeId b) {
      // weights[a]/initial[a] < weights[b]/initial[b]
      __int128 lhs = static_cast<__int128>(weights[a]) * edges[b].initial;
      __int128 rhs = static_cast<__int128>(weights[b]) * edges[a].initial;
      return lhs != rhs ? lhs < rhs : a < b;
    });
    run_weight_.resize(order_.size());
    run_vfrags_.resize(order_.size());
    cum_vfrags_.assign(order_.size() + 1, 0);
    cum_weight_.assign(order_.size() + 1, 0);
    for (std::size_t i = 0; i < order_.size(); ++i) {
      run_weight_[i] = weights[order_[i]];
      run_vfrags_[i] = edges[order_[i]].initial;
      cum_vfrags_[i + 1] = cum_vfrags_[i] + run_vfrags_[i];
      cum_weight_[i + 1] = cum_weight_[i] + run_weight_[i];
    }
  }

  Weight total_vfrags() const { return cum_vfrags_.empty() ? 0 : cum_vfrags_.back(); }

  /// Sum of the `phi` smallest unit weights, rounded down to the milli grid.
  /// Exact whenever the partially used run divides evenly.
  Weight prefix_sum(Weight phi) const {
    if (phi < 0 || phi > total_vfrags())
      throw ParameterError("phi " + std::to_string(phi) + " exceeds the subgraph's " +
                           std::to_string(total_vfrags()) + " vfrags");
    if (phi == 0) return 0;
    auto it = std::upper_bound(cum_vfrags_.begin(), cum_vfrags_.end(), phi);
    std::size_t j = static_cast<std::size_t>(it - cum_vfrags_.begin()) - 1;
    Weight sum = cum_weight_[j];
    Weight rest = phi - cum_vfrags_[j];
    if (rest > 0) sum += static_cast<Weight>(static_cast<__int128>(rest) * run_weight_[j] / run_vfrags_[j]);
    return sum;
  }

  /// Local edge ids in unit-weight order.
  std::span<const EdgeId> order() const { return order_; }

  friend bool operator==(const SortedUnitWeights&, const SortedUnitWeights&) = default;

 private:
  std::vector<EdgeId> order_;
  std::vector<Weight> run_weight_, run_vfrags_, cum_vfrags_, cum_weight_;
};

/// A subgraph with live weights: immutable topology plus current weight per
/// local edge and the unit-weight multiset derived from them.
class Subgraph {
 public:
  Subgraph(std::shared_ptr<const SubgraphTopology> topo, std::vector<Weight> weights)
      : topo_(std::move(topo)), weights_(std::move(weights)) {
    if (weights_.size() != topo_->edge_count()) throw ParameterError("weight vector size mismatch");
    units_.rebuild(topo_->edges(), weights_);
  }

  /// Snapshot of the current weights of `g` for this subgraph's edges.
  Subgraph(std::shared_ptr<const SubgraphTopology> topo, const Graph& g) : topo_(std::move(topo)) {
    weights_.reserve(topo_->edge_count());
    for (const auto& e : topo_->edges()) weights_.push_back(g.weight(e.global));
    units_.rebuild(topo_->edges(), weights_);
  }

  const SubgraphTopology& topology() const { return *topo_; }
  std::shared_ptr<const SubgraphTopology> topology_ptr() const { return topo_; }
  SubgraphId id() const { return topo_->id(); }

  std::size_t vertex_count() const { return topo_->vertex_count(); }
  std::size_t edge_count() const { return topo_->edge_count(); }
  std::span<const Arc> neighbors(VertexId local) const { return topo_->neighbors(local); }

  Weight weight(EdgeId local) const { return weights_[local]; }
  Weight initial_weight(EdgeId local) const { return topo_->edges()[local].initial; }
  std::span<const Weight> weights() const { return weights_; }
  const SortedUnitWeights& unit_weights() const { return units_; }

  /// BD for a path of `phi` vfrags: the sum of the phi smallest unit weights.
  Weight bound_distance(Weight phi) const { return units_.prefix_sum(phi); }

  /// Sets new weights for local edges and rebuilds the unit-weight multiset.
  void set_weights(std::span<const std::pair<EdgeId, Weight>> changes) {
    for (auto [le, w] : changes) {
      if (w <= 0) throw ParameterError("edge weight must stay positive");
      weights_.at(le) = w;
    }
    units_.rebuild(topo_->edges(), weights_);
  }

  auto weight_fn() const {
    return [this](EdgeId e) { return weights_[e]; };
  }
  auto vfrag_fn() const {
    return [this](EdgeId e) { return topo_->edges()[e].initial; };
  }

  /// Converts a local vertex sequence to global ids.
  std::vector<VertexId> to_global(std::span<const VertexId> local) const {
    std::vector<VertexId> out;
    out.reserve(local.size());
    for (VertexId v : local) out.push_back(topo_->global_of(v));
    return out;
  }

 private:
  std::shared_ptr<const SubgraphTopology> topo_;
  std::vector<Weight> weights_;
  SortedUnitWeights units_;
};

}  // namespace kspdg
