#pragma once

#include <map>
#include <span>
#include <vector>

#include "kspdg/ksp_dg.hpp"
#include "kspdg/pyen.hpp"
#include "kspdg/subgraph_index.hpp"

namespace kspdg {

struct DtlpOptions {
  std::size_t z = 100;
  std::size_t xi = 10;
  CompactionOptions compaction;
  SkeletonUpdateRule update_rule = SkeletonUpdateRule::kMinOverContributions;
  PyenOptions pyen;
};

struct KspDgResult {
  std::vector<Path> paths;
  KspDgStats stats;
  PyenStats pyen;
  std::vector<Weight> reference_distances;
  bool unreachable = false;
};

/// Transient skeleton edges for query endpoints that are not boundary
/// vertices. `bounds(v, also)` returns the bounds from v to the boundary
/// vertices of v's subgraph (and to `also` when it shares that subgraph).
template <class Bounds>
std::vector<SkeletonGraph::AttachmentId> attach_endpoints(SkeletonGraph& sk, VertexId s, VertexId t,
                                                          Bounds&& bounds) {
  std::vector<SkeletonGraph::AttachmentId> handles;
  if (!sk.contains(s)) handles.push_back(sk.attach_query_vertex(s, bounds(s, t)));
  if (!sk.contains(t)) handles.push_back(sk.attach_query_vertex(t, bounds(t, kNoVertex)));
  return handles;
}

/// Answers every pending partial search of a driver from local indexes.
template <class IndexLookup>
void fulfil_segments(KspDgDriver& driver, IndexLookup&& index_of, const PyenOptions& opt, PyenStats& stats) {
  while (driver.step() == KspDgDriver::Status::kNeedSegments) {
    auto reqs = driver.pending();
    for (const auto& r : reqs) {
      auto res = pyen_ksp(index_of(r.sg).subgraph(), r.from, r.to, r.count, opt, r.forbidden);
      stats += res.stats;
      driver.supply(r.segment, r.sg, std::move(res.paths));
    }
  }
}

/// In-process two-level index: partition, per-subgraph bounds, the minimum
/// bound table and the skeleton, kept current under weight updates.
class DtlpIndex {
 public:
  DtlpIndex(Graph g, const DtlpOptions& opt) : graph_(std::move(g)), opt_(opt), skeleton_(opt.update_rule) {
    partition_ = partition_bfs(graph_, opt_.z);
    for (SubgraphId id = 0; id < partition_.subgraph_count(); ++id) {
      auto pairs = boundary_pairs(partition_, id);
      subgraphs_.emplace_back(Subgraph(partition_.subgraph_ptr(id), graph_), pairs, opt_.xi, opt_.compaction);
    }
    for (const auto& sx : subgraphs_)
      for (const auto& set : sx.sets()) table_.set(set.endpoints, sx.id(), set.lower.lbd);
    skeleton_ = build_skeleton(table_, boundary_vertices(), opt_.update_rule);
  }

  const Graph& graph() const { return graph_; }
  const Partition& partition() const { return partition_; }
  const SubgraphIndex& subgraph(SubgraphId id) const { return subgraphs_.at(id); }
  const std::vector<SubgraphIndex>& subgraphs() const { return subgraphs_; }
  const MbdTable& table() const { return table_; }
  const SkeletonGraph& skeleton() const { return skeleton_; }
  const DtlpOptions& options() const { return opt_; }

  std::vector<VertexId> boundary_vertices() const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < graph_.vertex_count(); ++v)
      if (partition_.is_boundary(v)) out.push_back(v);
    return out;
  }

  /// Applies one batch. Rejected whole (nothing changes) if an edge is
  /// unknown or a weight would become non-positive. Returns the published
  /// lbd changes in order.
  std::vector<LbdUpdate> apply_batch(std::span<const WeightDelta> batch) {
    std::map<SubgraphId, std::vector<WeightDelta>> by_sg;
    std::map<EdgeId, Weight> net;
    for (const auto& d : batch) {
      if (d.edge >= graph_.edge_count()) throw LookupError("unknown edge " + std::to_string(d.edge));
      net[d.edge] += d.delta;
      by_sg[partition_.edge_owner(d.edge)].push_back(d);
    }
    for (auto [e, dw] : net)
      if (graph_.weight(e) + dw <= 0) throw ParameterError("update would make edge " + std::to_string(e) + " non-positive");
    for (auto [e, dw] : net) graph_.set_weight(e, graph_.weight(e) + dw);
    std::vector<LbdUpdate> out;
    for (auto& [sg, items] : by_sg)
      for (const auto& ch : subgraphs_[sg].refresh_bounds(items)) {
        LbdUpdate u{++seq_, ch.pair, sg, ch.new_lbd};
        table_.set(u.pair, u.sg, u.lbd);
        skeleton_.apply(u);
        out.push_back(u);
      }
    return out;
  }

  /// Test hook: publishes an lbd for (pair, sg) that bypasses the bounding
  /// paths. Used to check that validation notices corrupted bounds.
  void override_lbd(VertexPair pair, SubgraphId sg, Weight lbd) {
    LbdUpdate u{++seq_, pair, sg, lbd};
    table_.set(pair, sg, lbd);
    skeleton_.apply(u);
  }

  /// KSP-DG on the current weights.
  KspDgResult query(VertexId s, VertexId t, std::size_t k) {
    if (s >= graph_.vertex_count() || t >= graph_.vertex_count()) throw LookupError("query vertex out of range");
    auto handles = attach_endpoints(skeleton_, s, t, [&](VertexId v, VertexId also) {
      return subgraphs_[partition_.subgraphs_of(v).front()].attachment_bounds(v, also);
    });
    SkeletonView view = skeleton_.view();
    for (auto h : handles) skeleton_.release(h);
    KspDgDriver driver(std::move(view), partition_, s, t, k);
    KspDgResult res;
    fulfil_segments(driver, [&](SubgraphId id) -> const SubgraphIndex& { return subgraphs_[id]; }, opt_.pyen,
                    res.pyen);
    res.paths = driver.result();
    res.stats = driver.stats();
    res.reference_distances = driver.reference_distances();
    res.unreachable = res.paths.empty();
    return res;
  }

 private:
  Graph graph_;
  DtlpOptions opt_;
  Partition partition_;
  std::vector<SubgraphIndex> subgraphs_;
  MbdTable table_;
  SkeletonGraph skeleton_;
  std::uint64_t seq_ = 0;
};

}  // namespace kspdg
