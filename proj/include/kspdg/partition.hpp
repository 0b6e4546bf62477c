#pragma once

#include <algorithm>
#include <deque>
#include <memory>
#include <ostream>
#include <set>
#include <span>
#include <vector>

#include "kspdg/graph.hpp"

namespace kspdg {

struct LocalEdge {
  EdgeId global;
  VertexId u;  // local ids
  VertexId v;
  Weight initial;
};

/// Immutable shape of one subgraph: vertices (global ids, ascending), its
/// edges and a local adjacency. Local vertex i is vertices()[i]; arcs carry
/// local vertex and local edge ids.
class SubgraphTopology {
 public:
  SubgraphTopology(SubgraphId id, const Graph& g, std::vector<VertexId> vertices,
                   std::vector<EdgeId> edges)
      : id_(id), vertices_(std::move(vertices)) {
    std::sort(vertices_.begin(), vertices_.end());
    std::sort(edges.begin(), edges.end());
    adjacency_.resize(vertices_.size());
    edges_.reserve(edges.size());
    for (EdgeId ge : edges) {
      const Edge& e = g.edge(ge);
      VertexId lu = local_of(e.u), lv = local_of(e.v);
      if (lu == kNoVertex || lv == kNoVertex) throw ParameterError("subgraph edge endpoint missing");
      auto le = static_cast<EdgeId>(edges_.size());
      edges_.push_back({ge, lu, lv, e.initial});
      adjacency_[lu].push_back({lv, le});
      adjacency_[lv].push_back({lu, le});
      total_vfrags_ += e.initial;
    }
    for (auto& list : adjacency_)
      std::sort(list.begin(), list.end(), [](const Arc& a, const Arc& b) { return a.to < b.to; });
    boundary_.assign(vertices_.size(), false);
  }

  SubgraphId id() const { return id_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const VertexId> vertices() const { return vertices_; }
  std::span<const LocalEdge> edges() const { return edges_; }
  std::span<const Arc> neighbors(VertexId local) const { return adjacency_[local]; }
  VertexId global_of(VertexId local) const { return vertices_[local]; }
  Weight total_vfrags() const { return total_vfrags_; }

  VertexId local_of(VertexId global) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), global);
    return (it != vertices_.end() && *it == global) ? static_cast<VertexId>(it - vertices_.begin())
                                                    : kNoVertex;
  }
  bool contains(VertexId global) const { return local_of(global) != kNoVertex; }

  EdgeId local_edge_of(EdgeId global) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), global,
                               [](const LocalEdge& e, EdgeId x) { return e.global < x; });
    return (it != edges_.end() && it->global == global) ? static_cast<EdgeId>(it - edges_.begin())
                                                        : kNoEdge;
  }

  EdgeId find_local_edge(VertexId lu, VertexId lv) const {
    const auto& list = adjacency_[lu];
    auto it = std::lower_bound(list.begin(), list.end(), lv,
                               [](const Arc& a, VertexId x) { return a.to < x; });
    return (it != list.end() && it->to == lv) ? it->edge : kNoEdge;
  }

  bool is_boundary_local(VertexId local) const { return boundary_[local]; }
  bool is_boundary(VertexId global) const {
    VertexId l = local_of(global);
    return l != kNoVertex && boundary_[l];
  }

  /// Boundary vertices as global ids, ascending.
  std::vector<VertexId> boundary_vertices() const {
    std::vector<VertexId> out;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (boundary_[i]) out.push_back(vertices_[i]);
    return out;
  }

  void mark_boundary(VertexId local) { boundary_[local] = true; }

 private:
  SubgraphId id_;
  std::vector<VertexId> vertices_;
  std::vector<LocalEdge> edges_;
  std::vector<std::vector<Arc>> adjacency_;
  std::vector<bool> boundary_;
  Weight total_vfrags_ = 0;
};

class Partition {
 public:
  std::size_t subgraph_count() const { return subgraphs_.size(); }
  const SubgraphTopology& subgraph(SubgraphId id) const { return *subgraphs_.at(id); }
  std::shared_ptr<const SubgraphTopology> subgraph_ptr(SubgraphId id) const { return subgraphs_.at(id); }

  std::span<const SubgraphId> subgraphs_of(VertexId v) const { return vertex_to_subgraphs_.at(v); }
  bool is_boundary(VertexId v) const { return vertex_to_subgraphs_.at(v).size() >= 2; }
  SubgraphId edge_owner(EdgeId e) const { return edge_owner_.at(e); }
  std::size_t vertex_count() const { return vertex_to_subgraphs_.size(); }

  /// Subgraphs containing both vertices, ascending.
  std::vector<SubgraphId> common_subgraphs(VertexId a, VertexId b) const {
    std::vector<SubgraphId> out;
    const auto &x = vertex_to_subgraphs_.at(a), &y = vertex_to_subgraphs_.at(b);
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    return out;
  }

  std::size_t boundary_vertex_count() const {
    return static_cast<std::size_t>(std::count_if(vertex_to_subgraphs_.begin(), vertex_to_subgraphs_.end(),
                                                  [](const auto& s) { return s.size() >= 2; }));
  }

 private:
  friend Partition make_partition(const Graph&, std::vector<std::vector<VertexId>>,
                                  std::vector<std::vector<EdgeId>>);
  std::vector<std::shared_ptr<const SubgraphTopology>> subgraphs_;
  std::vector<std::vector<SubgraphId>> vertex_to_subgraphs_;
  std::vector<SubgraphId> edge_owner_;
};

/// Assembles a partition from explicit vertex/edge sets (one entry per
/// subgraph). Boundary flags are derived from vertex multiplicity.
inline Partition make_partition(const Graph& g, std::vector<std::vector<VertexId>> vsets,
                                std::vector<std::vector<EdgeId>> esets) {
  Partition p;
  p.vertex_to_subgraphs_.assign(g.vertex_count(), {});
  p.edge_owner_.assign(g.edge_count(), std::numeric_limits<SubgraphId>::max());
  for (SubgraphId id = 0; id < vsets.size(); ++id) {
    for (VertexId v : vsets[id]) p.vertex_to_subgraphs_.at(v).push_back(id);
    for (EdgeId e : esets[id]) {
      if (p.edge_owner_.at(e) != std::numeric_limits<SubgraphId>::max())
        throw ParameterError("edge assigned to two subgraphs");
      p.edge_owner_[e] = id;
    }
  }
  for (auto& s : p.vertex_to_subgraphs_) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  for (SubgraphId id = 0; id < vsets.size(); ++id) {
    auto topo = std::make_shared<SubgraphTopology>(id, g, std::move(vsets[id]), std::move(esets[id]));
    for (VertexId l = 0; l < topo->vertex_count(); ++l)
      if (p.vertex_to_subgraphs_[topo->global_of(l)].size() >= 2) topo->mark_boundary(l);
    p.subgraphs_.push_back(std::move(topo));
  }
  return p;
}

/// BFS partitioning into subgraphs of at most `z` vertices.
///
/// Each subgraph is seeded at the smallest vertex not yet covered and grows
/// breadth-first, admitting neighbours reached over unassigned edges (already
/// covered neighbours join as shared vertices but are not expanded) until it
/// holds `z` vertices. An edge belongs to the first subgraph holding both of
/// its endpoints. Edges left over once every vertex is covered are grouped
/// into extra bridging subgraphs, again of at most `z` vertices.
inline Partition partition_bfs(const Graph& g, std::size_t z) {
  if (z < 2) throw ParameterError("subgraph size bound z must be at least 2");
  const std::size_t n = g.vertex_count();
  std::vector<bool> covered(n, false), assigned(g.edge_count(), false);
  std::vector<std::vector<VertexId>> vsets;
  std::vector<std::vector<EdgeId>> esets;
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t epoch = 0;

  auto grow = [&](VertexId seed, bool expand_covered) {
    ++epoch;
    std::vector<VertexId> members{seed};
    std::vector<EdgeId> owned;
    stamp[seed] = epoch;
    std::deque<VertexId> queue{seed};
    auto admit = [&](VertexId y) {
      stamp[y] = epoch;
      members.push_back(y);
      for (const Arc& a : g.neighbors(y))
        if (!assigned[a.edge] && stamp[a.to] == epoch) {
          assigned[a.edge] = true;
          owned.push_back(a.edge);
        }
    };
    while (!queue.empty() && members.size() < z) {
      VertexId x = queue.front();
      queue.pop_front();
      for (const Arc& a : g.neighbors(x)) {
        if (assigned[a.edge] || stamp[a.to] == epoch) continue;
        if (members.size() >= z) break;
        bool was_covered = covered[a.to];
        admit(a.to);
        if (!was_covered || expand_covered) queue.push_back(a.to);
      }
    }
    for (VertexId v : members) covered[v] = true;
    vsets.push_back(std::move(members));
    esets.push_back(std::move(owned));
  };

  for (VertexId s = 0; s < n; ++s)
    if (!covered[s]) grow(s, false);
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (!assigned[e]) grow(g.edge(e).u, true);
  return make_partition(g, std::move(vsets), std::move(esets));
}

/// All unordered pairs of boundary vertices of a subgraph, lexicographic.
inline std::vector<VertexPair> boundary_pairs(const Partition& p, SubgraphId sg) {
  if (sg >= p.subgraph_count()) throw LookupError("unknown subgraph " + std::to_string(sg));
  auto b = p.subgraph(sg).boundary_vertices();
  std::vector<VertexPair> out;
  out.reserve(b.size() * (b.size() > 0 ? b.size() - 1 : 0) / 2);
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j) out.emplace_back(b[i], b[j]);
  return out;
}

/// CSV `subgraph_id,vertex_id,is_boundary`.
inline void dump_partition_csv(const Partition& p, std::ostream& out) {
  out << "subgraph_id,vertex_id,is_boundary\n";
  for (SubgraphId id = 0; id < p.subgraph_count(); ++id) {
    const auto& sg = p.subgraph(id);
    for (VertexId l = 0; l < sg.vertex_count(); ++l)
      out << id << ',' << sg.global_of(l) << ',' << (sg.is_boundary_local(l) ? 1 : 0) << '\n';
  }
}

}  // namespace kspdg
