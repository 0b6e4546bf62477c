#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "kspdg/subgraph.hpp"
#include "kspdg/yen.hpp"

namespace kspdg {

/// A fixed path between two boundary vertices of a subgraph. `vertices` and
/// `edges` use the subgraph's local ids. phi never changes; actual and bound
/// track the live weights.
struct BoundingPath {
  PathId id = 0;
  SubgraphId sg = 0;
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
  Weight phi = 0;
  Weight actual = 0;
  Weight bound = 0;

  friend bool operator==(const BoundingPath&, const BoundingPath&) = default;
};

enum class BoundClaim : std::uint8_t { kUnreachable, kExact, kBound };

struct LowerBound {
  Weight lbd = kInfinity;
  PathId path = 0;
  BoundClaim claim = BoundClaim::kUnreachable;

  friend bool operator==(const LowerBound&, const LowerBound&) = default;
};

/// Bounding paths of one boundary pair, ascending by phi (and therefore by
/// bound distance). Holds every enumerated path of the xi smallest distinct
/// phi values, so any path left out has phi at least that of the last one.
struct BoundingPathSet {
  VertexPair endpoints;
  SubgraphId sg = 0;
  std::vector<BoundingPath> paths;
  LowerBound lower;
  bool hit_cap = false;

  std::size_t distinct_phi_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < paths.size(); ++i)
      if (i == 0 || paths[i].phi != paths[i - 1].phi) ++n;
    return n;
  }

  friend bool operator==(const BoundingPathSet&, const BoundingPathSet&) = default;
};

/// Raw-path enumeration cap per pair, as a multiple of xi.
inline constexpr std::size_t kBoundingPathCapFactor = 50;

/// Theorem 1 over a set sorted by bound distance. With u the path of least
/// actual distance and r the last path: if D(u) <= BD(r) then D(u) is the
/// exact within-subgraph shortest distance, else BD(r) is a lower bound.
inline LowerBound lower_bound(const BoundingPathSet& set) {
  if (set.paths.empty()) return {};
  std::size_t u = 0;
  for (std::size_t i = 1; i < set.paths.size(); ++i)
    if (set.paths[i].actual < set.paths[u].actual) u = i;
  const BoundingPath& r = set.paths.back();
  if (set.paths[u].actual <= r.bound) return {set.paths[u].actual, set.paths[u].id, BoundClaim::kExact};
  return {r.bound, r.id, BoundClaim::kBound};
}

/// Recomputes actual and bound distances of every path from the subgraph's
/// current weights, then the set's lower bound.
inline void recompute_set(const Subgraph& sg, BoundingPathSet& set) {
  for (auto& p : set.paths) {
    p.actual = 0;
    for (EdgeId e : p.edges) p.actual += sg.weight(e);
    p.bound = sg.bound_distance(p.phi);
  }
  set.lower = lower_bound(set);
}

/// Enumerates loopless paths between the pair (global ids) under vfrag cost
/// and keeps those of the xi smallest distinct vfrag counts. Path ids are
/// assigned consecutively from `first_id`.
inline BoundingPathSet compute_bounding_paths(const Subgraph& sg, VertexPair pair, std::size_t xi,
                                              PathId first_id = 0) {
  if (xi == 0) throw ParameterError("xi must be at least 1");
  const auto& topo = sg.topology();
  VertexId s = topo.local_of(pair.first), t = topo.local_of(pair.second);
  if (s == kNoVertex || t == kNoVertex) throw LookupError("pair not inside subgraph " + std::to_string(sg.id()));
  BoundingPathSet set;
  set.endpoints = pair;
  set.sg = sg.id();
  YenEnumerator yen(topo, sg.vfrag_fn(), s, t);
  const std::size_t cap = kBoundingPathCapFactor * xi;
  std::size_t raw = 0, classes = 0;
  Weight last_phi = -1;
  while (true) {
    if (raw >= cap) {
      set.hit_cap = true;
      break;
    }
    auto p = yen.next();
    if (!p) break;
    ++raw;
    if (p->distance != last_phi) {
      if (classes == xi) break;
      ++classes;
      last_phi = p->distance;
    }
    BoundingPath bp;
    bp.id = first_id + static_cast<PathId>(set.paths.size());
    bp.sg = sg.id();
    bp.phi = p->distance;
    bp.vertices = std::move(p->vertices);
    for (std::size_t i = 0; i + 1 < bp.vertices.size(); ++i)
      bp.edges.push_back(topo.find_local_edge(bp.vertices[i], bp.vertices[i + 1]));
    set.paths.push_back(std::move(bp));
  }
  recompute_set(sg, set);
  return set;
}

/// Element count of an uncompacted edge→path index for one subgraph.
inline std::uint64_t estimate_epindex_elements(std::uint64_t n_b, std::uint64_t xi, std::uint64_t n_e) {
  if (n_b < 2) return 0;
  return n_b * (n_b - 1) / 2 * xi * n_e;
}

/// Per boundary pair: the lower bound distance contributed by every subgraph
/// holding the pair, and their minimum.
class MbdTable {
 public:
  struct Entry {
    std::map<SubgraphId, Weight> lbds;
    Weight mbd = kInfinity;
    SubgraphId argmin = 0;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  /// Returns true when the pair's minimum changed.
  bool set(VertexPair pair, SubgraphId sg, Weight lbd) {
    Entry& e = entries_[pair];
    e.lbds[sg] = lbd;
    Weight old = e.mbd;
    SubgraphId old_arg = e.argmin;
    e.mbd = kInfinity;
    e.argmin = e.lbds.begin()->first;
    for (auto [id, v] : e.lbds)
      if (v < e.mbd) {
        e.mbd = v;
        e.argmin = id;
      }
    return old != e.mbd || old_arg != e.argmin;
  }

  std::pair<Weight, SubgraphId> min_lower_bound(VertexPair pair) const {
    auto it = entries_.find(pair);
    if (it == entries_.end())
      throw LookupError("pair (" + std::to_string(pair.first) + "," + std::to_string(pair.second) + ") not in table");
    return {it->second.mbd, it->second.argmin};
  }

  const std::map<VertexPair, Entry>& entries() const { return entries_; }
  bool contains(VertexPair pair) const { return entries_.contains(pair); }

  friend bool operator==(const MbdTable&, const MbdTable&) = default;

 private:
  std::map<VertexPair, Entry> entries_;
};

inline void dump_bounding_paths_csv(const Subgraph& sg, const std::vector<BoundingPathSet>& sets, std::ostream& out,
                                    bool header = true) {
  if (header) out << "sg,src,dst,phi,actual,bound\n";
  for (const auto& set : sets)
    for (const auto& p : set.paths)
      out << sg.id() << ',' << set.endpoints.first << ',' << set.endpoints.second << ',' << p.phi << ','
          << format_weight(p.actual) << ',' << format_weight(p.bound) << '\n';
}

}  // namespace kspdg
