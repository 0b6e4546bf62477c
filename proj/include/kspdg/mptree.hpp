#pragma once

#include <algorithm>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "kspdg/minhash.hpp"

namespace kspdg {

/// Prefix tree over the path lists of one LSH group of edges. Each edge's
/// list becomes a chain of path nodes ending in a tail annotation that
/// records the list length, so walking that many parents from the tail's
/// anchor recovers the list.
class MpTree {
 public:
  static constexpr std::uint32_t kRoot = 0;
  static constexpr PathId kNoPath = std::numeric_limits<PathId>::max();

  struct Node {
    PathId path = kNoPath;
    std::uint32_t parent = kRoot;
    std::vector<std::uint32_t> children;  // insertion order
    std::vector<std::uint32_t> tails;
  };
  struct Tail {
    EdgeId edge;
    std::uint32_t count;
    std::uint32_t anchor;
  };

  MpTree() : nodes_(1) {}

  /// Inserts an ordered path list for `edge`. The longest prefix of the list
  /// matching a downward chain from any node is reused (first in preorder on
  /// ties); the rest hangs below the chain's end.
  void insert(EdgeId edge, std::span<const PathId> list) {
    std::uint32_t at = kRoot;
    std::size_t matched = 0;
    if (!list.empty()) {
      for (std::uint32_t x : preorder()) {
        if (x == kRoot || nodes_[x].path != list[0]) continue;
        std::uint32_t cur = x;
        std::size_t m = 1;
        while (m < list.size()) {
          std::uint32_t c = child_with(cur, list[m]);
          if (c == kRoot) break;
          cur = c;
          ++m;
        }
        if (m > matched) {
          matched = m;
          at = cur;
          if (m == list.size()) break;
        }
      }
    }
    for (std::size_t i = matched; i < list.size(); ++i) {
      auto id = static_cast<std::uint32_t>(nodes_.size());
      nodes_.push_back({list[i], at, {}, {}});
      nodes_[at].children.push_back(id);
      at = id;
    }
    nodes_[at].tails.push_back(static_cast<std::uint32_t>(tails_.size()));
    tails_.push_back({edge, static_cast<std::uint32_t>(list.size()), at});
  }

  /// Path ids on the `count` ancestors of a tail, nearest first.
  std::vector<PathId> walk(std::uint32_t tail) const {
    const Tail& t = tails_.at(tail);
    std::vector<PathId> out;
    std::uint32_t x = t.anchor;
    for (std::uint32_t i = 0; i < t.count; ++i) {
      out.push_back(nodes_[x].path);
      x = nodes_[x].parent;
    }
    return out;
  }

  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Tail> tails() const { return tails_; }
  std::size_t path_node_count() const { return nodes_.size() - 1; }

  std::vector<std::uint32_t> preorder() const {
    std::vector<std::uint32_t> order, stack{kRoot};
    while (!stack.empty()) {
      std::uint32_t x = stack.back();
      stack.pop_back();
      order.push_back(x);
      const auto& ch = nodes_[x].children;
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
    return order;
  }

  /// Indented dump, children after the node's own tails.
  void dump(std::ostream& out, int indent = 0) const { dump_node(out, kRoot, indent); }

 private:
  std::uint32_t child_with(std::uint32_t x, PathId p) const {
    for (std::uint32_t c : nodes_[x].children)
      if (nodes_[c].path == p) return c;
    return kRoot;
  }

  void dump_node(std::ostream& out, std::uint32_t x, int indent) const {
    if (x != kRoot) {
      out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << "path:" << nodes_[x].path << '\n';
      ++indent;
    }
    for (auto t : nodes_[x].tails)
      out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << "tail:" << tails_[t].edge << ','
          << tails_[t].count << '\n';
    for (auto c : nodes_[x].children) dump_node(out, c, indent);
  }

  std::vector<Node> nodes_;
  std::vector<Tail> tails_;
};

/// Number of EBP lists each path appears in.
inline std::map<PathId, std::size_t> path_frequencies(const EbpIndex& ebp) {
  std::map<PathId, std::size_t> freq;
  for (const auto& [e, list] : ebp)
    for (PathId p : list) ++freq[p];
  return freq;
}

/// Builds the tree of one group: lists are ordered by descending frequency
/// (ties by id) and inserted in ascending edge order.
inline MpTree build_mptree(std::span<const EdgeId> group, const EbpIndex& ebp,
                           const std::map<PathId, std::size_t>& freq) {
  if (group.empty()) throw ParameterError("empty edge group");
  std::vector<EdgeId> edges(group.begin(), group.end());
  std::sort(edges.begin(), edges.end());
  MpTree tree;
  for (EdgeId e : edges) {
    std::vector<PathId> list;
    if (auto it = ebp.find(e); it != ebp.end()) list = it->second;
    std::sort(list.begin(), list.end(), [&](PathId a, PathId b) {
      std::size_t fa = freq.at(a), fb = freq.at(b);
      return fa != fb ? fa > fb : a < b;
    });
    tree.insert(e, list);
  }
  return tree;
}

inline MpTree build_mptree(std::span<const EdgeId> group, const EbpIndex& ebp) {
  return build_mptree(group, ebp, path_frequencies(ebp));
}

/// All group trees under one root, plus an edge → tail registry.
class GmpTree {
 public:
  GmpTree() = default;

  explicit GmpTree(std::vector<MpTree> trees) : trees_(std::move(trees)) {
    for (std::uint32_t g = 0; g < trees_.size(); ++g) {
      const auto tails = trees_[g].tails();
      for (std::uint32_t i = 0; i < tails.size(); ++i)
        if (!registry_.emplace(tails[i].edge, std::pair{g, i}).second)
          throw ParameterError("edge " + std::to_string(tails[i].edge) + " appears in two groups");
    }
  }

  /// Paths containing `e`, ascending.
  std::vector<PathId> retrieve_paths(EdgeId e) const {
    auto it = registry_.find(e);
    if (it == registry_.end()) throw LookupError("edge " + std::to_string(e) + " not registered");
    auto out = trees_[it->second.first].walk(it->second.second);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool contains(EdgeId e) const { return registry_.contains(e); }
  std::size_t group_count() const { return trees_.size(); }
  const MpTree& group(std::size_t i) const { return trees_.at(i); }
  std::size_t registry_size() const { return registry_.size(); }

  std::size_t path_node_count() const {
    std::size_t n = 0;
    for (const auto& t : trees_) n += t.path_node_count();
    return n;
  }
  std::size_t tail_count() const { return registry_.size(); }

  void dump(std::ostream& out) const {
    out << "root\n";
    for (std::size_t g = 0; g < trees_.size(); ++g) {
      out << "  group:" << g << '\n';
      trees_[g].dump(out, 2);
    }
  }

 private:
  std::vector<MpTree> trees_;
  std::map<EdgeId, std::pair<std::uint32_t, std::uint32_t>> registry_;
};

inline GmpTree merge_gmptree(std::vector<MpTree> trees) { return GmpTree(std::move(trees)); }

struct CompactionOptions {
  std::size_t hashes = 20;
  std::size_t bands = 2;
};

/// EBP → PE-matrix → signatures → LSH groups → per-group trees → G-MPTree.
inline GmpTree compact_ebp(const EbpIndex& ebp, const CompactionOptions& opt = {}) {
  if (ebp.empty()) return {};
  PeMatrix m = build_pe_matrix(ebp);
  auto hashes = default_hash_family(m.rows.size(), opt.hashes);
  SigMatrix sig = minhash_signatures(m, hashes);
  auto freq = path_frequencies(ebp);
  std::vector<MpTree> trees;
  for (const auto& group : lsh_group(sig, opt.bands)) trees.push_back(build_mptree(group, ebp, freq));
  return merge_gmptree(std::move(trees));
}

struct CompactionReport {
  std::size_t node_count = 0;
  std::size_t tail_count = 0;
  std::size_t element_count = 0;
  double ratio = 1.0;
};

/// Path nodes of the tree against (edge, path) elements of the EBP index.
inline CompactionReport compaction_report(const GmpTree& t, const EbpIndex& ebp) {
  CompactionReport r;
  r.node_count = t.path_node_count();
  r.tail_count = t.tail_count();
  r.element_count = ebp_element_count(ebp);
  r.ratio = r.element_count == 0 ? 1.0 : static_cast<double>(r.node_count) / static_cast<double>(r.element_count);
  return r;
}

}  // namespace kspdg
