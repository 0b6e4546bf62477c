#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "kspdg/types.hpp"

namespace kspdg {

/// Edge → ids of the bounding paths containing it. Keys are the edges that
/// appear in at least one path; lists ascend and hold no duplicates.
using EbpIndex = std::map<EdgeId, std::vector<PathId>>;

struct PathEdges {
  PathId id;
  std::span<const EdgeId> edges;
};

inline EbpIndex build_ebp(std::span<const PathEdges> paths) {
  EbpIndex ebp;
  for (const auto& p : paths)
    for (EdgeId e : p.edges) ebp[e].push_back(p.id);
  for (auto& [e, list] : ebp) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return ebp;
}

inline std::size_t ebp_element_count(const EbpIndex& ebp) {
  std::size_t n = 0;
  for (const auto& [e, list] : ebp) n += list.size();
  return n;
}

/// Sparse binary path×edge matrix. Row r is rows[r] (a path id), column c is
/// columns[c] (an edge id); ones[c] lists the row indices set in column c.
struct PeMatrix {
  std::vector<PathId> rows;
  std::vector<EdgeId> columns;
  std::vector<std::vector<std::uint32_t>> ones;

  bool at(std::size_t r, std::size_t c) const { return std::binary_search(ones[c].begin(), ones[c].end(), r); }
};

inline PeMatrix build_pe_matrix(const EbpIndex& ebp) {
  PeMatrix m;
  for (const auto& [e, list] : ebp) {
    m.columns.push_back(e);
    m.rows.insert(m.rows.end(), list.begin(), list.end());
  }
  std::sort(m.rows.begin(), m.rows.end());
  m.rows.erase(std::unique(m.rows.begin(), m.rows.end()), m.rows.end());
  for (const auto& [e, list] : ebp) {
    auto& col = m.ones.emplace_back();
    for (PathId p : list)
      col.push_back(static_cast<std::uint32_t>(std::lower_bound(m.rows.begin(), m.rows.end(), p) - m.rows.begin()));
  }
  return m;
}

/// h(r) = (a*r + 1) mod c.
struct RowHash {
  std::uint64_t a;
  std::uint64_t c;
  std::uint64_t operator()(std::uint64_t r) const { return (a * r + 1) % c; }
};

/// h signature rows over the matrix columns. Empty columns keep the sentinel
/// value c of each hash.
struct SigMatrix {
  std::vector<EdgeId> columns;
  std::vector<std::vector<std::uint64_t>> cells;  // [hash][column]

  std::size_t hash_count() const { return cells.size(); }
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::uint64_t next_prime(std::uint64_t n) {
  while (!is_prime(n)) ++n;
  return n;
}

/// a_i = the first h primes; c = smallest prime at least max(rows, a_max+2).
inline std::vector<RowHash> default_hash_family(std::size_t rows, std::size_t h = 20) {
  std::vector<std::uint64_t> a;
  for (std::uint64_t x = 2; a.size() < h; ++x)
    if (is_prime(x)) a.push_back(x);
  std::uint64_t c = next_prime(std::max<std::uint64_t>(rows, a.empty() ? 2 : a.back() + 2));
  std::vector<RowHash> out;
  for (auto ai : a) out.push_back({ai, c});
  return out;
}

inline SigMatrix minhash_signatures(const PeMatrix& m, std::span<const RowHash> hashes) {
  for (const auto& hf : hashes)
    if (hf.c < m.rows.size())
      throw ParameterError("hash modulus " + std::to_string(hf.c) + " below row count " +
                           std::to_string(m.rows.size()));
  SigMatrix sig;
  sig.columns = m.columns;
  sig.cells.resize(hashes.size());
  for (std::size_t i = 0; i < hashes.size(); ++i) sig.cells[i].assign(m.columns.size(), hashes[i].c);
  // Row scan: columns with a one in row r see h_i(r).
  std::vector<std::vector<std::uint32_t>> by_row(m.rows.size());
  for (std::uint32_t c = 0; c < m.ones.size(); ++c)
    for (auto r : m.ones[c]) by_row[r].push_back(c);
  for (std::size_t r = 0; r < by_row.size(); ++r)
    for (std::size_t i = 0; i < hashes.size(); ++i) {
      std::uint64_t hv = hashes[i](r);
      for (auto c : by_row[r]) sig.cells[i][c] = std::min(sig.cells[i][c], hv);
    }
  return sig;
}

/// Fraction of signature rows on which two columns agree.
inline double signature_similarity(const SigMatrix& sig, std::size_t a, std::size_t b) {
  if (sig.cells.empty()) return 0.0;
  std::size_t same = 0;
  for (const auto& row : sig.cells) same += row[a] == row[b];
  return static_cast<double>(same) / static_cast<double>(sig.cells.size());
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

/// Splits the signature rows into b bands; columns with identical values in
/// some band are linked, and groups are the connected components. Groups are
/// ordered by their smallest edge id and list edge ids ascending.
inline std::vector<std::vector<EdgeId>> lsh_group(const SigMatrix& sig, std::size_t b) {
  const std::size_t h = sig.hash_count();
  if (b == 0 || h % b != 0) throw ParameterError("band count must divide the hash count");
  const std::size_t d = sig.columns.size(), width = h / b;
  DisjointSets sets(d);
  for (std::size_t band = 0; band < b; ++band) {
    std::map<std::vector<std::uint64_t>, std::size_t> first;
    for (std::size_t c = 0; c < d; ++c) {
      std::vector<std::uint64_t> key(width);
      for (std::size_t i = 0; i < width; ++i) key[i] = sig.cells[band * width + i][c];
      auto [it, fresh] = first.emplace(std::move(key), c);
      if (!fresh) sets.unite(it->second, c);
    }
  }
  // Columns ascend by edge id, so component roots (the minimum index) do too.
  std::map<std::size_t, std::vector<EdgeId>> comps;
  for (std::size_t c = 0; c < d; ++c) comps[sets.find(c)].push_back(sig.columns[c]);
  std::vector<std::vector<EdgeId>> out;
  for (auto& [root, members] : comps) out.push_back(std::move(members));
  return out;
}

}  // namespace kspdg
