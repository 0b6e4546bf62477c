#pragma once

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kspdg/types.hpp"

namespace kspdg {

struct Arc {
  VertexId to;
  EdgeId edge;
};

struct Edge {
  VertexId u;
  VertexId v;
  Weight weight;   // current, milli-units
  Weight initial;  // frozen integer weight, also the edge's vfrag count
};

/// Undirected input edge in whole weight units.
struct EdgeSpec {
  VertexId u;
  VertexId v;
  Weight w;
};

/// Undirected weighted graph with dense vertex ids. Edge ids follow the
/// lexicographic order of (min endpoint, max endpoint); adjacency lists are
/// sorted by neighbour id.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from undirected edges given in whole units. Parallel edges
  /// collapse to the minimum weight.
  static Graph from_edges(std::size_t n, std::span<const EdgeSpec> specs) {
    std::map<VertexPair, Weight> best;
    for (const auto& s : specs) {
      if (s.u >= n || s.v >= n) throw ParameterError("edge endpoint out of range");
      if (s.u == s.v) throw ParameterError("self-loop on vertex " + std::to_string(s.u));
      if (s.w < 1) throw ParameterError("edge weight must be a positive integer");
      auto [it, inserted] = best.try_emplace(VertexPair(s.u, s.v), s.w);
      if (!inserted) it->second = std::min(it->second, s.w);
    }
    Graph g;
    g.adjacency_.resize(n);
    g.edges_.reserve(best.size());
    for (const auto& [pair, w] : best) {
      auto id = static_cast<EdgeId>(g.edges_.size());
      g.edges_.push_back({pair.first, pair.second, w * kMilli, w});
      g.adjacency_[pair.first].push_back({pair.second, id});
      g.adjacency_[pair.second].push_back({pair.first, id});
    }
    for (auto& list : g.adjacency_)
      std::sort(list.begin(), list.end(), [](const Arc& a, const Arc& b) { return a.to < b.to; });
    return g;
  }

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  std::span<const Arc> neighbors(VertexId v) const { return adjacency_[v]; }

  Weight weight(EdgeId e) const { return edges_[e].weight; }
  Weight initial_weight(EdgeId e) const { return edges_[e].initial; }

  void set_weight(EdgeId e, Weight w) {
    if (w <= 0) throw ParameterError("edge weight must stay positive");
    edges_.at(e).weight = w;
  }

  EdgeId find_edge(VertexId a, VertexId b) const {
    if (a >= adjacency_.size() || b >= adjacency_.size()) return kNoEdge;
    const auto& list = adjacency_[a];
    auto it = std::lower_bound(list.begin(), list.end(), b,
                               [](const Arc& arc, VertexId x) { return arc.to < x; });
    return (it != list.end() && it->to == b) ? it->edge : kNoEdge;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    if (a.adjacency_.size() != b.adjacency_.size() || a.edges_.size() != b.edges_.size())
      return false;
    for (std::size_t i = 0; i < a.edges_.size(); ++i) {
      const auto &x = a.edges_[i], &y = b.edges_[i];
      if (x.u != y.u || x.v != y.v || x.weight != y.weight || x.initial != y.initial) return false;
    }
    return true;
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Arc>> adjacency_;
};

/// A simple path given as a vertex sequence plus its distance.
struct Path {
  std::vector<VertexId> vertices;
  Weight distance = 0;

  friend bool operator==(const Path&, const Path&) = default;
};

/// Shared total order on paths: distance first, then vertex sequence.
inline bool path_less(const Path& a, const Path& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.vertices < b.vertices;
}

inline bool is_simple(std::span<const VertexId> seq) {
  std::vector<VertexId> sorted(seq.begin(), seq.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

/// Sums current weights along `seq`; returns kInfinity if two consecutive
/// vertices are not adjacent.
inline Weight path_distance(const Graph& g, std::span<const VertexId> seq) {
  Weight d = 0;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    EdgeId e = g.find_edge(seq[i], seq[i + 1]);
    if (e == kNoEdge) return kInfinity;
    d += g.weight(e);
  }
  return d;
}

struct DimacsStats {
  std::size_t declared_vertices = 0;
  std::size_t declared_arcs = 0;
  std::size_t arcs_read = 0;
};

namespace detail {

inline std::string_view next_token(std::string_view& line) {
  std::size_t b = line.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    line = {};
    return {};
  }
  std::size_t e = line.find_first_of(" \t\r", b);
  std::string_view tok = line.substr(b, e == std::string_view::npos ? line.size() - b : e - b);
  line = e == std::string_view::npos ? std::string_view{} : line.substr(e);
  return tok;
}

inline bool parse_int(std::string_view tok, long long& out) {
  if (tok.empty()) return false;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && p == tok.data() + tok.size();
}

}  // namespace detail

/// Reads a 9th DIMACS challenge `.gr` file. Arcs are symmetrised: each
/// unordered pair keeps the minimum listed weight.
inline Graph parse_dimacs(std::istream& in, DimacsStats* stats = nullptr) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  long long n = 0, m = 0;
  std::vector<EdgeSpec> specs;
  std::size_t arcs = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view rest = line;
    std::string_view kind = detail::next_token(rest);
    if (kind.empty() || kind == "c") continue;
    if (kind == "p") {
      if (have_header) throw ParseError(lineno, "duplicate 'p' line");
      if (detail::next_token(rest) != "sp") throw ParseError(lineno, "malformed header, expected 'p sp <n> <m>'");
      if (!detail::parse_int(detail::next_token(rest), n) || !detail::parse_int(detail::next_token(rest), m) ||
          n < 0 || m < 0 || !detail::next_token(rest).empty())
        throw ParseError(lineno, "malformed header, expected 'p sp <n> <m>'");
      have_header = true;
      specs.reserve(static_cast<std::size_t>(m));
      continue;
    }
    if (kind == "a") {
      if (!have_header) throw ParseError(lineno, "arc before 'p' line");
      long long u = 0, v = 0, w = 0;
      if (!detail::parse_int(detail::next_token(rest), u) || !detail::parse_int(detail::next_token(rest), v) ||
          !detail::parse_int(detail::next_token(rest), w) || !detail::next_token(rest).empty())
        throw ParseError(lineno, "malformed arc, expected 'a <u> <v> <w>'");
      if (u < 1 || u > n || v < 1 || v > n) throw ParseError(lineno, "vertex id out of range");
      if (w < 1) throw ParseError(lineno, "non-positive weight");
      if (u == v) throw ParseError(lineno, "self-loop");
      specs.push_back({static_cast<VertexId>(u - 1), static_cast<VertexId>(v - 1), w});
      ++arcs;
      continue;
    }
    throw ParseError(lineno, "unknown line type '" + std::string(kind) + "'");
  }
  if (!have_header) throw ParseError(lineno, "missing 'p sp' header");
  if (stats) *stats = {static_cast<std::size_t>(n), static_cast<std::size_t>(m), arcs};
  return Graph::from_edges(static_cast<std::size_t>(n), specs);
}

/// Writes the graph back in `.gr` form, one arc per direction, using the
/// frozen initial weights.
inline void emit_dimacs(const Graph& g, std::ostream& out) {
  out << "p sp " << g.vertex_count() << ' ' << 2 * g.edge_count() << '\n';
  for (const auto& e : g.edges()) {
    out << "a " << e.u + 1 << ' ' << e.v + 1 << ' ' << e.initial << '\n';
    out << "a " << e.v + 1 << ' ' << e.u + 1 << ' ' << e.initial << '\n';
  }
}

/// Connected component label per vertex.
inline std::vector<std::uint32_t> connected_components(const Graph& g) {
  std::vector<std::uint32_t> comp(g.vertex_count(), std::numeric_limits<std::uint32_t>::max());
  std::uint32_t next = 0;
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    if (comp[s] != std::numeric_limits<std::uint32_t>::max()) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (const Arc& a : g.neighbors(x))
        if (comp[a.to] == std::numeric_limits<std::uint32_t>::max()) {
          comp[a.to] = next;
          stack.push_back(a.to);
        }
    }
    ++next;
  }
  return comp;
}

}  // namespace kspdg
