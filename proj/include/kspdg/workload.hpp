#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "kspdg/sim.hpp"
#include "kspdg/trace.hpp"

namespace kspdg {

/// Run configuration read from `key=value` lines (`#` starts a comment).
struct RunConfig {
  std::size_t z = 100;
  std::size_t xi = 10;
  std::size_t k_default = 2;
  std::size_t h = 20;
  std::size_t b = 2;
  std::uint64_t scheduler_seed = 1;
  bool targeted_routing = false;
  SkeletonUpdateRule update_rule = SkeletonUpdateRule::kMinOverContributions;
  std::size_t steps_per_tick = 64;
  std::size_t subgraph_workers = 2;
  std::size_t query_workers = 2;
  std::size_t threads = 1;

  void set(const std::string& key, const std::string& value, std::size_t line = 0) {
    auto as_size = [&]() -> std::size_t {
      long long v = 0;
      if (!detail::parse_int(value, v) || v < 0) throw ParseError(line, "bad value for " + key);
      return static_cast<std::size_t>(v);
    };
    auto as_bool = [&] {
      if (value == "1" || value == "true" || value == "on") return true;
      if (value == "0" || value == "false" || value == "off") return false;
      throw ParseError(line, "bad boolean for " + key);
    };
    if (key == "z") z = as_size();
    else if (key == "xi") xi = as_size();
    else if (key == "k_default") k_default = as_size();
    else if (key == "h") h = as_size();
    else if (key == "b") b = as_size();
    else if (key == "scheduler_seed") scheduler_seed = as_size();
    else if (key == "targeted_routing") targeted_routing = as_bool();
    else if (key == "steps_per_tick") steps_per_tick = as_size();
    else if (key == "subgraph_workers") subgraph_workers = as_size();
    else if (key == "query_workers") query_workers = as_size();
    else if (key == "threads") threads = as_size();
    else if (key == "update_rule") {
      if (value == "min") update_rule = SkeletonUpdateRule::kMinOverContributions;
      else if (value == "replace") update_rule = SkeletonUpdateRule::kReplaceOrMin;
      else throw ParseError(line, "update_rule must be 'min' or 'replace'");
    } else {
      throw ParseError(line, "unknown key '" + key + "'");
    }
  }

  sim::SimConfig sim_config() const {
    sim::SimConfig c;
    c.dtlp = dtlp_options();
    c.subgraph_workers = subgraph_workers;
    c.query_workers = query_workers;
    c.seed = scheduler_seed;
    c.steps_per_tick = steps_per_tick;
    c.targeted_routing = targeted_routing;
    return c;
  }

  DtlpOptions dtlp_options() const {
    DtlpOptions o;
    o.z = z;
    o.xi = xi;
    o.compaction = {h, b};
    o.update_rule = update_rule;
    o.pyen.threads = threads;
    return o;
  }
};

inline RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key=value");
    c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno);
  }
  return c;
}

/// Weight variation model: each snapshot picks floor(alpha*|E|) distinct
/// edges and sets each to its initial weight times a factor drawn uniformly
/// from [1-tau, 1+tau], so weights stay inside that band around w0.
struct DynamicsConfig {
  double alpha = 0.5;
  double tau = 0.5;
  std::size_t snapshots = 1;
  std::uint64_t seed = 1;
  std::uint64_t first_tick = 1;
  std::uint64_t tick_step = 1;
};

/// Update events for every snapshot, as deltas from the weight the edge has
/// at that point of the stream. Weights never drop below one milli-unit.
inline std::vector<TraceEvent> generate_weight_stream(const Graph& g, const DynamicsConfig& cfg) {
  if (cfg.alpha < 0 || cfg.alpha > 1 || cfg.tau < 0 || cfg.tau >= 1)
    throw ParameterError("alpha must lie in [0,1] and tau in [0,1)");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> factor(1.0 - cfg.tau, 1.0 + cfg.tau);
  std::vector<Weight> w(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) w[e] = g.weight(e);
  const auto per = static_cast<std::size_t>(std::floor(cfg.alpha * static_cast<double>(g.edge_count())));
  std::vector<EdgeId> ids(g.edge_count());
  std::vector<TraceEvent> out;
  for (std::size_t snap = 0; snap < cfg.snapshots; ++snap) {
    std::iota(ids.begin(), ids.end(), EdgeId{0});
    for (std::size_t i = 0; i < per; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, ids.size() - 1);
      std::swap(ids[i], ids[pick(rng)]);
    }
    std::vector<EdgeId> chosen(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(per));
    std::sort(chosen.begin(), chosen.end());
    const std::uint64_t tick = cfg.first_tick + snap * cfg.tick_step;
    for (EdgeId e : chosen) {
      Weight next = std::max<Weight>(1, std::llround(static_cast<double>(g.initial_weight(e) * kMilli) * factor(rng)));
      out.push_back(UpdateEvent{tick, e, next - w[e]});
      w[e] = next;
    }
  }
  return out;
}

/// Uniform (s, t) pairs with s != t in the same connected component.
inline std::vector<QueryEvent> generate_queries(const Graph& g, std::size_t count, std::size_t k, std::uint64_t seed,
                                                std::uint64_t tick = 0) {
  std::vector<QueryEvent> out;
  if (g.vertex_count() < 2) return out;
  auto comp = connected_components(g);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(g.vertex_count() - 1));
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 1000 * (count + 1)) throw ParameterError("graph has too few connected pairs");
    VertexId s = pick(rng), t = pick(rng);
    if (s == t || comp[s] != comp[t]) continue;
    out.push_back({tick, s, t, k});
  }
  return out;
}

/// CSV `query_id,s,t,k`.
inline void write_queries_csv(std::ostream& out, const std::vector<QueryEvent>& qs) {
  out << "query_id,s,t,k\n";
  for (std::size_t i = 0; i < qs.size(); ++i) out << i << ',' << qs[i].s << ',' << qs[i].t << ',' << qs[i].k << '\n';
}

inline std::vector<QueryEvent> parse_queries_csv(std::istream& in) {
  std::vector<QueryEvent> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.rfind("query_id", 0) == 0) continue;
    std::vector<long long> f;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      auto comma = line.find(',', pos);
      std::string_view tok(line.data() + pos, (comma == std::string::npos ? line.size() : comma) - pos);
      long long v = 0;
      if (!detail::parse_int(tok, v)) throw ParseError(lineno, "bad query field");
      f.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (f.size() != 4 || f[1] < 0 || f[2] < 0 || f[3] < 1) throw ParseError(lineno, "expected query_id,s,t,k");
    out.push_back({0, static_cast<VertexId>(f[1]), static_cast<VertexId>(f[2]), static_cast<std::size_t>(f[3])});
  }
  return out;
}

/// Road-like test graph: points in the unit square, each joined to its
/// `degree` nearest neighbours and to its nearest earlier point (which
/// keeps the graph connected). Integer weights uniform in [1, max_weight].
inline Graph random_road_graph(std::size_t n, std::uint64_t seed, std::size_t degree = 2, Weight max_weight = 100) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::uniform_int_distribution<Weight> weight(1, max_weight);
  std::vector<std::pair<double, double>> pts(n);
  for (auto& p : pts) p = {coord(rng), coord(rng)};
  auto d2 = [&](std::size_t a, std::size_t b) {
    double dx = pts[a].first - pts[b].first, dy = pts[a].second - pts[b].second;
    return dx * dx + dy * dy;
  };
  std::map<VertexPair, Weight> edges;
  auto add = [&](std::size_t a, std::size_t b) {
    VertexPair p(static_cast<VertexId>(a), static_cast<VertexId>(b));
    if (!edges.contains(p)) edges[p] = weight(rng);
  };
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < i; ++j)
        if (d2(i, j) < d2(i, best)) best = j;
      add(i, best);
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t take = std::min(degree + 1, n);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::size_t a, std::size_t b) { return d2(i, a) != d2(i, b) ? d2(i, a) < d2(i, b) : a < b; });
    for (std::size_t j = 0; j < take; ++j)
      if (order[j] != i) add(i, order[j]);
  }
  std::vector<EdgeSpec> specs;
  for (auto [p, w] : edges) specs.push_back({p.first, p.second, w});
  return Graph::from_edges(n, specs);
}

/// Replays a trace against a plain graph, answering queries with `answer`.
/// Updates of one trace step are applied together.
template <class Answer>
void replay_trace(Graph& g, const std::vector<TraceEvent>& trace, Answer&& answer) {
  for (const auto& step : group_trace(trace)) {
    if (step.query) {
      answer(g, *step.query);
      continue;
    }
    std::map<EdgeId, Weight> net;
    for (const auto& d : step.batch)
      if (d.edge < g.edge_count()) net[d.edge] += d.delta;
    bool ok = true;
    for (auto [e, dw] : net) ok = ok && g.weight(e) + dw > 0;
    if (!ok) continue;
    for (auto [e, dw] : net) g.set_weight(e, g.weight(e) + dw);
  }
}

}  // namespace kspdg
