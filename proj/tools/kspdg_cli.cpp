// Command-line front end: dataset ingestion, stream and query generation,
// benchmark runs through the simulator, and oracle validation.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "kspdg/workload.hpp"

namespace fs = std::filesystem;
using namespace kspdg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitValidation = 3;

struct DataError : Error {
  using Error::Error;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

template <class F>
auto with_file(const std::string& path, F&& f) {
  auto in = open_in(path);
  try {
    return f(in);
  } catch (const ParseError& e) {
    throw DataError(path + ": " + e.what());
  }
}

Graph load_graph(const std::string& path) {
  return with_file(path, [](std::istream& in) { return parse_dimacs(in); });
}

RunConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  return with_file(path, [](std::istream& in) { return parse_config(in); });
}

std::vector<TraceEvent> load_traces(const std::vector<std::string>& paths) {
  std::vector<TraceEvent> all;
  for (const auto& p : paths) {
    auto ev = with_file(p, [](std::istream& in) { return parse_trace(in); });
    all.insert(all.end(), ev.begin(), ev.end());
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const TraceEvent& a, const TraceEvent& b) { return event_tick(a) < event_tick(b); });
  return all;
}

void write_path_rows(std::ostream& out, std::uint64_t qid, const std::vector<Path>& paths) {
  for (std::size_t r = 0; r < paths.size(); ++r) {
    out << qid << ',' << r + 1 << ',' << format_weight(paths[r].distance) << ',';
    for (std::size_t i = 0; i < paths[r].vertices.size(); ++i) out << (i ? " " : "") << paths[r].vertices[i];
    out << '\n';
  }
}

struct QueryRow {
  std::uint64_t qid;
  QueryEvent q;
  std::uint64_t epoch;
  std::vector<Path> paths;
  KspDgStats stats;
  PyenStats pyen;
};

void write_stats(std::ostream& out, const std::vector<QueryRow>& rows) {
  out << "query_id,s,t,k,epoch,paths,iterations,certified_after,tie_iterations,segment_requests,join_retries,"
         "lemma_violations,spur_searches,reuse_hits,pruned_tasks\n";
  for (const auto& r : rows)
    out << r.qid << ',' << r.q.s << ',' << r.q.t << ',' << r.q.k << ',' << r.epoch << ',' << r.paths.size() << ','
        << r.stats.iterations << ',' << r.stats.certified_after << ',' << r.stats.tie_iterations << ','
        << r.stats.segment_requests << ',' << r.stats.join_retries << ',' << r.stats.lemma_violations << ','
        << r.pyen.spur_searches << ',' << r.pyen.reuse_hits << ',' << r.pyen.pruned_tasks << '\n';
}

/// Whole graph as a search target for the single-process baselines.
struct WholeGraph {
  const Graph* g;
  std::size_t vertex_count() const { return g->vertex_count(); }
  std::size_t edge_count() const { return g->edge_count(); }
  std::span<const Arc> neighbors(VertexId v) const { return g->neighbors(v); }
};

int cmd_partition(const std::string& graph, std::size_t z, const std::string& out) {
  Graph g = load_graph(graph);
  Partition p = partition_bfs(g, z);
  if (out.empty()) {
    dump_partition_csv(p, std::cout);
  } else {
    auto f = open_out(out);
    dump_partition_csv(p, f);
  }
  std::cerr << "subgraphs " << p.subgraph_count() << ", boundary vertices " << p.boundary_vertex_count() << '\n';
  return kExitOk;
}

int cmd_build_index(const std::string& graph, const RunConfig& cfg, const fs::path& dir) {
  Graph g = load_graph(graph);
  auto t0 = std::chrono::steady_clock::now();
  DtlpIndex idx(g, cfg.dtlp_options());
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  {
    auto f = open_out(dir / "partition.csv");
    dump_partition_csv(idx.partition(), f);
  }
  {
    auto f = open_out(dir / "bounding_paths.csv");
    bool header = true;
    for (const auto& sx : idx.subgraphs()) {
      dump_bounding_paths_csv(sx.subgraph(), sx.sets(), f, header);
      header = false;
    }
  }
  {
    auto f = open_out(dir / "skeleton.csv");
    idx.skeleton().dump_csv(f);
  }
  {
    auto f = open_out(dir / "compaction.csv");
    f << "sg,boundary,pairs,paths,ebp_elements,tree_nodes,tails,ratio,epindex_estimate\n";
    for (const auto& sx : idx.subgraphs()) {
      auto r = compaction_report(sx.tree(), sx.ebp());
      std::size_t paths = 0;
      for (const auto& s : sx.sets()) paths += s.paths.size();
      auto nb = sx.subgraph().topology().boundary_vertices().size();
      f << sx.id() << ',' << nb << ',' << sx.sets().size() << ',' << paths << ',' << r.element_count << ','
        << r.node_count << ',' << r.tail_count << ',' << r.ratio << ','
        << estimate_epindex_elements(nb, cfg.xi, sx.subgraph().edge_count()) << '\n';
    }
  }
  {
    auto f = open_out(dir / "gmptree.txt");
    for (const auto& sx : idx.subgraphs()) {
      f << "subgraph " << sx.id() << '\n';
      sx.tree().dump(f);
    }
  }
  std::cout << "vertices " << g.vertex_count() << ", edges " << g.edge_count() << ", subgraphs "
            << idx.partition().subgraph_count() << ", boundary vertices " << idx.partition().boundary_vertex_count()
            << ", skeleton edges " << idx.skeleton().edges().size() << ", build seconds " << secs << '\n';
  return kExitOk;
}

int cmd_gen_stream(const std::string& graph, const DynamicsConfig& dc, const std::string& out) {
  Graph g = load_graph(graph);
  auto ev = generate_weight_stream(g, dc);
  if (out.empty()) {
    write_trace(std::cout, ev);
  } else {
    auto f = open_out(out);
    write_trace(f, ev);
  }
  return kExitOk;
}

int cmd_gen_queries(const std::string& graph, std::size_t count, std::size_t k, std::uint64_t seed,
                    const std::vector<std::uint64_t>& trace_ticks, const std::string& out) {
  Graph g = load_graph(graph);
  auto qs = generate_queries(g, count, k, seed);
  std::ostringstream buf;
  if (trace_ticks.empty()) {
    write_queries_csv(buf, qs);
  } else {
    std::vector<TraceEvent> ev;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      qs[i].tick = trace_ticks[0] + i * (trace_ticks.size() > 1 ? trace_ticks[1] : 1);
      ev.push_back(qs[i]);
    }
    write_trace(buf, ev);
  }
  if (out.empty()) {
    std::cout << buf.str();
  } else {
    auto f = open_out(out);
    f << buf.str();
  }
  return kExitOk;
}

int cmd_gen_graph(std::size_t n, std::uint64_t seed, std::size_t degree, const std::string& out) {
  Graph g = random_road_graph(n, seed, degree);
  auto f = open_out(out);
  f << "c synthetic road-like graph, seed " << seed << '\n';
  emit_dimacs(g, f);
  return kExitOk;
}

int cmd_run(const std::string& graph, const RunConfig& cfg, const std::vector<std::string>& traces,
            const std::string& mode, const fs::path& dir) {
  Graph g = load_graph(graph);
  auto trace = load_traces(traces);
  std::vector<QueryRow> rows;
  if (mode == "ksp-dg") {
    sim::Simulation s(g, cfg.sim_config());
    s.run(trace);
    for (const auto& [qid, r] : s.queries())
      rows.push_back({qid, {r.tick, r.s, r.t, r.k}, r.epoch, r.paths, r.stats, r.pyen});
    auto f = open_out(dir / "messages.csv");
    s.write_log_csv(f);
  } else {
    // Epoch of a query: weight batches that precede it in the trace.
    std::vector<std::uint64_t> epochs;
    std::uint64_t batches = 0;
    for (const auto& st : group_trace(trace)) {
      if (st.query)
        epochs.push_back(batches);
      else
        ++batches;
    }
    Graph h = g;
    replay_trace(h, trace, [&](const Graph& cur, const QueryEvent& q) {
      const std::uint64_t qid = rows.size();
      QueryRow row{qid, q, epochs[qid], {}, {}, {}};
      if (q.s < cur.vertex_count() && q.t < cur.vertex_count()) {
        if (mode == "yen") {
          row.paths = yen_ksp(cur, q.s, q.t, q.k);
        } else {
          WholeGraph view{&cur};
          auto res = pyen_ksp(view, [&cur](EdgeId e) { return cur.weight(e); }, q.s, q.t, q.k,
                              PyenOptions{true, cfg.threads});
          row.paths = std::move(res.paths);
          row.pyen = res.stats;
        }
      }
      rows.push_back(std::move(row));
    });
  }
  {
    auto f = open_out(dir / "results.csv");
    f << "query_id,rank,distance,vertices\n";
    for (const auto& r : rows) write_path_rows(f, r.qid, r.paths);
  }
  {
    auto f = open_out(dir / "stats.csv");
    write_stats(f, rows);
  }
  std::cout << "queries " << rows.size() << ", mode " << mode << '\n';
  return kExitOk;
}

/// Runs the invariant and oracle checks; returns the first violation.
std::optional<std::string> validate(const Graph& g0, const RunConfig& cfg, std::uint64_t seed, std::size_t n_queries,
                                    std::size_t k_max, bool fault_lbd, bool verbose) {
  DtlpIndex idx(g0, cfg.dtlp_options());
  if (fault_lbd) {
    // Every contribution to the first table pair is raised past the true
    // within-subgraph distance.
    const auto& [pair, entry] = *idx.table().entries().begin();
    auto lbds = entry.lbds;
    for (auto [sg, lbd] : lbds) {
      const auto& s = idx.subgraph(sg).subgraph();
      auto d = distances_from(s.topology(), s.weight_fn(), s.topology().local_of(pair.first))
          [s.topology().local_of(pair.second)];
      idx.override_lbd(pair, sg, d >= kInfinity ? d : 2 * d + kMilli);
    }
  }
  std::ostringstream why;
  const Partition& part = idx.partition();
  std::vector<std::size_t> edge_hits(g0.edge_count(), 0);
  for (SubgraphId id = 0; id < part.subgraph_count(); ++id) {
    const auto& sg = part.subgraph(id);
    if (sg.vertex_count() > cfg.z) return "partition: subgraph " + std::to_string(id) + " exceeds z";
    for (const auto& e : sg.edges()) ++edge_hits[e.global];
  }
  for (EdgeId e = 0; e < g0.edge_count(); ++e)
    if (edge_hits[e] != 1) return "partition: edge " + std::to_string(e) + " not owned exactly once";

  auto check_bounds = [&]() -> std::optional<std::string> {
    for (const auto& sx : idx.subgraphs()) {
      const auto& sg = sx.subgraph();
      for (const auto& set : sx.sets()) {
        VertexId a = sg.topology().local_of(set.endpoints.first), b = sg.topology().local_of(set.endpoints.second);
        auto d = distances_from(sg.topology(), sg.weight_fn(), a)[b];
        for (const auto& p : set.paths)
          if (p.bound > p.actual) return "bounds: BD above D on a bounding path of subgraph " + std::to_string(sx.id());
        if (set.lower.lbd > d)
          return "bounds: lbd above within-subgraph distance for (" + std::to_string(set.endpoints.first) + "," +
                 std::to_string(set.endpoints.second) + ") in subgraph " + std::to_string(sx.id());
        if (set.lower.claim == BoundClaim::kExact && set.lower.lbd != d)
          return "bounds: exact claim differs from within-subgraph distance";
      }
      for (const auto& [e, list] : sx.ebp())
        if (sx.tree().retrieve_paths(e) != list) return "compaction: round trip failed in subgraph " + std::to_string(sx.id());
    }
    for (const auto& [pair, e] : idx.skeleton().edges()) {
      if (e.weight >= kInfinity) continue;
      const auto& sg = idx.subgraph(e.argmin).subgraph();
      VertexId a = sg.topology().local_of(pair.first), b = sg.topology().local_of(pair.second);
      auto d = distances_from(sg.topology(), sg.weight_fn(), a)[b];
      if (e.weight > d)
        return "skeleton-soundness: edge (" + std::to_string(pair.first) + "," + std::to_string(pair.second) +
               ") weight " + format_weight(e.weight) + " exceeds distance " + format_weight(d) + " in subgraph " +
               std::to_string(e.argmin);
    }
    return std::nullopt;
  };

  std::mt19937_64 rng(seed);
  DynamicsConfig dc;
  dc.seed = seed;
  dc.snapshots = 3;
  auto stream = group_trace(generate_weight_stream(g0, dc));
  auto queries = generate_queries(g0, n_queries, 1, seed + 1);
  std::size_t next_batch = 0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (i == 0 || (next_batch < stream.size() && i % std::max<std::size_t>(1, queries.size() / (stream.size() + 1)) == 0)) {
      if (auto bad = check_bounds()) return bad;
      if (i > 0) idx.apply_batch(stream[next_batch++].batch);
    }
    auto& q = queries[i];
    q.k = 1 + rng() % k_max;
    auto t0 = std::chrono::steady_clock::now();
    auto got = idx.query(q.s, q.t, q.k);
    if (verbose)
      std::cerr << q.s << "->" << q.t << " k=" << q.k << " iterations " << got.stats.iterations << " ms "
                << std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() << std::endl;
    auto want = yen_ksp(idx.graph(), q.s, q.t, q.k);
    if (got.paths != want)
      return "oracle: query " + std::to_string(q.s) + "->" + std::to_string(q.t) + " k=" + std::to_string(q.k) +
             " after " + std::to_string(next_batch) + " batches differs from Yen";
    if (got.stats.lemma_violations) return "oracle: candidate shorter than its reference path";
  }
  if (auto bad = check_bounds()) return bad;
  return std::nullopt;
}

int cmd_validate(const std::string& graph, std::size_t vertices, const RunConfig& cfg, std::uint64_t seed,
                 std::size_t n_queries, std::size_t k_max, const std::string& fault, bool verbose) {
  Graph g = graph.empty() ? random_road_graph(vertices, seed) : load_graph(graph);
  if (!fault.empty() && fault != "lbd") throw DataError("unknown fault '" + fault + "'");
  auto bad = validate(g, cfg, seed, n_queries, std::max<std::size_t>(1, k_max), fault == "lbd", verbose);
  if (bad) {
    std::cout << "FAIL " << *bad << "\nreproduce: validate --seed " << seed << " --queries " << n_queries
              << " --k-max " << k_max << " --z " << cfg.z << " --xi " << cfg.xi << '\n';
    return kExitValidation;
  }
  std::cout << "PASS " << n_queries << " queries\n";
  return kExitOk;
}

/// Aggregates a stats CSV by k: query count and mean counters.
int cmd_report(const std::string& stats_path) {
  auto in = open_in(stats_path);
  std::string line;
  std::getline(in, line);
  struct Acc {
    std::size_t n = 0;
    double iterations = 0, segments = 0, spurs = 0, reuse = 0, pruned = 0;
  };
  std::map<std::size_t, Acc> by_k;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<double> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(std::stod(tok));
    if (f.size() != 15) throw DataError(stats_path + ": line " + std::to_string(lineno) + ": expected 15 fields");
    auto& a = by_k[static_cast<std::size_t>(f[3])];
    ++a.n;
    a.iterations += f[6];
    a.segments += f[9];
    a.spurs += f[12];
    a.reuse += f[13];
    a.pruned += f[14];
  }
  std::cout << "k,queries,mean_iterations,mean_segment_requests,mean_spur_searches,mean_reuse_hits,mean_pruned_tasks\n";
  for (const auto& [k, a] : by_k)
    std::cout << k << ',' << a.n << ',' << a.iterations / a.n << ',' << a.segments / a.n << ',' << a.spurs / a.n << ','
              << a.reuse / a.n << ',' << a.pruned / a.n << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k shortest paths over dynamic graphs with a two-level lower-bound index"};
  app.require_subcommand(1);

  std::string graph, config_path, out, out_dir = "out", mode = "ksp-dg", fault, stats_path;
  std::vector<std::string> traces;
  std::size_t z = 0, xi = 0, count = 10, k = 2, vertices = 200, degree = 2, n_queries = 100, k_max = 10;
  std::uint64_t seed = 1;
  bool verbose = false;
  std::vector<std::uint64_t> trace_ticks;
  DynamicsConfig dc;

  auto* part = app.add_subcommand("partition", "BFS partition dump as CSV");
  part->add_option("--graph", graph, "DIMACS .gr file")->required();
  part->add_option("--z", z, "subgraph size bound")->required();
  part->add_option("--out", out, "output CSV (stdout if omitted)");

  auto* build = app.add_subcommand("build-index", "build the index and write its dumps");
  build->add_option("--graph", graph)->required();
  build->add_option("--config", config_path, "key=value config file");
  build->add_option("--z", z);
  build->add_option("--xi", xi);
  build->add_option("--out-dir", out_dir);

  auto* stream = app.add_subcommand("gen-stream", "weight update trace");
  stream->add_option("--graph", graph)->required();
  stream->add_option("--alpha", dc.alpha)->check(CLI::Range(0.0, 1.0));
  stream->add_option("--tau", dc.tau)->check(CLI::Range(0.0, 0.999999));
  stream->add_option("--snapshots", dc.snapshots);
  stream->add_option("--seed", dc.seed);
  stream->add_option("--first-tick", dc.first_tick);
  stream->add_option("--tick-step", dc.tick_step);
  stream->add_option("--out", out);

  auto* gq = app.add_subcommand("gen-queries", "random connected query pairs");
  gq->add_option("--graph", graph)->required();
  gq->add_option("--count", count);
  gq->add_option("--k", k)->check(CLI::PositiveNumber);
  gq->add_option("--seed", seed);
  gq->add_option("--trace-ticks", trace_ticks, "emit trace lines starting at tick A, every B ticks")->expected(1, 2);
  gq->add_option("--out", out);

  auto* gg = app.add_subcommand("gen-graph", "synthetic road-like DIMACS graph");
  gg->add_option("--vertices", vertices);
  gg->add_option("--seed", seed);
  gg->add_option("--degree", degree);
  gg->add_option("--out", out)->required();

  auto* run = app.add_subcommand("run", "replay traces and answer their queries");
  run->add_option("--graph", graph)->required();
  run->add_option("--config", config_path);
  run->add_option("--trace", traces)->required();
  run->add_option("--mode", mode)->check(CLI::IsMember({"ksp-dg", "yen", "pyen-only"}));
  run->add_option("--out-dir", out_dir);
  run->add_option("--seed", seed, "scheduler seed (overrides config)");

  auto* val = app.add_subcommand("validate", "oracle and invariant checks");
  val->add_option("--graph", graph, "DIMACS file (synthetic graph if omitted)");
  val->add_option("--vertices", vertices);
  val->add_option("--config", config_path);
  val->add_option("--z", z);
  val->add_option("--xi", xi);
  val->add_option("--seed", seed);
  val->add_option("--queries", n_queries);
  val->add_option("--k-max", k_max);
  val->add_option("--inject-fault", fault, "corrupt a component to test detection (lbd)");
  val->add_flag("--verbose", verbose, "per-query timing on stderr");

  auto* rep = app.add_subcommand("report", "aggregate a stats CSV by k");
  rep->add_option("--stats", stats_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (z) cfg.z = z;
    if (xi) cfg.xi = xi;
    if (run->parsed() && run->count("--seed")) cfg.scheduler_seed = seed;
    if (part->parsed()) return cmd_partition(graph, z, out);
    if (build->parsed()) return cmd_build_index(graph, cfg, out_dir);
    if (stream->parsed()) return cmd_gen_stream(graph, dc, out);
    if (gq->parsed()) return cmd_gen_queries(graph, count, k, seed, trace_ticks, out);
    if (gg->parsed()) return cmd_gen_graph(vertices, seed, degree, out);
    if (run->parsed()) return cmd_run(graph, cfg, traces, mode, out_dir);
    if (val->parsed()) {
      if (!val->count("--z") && config_path.empty()) cfg.z = 40;
      if (!val->count("--xi") && config_path.empty()) cfg.xi = 5;
      return cmd_validate(graph, vertices, cfg, seed, n_queries, k_max, fault, verbose);
    }
    if (rep->parsed()) return cmd_report(stats_path);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
