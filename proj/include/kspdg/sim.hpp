#pragma once

#include <deque>
#include <map>
#include <memory>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "kspdg/dtlp_index.hpp"
#include "kspdg/trace.hpp"

namespace kspdg::sim {

/// 0 is the entrance, then subgraph workers, then query workers.
using WorkerId = std::uint32_t;

struct WeightBatchMsg {
  std::uint64_t batch;
  SubgraphId sg;
  std::vector<WeightDelta> items;
};
/// Tells query workers which subgraphs a batch touched, so they know when
/// every resulting lbd change has arrived.
struct BatchManifestMsg {
  std::uint64_t batch;
  std::vector<SubgraphId> sgs;
};
struct LbdUpdateMsg {
  std::uint64_t batch;
  LbdUpdate update;
};
struct BatchDoneMsg {
  std::uint64_t batch;
  SubgraphId sg;
};
struct QueryAssignMsg {
  std::uint64_t qid;
  VertexId s, t;
  std::size_t k;
  std::uint64_t epoch;
  std::uint32_t attachments;
};
struct AttachRequestMsg {
  std::uint64_t qid;
  VertexId v, also;
  std::uint64_t epoch;
  SubgraphId sg;
  WorkerId reply_to;
};
struct AttachResponseMsg {
  std::uint64_t qid;
  VertexId v;
  std::vector<std::pair<VertexId, Weight>> bounds;
};
struct RefPathBroadcastMsg {
  std::uint64_t qid;
  std::size_t rank;
  std::uint64_t epoch;
  std::vector<VertexId> ref;
  std::vector<SegmentRequest> requests;
};
struct PartialKspRequestMsg {
  std::uint64_t qid;
  std::size_t rank;
  std::uint64_t epoch;
  SegmentRequest request;
};
struct PartialKspResponseMsg {
  std::uint64_t qid;
  std::size_t rank;
  std::size_t segment;
  SubgraphId sg;
  std::vector<Path> paths;
  PyenStats stats;
};
struct QueryResultMsg {
  std::uint64_t qid;
  std::vector<Path> paths;
  KspDgStats stats;
  PyenStats pyen;
};

using Payload = std::variant<WeightBatchMsg, BatchManifestMsg, LbdUpdateMsg, BatchDoneMsg, QueryAssignMsg,
                             AttachRequestMsg, AttachResponseMsg, RefPathBroadcastMsg, PartialKspRequestMsg,
                             PartialKspResponseMsg, QueryResultMsg>;

inline const char* kind_name(std::size_t index) {
  static const char* names[] = {"WeightBatch",    "BatchManifest",   "LbdUpdate",         "BatchDone",
                                "QueryAssign",    "AttachRequest",   "AttachResponse",    "RefPathBroadcast",
                                "PartialKspRequest", "PartialKspResponse", "QueryResult"};
  return names[index];
}

struct Message {
  WorkerId from = 0;
  WorkerId to = 0;
  std::uint64_t seq = 0;  // per sender
  Payload payload;

  const char* kind() const { return kind_name(payload.index()); }
};

/// FNV-1a over a canonical field encoding.
class Digest {
 public:
  void add(std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h_ ^= (x >> (8 * i)) & 0xff;
      h_ *= 1099511628211ULL;
    }
  }
  void add(const Path& p) {
    add(p.distance);
    add(p.vertices.size());
    for (VertexId v : p.vertices) add(v);
  }
  void add(const SegmentRequest& r) {
    add(r.segment);
    add(r.sg);
    add(r.from);
    add(r.to);
    add(r.count);
    add(r.forbidden.size());
    for (VertexId v : r.forbidden) add(v);
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 1469598103934665603ULL;
};

inline std::uint64_t digest(const Payload& p) {
  Digest d;
  d.add(p.index());
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, WeightBatchMsg>) {
          d.add(m.batch);
          d.add(m.sg);
          for (const auto& i : m.items) {
            d.add(i.edge);
            d.add(static_cast<std::uint64_t>(i.delta));
          }
        } else if constexpr (std::is_same_v<T, BatchManifestMsg>) {
          d.add(m.batch);
          for (auto sg : m.sgs) d.add(sg);
        } else if constexpr (std::is_same_v<T, LbdUpdateMsg>) {
          d.add(m.batch);
          d.add(m.update.seq);
          d.add(m.update.pair.first);
          d.add(m.update.pair.second);
          d.add(m.update.sg);
          d.add(static_cast<std::uint64_t>(m.update.lbd));
        } else if constexpr (std::is_same_v<T, BatchDoneMsg>) {
          d.add(m.batch);
          d.add(m.sg);
        } else if constexpr (std::is_same_v<T, QueryAssignMsg>) {
          d.add(m.qid);
          d.add(m.s);
          d.add(m.t);
          d.add(m.k);
          d.add(m.epoch);
          d.add(m.attachments);
        } else if constexpr (std::is_same_v<T, AttachRequestMsg>) {
          d.add(m.qid);
          d.add(m.v);
          d.add(m.also);
          d.add(m.epoch);
          d.add(m.sg);
          d.add(m.reply_to);
        } else if constexpr (std::is_same_v<T, AttachResponseMsg>) {
          d.add(m.qid);
          d.add(m.v);
          for (auto [b, w] : m.bounds) {
            d.add(b);
            d.add(static_cast<std::uint64_t>(w));
          }
        } else if constexpr (std::is_same_v<T, RefPathBroadcastMsg>) {
          d.add(m.qid);
          d.add(m.rank);
          d.add(m.epoch);
          for (VertexId v : m.ref) d.add(v);
          for (const auto& r : m.requests) d.add(r);
        } else if constexpr (std::is_same_v<T, PartialKspRequestMsg>) {
          d.add(m.qid);
          d.add(m.rank);
          d.add(m.epoch);
          d.add(m.request);
        } else if constexpr (std::is_same_v<T, PartialKspResponseMsg>) {
          d.add(m.qid);
          d.add(m.rank);
          d.add(m.segment);
          d.add(m.sg);
          for (const auto& path : m.paths) d.add(path);
        } else if constexpr (std::is_same_v<T, QueryResultMsg>) {
          d.add(m.qid);
          for (const auto& path : m.paths) d.add(path);
        }
      },
      p);
  return d.value();
}

struct SimConfig {
  DtlpOptions dtlp;
  std::size_t subgraph_workers = 2;
  std::size_t query_workers = 2;
  std::uint64_t seed = 1;
  std::size_t steps_per_tick = 64;
  bool targeted_routing = false;
};

struct LogEntry {
  std::uint64_t step;
  std::uint64_t tick;
  WorkerId from, to;
  std::string kind;
  std::uint64_t digest;
};

enum class QueryStatus : std::uint8_t { kPending, kDone, kRejected };

struct QueryRecord {
  std::uint64_t qid = 0;
  std::uint64_t tick = 0;
  VertexId s = 0, t = 0;
  std::size_t k = 0;
  std::uint64_t epoch = 0;  // weight batches applied before the query
  WorkerId worker = 0;
  QueryStatus status = QueryStatus::kPending;
  std::vector<Path> paths;
  KspDgStats stats;
  PyenStats pyen;
};

/// Deterministic single-process run of the deployment: an entrance that
/// splits weight batches and assigns queries, subgraph workers that own the
/// bounds and answer partial searches, and query workers that hold skeleton
/// replicas and drive KSP-DG. Messages travel over per (sender, receiver)
/// FIFO channels; a seeded scheduler picks which channel delivers next.
///
/// A query is answered on the weights after the last batch the entrance had
/// issued when it assigned the query. Subgraph workers keep a weight
/// snapshot per batch and query workers a skeleton per batch for this.
class Simulation {
 public:
  Simulation(const Graph& g, SimConfig cfg)
      : graph_(g), cfg_(std::move(cfg)), partition_(partition_bfs(graph_, cfg_.dtlp.z)), rng_(cfg_.seed) {
    if (cfg_.subgraph_workers == 0 || cfg_.query_workers == 0) throw ParameterError("need at least one worker of each role");
    subgraph_workers_.resize(cfg_.subgraph_workers);
    query_workers_.resize(cfg_.query_workers);
    MbdTable table;
    for (SubgraphId id = 0; id < partition_.subgraph_count(); ++id) {
      auto& w = subgraph_workers_[id % cfg_.subgraph_workers];
      auto pairs = boundary_pairs(partition_, id);
      auto [it, _] = w.owned.try_emplace(id, Subgraph(partition_.subgraph_ptr(id), graph_), pairs, cfg_.dtlp.xi,
                                         cfg_.dtlp.compaction);
      for (const auto& set : it->second.sets()) table.set(set.endpoints, id, set.lower.lbd);
      w.history[id].emplace_back(0, std::make_shared<const Subgraph>(it->second.subgraph()));
    }
    std::vector<VertexId> boundary;
    for (VertexId v = 0; v < graph_.vertex_count(); ++v)
      if (partition_.is_boundary(v)) boundary.push_back(v);
    SkeletonGraph sk = build_skeleton(table, boundary, cfg_.dtlp.update_rule);
    for (auto& q : query_workers_) q.versions.emplace(0, sk);
  }

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Feeds the trace tick by tick, delivering up to steps_per_tick messages
  /// after each tick's events, then drains every channel.
  void run(const std::vector<TraceEvent>& trace) {
    auto steps = group_trace(trace);
    std::size_t i = 0;
    while (i < steps.size()) {
      if (pending_messages_ == 0 && tick_ < steps[i].tick) tick_ = steps[i].tick;
      while (i < steps.size() && steps[i].tick <= tick_) {
        if (steps[i].query)
          entrance_query(*steps[i].query);
        else
          entrance_batch(steps[i].batch);
        ++i;
      }
      for (std::size_t n = 0; n < cfg_.steps_per_tick && deliver_one();) ++n;
      ++tick_;
    }
    while (deliver_one()) {
    }
  }

  const std::vector<LogEntry>& log() const { return log_; }
  const std::map<std::uint64_t, QueryRecord>& queries() const { return queries_; }
  const Partition& partition() const { return partition_; }
  std::size_t rejected_items() const { return rejected_items_; }
  std::uint64_t batches() const { return batch_seq_; }

  std::string worker_name(WorkerId w) const {
    if (w == 0) return "entrance";
    if (w <= subgraph_workers_.size()) return "sg" + std::to_string(w - 1);
    return "q" + std::to_string(w - 1 - subgraph_workers_.size());
  }

  /// Latest skeleton of every query worker.
  std::vector<const SkeletonGraph*> replicas() const {
    std::vector<const SkeletonGraph*> out;
    for (const auto& q : query_workers_) out.push_back(&q.versions.rbegin()->second);
    return out;
  }

  /// Graph with the weights currently held by the subgraph workers.
  Graph current_graph() const {
    Graph g = graph_;
    for (const auto& w : subgraph_workers_)
      for (const auto& [id, idx] : w.owned) {
        const auto& sg = idx.subgraph();
        for (EdgeId le = 0; le < sg.edge_count(); ++le) g.set_weight(sg.topology().edges()[le].global, sg.weight(le));
      }
    return g;
  }

  const SubgraphIndex& subgraph_index(SubgraphId id) const {
    return subgraph_workers_[id % subgraph_workers_.size()].owned.at(id);
  }

  void write_log_csv(std::ostream& out) const {
    out << "step,tick,sender,receiver,kind,digest\n";
    for (const auto& e : log_)
      out << e.step << ',' << e.tick << ',' << worker_name(e.from) << ',' << worker_name(e.to) << ',' << e.kind << ','
          << std::hex << e.digest << std::dec << '\n';
  }

 private:
  struct SubgraphWorker {
    std::map<SubgraphId, SubgraphIndex> owned;
    std::map<SubgraphId, std::vector<std::pair<std::uint64_t, std::shared_ptr<const Subgraph>>>> history;
    std::uint64_t update_seq = 0;

    const Subgraph& at_epoch(SubgraphId sg, std::uint64_t epoch) const {
      const auto& h = history.at(sg);
      auto it = std::upper_bound(h.begin(), h.end(), epoch, [](std::uint64_t e, const auto& x) { return e < x.first; });
      return *std::prev(it)->second;
    }
  };

  struct ActiveQuery {
    QueryAssignMsg assign{};
    bool assigned = false;
    std::vector<AttachResponseMsg> attachments;
    std::unique_ptr<KspDgDriver> driver;
    PyenStats pyen;
  };

  struct QueryWorker {
    std::map<std::uint64_t, SkeletonGraph> versions;
    std::map<std::uint64_t, std::set<SubgraphId>> manifests, done;
    std::map<std::uint64_t, std::vector<LbdUpdate>> buffered;
    std::map<std::uint64_t, ActiveQuery> queries;
  };

  WorkerId subgraph_worker_id(std::size_t i) const { return static_cast<WorkerId>(1 + i); }
  WorkerId query_worker_id(std::size_t i) const { return static_cast<WorkerId>(1 + subgraph_workers_.size() + i); }
  WorkerId owner_of(SubgraphId sg) const { return subgraph_worker_id(sg % subgraph_workers_.size()); }

  void send(WorkerId from, WorkerId to, Payload p) {
    channels_[{from, to}].push_back(Message{from, to, ++send_seq_[from], std::move(p)});
    ++pending_messages_;
  }

  bool deliver_one() {
    if (pending_messages_ == 0) return false;
    std::vector<std::deque<Message>*> ready;
    for (auto& [key, q] : channels_)
      if (!q.empty()) ready.push_back(&q);
    auto& q = *ready[rng_() % ready.size()];
    Message m = std::move(q.front());
    q.pop_front();
    --pending_messages_;
    log_.push_back({++step_, tick_, m.from, m.to, m.kind(), digest(m.payload)});
    if (m.to == 0)
      entrance_receive(m);
    else if (m.to <= subgraph_workers_.size())
      subgraph_receive(m.to, m);
    else
      query_receive(m.to, m);
    return true;
  }

  // Entrance.

  void entrance_batch(const std::vector<WeightDelta>& items) {
    std::map<SubgraphId, std::vector<WeightDelta>> by_sg;
    for (const auto& d : items) {
      if (d.edge >= graph_.edge_count()) {
        ++rejected_items_;
        continue;
      }
      by_sg[partition_.edge_owner(d.edge)].push_back(d);
    }
    if (by_sg.empty()) return;
    const std::uint64_t seq = ++batch_seq_;
    std::vector<SubgraphId> sgs;
    for (auto& [sg, list] : by_sg) {
      sgs.push_back(sg);
      send(0, owner_of(sg), WeightBatchMsg{seq, sg, std::move(list)});
    }
    for (std::size_t i = 0; i < query_workers_.size(); ++i) send(0, query_worker_id(i), BatchManifestMsg{seq, sgs});
  }

  void entrance_query(const QueryEvent& ev) {
    QueryRecord rec;
    rec.qid = next_qid_++;
    rec.tick = ev.tick;
    rec.s = ev.s;
    rec.t = ev.t;
    rec.k = ev.k;
    rec.epoch = batch_seq_;
    if (ev.s >= graph_.vertex_count() || ev.t >= graph_.vertex_count() || ev.k == 0) {
      rec.status = QueryStatus::kRejected;
      queries_.emplace(rec.qid, std::move(rec));
      return;
    }
    rec.worker = query_worker_id(rec.qid % query_workers_.size());
    std::uint32_t attachments = 0;
    if (ev.s != ev.t) {
      for (VertexId v : {ev.s, ev.t}) {
        if (partition_.is_boundary(v)) continue;
        SubgraphId sg = partition_.subgraphs_of(v).front();
        VertexId also = v == ev.s ? ev.t : kNoVertex;
        send(0, owner_of(sg), AttachRequestMsg{rec.qid, v, also, rec.epoch, sg, rec.worker});
        ++attachments;
      }
    }
    send(0, rec.worker, QueryAssignMsg{rec.qid, ev.s, ev.t, ev.k, rec.epoch, attachments});
    queries_.emplace(rec.qid, std::move(rec));
  }

  void entrance_receive(Message& m) {
    auto& r = std::get<QueryResultMsg>(m.payload);
    auto& rec = queries_.at(r.qid);
    rec.paths = std::move(r.paths);
    rec.stats = r.stats;
    rec.pyen = r.pyen;
    rec.status = QueryStatus::kDone;
  }

  // Subgraph workers.

  void subgraph_receive(WorkerId self, Message& m) {
    auto& w = subgraph_workers_[self - 1];
    if (auto* b = std::get_if<WeightBatchMsg>(&m.payload)) {
      auto& idx = w.owned.at(b->sg);
      std::vector<LbdChange> changes;
      try {
        changes = idx.refresh_bounds(b->items);
      } catch (const ParameterError&) {
        rejected_items_ += b->items.size();
      }
      w.history[b->sg].emplace_back(b->batch, std::make_shared<const Subgraph>(idx.subgraph()));
      for (const auto& c : changes) {
        LbdUpdate u{++w.update_seq, c.pair, b->sg, c.new_lbd};
        for (std::size_t i = 0; i < query_workers_.size(); ++i)
          send(self, query_worker_id(i), LbdUpdateMsg{b->batch, u});
      }
      for (std::size_t i = 0; i < query_workers_.size(); ++i) send(self, query_worker_id(i), BatchDoneMsg{b->batch, b->sg});
    } else if (auto* a = std::get_if<AttachRequestMsg>(&m.payload)) {
      const Subgraph& sg = w.at_epoch(a->sg, a->epoch);
      send(self, a->reply_to, AttachResponseMsg{a->qid, a->v, attachment_bounds(sg, a->v, a->also, cfg_.dtlp.xi)});
    } else if (auto* r = std::get_if<RefPathBroadcastMsg>(&m.payload)) {
      for (const auto& req : r->requests)
        if (w.owned.contains(req.sg)) answer_partial(self, m.from, r->qid, r->rank, r->epoch, req);
    } else if (auto* p = std::get_if<PartialKspRequestMsg>(&m.payload)) {
      if (w.owned.contains(p->request.sg)) answer_partial(self, m.from, p->qid, p->rank, p->epoch, p->request);
    }
  }

  void answer_partial(WorkerId self, WorkerId to, std::uint64_t qid, std::size_t rank, std::uint64_t epoch,
                      const SegmentRequest& req) {
    const Subgraph& sg = subgraph_workers_[self - 1].at_epoch(req.sg, epoch);
    auto res = pyen_ksp(sg, req.from, req.to, req.count, cfg_.dtlp.pyen, req.forbidden);
    send(self, to, PartialKspResponseMsg{qid, rank, req.segment, req.sg, std::move(res.paths), res.stats});
  }

  // Query workers.

  void query_receive(WorkerId self, Message& m) {
    auto& w = query_workers_[self - 1 - subgraph_workers_.size()];
    if (auto* b = std::get_if<BatchManifestMsg>(&m.payload)) {
      w.manifests[b->batch].insert(b->sgs.begin(), b->sgs.end());
    } else if (auto* u = std::get_if<LbdUpdateMsg>(&m.payload)) {
      w.buffered[u->batch].push_back(u->update);
    } else if (auto* d = std::get_if<BatchDoneMsg>(&m.payload)) {
      w.done[d->batch].insert(d->sg);
    } else if (auto* a = std::get_if<QueryAssignMsg>(&m.payload)) {
      auto& q = w.queries[a->qid];
      q.assign = *a;
      q.assigned = true;
    } else if (auto* r = std::get_if<AttachResponseMsg>(&m.payload)) {
      w.queries[r->qid].attachments.push_back(std::move(*r));
    } else if (auto* p = std::get_if<PartialKspResponseMsg>(&m.payload)) {
      auto& q = w.queries.at(p->qid);
      q.pyen += p->stats;
      q.driver->supply(p->segment, p->sg, std::move(p->paths));
      if (q.driver->outstanding() == 0) advance_query(self, w, p->qid);
      return;
    }
    advance_versions(w);
    std::vector<std::uint64_t> ready;
    for (auto& [qid, q] : w.queries)
      if (!q.driver && q.assigned && q.attachments.size() == q.assign.attachments &&
          w.versions.rbegin()->first >= q.assign.epoch)
        ready.push_back(qid);
    for (auto qid : ready) start_query(self, w, qid);
    prune_versions(w);
  }

  /// Builds the next skeleton version once every subgraph a batch touched
  /// has reported. Updates of a batch are applied in (subgraph, seq) order.
  void advance_versions(QueryWorker& w) {
    while (true) {
      std::uint64_t next = w.versions.rbegin()->first + 1;
      auto man = w.manifests.find(next);
      if (man == w.manifests.end() || w.done[next] != man->second) return;
      SkeletonGraph sk = w.versions.rbegin()->second;
      auto& ups = w.buffered[next];
      std::sort(ups.begin(), ups.end(), [](const LbdUpdate& a, const LbdUpdate& b) {
        return a.sg != b.sg ? a.sg < b.sg : a.seq < b.seq;
      });
      for (const auto& u : ups) sk.apply(u);
      w.versions.emplace(next, std::move(sk));
      w.buffered.erase(next);
      w.manifests.erase(next);
      w.done.erase(next);
    }
  }

  void prune_versions(QueryWorker& w) {
    std::uint64_t keep = w.versions.rbegin()->first;
    for (const auto& [qid, q] : w.queries)
      if (!q.driver) keep = std::min(keep, q.assigned ? q.assign.epoch : 0);
    while (w.versions.begin()->first < keep) w.versions.erase(w.versions.begin());
  }

  void start_query(WorkerId self, QueryWorker& w, std::uint64_t qid) {
    auto& q = w.queries.at(qid);
    SkeletonGraph& sk = w.versions.at(q.assign.epoch);
    std::sort(q.attachments.begin(), q.attachments.end(), [&](const auto& a, const auto& b) {
      return (a.v == q.assign.s) > (b.v == q.assign.s);
    });
    std::vector<SkeletonGraph::AttachmentId> handles;
    for (const auto& a : q.attachments) handles.push_back(sk.attach_query_vertex(a.v, a.bounds));
    SkeletonView view = sk.view();
    for (auto h : handles) sk.release(h);
    q.driver = std::make_unique<KspDgDriver>(std::move(view), partition_, q.assign.s, q.assign.t, q.assign.k);
    advance_query(self, w, qid);
  }

  void advance_query(WorkerId self, QueryWorker& w, std::uint64_t qid) {
    auto& q = w.queries.at(qid);
    if (q.driver->step() == KspDgDriver::Status::kFinished) {
      send(self, 0, QueryResultMsg{qid, q.driver->result(), q.driver->stats(), q.pyen});
      w.queries.erase(qid);
      return;
    }
    const std::size_t rank = q.driver->stats().iterations;
    const auto& reqs = q.driver->pending();
    if (!cfg_.targeted_routing && q.driver->pending_for_new_reference()) {
      RefPathBroadcastMsg b{qid, rank, q.assign.epoch, q.driver->current_reference()->vertices, reqs};
      for (std::size_t i = 0; i < subgraph_workers_.size(); ++i) send(self, subgraph_worker_id(i), b);
    } else {
      for (const auto& r : reqs) send(self, owner_of(r.sg), PartialKspRequestMsg{qid, rank, q.assign.epoch, r});
    }
  }

  Graph graph_;
  SimConfig cfg_;
  Partition partition_;
  std::mt19937_64 rng_;
  std::vector<SubgraphWorker> subgraph_workers_;
  std::vector<QueryWorker> query_workers_;
  std::map<std::pair<WorkerId, WorkerId>, std::deque<Message>> channels_;
  std::map<WorkerId, std::uint64_t> send_seq_;
  std::size_t pending_messages_ = 0;
  std::uint64_t step_ = 0, tick_ = 0, batch_seq_ = 0, next_qid_ = 0;
  std::size_t rejected_items_ = 0;
  std::vector<LogEntry> log_;
  std::map<std::uint64_t, QueryRecord> queries_;
};

}  // namespace kspdg::sim
