#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <variant>
#include <vector>

#include "kspdg/partition.hpp"
#include "kspdg/skeleton.hpp"
#include "kspdg/yen.hpp"

namespace kspdg {

/// The best k paths seen so far, ascending by (distance, vertex sequence).
class CandidateList {
 public:
  explicit CandidateList(std::size_t k) : k_(k) {}

  /// Returns true if the path entered the list.
  bool insert(Path p) {
    if (members_.contains(p.vertices)) return false;
    auto pos = std::upper_bound(paths_.begin(), paths_.end(), p, path_less);
    if (paths_.size() == k_ && pos == paths_.end()) return false;
    members_.insert(p.vertices);
    paths_.insert(pos, std::move(p));
    if (paths_.size() > k_) {
      members_.erase(paths_.back().vertices);
      paths_.pop_back();
    }
    return true;
  }

  bool full() const { return paths_.size() == k_; }
  Weight dist() const { return full() ? paths_.back().distance : kInfinity; }
  const std::vector<Path>& paths() const { return paths_; }
  std::size_t size() const { return paths_.size(); }

 private:
  std::size_t k_;
  std::vector<Path> paths_;
  std::set<std::vector<VertexId>> members_;
};

/// Vertices of `p` that are boundary vertices, plus its endpoints.
inline std::vector<VertexId> boundary_sequence(std::span<const VertexId> p, const Partition& part) {
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (i == 0 || i + 1 == p.size() || part.is_boundary(p[i])) out.push_back(p[i]);
  return out;
}

/// Sorted partial paths of one segment; `exhausted` means no further path
/// exists beyond those listed.
struct SegmentList {
  std::vector<Path> paths;
  bool exhausted = false;
};

struct JoinNeedsMore {
  std::size_t segment;
};

/// Resumable best-first enumeration of the simple concatenations of one
/// path per segment, in ascending distance.
///
/// The search runs over prefixes of choices: a node fixes the paths of the
/// first j segments and is keyed by their distance plus the best distance of
/// every later segment. Its successors are the extension by the first path
/// of segment j+1 and the next path of segment j. A prefix that already
/// repeats a vertex is not extended. When a list runs out before it is
/// known to be complete, the node waits until the list is extended.
class JoinCursor {
 public:
  /// Lists must stay alive and may only grow (by appending) between calls.
  explicit JoinCursor(std::vector<const SegmentList*> lists) : lists_(std::move(lists)), blocked_(lists_.size()) {
    Weight d0 = 0;
    for (std::size_t j = 0; j < lists_.size(); ++j) {
      const auto& l = *lists_[j];
      if (l.paths.empty()) {
        if (l.exhausted) return;
        throw ParameterError("join started on a segment without paths");
      }
      d0 += l.paths[0].distance;
    }
    if (!lists_.empty()) heap_.push({d0, Prefix{0}});
  }

  /// Least distance anything not yet produced can have; kInfinity once
  /// the enumeration is complete.
  Weight bound() const {
    Weight b = heap_.empty() ? kInfinity : heap_.top().first;
    for (const auto& nodes : blocked_)
      for (const auto& n : nodes) b = std::min(b, n.first);
    return b;
  }

  /// One unit of work: a new path, a request for a longer list, or
  /// monostate when an internal node was expanded or nothing is left.
  std::variant<std::monostate, Path, JoinNeedsMore> advance() {
    Weight top = heap_.empty() ? kInfinity : heap_.top().first;
    for (std::size_t j = 0; j < blocked_.size(); ++j)
      for (const auto& n : blocked_[j])
        if (n.first <= top) return JoinNeedsMore{j};
    if (heap_.empty()) return std::monostate{};
    auto [d, prefix] = heap_.top();
    heap_.pop();
    const std::size_t j = prefix.size() - 1;
    push_sibling(d, prefix);
    seq_.clear();
    for (std::size_t i = 0; i <= j; ++i) {
      const auto& v = lists_[i]->paths[prefix[i]].vertices;
      seq_.insert(seq_.end(), v.begin() + (i == 0 ? 0 : 1), v.end());
    }
    if (!is_simple(seq_)) return std::monostate{};
    if (j + 1 == lists_.size()) return Path{seq_, d};
    prefix.push_back(0);
    heap_.push({d, std::move(prefix)});
    return std::monostate{};
  }

  /// Segment j's list grew or became complete.
  void extended(std::size_t j) {
    auto nodes = std::move(blocked_[j]);
    blocked_[j].clear();
    for (auto& [d, prefix] : nodes) push_sibling(d, prefix);
  }

 private:
  using Prefix = std::vector<std::uint32_t>;
  using Item = std::pair<Weight, Prefix>;

  void push_sibling(Weight d, const Prefix& prefix) {
    const std::size_t j = prefix.size() - 1;
    const auto& l = *lists_[j];
    if (prefix[j] + 1 < l.paths.size()) {
      Prefix sib = prefix;
      ++sib[j];
      heap_.push({d - l.paths[prefix[j]].distance + l.paths[sib[j]].distance, std::move(sib)});
    } else if (!l.exhausted) {
      blocked_[j].push_back({d, prefix});
    }
  }

  std::vector<const SegmentList*> lists_;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap_;
  std::vector<std::vector<Item>> blocked_;  // per segment: nodes whose next sibling is not listed yet
  std::vector<VertexId> seq_;
};

/// The k shortest simple concatenations, with the distance class of the
/// k-th completed, or the segment whose list is too short to decide.
inline std::variant<std::vector<Path>, JoinNeedsMore> best_first_join(std::span<const SegmentList> lists,
                                                                      std::size_t k) {
  std::vector<Path> out;
  std::vector<const SegmentList*> ptrs;
  for (const auto& l : lists) {
    if (l.paths.empty() && !l.exhausted) return JoinNeedsMore{static_cast<std::size_t>(&l - lists.data())};
    if (l.paths.empty()) return out;
    ptrs.push_back(&l);
  }
  JoinCursor cur(std::move(ptrs));
  while (!(out.size() >= k && cur.bound() > out[k - 1].distance) && cur.bound() < kInfinity) {
    auto r = cur.advance();
    if (auto* more = std::get_if<JoinNeedsMore>(&r)) return *more;
    if (auto* p = std::get_if<Path>(&r)) out.push_back(std::move(*p));
  }
  std::sort(out.begin(), out.end(), path_less);
  if (out.size() > k) out.resize(k);
  return out;
}

/// One partial-KSP search: paths from -> to inside subgraph `sg`, avoiding
/// `forbidden` (the subgraph's other boundary vertices and the query ends).
struct SegmentRequest {
  std::size_t segment = 0;  // driver's id for the (from, to) pair
  SubgraphId sg = 0;
  VertexId from = kNoVertex;
  VertexId to = kNoVertex;
  std::size_t count = 0;
  std::vector<VertexId> forbidden;
};

struct KspDgStats {
  std::size_t iterations = 0;        // reference paths refined
  std::size_t certified_after = 0;   // iterations when the stop test first held
  std::size_t tie_iterations = 0;    // extra references at the stop distance
  std::size_t segment_requests = 0;  // subgraph partial searches issued
  std::size_t lemma_violations = 0;  // candidates shorter than their reference
  std::size_t join_retries = 0;
};

/// Marks the vertices that lie on at least one simple s-t path: those of
/// the biconnected blocks on the block-cut tree path from s to t. Walks the
/// topology of every subgraph of the partition.
inline std::vector<char> vertices_on_simple_paths(const Partition& part, VertexId s, VertexId t) {
  const std::size_t n = part.vertex_count();
  std::vector<std::vector<VertexId>> adj(n);
  for (SubgraphId id = 0; id < part.subgraph_count(); ++id) {
    const auto& topo = part.subgraph(id);
    for (const auto& e : topo.edges()) {
      VertexId u = topo.global_of(e.u), v = topo.global_of(e.v);
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
  }
  std::vector<char> usable(n, 0);
  if (s == t) {
    usable[s] = 1;
    return usable;
  }
  // Iterative Tarjan from s; blocks collected from the edge stack.
  std::vector<std::uint32_t> disc(n, 0), low(n, 0);
  std::vector<std::size_t> next_arc(n, 0);
  std::vector<VertexId> parent(n, kNoVertex);
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<std::vector<VertexId>> blocks;
  std::vector<std::vector<std::uint32_t>> blocks_of(n);
  std::uint32_t timer = 0;
  std::vector<VertexId> stack{s};
  disc[s] = low[s] = ++timer;
  while (!stack.empty()) {
    VertexId u = stack.back();
    if (next_arc[u] < adj[u].size()) {
      VertexId v = adj[u][next_arc[u]++];
      if (!disc[v]) {
        parent[v] = u;
        disc[v] = low[v] = ++timer;
        edges.emplace_back(u, v);
        stack.push_back(v);
      } else if (v != parent[u] && disc[v] < disc[u]) {
        low[u] = std::min(low[u], disc[v]);
        edges.emplace_back(u, v);
      }
      continue;
    }
    stack.pop_back();
    VertexId p = parent[u];
    if (p == kNoVertex) continue;
    low[p] = std::min(low[p], low[u]);
    if (low[u] >= disc[p]) {
      auto id = static_cast<std::uint32_t>(blocks.size());
      std::vector<VertexId> block;
      while (true) {
        auto [a, b] = edges.back();
        edges.pop_back();
        for (VertexId x : {a, b})
          if (blocks_of[x].empty() || blocks_of[x].back() != id) {
            blocks_of[x].push_back(id);
            block.push_back(x);
          }
        if (a == p && b == u) break;
      }
      blocks.push_back(std::move(block));
    }
  }
  if (!disc[t]) return usable;
  // Shortest route s -> t in the vertex/block incidence graph.
  std::vector<std::int64_t> via_block(n, -1);
  std::vector<VertexId> block_from(blocks.size(), kNoVertex);
  std::vector<char> block_seen(blocks.size(), 0);
  std::deque<VertexId> queue{s};
  via_block[s] = -2;
  while (!queue.empty() && via_block[t] == -1) {
    VertexId u = queue.front();
    queue.pop_front();
    for (auto b : blocks_of[u]) {
      if (block_seen[b]) continue;
      block_seen[b] = 1;
      block_from[b] = u;
      for (VertexId x : blocks[b])
        if (via_block[x] == -1) {
          via_block[x] = b;
          queue.push_back(x);
        }
    }
  }
  for (VertexId x = t; x != s;) {
    auto b = static_cast<std::uint32_t>(via_block[x]);
    for (VertexId y : blocks[b]) usable[y] = 1;
    x = block_from[b];
  }
  return usable;
}

/// Skeleton edges (u, v) with no path inside a common subgraph whose
/// interior avoids boundary vertices and the query ends can never be
/// refined into a segment. Dropping them keeps references from wandering
/// through parts of the skeleton that cannot lead anywhere, which matters
/// when fewer than k paths exist and the references would otherwise have to
/// be exhausted. Depends on topology only.
inline SkeletonView drop_unrealisable_edges(const SkeletonView& view, const Partition& part, VertexId s, VertexId t) {
  std::map<VertexId, std::set<VertexId>> reach;
  std::vector<char> seen;
  std::vector<VertexId> stack;
  for (VertexId lu = 0; lu < view.vertex_count(); ++lu) {
    VertexId u = view.global_of(lu);
    auto& out = reach[u];
    for (SubgraphId sg : part.subgraphs_of(u)) {
      const auto& topo = part.subgraph(sg);
      seen.assign(topo.vertex_count(), 0);
      VertexId start = topo.local_of(u);
      seen[start] = 1;
      stack.assign(1, start);
      while (!stack.empty()) {
        VertexId x = stack.back();
        stack.pop_back();
        for (const Arc& a : topo.neighbors(x)) {
          if (seen[a.to]) continue;
          seen[a.to] = 1;
          VertexId g = topo.global_of(a.to);
          if (topo.is_boundary_local(a.to) || g == s || g == t)
            out.insert(g);
          else
            stack.push_back(a.to);
        }
      }
    }
  }
  auto usable = vertices_on_simple_paths(part, s, t);
  return view.filtered([&](VertexId u, VertexId v) { return usable[u] && usable[v] && reach[u].contains(v); });
}

/// Filter-and-refine KSP over a skeleton view. Reference paths come from Yen
/// on the skeleton; each is refined into real paths by joining partial
/// searches in the subgraphs of its consecutive pairs. The caller answers
/// the partial searches (in process or via messages).
///
/// Refinement is lazy: every opened reference keeps a join cursor, and the
/// driver always works on whichever is cheapest, the best open cursor or the
/// next reference, so no reference is refined deeper than the answer needs.
/// Once a segment's shortest distance is known, the query's copy of the
/// skeleton edge is raised to it (or dropped when there is no segment).
/// References that Yen yields on older weights are re-keyed to the current
/// ones and held back until due; Yen itself is restarted on the raised
/// weights once the held-back work outweighs a restart.
///
/// Stops once k paths are held and the k-th is shorter than anything still
/// obtainable, or when nothing is left. Work at exactly the k-th distance is
/// still done so that ties resolve like Yen.
class KspDgDriver {
 public:
  enum class Status { kNeedSegments, kFinished };

  KspDgDriver(SkeletonView view, const Partition& partition, VertexId s, VertexId t, std::size_t k)
      : view_(std::move(view)), partition_(&partition), s_(s), t_(t), k_(k), list_(k) {
    if (k == 0) throw ParameterError("k must be at least 1");
    view_ = drop_unrealisable_edges(view_, partition, s, t);
    refs_done_ = s == t || view_.local_of(s) == kNoVertex || view_.local_of(t) == kNoVertex;
    restart_references();
  }

  KspDgDriver(const KspDgDriver&) = delete;
  KspDgDriver& operator=(const KspDgDriver&) = delete;

  /// Advances until partial searches are needed or the answer is final.
  Status step() {
    opened_with_requests_ = false;
    while (true) {
      if (finished_) return Status::kFinished;
      if (outstanding_ > 0) return Status::kNeedSegments;
      start_ready_cursors();
      if (dirty_ && wasted_ >= opened_.size() + kRestartSlack) restart_references();
      while (!cursor_heap_.empty() && open_[cursor_heap_.top().second].cursor->bound() != cursor_heap_.top().first)
        cursor_heap_.pop();
      const Weight best_bound = cursor_heap_.empty() ? kInfinity : cursor_heap_.top().first;
      const Weight next_ref = next_reference_distance();
      const Weight bound = std::min(best_bound, next_ref);
      if (list_.full() && list_.dist() <= bound && stats_.certified_after == 0)
        stats_.certified_after = stats_.iterations;
      if ((list_.full() && list_.dist() < bound) || bound >= kInfinity) {
        finished_ = true;
        continue;
      }
      if (next_ref <= best_bound) {
        if (list_.full() && list_.dist() == next_ref) ++stats_.tie_iterations;
        open_reference();
        continue;
      }
      const std::size_t i = cursor_heap_.top().second;
      cursor_heap_.pop();
      OpenRef& best = open_[i];
      auto r = best.cursor->advance();
      if (auto* p = std::get_if<Path>(&r)) {
        if (p->distance < best.ref.distance) ++stats_.lemma_violations;
        list_.insert(std::move(*p));
      } else if (auto* more = std::get_if<JoinNeedsMore>(&r)) {
        ++stats_.join_retries;
        std::size_t id = best.segments[more->segment];
        request_segment(id, segments_[id].count * 2);
      }
      queue_cursor(i);
    }
  }

  /// Requests issued by the last step() that still await an answer.
  const std::vector<SegmentRequest>& pending() const { return pending_; }

  /// True when the requests of the last step() came from opening a new
  /// reference (current_reference()) rather than from extending old ones.
  bool pending_for_new_reference() const { return opened_with_requests_; }

  /// Answer to one pending request: paths ascending by (distance, vertex
  /// sequence), at most `count` of them.
  void supply(std::size_t segment, SubgraphId sg, std::vector<Path> paths) {
    auto it = std::find_if(pending_.begin(), pending_.end(),
                           [&](const SegmentRequest& r) { return r.segment == segment && r.sg == sg; });
    if (it == pending_.end()) throw LookupError("unexpected partial result");
    std::size_t count = it->count;
    pending_.erase(it);
    --outstanding_;
    Segment& seg = segments_.at(segment);
    if (paths.size() >= count) seg.all_exhausted = false;
    seg.incoming.insert(seg.incoming.end(), std::make_move_iterator(paths.begin()), std::make_move_iterator(paths.end()));
    if (--seg.waiting > 0) return;
    std::sort(seg.incoming.begin(), seg.incoming.end(), path_less);
    seg.list.exhausted = seg.all_exhausted;
    if (!seg.list.exhausted && seg.incoming.size() > seg.count) seg.incoming.resize(seg.count);
    // Answers are prefixes of one total order, so the old list is a prefix
    // of the new one.
    seg.list.paths = std::move(seg.incoming);
    seg.incoming.clear();
    Weight shortest = seg.list.paths.empty() ? kInfinity : seg.list.paths.front().distance;
    if (view_.raise_weight(seg.from, seg.to, shortest)) dirty_ = true;
    for (std::size_t i : seg.users) {
      auto& r = open_[i];
      if (!r.cursor) continue;
      for (std::size_t j = 0; j < r.segments.size(); ++j)
        if (r.segments[j] == segment) r.cursor->extended(j);
      queue_cursor(i);
    }
  }

  /// Final answer (valid after step() returned kFinished).
  std::vector<Path> result() const {
    if (s_ == t_) return {Path{{s_}, 0}};
    return list_.paths();
  }

  const KspDgStats& stats() const { return stats_; }
  const std::vector<Weight>& reference_distances() const { return ref_distances_; }
  std::size_t outstanding() const { return outstanding_; }
  /// Most recently opened reference path, in global ids.
  const std::optional<Path>& current_reference() const { return current_; }

 private:
  struct Segment {
    VertexId from, to;
    SegmentList list;
    std::size_t count = 0;
    std::size_t waiting = 0;
    bool all_exhausted = true;
    std::vector<Path> incoming;
    std::vector<std::size_t> users;  // open references containing it
  };
  struct OpenRef {
    Path ref;
    std::vector<std::size_t> segments;
    std::optional<JoinCursor> cursor;  // set once every segment has a list
  };

  void restart_references() {
    dirty_ = false;
    wasted_ = 0;
    next_.reset();
    deferred_ = {};
    refs_.reset();
    if (refs_done_) return;
    refs_.emplace(view_, view_.weight_fn(), view_.local_of(s_), view_.local_of(t_));
  }

  /// Current weight of a skeleton path (local ids); kInfinity if an edge
  /// was dropped.
  Weight current_weight(const std::vector<VertexId>& p) const {
    Weight d = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      auto arcs = view_.neighbors(p[i]);
      auto it = std::lower_bound(arcs.begin(), arcs.end(), p[i + 1], [](const Arc& a, VertexId x) { return a.to < x; });
      if (it == arcs.end() || it->to != p[i + 1]) return kInfinity;
      d += view_.weight(it->edge);
    }
    return d;
  }

  void defer(Path p) {
    ++wasted_;
    p.distance = current_weight(p.vertices);
    if (p.distance < kInfinity) deferred_.push(std::move(p));
  }

  /// Distance of the next reference not opened yet, which is left in next_.
  Weight next_reference_distance() {
    if (next_ && dirty_ && current_weight(next_->vertices) != next_->distance) {
      defer(std::move(*next_));
      next_.reset();
    }
    while (!next_) {
      while (!lookahead_ && refs_) {
        auto p = refs_->next();
        if (!p) {
          refs_.reset();
          refs_done_ = true;
          break;
        }
        if (!opened_.contains(p->vertices)) lookahead_ = std::move(p);
      }
      const Weight yen = lookahead_ ? lookahead_->distance : kInfinity;
      if (!deferred_.empty() && deferred_.top().distance <= yen) {
        Path p = deferred_.top();
        deferred_.pop();
        if (current_weight(p.vertices) != p.distance) {
          defer(std::move(p));
          continue;
        }
        next_ = std::move(p);
      } else if (lookahead_) {
        Path p = std::move(*lookahead_);
        lookahead_.reset();
        if (current_weight(p.vertices) != p.distance) {
          defer(std::move(p));
          continue;
        }
        next_ = std::move(p);
      } else {
        return kInfinity;
      }
    }
    return next_->distance;
  }

  void open_reference() {
    Path ref;
    ref.distance = next_->distance;
    for (VertexId v : next_->vertices) ref.vertices.push_back(view_.global_of(v));
    opened_.insert(std::move(next_->vertices));
    next_.reset();
    ref_distances_.push_back(ref.distance);
    current_ = ref;
    ++stats_.iterations;
    const std::size_t index = open_.size();
    OpenRef r;
    r.ref = std::move(ref);
    for (std::size_t j = 0; j + 1 < r.ref.vertices.size(); ++j) {
      VertexId a = r.ref.vertices[j], b = r.ref.vertices[j + 1];
      auto [it, fresh] = segment_ids_.emplace(std::pair{a, b}, segments_.size());
      if (fresh) {
        segments_.push_back({a, b, {}, 0, 0, true, {}, {}});
        request_segment(it->second, k_);
      }
      segments_[it->second].users.push_back(index);
      r.segments.push_back(it->second);
    }
    open_.push_back(std::move(r));
    waiting_refs_.push_back(index);
    if (outstanding_ > 0) opened_with_requests_ = true;
  }

  void start_ready_cursors() {
    std::erase_if(waiting_refs_, [&](std::size_t i) {
      auto& r = open_[i];
      std::vector<const SegmentList*> lists;
      for (auto id : r.segments) {
        if (segments_[id].waiting > 0) return false;
        lists.push_back(&segments_[id].list);
      }
      r.cursor.emplace(std::move(lists));
      queue_cursor(i);
      return true;
    });
  }

  void queue_cursor(std::size_t i) {
    Weight b = open_[i].cursor->bound();
    if (b < kInfinity) cursor_heap_.push({b, i});
  }

  // A segment may not pass through any boundary vertex other than its ends,
  // nor through the query endpoints. Each real path then refines exactly one
  // reference (its own boundary sequence) and a segment's answer depends on
  // its ends only, so answers are shared by all references.
  void request_segment(std::size_t id, std::size_t count) {
    Segment& seg = segments_[id];
    if (seg.waiting > 0 || seg.list.exhausted) return;
    seg.count = count;
    seg.all_exhausted = true;
    auto sgs = partition_->common_subgraphs(seg.from, seg.to);
    if (sgs.empty()) {
      seg.list = {{}, true};
      return;
    }
    seg.waiting = sgs.size();
    for (SubgraphId sg : sgs) {
      std::vector<VertexId> forbidden = partition_->subgraph(sg).boundary_vertices();
      forbidden.push_back(s_);
      forbidden.push_back(t_);
      std::erase_if(forbidden, [&](VertexId v) { return v == seg.from || v == seg.to; });
      std::sort(forbidden.begin(), forbidden.end());
      forbidden.erase(std::unique(forbidden.begin(), forbidden.end()), forbidden.end());
      pending_.push_back({id, sg, seg.from, seg.to, count, std::move(forbidden)});
      ++outstanding_;
      ++stats_.segment_requests;
    }
  }

  using Enumerator = YenEnumerator<SkeletonView, decltype(std::declval<const SkeletonView&>().weight_fn())>;

  SkeletonView view_;
  const Partition* partition_;
  VertexId s_, t_;
  std::size_t k_;
  std::optional<Enumerator> refs_;
  struct PathAfter {
    bool operator()(const Path& a, const Path& b) const { return path_less(b, a); }
  };
  static constexpr std::size_t kRestartSlack = 64;

  std::optional<Path> lookahead_;  // next path from Yen, local ids
  std::priority_queue<Path, std::vector<Path>, PathAfter> deferred_;  // re-keyed to current weights
  std::optional<Path> next_;       // next reference to open
  std::set<std::vector<VertexId>> opened_;
  std::size_t wasted_ = 0;         // Yen paths re-keyed since the last restart
  bool refs_done_ = false;
  bool dirty_ = false;             // weights raised since the last restart
  CandidateList list_;
  std::deque<Segment> segments_;  // stable addresses: cursors point into it
  std::map<std::pair<VertexId, VertexId>, std::size_t> segment_ids_;
  std::deque<OpenRef> open_;
  std::vector<std::size_t> waiting_refs_;
  std::priority_queue<std::pair<Weight, std::size_t>, std::vector<std::pair<Weight, std::size_t>>, std::greater<>>
      cursor_heap_;
  std::vector<SegmentRequest> pending_;
  std::size_t outstanding_ = 0;
  bool finished_ = false;
  bool opened_with_requests_ = false;
  std::optional<Path> current_;
  KspDgStats stats_;
  std::vector<Weight> ref_distances_;
};

}  // namespace kspdg
