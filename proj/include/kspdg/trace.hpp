#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "kspdg/subgraph_index.hpp"

namespace kspdg {

struct UpdateEvent {
  std::uint64_t tick = 0;
  EdgeId edge = 0;
  Weight delta = 0;  // milli-units

  friend bool operator==(const UpdateEvent&, const UpdateEvent&) = default;
};

struct QueryEvent {
  std::uint64_t tick = 0;
  VertexId s = 0;
  VertexId t = 0;
  std::size_t k = 1;

  friend bool operator==(const QueryEvent&, const QueryEvent&) = default;
};

using TraceEvent = std::variant<UpdateEvent, QueryEvent>;

inline std::uint64_t event_tick(const TraceEvent& e) {
  return std::visit([](const auto& x) { return x.tick; }, e);
}

/// `t=<tick> update <edge> <delta>` or `t=<tick> query <s> <t> <k>`, ids
/// 0-based, delta in milli-units. Blank lines and `#` comments are skipped.
inline std::vector<TraceEvent> parse_trace(std::istream& in) {
  std::vector<TraceEvent> out;
  std::string line;
  std::size_t lineno = 0;
  auto num = [&](std::string_view tok, long long& v) {
    if (!detail::parse_int(tok, v)) throw ParseError(lineno, "bad number '" + std::string(tok) + "'");
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view rest = line;
    std::vector<std::string_view> toks;
    while (!rest.empty()) {
      auto tok = detail::next_token(rest);
      if (tok.empty()) break;
      toks.push_back(tok);
    }
    if (toks.empty() || toks[0][0] == '#') continue;
    if (toks[0].substr(0, 2) != "t=") throw ParseError(lineno, "expected t=<tick>");
    long long tick = 0;
    num(toks[0].substr(2), tick);
    if (tick < 0) throw ParseError(lineno, "negative tick");
    if (toks.size() == 4 && toks[1] == "update") {
      long long e = 0, d = 0;
      num(toks[2], e);
      num(toks[3], d);
      if (e < 0) throw ParseError(lineno, "negative edge id");
      out.push_back(UpdateEvent{static_cast<std::uint64_t>(tick), static_cast<EdgeId>(e), d});
    } else if (toks.size() == 5 && toks[1] == "query") {
      long long s = 0, t = 0, k = 0;
      num(toks[2], s);
      num(toks[3], t);
      num(toks[4], k);
      if (s < 0 || t < 0 || k < 1) throw ParseError(lineno, "bad query fields");
      out.push_back(QueryEvent{static_cast<std::uint64_t>(tick), static_cast<VertexId>(s), static_cast<VertexId>(t),
                               static_cast<std::size_t>(k)});
    } else {
      throw ParseError(lineno, "unknown event");
    }
  }
  return out;
}

inline void write_trace(std::ostream& out, const std::vector<TraceEvent>& events) {
  for (const auto& ev : events) {
    if (auto* u = std::get_if<UpdateEvent>(&ev))
      out << "t=" << u->tick << " update " << u->edge << ' ' << u->delta << '\n';
    else {
      const auto& q = std::get<QueryEvent>(ev);
      out << "t=" << q.tick << " query " << q.s << ' ' << q.t << ' ' << q.k << '\n';
    }
  }
}

/// A trace step: a batch of consecutive same-tick updates, or one query.
struct TraceStep {
  std::uint64_t tick = 0;
  std::vector<WeightDelta> batch;
  std::optional<QueryEvent> query;
};

inline std::vector<TraceStep> group_trace(const std::vector<TraceEvent>& events) {
  std::vector<TraceStep> out;
  for (const auto& ev : events) {
    if (auto* u = std::get_if<UpdateEvent>(&ev)) {
      if (out.empty() || out.back().query || out.back().tick != u->tick) out.push_back({u->tick, {}, {}});
      out.back().batch.push_back({u->edge, u->delta});
    } else {
      const auto& q = std::get<QueryEvent>(ev);
      out.push_back({q.tick, {}, q});
    }
  }
  return out;
}

}  // namespace kspdg
