#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <cocycle/fabric.hpp>

namespace cocycle {

struct Event {
  enum class Kind { deliver, compute };
  Kind kind = Kind::deliver;
  int edge = -1;        // -1 for injected deliveries
  int node = -1;        // receiver (deliver) / sender (compute)
  Value payload;        // deliver only; never the receiver's message unit
  std::uint64_t seq = 0;
};

inline std::string to_string(Event::Kind k) {
  return k == Event::Kind::deliver ? "deliver" : "compute";
}

struct TraceRecord {
  std::uint64_t step = 0;
  Event::Kind kind = Event::Kind::deliver;
  int edge = -1;
  int node = -1;
  std::optional<Value> payload;
  std::optional<Value> state_before;
  std::optional<Value> state_after;
  std::optional<Value> argument;
  std::optional<Value> message;

  json to_json() const {
    const auto opt = [](const std::optional<Value>& v) { return v ? v->to_json() : json(); };
    json j;
    j["step"] = step;
    j["kind"] = to_string(kind);
    j["edge"] = edge;
    j["node"] = node;
    j["payload"] = opt(payload);
    j["state_before"] = opt(state_before);
    j["state_after"] = opt(state_after);
    j["argument"] = opt(argument);
    j["message"] = opt(message);
    return j;
  }

  static TraceRecord from_json(const json& j) {
    const auto opt = [](const json& v) -> std::optional<Value> {
      if (v.is_null()) return std::nullopt;
      return Value::from_json(v);
    };
    TraceRecord r;
    r.step = j.at("step").get<std::uint64_t>();
    r.kind = j.at("kind").get<std::string>() == "deliver" ? Event::Kind::deliver
                                                          : Event::Kind::compute;
    r.edge = j.at("edge").get<int>();
    r.node = j.at("node").get<int>();
    r.payload = opt(j.at("payload"));
    r.state_before = opt(j.at("state_before"));
    r.state_after = opt(j.at("state_after"));
    r.argument = opt(j.at("argument"));
    r.message = opt(j.at("message"));
    return r;
  }
};

struct TraceHeader {
  std::string instance_hash;
  std::string policy;
  std::uint64_t seed = 0;
  std::uint64_t event_cap = 0;
  std::string generator = "splitmix64";

  json to_json() const {
    json j;
    j["cap"] = event_cap;
    j["generator"] = generator;
    j["instance"] = instance_hash;
    j["policy"] = policy;
    j["seed"] = seed;
    return j;
  }
};

/// Ordered record of executed events; line-delimited JSON on disk
/// (header line, then one record per event).
struct Trace {
  TraceHeader header;
  std::vector<TraceRecord> records;

  std::string records_text() const {
    std::string out;
    for (const TraceRecord& r : records) {
      out += r.to_json().dump();
      out += '\n';
    }
    return out;
  }

  std::string full_text() const { return header.to_json().dump() + "\n" + records_text(); }

  std::string digest() const { return hex64(fnv1a64(records_text())); }

  static Trace parse(const std::string& text) {
    Trace t;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json j = json::parse(line);
      if (!header_seen) {
        t.header.event_cap = j.at("cap").get<std::uint64_t>();
        t.header.generator = j.at("generator").get<std::string>();
        t.header.instance_hash = j.at("instance").get<std::string>();
        t.header.policy = j.at("policy").get<std::string>();
        t.header.seed = j.at("seed").get<std::uint64_t>();
        header_seen = true;
      } else {
        t.records.push_back(TraceRecord::from_json(j));
      }
    }
    return t;
  }
};

/// Selector for one executable event during a scripted run. Payload is
/// matched for deliveries and ignored for computes; among identical matches
/// the lowest-seq pending event is chosen (those are interchangeable).
struct ScriptEntry {
  Event::Kind kind = Event::Kind::deliver;
  int edge = -1;
  int node = -1;
  std::optional<Value> payload;
};

inline std::vector<ScriptEntry> script_from_trace(const Trace& t) {
  std::vector<ScriptEntry> script;
  script.reserve(t.records.size());
  for (const TraceRecord& r : t.records) script.push_back({r.kind, r.edge, r.node, r.payload});
  return script;
}

struct SchedulePolicy {
  enum class Kind { synchronous, fifo, random, scripted };
  Kind kind = Kind::fifo;
  std::uint64_t seed = 0;
  std::vector<ScriptEntry> script;
  std::uint64_t event_cap = 1'000'000;

  std::string describe() const {
    switch (kind) {
      case Kind::synchronous: return "synchronous";
      case Kind::fifo: return "fifo";
      case Kind::random: return "random";
      case Kind::scripted: return "scripted";
    }
    return "?";
  }

  static SchedulePolicy fifo() { return {}; }
  static SchedulePolicy random(std::uint64_t seed) {
    SchedulePolicy p;
    p.kind = Kind::random;
    p.seed = seed;
    return p;
  }
  static SchedulePolicy scripted(std::vector<ScriptEntry> script) {
    SchedulePolicy p;
    p.kind = Kind::scripted;
    p.script = std::move(script);
    return p;
  }
};

/// Mutable execution state: per-node runtimes, the pending-event multiset
/// (kept in injection order, so seq-ascending) and the executed-step counter.
/// Copyable by value for interleaving enumeration.
struct WorldState {
  const Instance* instance = nullptr;
  std::map<int, NodeRuntime> nodes;
  std::vector<Event> pending;
  std::uint64_t steps = 0;
  std::uint64_t next_seq = 0;

  std::map<int, Value> states() const {
    std::map<int, Value> out;
    for (const auto& [id, rt] : nodes) out.emplace(id, rt.state);
    return out;
  }
};

inline WorldState make_world(const Instance& inst) {
  WorldState w;
  w.instance = &inst;
  for (int u : inst.graph.nodes()) {
    NodeRuntime rt;
    rt.state = inst.initial_states.at(u);
    const Value zero = inst.algebra_of(u).args.unit;
    for (int e : inst.graph.out_edges(u)) rt.out_buffers.emplace(e, zero);
    w.nodes.emplace(u, std::move(rt));
  }
  for (const Injection& inj : inst.injected) {
    const Value& unit = inst.algebra_of(inj.node).action.monoid.unit;
    if (inj.payload == unit) continue;  // unit messages are filtered at creation
    w.pending.push_back({Event::Kind::deliver, -1, inj.node, inj.payload, w.next_seq++});
  }
  return w;
}

/// Pending is empty and every incremental out-buffer holds the zero argument.
inline bool detect_quiescence(const WorldState& w) {
  if (!w.pending.empty()) return false;
  for (const auto& [u, rt] : w.nodes) {
    const Value& zero = w.instance->algebra_of(u).args.unit;
    for (const auto& [eid, buf] : rt.out_buffers) {
      if (w.instance->edge_psi.at(eid).mode == MessageMode::incremental && !(buf == zero))
        return false;
    }
  }
  return true;
}

namespace detail {

inline bool pending_compute_for(const WorldState& w, int edge_id) {
  for (const Event& e : w.pending)
    if (e.kind == Event::Kind::compute && e.edge == edge_id) return true;
  return false;
}

/// Conservative check that no pending event other than `self` can still
/// change any buffer of `node`, via reachability over the graph.
inline bool source_buffers_settled(const WorldState& w, int node, const Event& self) {
  for (const Event& e : w.pending) {
    if (e.seq == self.seq) continue;
    int entry = e.kind == Event::Kind::deliver ? e.node : w.instance->graph.edge(e.edge).dst;
    if (entry == node) return false;
    if (w.instance->reachable.at(entry).count(node)) return false;
  }
  return true;
}

}  // namespace detail

inline bool event_eligible(const WorldState& w, const Event& e) {
  if (e.kind == Event::Kind::deliver) return true;
  const Edge& edge = w.instance->graph.edge(e.edge);
  const MessageFn& psi = w.instance->edge_psi.at(e.edge);
  if (psi.mode == MessageMode::incremental) {
    const Value& zero = w.instance->algebra_of(edge.src).args.unit;
    return !(w.nodes.at(edge.src).out_buffers.at(e.edge) == zero);
  }
  return detail::source_buffers_settled(w, edge.src, e);
}

/// Executes the pending event at `index`. Deliveries update the receiver and
/// enqueue computes for out-edges whose buffer changed to (or stayed) nonzero
/// with no compute already pending; computes read the edge buffer and enqueue
/// the delivery unless the message is the receiver's unit.
inline TraceRecord step(WorldState& w, std::size_t index) {
  if (index >= w.pending.size()) throw std::logic_error("scheduling fault: no such pending event");
  const Event ev = w.pending[index];
  if (!event_eligible(w, ev))
    throw std::logic_error("scheduling fault: selected event is not eligible");
  w.pending.erase(w.pending.begin() + static_cast<std::ptrdiff_t>(index));

  TraceRecord rec;
  rec.step = w.steps++;
  rec.kind = ev.kind;
  rec.edge = ev.edge;
  rec.node = ev.node;

  if (ev.kind == Event::Kind::deliver) {
    NodeRuntime& rt = w.nodes.at(ev.node);
    const ArgumentFn& alg = w.instance->algebra_of(ev.node);
    rec.payload = ev.payload;
    rec.state_before = rt.state;

    std::map<int, Value> buffers_before = rt.out_buffers;
    Value emitted = apply_message(rt, ev.payload, alg);
    rec.state_after = rt.state;
    rec.argument = emitted;

    const Value& zero = alg.args.unit;
    for (int eid : w.instance->graph.out_edges(ev.node)) {
      const Value& now = rt.out_buffers.at(eid);
      if (now == zero) continue;
      if (now == buffers_before.at(eid)) continue;
      if (detail::pending_compute_for(w, eid)) continue;
      w.pending.push_back(
          {Event::Kind::compute, eid, ev.node, Value(), w.next_seq++});
    }
    return rec;
  }

  const Edge& edge = w.instance->graph.edge(ev.edge);
  NodeRuntime& rt = w.nodes.at(edge.src);
  const MessageFn& psi = w.instance->edge_psi.at(ev.edge);
  const Value& zero = w.instance->algebra_of(edge.src).args.unit;
  auto [msg, new_buffer] = compute_message(rt.out_buffers.at(ev.edge), psi, zero);
  rt.out_buffers.at(ev.edge) = new_buffer;
  rec.message = msg;

  const Value& receiver_unit = w.instance->algebra_of(edge.dst).action.monoid.unit;
  if (!(msg == receiver_unit)) {
    w.pending.push_back({Event::Kind::deliver, ev.edge, edge.dst, msg, w.next_seq++});
  }
  return rec;
}

enum class RunStatus { quiescent, cap_exceeded, deadlock };

inline std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::quiescent: return "quiescent";
    case RunStatus::cap_exceeded: return "cap_exceeded";
    case RunStatus::deadlock: return "deadlock";
  }
  return "?";
}

struct RunResult {
  RunStatus status = RunStatus::quiescent;
  std::map<int, Value> final_states;
  Trace trace;
  std::uint64_t steps = 0;
};

namespace detail {

inline std::vector<std::size_t> eligible_indices(const WorldState& w) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < w.pending.size(); ++i)
    if (event_eligible(w, w.pending[i])) out.push_back(i);
  return out;
}

inline bool script_matches(const ScriptEntry& s, const Event& e) {
  if (s.kind != e.kind || s.edge != e.edge || s.node != e.node) return false;
  if (e.kind == Event::Kind::deliver) {
    if (!s.payload) return false;
    return *s.payload == e.payload;
  }
  return true;
}

}  // namespace detail

/// Runs to quiescence, the event cap, or deadlock under a deterministic
/// seeded policy; the returned trace replays to identical records.
inline RunResult run(const Instance& inst, const SchedulePolicy& policy) {
  if (policy.kind == SchedulePolicy::Kind::synchronous)
    throw std::invalid_argument("run: the synchronous policy executes via synchronous_run");
  WorldState w = make_world(inst);
  RunResult result;
  result.trace.header.instance_hash = inst.content_hash();
  result.trace.header.policy = policy.describe();
  result.trace.header.seed = policy.seed;
  result.trace.header.event_cap = policy.event_cap;

  std::uint64_t rng = policy.seed;
  std::size_t script_pos = 0;

  for (;;) {
    if (w.pending.empty()) {
      result.status = RunStatus::quiescent;
      break;
    }
    if (w.steps >= policy.event_cap) {
      result.status = RunStatus::cap_exceeded;
      break;
    }
    std::vector<std::size_t> eligible = detail::eligible_indices(w);
    if (eligible.empty()) {
      result.status = RunStatus::deadlock;
      break;
    }

    std::size_t chosen = eligible.front();
    switch (policy.kind) {
      case SchedulePolicy::Kind::fifo:
        break;  // pending is seq-ascending, so the first eligible is the oldest
      case SchedulePolicy::Kind::random:
        chosen = eligible[static_cast<std::size_t>(splitmix64(rng) % eligible.size())];
        break;
      case SchedulePolicy::Kind::scripted: {
        if (script_pos >= policy.script.size())
          throw std::logic_error("scheduling fault: script exhausted with events pending");
        const ScriptEntry& entry = policy.script[script_pos++];
        bool found = false;
        for (std::size_t i : eligible) {
          if (detail::script_matches(entry, w.pending[i])) {
            chosen = i;
            found = true;
            break;
          }
        }
        if (!found)
          throw std::logic_error("scheduling fault: scripted event is not pending/eligible");
        break;
      }
      case SchedulePolicy::Kind::synchronous:
        break;  // unreachable
    }
    result.trace.records.push_back(step(w, chosen));
  }

  result.final_states = w.states();
  result.steps = w.steps;
  return result;
}

namespace detail {

/// One fully synchronous round with per-node algebras: every receiver
/// aggregates psi of round-start sender states, then applies its action.
inline std::map<int, Value> sync_round(const Instance& inst, const std::map<int, Value>& states) {
  std::map<int, Value> next;
  for (int u : inst.graph.nodes()) {
    const ArgumentFn& alg = inst.algebra_of(u);
    Value agg = alg.action.monoid.unit;
    for (int eid : inst.graph.in_edges(u)) {
      const Edge& e = inst.graph.edge(eid);
      const MessageFn& fn = inst.edge_psi.at(eid);
      Value msg;
      if (fn.arity == 1) {
        msg = fn(states.at(e.src));
      } else {
        const Value args[] = {states.at(u), states.at(e.src)};
        msg = fn.eval(args);
      }
      agg = alg.action.monoid.op(agg, msg);
    }
    next.emplace(u, alg.action.act(agg, states.at(u)));
  }
  return next;
}

inline std::map<int, Value> sync_initial(const Instance& inst) {
  std::map<int, Value> states = inst.initial_states;
  for (const Injection& inj : inst.injected) {
    const ArgumentFn& alg = inst.algebra_of(inj.node);
    states.at(inj.node) = alg.action.act(inj.payload, states.at(inj.node));
  }
  return states;
}

}  // namespace detail

/// Round-based fully synchronous semantics: injections applied up front,
/// then exactly `rounds` gather/scatter rounds over full node states.
inline std::map<int, Value> synchronous_run(const Instance& inst, std::uint64_t rounds) {
  if (!inst.supports_synchronous)
    throw std::invalid_argument("instance '" + inst.kind + "' has no synchronous semantics");
  std::map<int, Value> states = detail::sync_initial(inst);
  for (std::uint64_t r = 0; r < rounds; ++r) states = detail::sync_round(inst, states);
  return states;
}

struct SyncResult {
  std::map<int, Value> states;
  bool fixpoint = false;
  std::uint64_t rounds = 0;
};

/// Iterates synchronous rounds until states stop changing (or the cap).
inline SyncResult synchronous_fixpoint(const Instance& inst, std::uint64_t round_cap = 10'000) {
  if (!inst.supports_synchronous)
    throw std::invalid_argument("instance '" + inst.kind + "' has no synchronous semantics");
  SyncResult r;
  r.states = detail::sync_initial(inst);
  while (r.rounds < round_cap) {
    std::map<int, Value> next = detail::sync_round(inst, r.states);
    ++r.rounds;
    if (next == r.states) {
      r.fixpoint = true;
      return r;
    }
    r.states = std::move(next);
  }
  return r;
}

struct EnumerationOptions {
  std::uint64_t max_prefixes = 100'000;
  std::uint64_t event_cap = 1'000'000;
};

struct EnumerationReport {
  bool complete = true;                     // false when a bound cut exploration short
  std::uint64_t explored = 0;               // executed steps across the choice tree
  std::uint64_t runs = 0;                   // maximal executions reached
  std::uint64_t deadlocks = 0;
  std::set<std::map<int, Value>> finals;    // distinct terminal state vectors
};

/// Depth-first exploration of every eligible-event choice; confluence of the
/// instance is equivalent to `finals` being a singleton.
inline EnumerationReport enumerate_interleavings(const Instance& inst,
                                                 const EnumerationOptions& opts = {}) {
  EnumerationReport report;
  const std::function<void(const WorldState&)> explore = [&](const WorldState& w) {
    if (!report.complete) return;
    if (w.pending.empty()) {
      ++report.runs;
      report.finals.insert(w.states());
      return;
    }
    if (w.steps >= opts.event_cap) {
      report.complete = false;
      return;
    }
    std::vector<std::size_t> eligible = detail::eligible_indices(w);
    if (eligible.empty()) {
      ++report.runs;
      ++report.deadlocks;
      report.finals.insert(w.states());
      return;
    }
    for (std::size_t i : eligible) {
      if (report.explored >= opts.max_prefixes) {
        report.complete = false;
        return;
      }
      ++report.explored;
      WorldState next = w;
      next.instance = w.instance;
      step(next, i);
      explore(next);
    }
  };
  explore(make_world(inst));
  return report;
}

}  // namespace cocycle
