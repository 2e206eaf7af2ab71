#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <cocycle/algebra.hpp>
#include <cocycle/tropical.hpp>

namespace cocycle {

struct Edge {
  int id = 0;
  int src = 0;
  int dst = 0;
  Value payload;  // per-edge message-function parameters (length, matrix, ...)
};

class Graph {
 public:
  Graph() = default;
  Graph(std::vector<int> nodes, std::vector<Edge> edges)
      : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::set<int> node_set(nodes_.begin(), nodes_.end());
    if (node_set.size() != nodes_.size()) throw std::invalid_argument("duplicate node ids");
    std::set<int> edge_ids;
    for (const Edge& e : edges_) {
      if (!edge_ids.insert(e.id).second)
        throw std::invalid_argument("duplicate edge id " + std::to_string(e.id));
      if (!node_set.count(e.src) || !node_set.count(e.dst))
        throw std::invalid_argument("edge " + std::to_string(e.id) + " references unknown node");
      out_[e.src].push_back(e.id);
      in_[e.dst].push_back(e.id);
      by_id_[e.id] = e;
    }
    for (int n : nodes_) {
      out_[n];  // ensure empty entries exist
      in_[n];
    }
  }

  const std::vector<int>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return by_id_.at(id); }
  const std::vector<int>& out_edges(int node) const { return out_.at(node); }
  const std::vector<int>& in_edges(int node) const { return in_.at(node); }

  std::vector<int> in_neighbors(int node) const {
    std::vector<int> ns;
    for (int e : in_.at(node)) ns.push_back(by_id_.at(e).src);
    return ns;
  }

  /// Nodes reachable from `node` by one or more directed edges.
  std::set<int> descendants(int node) const {
    std::set<int> seen;
    std::vector<int> stack{node};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int e : out_.at(u)) {
        int v = by_id_.at(e).dst;
        if (seen.insert(v).second) stack.push_back(v);
      }
    }
    return seen;
  }

 private:
  std::vector<int> nodes_;
  std::vector<Edge> edges_;
  std::map<int, std::vector<int>> out_;
  std::map<int, std::vector<int>> in_;
  std::map<int, Edge> by_id_;
};

enum class MessageMode { incremental, blocking };

inline std::string to_string(MessageMode m) {
  return m == MessageMode::incremental ? "incremental" : "blocking";
}

/// Per-edge message function psi mapping sender argument(s) to a message.
/// Incremental mode requires arity 1 and a verified monoid homomorphism
/// (psi(0)=1, psi(a+b)=psi(a).psi(b)); blocking mode is any function, fired
/// only at synchronization points. hom_verified records the claim/check.
struct MessageFn {
  std::string name;
  MessageMode mode = MessageMode::incremental;
  int arity = 1;
  std::function<Value(std::span<const Value>)> eval;
  bool hom_verified = false;

  Value operator()(const Value& a) const {
    const Value args[] = {a};
    return eval(args);
  }
};

/// Per-node runtime: persistent state plus one accumulated argument buffer
/// per outgoing edge (fresh buffers hold the zero argument).
struct NodeRuntime {
  Value state;
  std::map<int, Value> out_buffers;
};

/// One fully synchronous round: x'_u = update(aggregate_{e=(v,u)} psi_e(x_v), x_u),
/// all receivers computed from round-start states. Arity-2 functions receive
/// (x_u, x_v). Empty in-neighborhoods aggregate to the unit and leave x_u fixed.
inline std::map<int, Value> gather_scatter_round(const Graph& g,
                                                 const std::map<int, Value>& states,
                                                 const std::map<int, MessageFn>& psi,
                                                 const MonoidSpec& aggregate,
                                                 const ActionSpec& update) {
  std::map<int, Value> next;
  for (int u : g.nodes()) {
    Value agg = aggregate.unit;
    for (int eid : g.in_edges(u)) {
      const Edge& e = g.edge(eid);
      const MessageFn& fn = psi.at(eid);
      Value msg;
      if (fn.arity == 1) {
        const Value args[] = {states.at(e.src)};
        msg = fn.eval(args);
      } else if (fn.arity == 2) {
        const Value args[] = {states.at(u), states.at(e.src)};
        msg = fn.eval(args);
      } else {
        throw std::invalid_argument("gather_scatter_round: unsupported arity " +
                                    std::to_string(fn.arity));
      }
      if (!aggregate.carrier.contains(msg))
        throw std::invalid_argument("message function output leaves the message carrier: " +
                                    msg.repr());
      agg = aggregate.op(agg, msg);
    }
    next.emplace(u, update.act(agg, states.at(u)));
  }
  return next;
}

/// Applies one (non-unit) message to a node: state <- m.state, returns the
/// emitted argument delta_m(old state) after adding it into every out-buffer.
inline Value apply_message(NodeRuntime& n, const Value& m, const ArgumentFn& alg) {
  const Value old_state = n.state;
  n.state = alg.action.act(m, old_state);
  Value emitted = alg.delta(m, old_state);
  for (auto& [edge_id, buffer] : n.out_buffers) buffer = alg.args.op(buffer, emitted);
  return emitted;
}

/// Reads one edge buffer into a message. Incremental: message = psi(buffer),
/// buffer resets to the zero argument (sound exactly because psi is a verified
/// homomorphism). Blocking: full-buffer read, buffer retained.
inline std::pair<Value, Value> compute_message(const Value& buffer, const MessageFn& psi,
                                               const Value& arg_zero) {
  if (psi.mode == MessageMode::incremental) {
    if (!psi.hom_verified)
      throw std::logic_error("configuration fault: incremental message function '" + psi.name +
                             "' is not homomorphism-verified");
    const Value args[] = {buffer};
    return {psi.eval(args), arg_zero};
  }
  const Value args[] = {buffer};
  return {psi.eval(args), buffer};
}

/// Both homomorphism laws for an arity-1 psi from the argument monoid into
/// the message monoid, over the argument carrier's elements.
inline ViolationReport check_homomorphism(const MessageFn& psi, const MonoidSpec& args,
                                          const MonoidSpec& msgs,
                                          const VerifyOptions& opts = {}) {
  if (psi.arity != 1)
    throw std::invalid_argument("check_homomorphism requires an arity-1 message function");
  ViolationReport report;
  report.subject = "homomorphism(" + psi.name + ")";
  report.coverage = detail::coverage_for({&args.carrier});

  Value at_zero = psi(args.unit);
  report.coverage.tuples_checked += 1;
  if (at_zero != msgs.unit) report.add({"psi-zero", {args.unit}, at_zero, msgs.unit}, opts);

  const auto& xs = args.carrier.elements;
  const std::size_t dims2[] = {xs.size(), xs.size()};
  detail::scan_tuples(dims2, opts, report.coverage, [&](const std::vector<std::size_t>& i) {
    const Value& a = xs[i[0]];
    const Value& b = xs[i[1]];
    Value lhs = psi(args.op(a, b));
    Value rhs = msgs.op(psi(a), psi(b));
    if (lhs != rhs) report.add({"psi-add", {a, b}, lhs, rhs}, opts);
  });
  return report;
}

inline bool replay_witness(const Witness& w, const MessageFn& psi, const MonoidSpec& args,
                           const MonoidSpec& msgs) {
  if (w.law == "psi-zero") return psi(args.unit) != msgs.unit;
  if (w.law == "psi-add")
    return psi(args.op(w.inputs[0], w.inputs[1])) != msgs.op(psi(w.inputs[0]), psi(w.inputs[1]));
  throw std::invalid_argument("unknown homomorphism law: " + w.law);
}

// ---- synchronized multivariate message function: attention

struct AttentionResult {
  std::vector<double> coefficients;            // softmax weights, sum to 1
  std::vector<std::vector<double>> messages;   // coefficient-scaled values
};

/// softmax(q.k_i) applied to the values; the one floating-point operation in
/// the engine, exposed as a blocking multivariate psi demonstration. Uses a
/// max-subtracted softmax in 64-bit floating point.
inline AttentionResult attention_message(const std::vector<double>& query,
                                         const std::vector<std::vector<double>>& keys,
                                         const std::vector<std::vector<double>>& values) {
  if (keys.empty()) throw std::invalid_argument("attention_message: no neighbors");
  if (keys.size() != values.size())
    throw std::invalid_argument("attention_message: keys/values length mismatch");

  std::vector<double> logits;
  logits.reserve(keys.size());
  for (const auto& k : keys) {
    if (k.size() != query.size())
      throw std::invalid_argument("attention_message: key width differs from query");
    double dot = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) dot += query[i] * k[i];
    logits.push_back(dot);
  }

  double peak = logits[0];
  for (double l : logits) peak = std::max(peak, l);
  double denom = 0.0;
  std::vector<double> expd(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    expd[i] = std::exp(logits[i] - peak);
    denom += expd[i];
  }

  AttentionResult out;
  out.coefficients.resize(logits.size());
  out.messages.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out.coefficients[i] = expd[i] / denom;
    out.messages[i].reserve(values[i].size());
    for (double v : values[i]) out.messages[i].push_back(out.coefficients[i] * v);
  }
  return out;
}

// ---- a fabric instance: graph + per-node algebra + per-edge psi + inputs

struct Injection {
  int node = 0;
  Value payload;
};

/// A runnable world description. `doc` is the canonical on-disk form the
/// instance was resolved from; the remaining fields are the resolved runtime
/// objects. Immutable after construction (the scheduler copies world state,
/// never the instance).
struct Instance {
  json doc;
  std::string kind;
  Graph graph;
  std::map<int, std::shared_ptr<const ArgumentFn>> node_algebra;
  std::map<int, MessageFn> edge_psi;
  std::map<int, Value> initial_states;
  std::vector<Injection> injected;
  std::optional<std::string> oracle;
  bool supports_synchronous = false;
  std::map<int, std::set<int>> reachable;  // node -> descendants, for blocking eligibility

  const ArgumentFn& algebra_of(int node) const { return *node_algebra.at(node); }

  std::string content_hash() const { return hex64(fnv1a64(doc.dump())); }
};

}  // namespace cocycle
