#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <cocycle/value.hpp>

namespace cocycle {

/// Inclusive integer bounds used to materialize a verification universe for
/// an infinite carrier.
struct Window {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  bool include_bot = false;

  std::string describe() const {
    std::string s;
    if (include_bot) s += "{bot} + ";
    s += "[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
    return s;
  }
};

/// A finite ordered list of distinct values over which laws are quantified.
/// When `enumerable` is false the list is a window of an infinite carrier and
/// `window` must be present; `member` then decides mathematical membership
/// (closure checks use it, never the window).
struct Carrier {
  std::string name;
  std::vector<Value> elements;
  bool enumerable = true;
  std::optional<Window> window;
  std::function<bool(const Value&)> member;

  bool contains(const Value& v) const {
    if (member) return member(v);
    return std::find(elements.begin(), elements.end(), v) != elements.end();
  }

  void validate() const {
    if (elements.empty()) throw std::invalid_argument("carrier '" + name + "' has no elements");
    std::set<Value> seen(elements.begin(), elements.end());
    if (seen.size() != elements.size())
      throw std::invalid_argument("carrier '" + name + "' has duplicate elements");
    if (!enumerable && !window)
      throw std::invalid_argument("carrier '" + name + "' is not enumerable and has no window");
  }

  std::string universe() const {
    if (enumerable) return name;
    return name + " " + window->describe();
  }

  static Carrier enumerated(std::string name, std::vector<Value> elements) {
    Carrier c;
    c.name = std::move(name);
    c.elements = std::move(elements);
    c.enumerable = true;
    c.validate();
    return c;
  }

  /// Window of the naturals (or any integer ray): member accepts every
  /// integer >= floor, regardless of the window bounds.
  static Carrier integer_window(std::string name, std::int64_t lo, std::int64_t hi,
                                std::int64_t member_floor = 0) {
    Carrier c;
    c.name = std::move(name);
    for (std::int64_t i = lo; i <= hi; ++i) c.elements.emplace_back(i);
    c.enumerable = false;
    c.window = Window{lo, hi, false};
    c.member = [member_floor](const Value& v) { return v.is_int() && v.as_int() >= member_floor; };
    c.validate();
    return c;
  }

  /// {bot} followed by lo..hi; member accepts bot and every integer.
  static Carrier tropical_window(std::string name, std::int64_t lo, std::int64_t hi) {
    Carrier c;
    c.name = std::move(name);
    c.elements.emplace_back(bot);
    for (std::int64_t i = lo; i <= hi; ++i) c.elements.emplace_back(i);
    c.enumerable = false;
    c.window = Window{lo, hi, true};
    c.member = [](const Value& v) { return v.is_bot() || v.is_int(); };
    c.validate();
    return c;
  }
};

/// Default verification universes for the shipped infinite carriers.
inline constexpr std::int64_t kDefaultNatWindowHi = 200;
inline constexpr std::int64_t kDefaultTropicalWindowHi = 20;

inline Carrier default_nat_carrier(std::string name = "nat") {
  return Carrier::integer_window(std::move(name), 0, kDefaultNatWindowHi);
}

inline Carrier default_tropical_carrier(std::string name = "tropical") {
  return Carrier::tropical_window(std::move(name), 0, kDefaultTropicalWindowHi);
}

using BinaryOp = std::function<Value(const Value&, const Value&)>;

struct MonoidSpec {
  std::string name;
  Carrier carrier;
  BinaryOp op;
  Value unit;
  bool commutative = true;  // claimed; confirmed by check_monoid_laws
  bool idempotent = false;  // claimed; confirmed by is_idempotent
};

/// A monoid M acting on a state carrier S: act(m, s) -> s'.
struct ActionSpec {
  std::string name;
  MonoidSpec monoid;
  Carrier states;
  BinaryOp act;
};

/// Node-local data: M acting on S plus an argument function delta: M x S -> A
/// into a commutative argument monoid.
struct ArgumentFn {
  std::string name;
  ActionSpec action;
  MonoidSpec args;
  BinaryOp delta;
};

struct VerifyOptions {
  std::uint64_t max_tuples = 5'000'000;  // full product above this is subsampled
  std::uint64_t samples = 200'000;
  std::uint64_t seed = 1;
  std::size_t max_witnesses = 8;
};

struct Coverage {
  bool exhaustive = false;            // full product over a fully enumerable carrier
  std::string universe;               // window description when not exhaustive
  std::optional<std::uint64_t> seed;  // present iff tuples were randomly subsampled
  std::uint64_t tuples_checked = 0;

  /// True when every tuple of the declared universe was visited.
  bool complete() const { return !seed.has_value(); }

  json to_json() const {
    json j;
    j["exhaustive"] = exhaustive;
    j["tuples_checked"] = tuples_checked;
    if (!universe.empty()) j["window"] = universe;
    if (seed) j["sample_seed"] = *seed;
    return j;
  }
};

struct Witness {
  std::string law;
  std::vector<Value> inputs;
  Value lhs;
  Value rhs;

  json to_json() const {
    json j;
    j["law"] = law;
    json in = json::array();
    for (const Value& v : inputs) in.push_back(v.to_json());
    j["inputs"] = in;
    j["lhs"] = lhs.to_json();
    j["rhs"] = rhs.to_json();
    return j;
  }
};

struct ViolationReport {
  std::string subject;
  bool passed = true;
  std::vector<Witness> witnesses;
  Coverage coverage;
  bool witnesses_truncated = false;

  json to_json() const {
    json j;
    j["subject"] = subject;
    j["passed"] = passed;
    json w = json::array();
    for (const Witness& x : witnesses) w.push_back(x.to_json());
    j["witnesses"] = w;
    j["witnesses_truncated"] = witnesses_truncated;
    j["coverage"] = coverage.to_json();
    return j;
  }

  void add(Witness w, const VerifyOptions& opts) {
    passed = false;
    if (witnesses.size() < opts.max_witnesses)
      witnesses.push_back(std::move(w));
    else
      witnesses_truncated = true;
  }
};

namespace detail {

/// Visits index tuples over the given dimensions: the full product when it
/// fits under opts.max_tuples, otherwise opts.samples seeded random draws.
template <class Fn>
inline void scan_tuples(std::span<const std::size_t> dims, const VerifyOptions& opts,
                        Coverage& cov, Fn&& visit) {
  std::uint64_t product = 1;
  for (std::size_t d : dims) product *= d;
  std::vector<std::size_t> idx(dims.size(), 0);
  if (product <= opts.max_tuples) {
    cov.tuples_checked += product;
    for (std::uint64_t t = 0; t < product; ++t) {
      visit(idx);
      for (std::size_t k = dims.size(); k-- > 0;) {
        if (++idx[k] < dims[k]) break;
        idx[k] = 0;
      }
    }
    return;
  }
  cov.seed = opts.seed;
  cov.tuples_checked += opts.samples;
  std::uint64_t state = opts.seed;
  for (std::uint64_t t = 0; t < opts.samples; ++t) {
    for (std::size_t k = 0; k < dims.size(); ++k)
      idx[k] = static_cast<std::size_t>(splitmix64(state) % dims[k]);
    visit(idx);
  }
}

inline Coverage coverage_for(std::initializer_list<const Carrier*> carriers) {
  Coverage cov;
  cov.exhaustive = true;
  std::string universe;
  for (const Carrier* c : carriers) {
    if (!c->enumerable) {
      cov.exhaustive = false;
      if (!universe.empty()) universe += " x ";
      universe += c->universe();
    }
  }
  cov.universe = universe;
  return cov;
}

}  // namespace detail

/// Closure, associativity, unit laws, and (when claimed) commutativity.
/// The unit not being a carrier member is a specification error, not a witness.
inline ViolationReport check_monoid_laws(const MonoidSpec& m, const VerifyOptions& opts = {}) {
  m.carrier.validate();
  if (!m.carrier.contains(m.unit))
    throw std::invalid_argument("monoid '" + m.name + "': unit " + m.unit.repr() +
                                " is not a carrier member");
  ViolationReport report;
  report.subject = "monoid(" + m.name + ")";
  report.coverage = detail::coverage_for({&m.carrier});
  const auto& xs = m.carrier.elements;
  const std::size_t n = xs.size();

  const std::size_t dims2[] = {n, n};
  detail::scan_tuples(dims2, opts, report.coverage, [&](const std::vector<std::size_t>& i) {
    const Value& a = xs[i[0]];
    const Value& b = xs[i[1]];
    Value ab = m.op(a, b);
    if (!m.carrier.contains(ab)) report.add({"closure", {a, b}, ab, ab}, opts);
    if (m.commutative) {
      Value ba = m.op(b, a);
      if (ab != ba) report.add({"commutativity", {a, b}, ab, ba}, opts);
    }
  });

  const std::size_t dims1[] = {n};
  detail::scan_tuples(dims1, opts, report.coverage, [&](const std::vector<std::size_t>& i) {
    const Value& a = xs[i[0]];
    Value left = m.op(m.unit, a);
    if (left != a) report.add({"unit-left", {a}, left, a}, opts);
    Value right = m.op(a, m.unit);
    if (right != a) report.add({"unit-right", {a}, right, a}, opts);
  });

  const std::size_t dims3[] = {n, n, n};
  detail::scan_tuples(dims3, opts, report.coverage, [&](const std::vector<std::size_t>& i) {
    const Value& a = xs[i[0]];
    const Value& b = xs[i[1]];
    const Value& c = xs[i[2]];
    Value lhs = m.op(m.op(a, b), c);
    Value rhs = m.op(a, m.op(b, c));
    if (lhs != rhs) report.add({"associativity", {a, b, c}, lhs, rhs}, opts);
  });
  return report;
}

/// a+a = a for every tested element; returns the first offender otherwise.
inline std::pair<bool, std::optional<Value>> is_idempotent(const MonoidSpec& m) {
  for (const Value& a : m.carrier.elements) {
    if (m.op(a, a) != a) return {false, a};
  }
  return {true, std::nullopt};
}

/// Unit and associativity axioms of an action, plus closure into S.
inline ViolationReport check_action(const ActionSpec& a, const VerifyOptions& opts = {}) {
  a.states.validate();
  ViolationReport report;
  report.subject = "action(" + a.name + ")";
  report.coverage = detail::coverage_for({&a.monoid.carrier, &a.states});
  const auto& ms = a.monoid.carrier.elements;
  const auto& ss = a.states.elements;

  const std::size_t dims1[] = {ss.size()};
  detail::scan_tuples(dims1, opts, report.coverage, [&](const std::vector<std::size_t>& i) {
    const Value& s = ss[i[0]];
    Value u = a.act(a.monoid.unit, s);
    if (u != s) report.add({"action-unit", {s}, u, s}, opts);
  });

  const std::size_t dims2[] = {ms.size(), ss.size()};
  detail::scan_tuples(dims2, opts, report.coverage, [&](const std::vector<std::size_t>& i) {
    const Value& m = ms[i[0]];
    const Value& s = ss[i[1]];
    Value out = a.act(m, s);
    if (!a.states.contains(out)) report.add({"action-closure", {m, s}, out, out}, opts);
  });

  const std::size_t dims3[] = {ms.size(), ms.size(), ss.size()};
  detail::scan_tuples(dims3, opts, report.coverage, [&](const std::vector<std::size_t>& i) {
    const Value& n = ms[i[0]];
    const Value& m = ms[i[1]];
    const Value& s = ss[i[2]];
    Value lhs = a.act(a.monoid.op(n, m), s);
    Value rhs = a.act(n, a.act(m, s));
    if (lhs != rhs) report.add({"action-associativity", {n, m, s}, lhs, rhs}, opts);
  });
  return report;
}

/// The two argument axioms: delta_unit(s) = 0 and
/// delta_{n.m}(s) = delta_m(s) + delta_n(m.s). Violations are report content.
inline ViolationReport check_cocycle(const ArgumentFn& d, const VerifyOptions& opts = {}) {
  ViolationReport report;
  report.subject = "cocycle(" + d.name + ")";
  report.coverage = detail::coverage_for({&d.action.monoid.carrier, &d.action.states});
  const auto& ms = d.action.monoid.carrier.elements;
  const auto& ss = d.action.states.elements;
  const Value& munit = d.action.monoid.unit;
  const Value& zero = d.args.unit;

  const std::size_t dims1[] = {ss.size()};
  detail::scan_tuples(dims1, opts, report.coverage, [&](const std::vector<std::size_t>& i) {
    const Value& s = ss[i[0]];
    Value v = d.delta(munit, s);
    if (v != zero) report.add({"cocycle-unit", {s}, v, zero}, opts);
  });

  const std::size_t dims3[] = {ms.size(), ms.size(), ss.size()};
  detail::scan_tuples(dims3, opts, report.coverage, [&](const std::vector<std::size_t>& i) {
    const Value& n = ms[i[0]];
    const Value& m = ms[i[1]];
    const Value& s = ss[i[2]];
    Value lhs = d.delta(d.action.monoid.op(n, m), s);
    Value rhs = d.args.op(d.delta(m, s), d.delta(n, d.action.act(m, s)));
    if (lhs != rhs) report.add({"cocycle-chain", {n, m, s}, lhs, rhs}, opts);
  });
  return report;
}

/// Re-evaluates a witness through its cited law; true iff the inequality
/// (or non-membership, for closure laws) still holds.
inline bool replay_witness(const Witness& w, const MonoidSpec& m) {
  if (w.law == "closure") return !m.carrier.contains(m.op(w.inputs[0], w.inputs[1]));
  if (w.law == "commutativity") return m.op(w.inputs[0], w.inputs[1]) != m.op(w.inputs[1], w.inputs[0]);
  if (w.law == "unit-left") return m.op(m.unit, w.inputs[0]) != w.inputs[0];
  if (w.law == "unit-right") return m.op(w.inputs[0], m.unit) != w.inputs[0];
  if (w.law == "associativity")
    return m.op(m.op(w.inputs[0], w.inputs[1]), w.inputs[2]) !=
           m.op(w.inputs[0], m.op(w.inputs[1], w.inputs[2]));
  throw std::invalid_argument("unknown monoid law: " + w.law);
}

inline bool replay_witness(const Witness& w, const ActionSpec& a) {
  if (w.law == "action-unit") return a.act(a.monoid.unit, w.inputs[0]) != w.inputs[0];
  if (w.law == "action-closure") return !a.states.contains(a.act(w.inputs[0], w.inputs[1]));
  if (w.law == "action-associativity")
    return a.act(a.monoid.op(w.inputs[0], w.inputs[1]), w.inputs[2]) !=
           a.act(w.inputs[0], a.act(w.inputs[1], w.inputs[2]));
  throw std::invalid_argument("unknown action law: " + w.law);
}

inline bool replay_witness(const Witness& w, const ArgumentFn& d) {
  if (w.law == "cocycle-unit") return d.delta(d.action.monoid.unit, w.inputs[0]) != d.args.unit;
  if (w.law == "cocycle-chain") {
    const Value& n = w.inputs[0];
    const Value& m = w.inputs[1];
    const Value& s = w.inputs[2];
    return d.delta(d.action.monoid.op(n, m), s) !=
           d.args.op(d.delta(m, s), d.delta(n, d.action.act(m, s)));
  }
  throw std::invalid_argument("unknown cocycle law: " + w.law);
}

/// The self-action argument function delta_m(s) = 0 if m = unit, else m.s,
/// over a monoid with M = S = A and the action given by the monoid operation.
/// Its cocycle verdict tracks idempotence of the monoid.
inline ArgumentFn naive_delta(const MonoidSpec& m) {
  ArgumentFn d;
  d.name = "naive(" + m.name + ")";
  d.action.name = "self(" + m.name + ")";
  d.action.monoid = m;
  d.action.states = m.carrier;
  d.action.act = m.op;
  d.args = m;
  const BinaryOp op = m.op;
  const Value unit = m.unit;
  const Value zero = m.unit;
  d.delta = [op, unit, zero](const Value& mm, const Value& s) {
    return mm == unit ? zero : op(mm, s);
  };
  return d;
}

/// Validating form for a caller-assembled triple: all three carriers and the
/// action must coincide with the monoid, as the self-action construction requires.
inline ArgumentFn naive_delta(const ActionSpec& action, const MonoidSpec& args) {
  const auto same = [](const Carrier& a, const Carrier& b) {
    return a.elements == b.elements;
  };
  if (!same(action.monoid.carrier, action.states) || !same(action.monoid.carrier, args.carrier))
    throw std::invalid_argument("naive_delta requires identical M, S, A carriers");
  return naive_delta(action.monoid);
}

/// Extended-state action m * (s, a) = (m.s, a + delta_m(s)).
inline std::pair<Value, Value> star_act(const Value& m, const std::pair<Value, Value>& pair,
                                        const ArgumentFn& d) {
  return {d.action.act(m, pair.first), d.args.op(pair.second, d.delta(m, pair.first))};
}

/// The * operator packaged as an action of M on the product carrier S x A;
/// its check_action verdict equals check_cocycle(d)'s (a tested equivalence).
inline ActionSpec star_action(const ArgumentFn& d) {
  ActionSpec a;
  a.name = "star(" + d.name + ")";
  a.monoid = d.action.monoid;

  Carrier product;
  product.name = d.action.states.name + "x" + d.args.carrier.name;
  for (const Value& s : d.action.states.elements)
    for (const Value& x : d.args.carrier.elements)
      product.elements.push_back(Value(ValueList{s, x}));
  product.enumerable = d.action.states.enumerable && d.args.carrier.enumerable;
  if (!product.enumerable) {
    Window w;
    if (d.action.states.window) w = *d.action.states.window;
    else if (d.args.carrier.window) w = *d.args.carrier.window;
    product.window = w;
  }
  const Carrier states = d.action.states;
  const Carrier argsc = d.args.carrier;
  product.member = [states, argsc](const Value& v) {
    return v.is_list() && v.items().size() == 2 && states.contains(v.items()[0]) &&
           argsc.contains(v.items()[1]);
  };
  product.validate();
  a.states = std::move(product);

  const ArgumentFn dd = d;
  a.act = [dd](const Value& m, const Value& pair) {
    auto out = star_act(m, {pair.items()[0], pair.items()[1]}, dd);
    return Value(ValueList{out.first, out.second});
  };
  return a;
}

}  // namespace cocycle
