#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <cocycle/algebra.hpp>

namespace cocycle {

/// Explicit finite function from states to arguments. Operations are
/// unavailable (they throw) outside the stored domain rather than
/// approximated; equality is entry-wise and exact.
struct ReadoutTable {
  std::map<Value, Value> table;

  friend bool operator==(const ReadoutTable& a, const ReadoutTable& b) {
    return a.table == b.table;
  }
};

inline Value readout_eval(const ReadoutTable& f, const Value& s) {
  auto it = f.table.find(s);
  if (it == f.table.end())
    throw std::invalid_argument("readout table has no entry for " + s.repr());
  return it->second;
}

inline ReadoutTable readout_zero(const std::vector<Value>& domain, const Value& zero) {
  ReadoutTable f;
  for (const Value& s : domain) f.table.emplace(s, zero);
  return f;
}

/// The table of delta_m over the given domain (the curried form at m).
inline ReadoutTable readout_from_delta(const ArgumentFn& d, const Value& m,
                                       const std::vector<Value>& domain) {
  ReadoutTable f;
  for (const Value& s : domain) f.table.emplace(s, d.delta(m, s));
  return f;
}

/// Pointwise sum (f+g)(s) = f(s) + g(s); domains must coincide.
inline ReadoutTable readout_add(const MonoidSpec& args, const ReadoutTable& f,
                                const ReadoutTable& g) {
  if (f.table.size() != g.table.size())
    throw std::invalid_argument("readout_add: mismatched domains");
  ReadoutTable out;
  auto itf = f.table.begin();
  auto itg = g.table.begin();
  for (; itf != f.table.end(); ++itf, ++itg) {
    if (itf->first != itg->first)
      throw std::invalid_argument("readout_add: mismatched domains at " + itf->first.repr());
    out.table.emplace(itf->first, args.op(itf->second, itg->second));
  }
  return out;
}

/// Right translation (f.m)(s) = f(m.s) over the requested output domain.
/// f must cover the action image of that domain.
inline ReadoutTable readout_ract(const BinaryOp& act, const ReadoutTable& f, const Value& m,
                                 const std::vector<Value>& out_domain) {
  ReadoutTable out;
  for (const Value& s : out_domain) out.table.emplace(s, readout_eval(f, act(m, s)));
  return out;
}

inline std::vector<Value> readout_domain(const ReadoutTable& f) {
  std::vector<Value> d;
  d.reserve(f.table.size());
  for (const auto& [s, _] : f.table) d.push_back(s);
  return d;
}

struct SemidirectElement {
  ReadoutTable f;
  Value a;

  friend bool operator==(const SemidirectElement& x, const SemidirectElement& y) {
    return x.a == y.a && x.f == y.f;
  }
};

/// (f, a) * (g, b) = (f.b + g, a.b). The result's table domain is g's;
/// f must cover the b-translates of that domain.
inline SemidirectElement semidirect_mul(const BinaryOp& act, const MonoidSpec& args,
                                        const MonoidSpec& msgs, const SemidirectElement& x,
                                        const SemidirectElement& y) {
  SemidirectElement out;
  out.f = readout_add(args, readout_ract(act, x.f, y.a, readout_domain(y.f)), y.f);
  out.a = msgs.op(x.a, y.a);
  return out;
}

/// The readout-by-messages semidirect product as an enumerated monoid, for
/// law checking on small inputs: elements are encoded as [[f(s0)..f(sk)], a]
/// with the table read off in state order. Domain must be closed under the
/// action and the element count is capped.
inline MonoidSpec semidirect_monoid(const ActionSpec& action, const MonoidSpec& args,
                                    std::size_t element_cap = 4096) {
  const std::vector<Value>& domain = action.states.elements;
  const std::vector<Value>& avals = args.carrier.elements;
  const std::vector<Value>& mvals = action.monoid.carrier.elements;

  double size = static_cast<double>(mvals.size());
  for (std::size_t i = 0; i < domain.size(); ++i) size *= static_cast<double>(avals.size());
  if (size > static_cast<double>(element_cap))
    throw std::invalid_argument("semidirect_monoid: table space too large to enumerate");

  std::vector<ReadoutTable> tables;
  tables.push_back(ReadoutTable{});
  for (const Value& s : domain) {
    std::vector<ReadoutTable> next;
    for (const ReadoutTable& t : tables)
      for (const Value& a : avals) {
        ReadoutTable t2 = t;
        t2.table.emplace(s, a);
        next.push_back(std::move(t2));
      }
    tables = std::move(next);
  }

  const auto encode = [domain](const SemidirectElement& e) {
    ValueList fv;
    for (const Value& s : domain) fv.push_back(readout_eval(e.f, s));
    return Value(ValueList{Value(std::move(fv)), e.a});
  };
  const auto decode = [domain](const Value& v) {
    SemidirectElement e;
    const ValueList& fv = v.items()[0].items();
    for (std::size_t i = 0; i < domain.size(); ++i) e.f.table.emplace(domain[i], fv[i]);
    e.a = v.items()[1];
    return e;
  };

  MonoidSpec m;
  m.name = "semidirect(" + action.name + ")";
  for (const ReadoutTable& t : tables)
    for (const Value& a : mvals) m.carrier.elements.push_back(encode({t, a}));
  m.carrier.name = m.name;
  m.carrier.enumerable =
      action.states.enumerable && args.carrier.enumerable && action.monoid.carrier.enumerable;
  if (!m.carrier.enumerable) m.carrier.window = Window{0, 0, false};
  m.carrier.validate();
  m.unit = encode({readout_zero(domain, args.unit), action.monoid.unit});
  const BinaryOp act = action.act;
  const MonoidSpec margs = args;
  const MonoidSpec mmsgs = action.monoid;
  m.op = [encode, decode, act, margs, mmsgs](const Value& x, const Value& y) {
    return encode(semidirect_mul(act, margs, mmsgs, decode(x), decode(y)));
  };
  m.commutative = false;
  return m;
}

/// Whether a |-> (D(a), a) is a monoid homomorphism into the semidirect
/// product; agrees with check_cocycle(d).passed by construction of both.
///
/// Left-factor tables are materialized over a one-step action closure of the
/// state window, which is exactly what the single nested right translation in
/// the product formula consumes; the comparison runs over the base window.
inline bool splitting_is_hom(const ArgumentFn& d) {
  const std::vector<Value>& base = d.action.states.elements;
  const std::vector<Value>& mvals = d.action.monoid.carrier.elements;

  std::set<Value> closure(base.begin(), base.end());
  for (const Value& m : mvals)
    for (const Value& s : base) closure.insert(d.action.act(m, s));
  const std::vector<Value> extended(closure.begin(), closure.end());

  const auto section = [&](const Value& m, const std::vector<Value>& domain) {
    return SemidirectElement{readout_from_delta(d, m, domain), m};
  };

  const SemidirectElement unit_elt{readout_zero(base, d.args.unit), d.action.monoid.unit};
  if (!(section(d.action.monoid.unit, base) == unit_elt)) return false;

  for (const Value& n : mvals) {
    SemidirectElement sn = section(n, extended);
    for (const Value& m : mvals) {
      SemidirectElement sm = section(m, base);
      SemidirectElement rhs = semidirect_mul(d.action.act, d.args, d.action.monoid, sn, sm);
      SemidirectElement lhs = section(d.action.monoid.op(n, m), base);
      if (!(lhs == rhs)) return false;
    }
  }
  return true;
}

/// The unique argument function with delta_1 = omega for an action of the
/// additive naturals given by iterating the single-step endofunction:
/// delta_n(s) = sum_{i<n} omega(pi^i(s)).
inline ArgumentFn cocycle_from_pointwise(const ReadoutTable& omega, const ActionSpec& action,
                                         const MonoidSpec& args) {
  ArgumentFn d;
  d.name = "pointwise(" + action.name + ")";
  d.action = action;
  d.args = args;
  const ReadoutTable om = omega;
  const BinaryOp act = action.act;
  const BinaryOp add = args.op;
  const Value zero = args.unit;
  const Value one = Value(1);
  d.delta = [om, act, add, zero, one](const Value& m, const Value& s) {
    std::int64_t n = m.as_int();
    if (n < 0) throw std::invalid_argument("pointwise cocycle needs a natural number, got " + m.repr());
    Value acc = zero;
    Value cur = s;
    for (std::int64_t i = 0; i < n; ++i) {
      acc = add(acc, readout_eval(om, cur));
      cur = act(one, cur);
    }
    return acc;
  };
  return d;
}

}  // namespace cocycle
