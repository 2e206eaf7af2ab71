#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cocycle {

using json = nlohmann::json;

/// Bottom sentinel: distinct from every integer, identity for join,
/// absorbing for tropical addition. Serializes as the token "bot".
struct BotTag {
  friend bool operator==(BotTag, BotTag) { return true; }
};
inline constexpr BotTag bot{};

/// Closed value universe for carrier elements, node states, arguments,
/// messages and edge payloads: bottom, 64-bit integer, or list of values.
/// Equality is structural and exact; ordering is total (bot < int < list,
/// then by content) so values can key ordered containers deterministically.
class Value {
 public:
  using List = std::vector<Value>;

  Value() : rep_(std::int64_t{0}) {}
  Value(BotTag) : rep_(bot) {}
  Value(std::int64_t i) : rep_(i) {}
  Value(int i) : rep_(std::int64_t{i}) {}
  Value(List items) : rep_(std::move(items)) {}

  bool is_bot() const { return std::holds_alternative<BotTag>(rep_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(rep_); }
  bool is_list() const { return std::holds_alternative<List>(rep_); }

  std::int64_t as_int() const {
    if (!is_int()) throw std::invalid_argument("value is not an integer: " + repr());
    return std::get<std::int64_t>(rep_);
  }

  const List& items() const {
    if (!is_list()) throw std::invalid_argument("value is not a list: " + repr());
    return std::get<List>(rep_);
  }

  /// bot < any int < any list; ints by value; lists lexicographically.
  friend int compare(const Value& a, const Value& b) {
    const int ka = static_cast<int>(a.rep_.index());
    const int kb = static_cast<int>(b.rep_.index());
    if (ka != kb) return ka < kb ? -1 : 1;
    if (a.is_bot()) return 0;
    if (a.is_int()) {
      const auto x = std::get<std::int64_t>(a.rep_);
      const auto y = std::get<std::int64_t>(b.rep_);
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    const List& xs = std::get<List>(a.rep_);
    const List& ys = std::get<List>(b.rep_);
    const std::size_t n = xs.size() < ys.size() ? xs.size() : ys.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (int c = compare(xs[i], ys[i]); c != 0) return c;
    }
    return xs.size() < ys.size() ? -1 : (xs.size() > ys.size() ? 1 : 0);
  }

  friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Value& a, const Value& b) { return compare(a, b) != 0; }
  friend bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }

  json to_json() const {
    if (is_bot()) return json("bot");
    if (is_int()) return json(std::get<std::int64_t>(rep_));
    json arr = json::array();
    for (const Value& v : std::get<List>(rep_)) arr.push_back(v.to_json());
    return arr;
  }

  static Value from_json(const json& j) {
    if (j.is_string()) {
      if (j.get<std::string>() == "bot") return Value(bot);
      throw std::invalid_argument("unrecognized value token: " + j.dump());
    }
    if (j.is_number_integer()) return Value(j.get<std::int64_t>());
    if (j.is_array()) {
      List items;
      items.reserve(j.size());
      for (const json& e : j) items.push_back(from_json(e));
      return Value(std::move(items));
    }
    throw std::invalid_argument("value must be \"bot\", an integer, or an array: " + j.dump());
  }

  std::string repr() const { return to_json().dump(); }

 private:
  std::variant<BotTag, std::int64_t, List> rep_;
};

using ValueList = Value::List;

/// FNV-1a over bytes; used for instance and trace digests.
inline std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// splitmix64: the engine-wide deterministic generator (seeded scheduling,
/// sampled law scans, test data). State advances by the golden-gamma step.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::string hex64(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return s;
}

// ---- tropical scalar helpers (bot = additive identity of join, absorbing for plus)

inline bool trop_leq(const Value& a, const Value& b) {
  if (a.is_bot()) return true;
  if (b.is_bot()) return false;
  return a.as_int() <= b.as_int();
}

inline Value trop_max(const Value& a, const Value& b) {
  if (a.is_bot()) return b;
  if (b.is_bot()) return a;
  return Value(a.as_int() > b.as_int() ? a.as_int() : b.as_int());
}

inline Value trop_add(const Value& a, const Value& b) {
  if (a.is_bot() || b.is_bot()) return Value(bot);
  return Value(a.as_int() + b.as_int());
}

// ---- componentwise extensions to fixed-width lists of tropical scalars

inline Value vec_bot(std::size_t width) {
  return Value(ValueList(width, Value(bot)));
}

inline void require_same_width(const Value& a, const Value& b) {
  if (a.items().size() != b.items().size())
    throw std::invalid_argument("vector width mismatch: " + a.repr() + " vs " + b.repr());
}

inline Value vec_join(const Value& a, const Value& b) {
  require_same_width(a, b);
  ValueList out;
  out.reserve(a.items().size());
  for (std::size_t i = 0; i < a.items().size(); ++i)
    out.push_back(trop_max(a.items()[i], b.items()[i]));
  return Value(std::move(out));
}

/// Product (componentwise) order on equal-width tropical vectors.
inline bool vec_leq(const Value& a, const Value& b) {
  require_same_width(a, b);
  for (std::size_t i = 0; i < a.items().size(); ++i)
    if (!trop_leq(a.items()[i], b.items()[i])) return false;
  return true;
}

}  // namespace cocycle
