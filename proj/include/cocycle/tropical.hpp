#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <cocycle/value.hpp>

namespace cocycle {

/// Max-plus matrix over integers with bottom: addition is max, multiplication
/// is +, bot is the additive identity and multiplicative absorber.
struct TropicalMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Value> entries;  // row-major scalars (bot or int)

  const Value& at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }

  /// Parses [[...],[...]] row lists.
  static TropicalMatrix from_value(const Value& v) {
    TropicalMatrix w;
    const ValueList& rows = v.items();
    w.rows = rows.size();
    if (w.rows == 0) throw std::invalid_argument("tropical matrix has no rows");
    w.cols = rows[0].items().size();
    for (const Value& row : rows) {
      if (row.items().size() != w.cols)
        throw std::invalid_argument("tropical matrix rows have unequal lengths");
      for (const Value& e : row.items()) {
        if (!e.is_bot() && !e.is_int())
          throw std::invalid_argument("tropical matrix entry must be bot or int: " + e.repr());
        w.entries.push_back(e);
      }
    }
    return w;
  }

  Value to_value() const {
    ValueList out;
    for (std::size_t r = 0; r < rows; ++r) {
      ValueList row(entries.begin() + static_cast<std::ptrdiff_t>(r * cols),
                    entries.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols));
      out.push_back(Value(std::move(row)));
    }
    return Value(std::move(out));
  }

  static TropicalMatrix identity(std::size_t n) {
    TropicalMatrix w;
    w.rows = w.cols = n;
    w.entries.assign(n * n, Value(bot));
    for (std::size_t i = 0; i < n; ++i) w.entries[i * n + i] = Value(0);
    return w;
  }
};

/// y_i = max_j (W_ij + x_j); bot + anything = bot, max over all-bot = bot.
/// Distributes over componentwise max exactly (a tested invariant).
inline Value tropical_apply(const TropicalMatrix& w, const Value& x) {
  const ValueList& xs = x.items();
  if (xs.size() != w.cols)
    throw std::invalid_argument("tropical_apply: dimension mismatch (" +
                                std::to_string(w.cols) + " cols vs vector of " +
                                std::to_string(xs.size()) + ")");
  ValueList out;
  out.reserve(w.rows);
  for (std::size_t r = 0; r < w.rows; ++r) {
    Value acc = Value(bot);
    for (std::size_t c = 0; c < w.cols; ++c) acc = trop_max(acc, trop_add(w.at(r, c), xs[c]));
    out.push_back(acc);
  }
  return Value(std::move(out));
}

}  // namespace cocycle
