#pragma once

#include <algorithm>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcomp/util.hpp"

namespace fcomp {

// Truth tables larger than this are refused rather than approximated.
inline constexpr long long kMaxTableSize = 1LL << 20;

/// A target function f: A^s -> O over canonical alphabets A = {0..q-1},
/// O = {0..m-1}, stored as a dense table. Row (x_1,...,x_s) lives at index
/// sum_j x_j * q^(s-j), i.e. the first argument is the most significant
/// digit, so the table reads in natural argument order.
struct TargetFunction {
  std::string name;
  int arity = 1;        // s
  int input_size = 2;   // q = |A|
  int output_size = 1;  // m = |O|
  std::vector<int> table;

  long long domain_size() const {
    long long r = 1;
    for (int i = 0; i < arity; ++i) r *= input_size;
    return r;
  }

  bool operator==(const TargetFunction& o) const {
    return arity == o.arity && input_size == o.input_size &&
           output_size == o.output_size && table == o.table;
  }
};

/// Throws std::invalid_argument when the table shape or entries are bad.
inline void check(const TargetFunction& f) {
  if (f.arity < 1) throw std::invalid_argument("function: arity must be >= 1");
  if (f.input_size < 2) throw std::invalid_argument("function: input alphabet must have >= 2 symbols");
  if (f.output_size < 1) throw std::invalid_argument("function: output alphabet must have >= 1 symbol");
  long long want = checked_pow(f.input_size, f.arity, kMaxTableSize, "function table");
  if (static_cast<long long>(f.table.size()) != want)
    throw std::invalid_argument("function: table has " + std::to_string(f.table.size()) +
                                " entries, expected " + std::to_string(want));
  for (int v : f.table)
    if (v < 0 || v >= f.output_size)
      throw std::invalid_argument("function: table entry " + std::to_string(v) +
                                  " outside output alphabet");
}

inline int evaluate(const TargetFunction& f, std::span<const int> row) {
  if (static_cast<int>(row.size()) != f.arity)
    throw std::invalid_argument("evaluate: row has wrong arity");
  for (int v : row)
    if (v < 0 || v >= f.input_size)
      throw std::invalid_argument("evaluate: symbol outside input alphabet");
  return f.table[pack_digits(row, f.input_size)];
}

/// A k x s matrix of input symbols: row i is the input vector of the i-th
/// function computation, column j the symbols generated at source j.
struct InputMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> entries;  // row-major

  InputMatrix() = default;
  InputMatrix(int k, int s, std::vector<int> e) : rows(k), cols(s), entries(std::move(e)) {
    if (static_cast<long long>(entries.size()) != static_cast<long long>(rows) * cols)
      throw std::invalid_argument("input matrix: entry count does not match shape");
  }

  int at(int r, int c) const { return entries[static_cast<std::size_t>(r) * cols + c]; }

  std::vector<int> row(int r) const {
    return {entries.begin() + static_cast<std::ptrdiff_t>(r) * cols,
            entries.begin() + static_cast<std::ptrdiff_t>(r + 1) * cols};
  }

  std::vector<int> column(int c) const {
    std::vector<int> out(rows);
    for (int r = 0; r < rows; ++r) out[r] = at(r, c);
    return out;
  }

  /// Rank in row-major mixed-radix order; ranks enumerate matrices
  /// lexicographically by (x_11, x_12, ..., x_1s, x_21, ...).
  long long rank(int q) const { return pack_digits(entries, q); }

  static InputMatrix from_rank(long long rank, int k, int s, int q) {
    InputMatrix x;
    x.rows = k;
    x.cols = s;
    x.entries.resize(static_cast<std::size_t>(k) * s);
    unpack_digits(rank, q, x.entries);
    return x;
  }
};

/// f^(k): applies f to every row.
inline std::vector<int> evaluate_block(const TargetFunction& f, const InputMatrix& x) {
  if (x.cols != f.arity) throw std::invalid_argument("evaluate_block: column count != arity");
  std::vector<int> out(x.rows);
  for (int r = 0; r < x.rows; ++r)
    out[r] = evaluate(f, std::span<const int>(x.entries).subspan(
                             static_cast<std::size_t>(r) * x.cols, x.cols));
  return out;
}

/// The image f[A^s], ascending.
inline std::vector<int> image(const TargetFunction& f) {
  std::set<int> seen(f.table.begin(), f.table.end());
  return {seen.begin(), seen.end()};
}

struct BuiltinParams {
  int arity = 0;       // s; 0 means "use the family default"
  int input_size = 0;  // q
};

/// Built-in function families: identity, mod-sum, arithmetic-sum,
/// product-plus-mod2, max.
inline TargetFunction builtin(const std::string& name, BuiltinParams p = {}) {
  TargetFunction f;
  f.name = name;
  auto fill = [&f](auto&& fn) {
    long long size = checked_pow(f.input_size, f.arity, kMaxTableSize, "builtin table");
    f.table.resize(size);
    std::vector<int> row(f.arity);
    for (long long i = 0; i < size; ++i) {
      unpack_digits(i, f.input_size, row);
      f.table[i] = fn(row);
    }
  };
  int s = p.arity, q = p.input_size;
  if (name == "identity") {
    if (s != 0 && s != 1) throw std::invalid_argument("identity: arity is fixed to 1");
    f.arity = 1;
    f.input_size = q ? q : 2;
    f.output_size = f.input_size;
    fill([](const std::vector<int>& r) { return r[0]; });
  } else if (name == "mod-sum") {
    f.arity = s ? s : 2;
    f.input_size = q ? q : 2;
    f.output_size = f.input_size;
    fill([&f](const std::vector<int>& r) {
      int acc = 0;
      for (int v : r) acc = (acc + v) % f.input_size;
      return acc;
    });
  } else if (name == "arithmetic-sum") {
    f.arity = s ? s : 2;
    f.input_size = q ? q : 2;
    f.output_size = f.arity * (f.input_size - 1) + 1;
    fill([](const std::vector<int>& r) {
      int acc = 0;
      for (int v : r) acc += v;
      return acc;
    });
  } else if (name == "product-plus-mod2") {
    if ((s != 0 && s != 3) || (q != 0 && q != 2))
      throw std::invalid_argument("product-plus-mod2: fixed to s=3, q=2");
    f.arity = 3;
    f.input_size = 2;
    f.output_size = 2;
    fill([](const std::vector<int>& r) { return (r[0] * r[1] + r[2]) % 2; });
  } else if (name == "max") {
    f.arity = s ? s : 2;
    f.input_size = q ? q : 2;
    f.output_size = f.input_size;
    fill([](const std::vector<int>& r) { return *std::max_element(r.begin(), r.end()); });
  } else {
    throw std::invalid_argument("unknown builtin function '" + name + "'");
  }
  check(f);
  return f;
}

}  // namespace fcomp
