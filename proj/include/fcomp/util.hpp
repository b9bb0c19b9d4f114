#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fcomp {

/// Malformed input file or instance description. Carries file/line context
/// when raised by a parser.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation refused to run because the instance exceeds its configured
/// enumeration or table-size budget. Never silently approximates.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// b^e, throwing BudgetError when the result would exceed `limit`.
inline long long checked_pow(long long base, long long exp, long long limit,
                             const char* what) {
  if (base < 1 || exp < 0) throw std::invalid_argument("checked_pow: bad arguments");
  long long r = 1;
  for (long long i = 0; i < exp; ++i) {
    if (base != 0 && r > limit / base)
      throw BudgetError(std::string(what) + ": size " + std::to_string(base) + "^" +
                        std::to_string(exp) + " exceeds budget " + std::to_string(limit));
    r *= base;
  }
  return r;
}

/// Mixed-radix rank of a digit string with one common base. The first digit
/// is the most significant one, so ranks sort like the digit strings.
inline long long pack_digits(std::span<const int> digits, long long base) {
  long long r = 0;
  for (int d : digits) r = r * base + d;
  return r;
}

/// Inverse of pack_digits; writes digits most-significant first.
inline void unpack_digits(long long rank, long long base, std::span<int> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<int>(rank % base);
    rank /= base;
  }
}

/// Rank of a digit string whose positions have individual bases.
inline long long pack_digits_mixed(std::span<const int> digits,
                                   std::span<const long long> bases) {
  long long r = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) r = r * bases[i] + digits[i];
  return r;
}

inline void unpack_digits_mixed(long long rank, std::span<const long long> bases,
                                std::span<int> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<int>(rank % bases[i]);
    rank /= bases[i];
  }
}

/// Number of workers parallel_chunks will use for a range of this size.
inline int resolve_workers(int threads, long long total) {
  if (total <= 0) return 0;
  int workers = threads;
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (static_cast<long long>(workers) > total) workers = static_cast<int>(total);
  return workers;
}

/// Splits [begin,end) into contiguous chunks and runs fn(chunk_index,
/// chunk_begin, chunk_end) on worker threads. fn must only touch
/// chunk-private state; callers merge chunk results afterwards so the
/// combined outcome is independent of scheduling.
template <typename Fn>
void parallel_chunks(long long begin, long long end, int threads, Fn&& fn) {
  long long total = end - begin;
  if (total <= 0) return;
  int workers = resolve_workers(threads, total);
  if (workers == 1) {
    fn(0, begin, end);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  long long chunk = (total + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    long long lo = begin + w * chunk;
    long long hi = lo + chunk < end ? lo + chunk : end;
    if (lo >= hi) break;
    pool.emplace_back([&fn, w, lo, hi] { fn(w, lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace fcomp
