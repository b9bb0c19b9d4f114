#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace fcomp {

/// Unbounded unsigned integer, just big enough for the exact power
/// comparisons this library needs (W^k vs |B|^{n|C|} and cross-multiplied
/// bound ratios). Little-endian base-2^32 limbs.
class BigUint {
 public:
  BigUint() : limbs_{0} {}

  explicit BigUint(unsigned long long v) {
    limbs_.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
  }

  BigUint operator*(const BigUint& o) const {
    BigUint r;
    r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < o.limbs_.size(); ++j) {
        std::uint64_t cur = static_cast<std::uint64_t>(limbs_[i]) * o.limbs_[j] +
                            r.limbs_[i + j] + carry;
        r.limbs_[i + j] = static_cast<std::uint32_t>(cur);
        carry = cur >> 32;
      }
      std::size_t pos = i + o.limbs_.size();
      while (carry) {
        std::uint64_t cur = r.limbs_[pos] + carry;
        r.limbs_[pos] = static_cast<std::uint32_t>(cur);
        carry = cur >> 32;
        ++pos;
      }
    }
    r.trim();
    return r;
  }

  /// base^exp by square-and-multiply. pow(0,0) = 1 by convention.
  static BigUint pow(unsigned long long base, unsigned long long exp) {
    BigUint result(1);
    BigUint b(base);
    while (exp) {
      if (exp & 1) result = result * b;
      b = b * b;
      exp >>= 1;
    }
    return result;
  }

  /// -1, 0 or 1 as *this is less than, equal to or greater than o.
  int compare(const BigUint& o) const {
    if (limbs_.size() != o.limbs_.size())
      return limbs_.size() < o.limbs_.size() ? -1 : 1;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i] ? -1 : 1;
    }
    return 0;
  }

  bool operator==(const BigUint& o) const { return compare(o) == 0; }
  bool operator<(const BigUint& o) const { return compare(o) < 0; }
  bool operator<=(const BigUint& o) const { return compare(o) <= 0; }
  bool operator>(const BigUint& o) const { return compare(o) > 0; }
  bool operator>=(const BigUint& o) const { return compare(o) >= 0; }

  std::string to_string() const {
    std::vector<std::uint32_t> work(limbs_);
    std::string digits;
    while (work.size() > 1 || work[0] != 0) {
      std::uint64_t rem = 0;
      for (std::size_t i = work.size(); i-- > 0;) {
        std::uint64_t cur = (rem << 32) | work[i];
        work[i] = static_cast<std::uint32_t>(cur / 1000000000u);
        rem = cur % 1000000000u;
      }
      while (!work.empty() && work.back() == 0 && work.size() > 1) work.pop_back();
      std::string part = std::to_string(rem);
      bool last = work.size() == 1 && work[0] == 0;
      if (!last) part.insert(0, 9 - part.size(), '0');
      digits.insert(0, part);
    }
    return digits.empty() ? "0" : digits;
  }

 private:
  void trim() {
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
  }

  std::vector<std::uint32_t> limbs_;
};

}  // namespace fcomp
