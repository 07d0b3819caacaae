#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace molinfer {

// Unsigned big integer, base 2^32 limbs.  Tree counts in the DP multiply
// across combination steps and overflow 64 bits on permissive budgets.
class BigUint {
 public:
  BigUint() : limbs_{0} {}
  BigUint(std::uint64_t v) {
    limbs_.push_back(std::uint32_t(v & 0xffffffffu));
    if (v >> 32) limbs_.push_back(std::uint32_t(v >> 32));
  }

  bool is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }

  BigUint& operator+=(const BigUint& o) {
    std::uint64_t carry = 0;
    size_t n = std::max(limbs_.size(), o.limbs_.size());
    limbs_.resize(n, 0);
    for (size_t i = 0; i < n; ++i) {
      std::uint64_t s = carry + limbs_[i] + (i < o.limbs_.size() ? o.limbs_[i] : 0);
      limbs_[i] = std::uint32_t(s);
      carry = s >> 32;
    }
    if (carry) limbs_.push_back(std::uint32_t(carry));
    return *this;
  }

  friend BigUint operator+(BigUint a, const BigUint& b) { a += b; return a; }

  friend BigUint operator*(const BigUint& a, const BigUint& b) {
    BigUint r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
      std::uint64_t carry = 0;
      for (size_t j = 0; j < b.limbs_.size(); ++j) {
        std::uint64_t cur = r.limbs_[i + j] + std::uint64_t(a.limbs_[i]) * b.limbs_[j] + carry;
        r.limbs_[i + j] = std::uint32_t(cur);
        carry = cur >> 32;
      }
      size_t k = i + b.limbs_.size();
      while (carry) {
        std::uint64_t cur = r.limbs_[k] + carry;
        r.limbs_[k] = std::uint32_t(cur);
        carry = cur >> 32;
        ++k;
      }
    }
    r.trim();
    return r;
  }

  friend bool operator==(const BigUint& a, const BigUint& b) { return a.limbs_ == b.limbs_; }
  friend bool operator!=(const BigUint& a, const BigUint& b) { return !(a == b); }
  friend bool operator<(const BigUint& a, const BigUint& b) {
    if (a.limbs_.size() != b.limbs_.size()) return a.limbs_.size() < b.limbs_.size();
    for (size_t i = a.limbs_.size(); i-- > 0;)
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i];
    return false;
  }
  friend bool operator>=(const BigUint& a, const BigUint& b) { return !(a < b); }
  friend bool operator<=(const BigUint& a, const BigUint& b) { return a < b || a == b; }

  // logical shift right by one bit (exact halving of even values)
  BigUint half() const {
    BigUint r = *this;
    std::uint32_t carry = 0;
    for (size_t i = r.limbs_.size(); i-- > 0;) {
      std::uint32_t cur = r.limbs_[i];
      r.limbs_[i] = (cur >> 1) | (carry << 31);
      carry = cur & 1;
    }
    r.trim();
    return r;
  }

  std::uint64_t to_u64_saturating() const {
    if (limbs_.size() > 2) return ~std::uint64_t(0);
    std::uint64_t v = limbs_[0];
    if (limbs_.size() == 2) v |= std::uint64_t(limbs_[1]) << 32;
    return v;
  }

  std::string str() const {
    // repeated division by 10^9
    std::vector<std::uint32_t> work(limbs_);
    std::string out;
    while (!(work.size() == 1 && work[0] == 0)) {
      std::uint64_t rem = 0;
      for (size_t i = work.size(); i-- > 0;) {
        std::uint64_t cur = (rem << 32) | work[i];
        work[i] = std::uint32_t(cur / 1000000000u);
        rem = cur % 1000000000u;
      }
      while (work.size() > 1 && work.back() == 0) work.pop_back();
      std::string chunk = std::to_string(rem);
      bool last = work.size() == 1 && work[0] == 0;
      if (!last) chunk.insert(0, 9 - chunk.size(), '0');
      out.insert(0, chunk);
    }
    return out.empty() ? "0" : out;
  }

 private:
  void trim() {
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
  }
  std::vector<std::uint32_t> limbs_;
};

}  // namespace molinfer
