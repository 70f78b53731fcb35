#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <type_traits>

#include "cfzeta/errors.hpp"

namespace cfzeta {

namespace detail {

// Little-endian limb storage with a small inline buffer. Values up to
// 192 bits never touch the heap, which keeps continued-fraction
// arithmetic allocation-free for every grid abscissa we ever evaluate.
class LimbVec {
 public:
  static constexpr uint32_t kInline = 3;

  LimbVec() noexcept = default;
  ~LimbVec() { delete[] heap_; }

  LimbVec(const LimbVec& o) { assign(o.data(), o.size_); }
  LimbVec& operator=(const LimbVec& o) {
    if (this != &o) assign(o.data(), o.size_);
    return *this;
  }
  LimbVec(LimbVec&& o) noexcept
      : heap_(o.heap_), size_(o.size_), cap_(o.cap_) {
    std::memcpy(small_, o.small_, sizeof(small_));
    o.heap_ = nullptr;
    o.size_ = 0;
    o.cap_ = kInline;
  }
  LimbVec& operator=(LimbVec&& o) noexcept {
    if (this != &o) {
      delete[] heap_;
      heap_ = o.heap_;
      size_ = o.size_;
      cap_ = o.cap_;
      std::memcpy(small_, o.small_, sizeof(small_));
      o.heap_ = nullptr;
      o.size_ = 0;
      o.cap_ = kInline;
    }
    return *this;
  }

  uint64_t* data() noexcept { return heap_ ? heap_ : small_; }
  const uint64_t* data() const noexcept { return heap_ ? heap_ : small_; }
  uint32_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  uint64_t& operator[](uint32_t i) noexcept { return data()[i]; }
  uint64_t operator[](uint32_t i) const noexcept { return data()[i]; }
  uint64_t back() const noexcept { return data()[size_ - 1]; }

  void clear() noexcept { size_ = 0; }
  void reserve(uint32_t n) {
    if (n > cap_) grow(n);
  }
  // Added limbs are zeroed.
  void resize(uint32_t n) {
    reserve(n);
    uint64_t* d = data();
    for (uint32_t i = size_; i < n; ++i) d[i] = 0;
    size_ = n;
  }
  void push_back(uint64_t v) {
    if (size_ == cap_) grow(size_ + 1);
    data()[size_++] = v;
  }
  void pop_back() noexcept { --size_; }
  void assign(const uint64_t* p, uint32_t n) {
    reserve(n);
    std::memmove(data(), p, std::size_t(n) * sizeof(uint64_t));
    size_ = n;
  }
  // Strip leading zero limbs.
  void trim() noexcept {
    const uint64_t* d = data();
    while (size_ > 0 && d[size_ - 1] == 0) --size_;
  }

 private:
  void grow(uint32_t need) {
    uint32_t ncap = std::max(cap_ * 2, need);
    uint64_t* nh = new uint64_t[ncap];
    std::memcpy(nh, data(), std::size_t(size_) * sizeof(uint64_t));
    delete[] heap_;
    heap_ = nh;
    cap_ = ncap;
  }

  uint64_t small_[kInline] = {0, 0, 0};
  uint64_t* heap_ = nullptr;
  uint32_t size_ = 0;
  uint32_t cap_ = kInline;
};

}  // namespace detail

/// Arbitrary-precision signed integer (sign-magnitude, 64-bit limbs).
class BigInt {
 public:
  BigInt() noexcept = default;
  template <std::integral T>
  BigInt(T v) {
    if constexpr (std::is_signed_v<T>) {
      assign_int64((long long)v);
    } else {
      if (v != 0) {
        sign_ = 1;
        mag_.push_back(uint64_t(v));
      }
    }
  }

  bool is_zero() const noexcept { return sign_ == 0; }
  bool is_negative() const noexcept { return sign_ < 0; }
  int sign() const noexcept { return sign_; }

  static int compare(const BigInt& a, const BigInt& b) noexcept {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
    int c = ucmp(a.mag_, b.mag_);
    return a.sign_ >= 0 ? c : -c;
  }
  friend bool operator==(const BigInt& a, const BigInt& b) noexcept {
    return compare(a, b) == 0;
  }
  friend bool operator!=(const BigInt& a, const BigInt& b) noexcept {
    return compare(a, b) != 0;
  }
  friend bool operator<(const BigInt& a, const BigInt& b) noexcept {
    return compare(a, b) < 0;
  }
  friend bool operator<=(const BigInt& a, const BigInt& b) noexcept {
    return compare(a, b) <= 0;
  }
  friend bool operator>(const BigInt& a, const BigInt& b) noexcept {
    return compare(a, b) > 0;
  }
  friend bool operator>=(const BigInt& a, const BigInt& b) noexcept {
    return compare(a, b) >= 0;
  }

  BigInt operator-() const {
    BigInt r = *this;
    r.sign_ = -r.sign_;
    return r;
  }
  BigInt abs() const {
    BigInt r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
  }

  friend BigInt operator+(const BigInt& a, const BigInt& b) {
    BigInt r;
    add_signed(a, b, r);
    return r;
  }
  friend BigInt operator-(const BigInt& a, const BigInt& b) {
    BigInt nb = b;
    nb.sign_ = -nb.sign_;
    BigInt r;
    add_signed(a, nb, r);
    return r;
  }
  friend BigInt operator*(const BigInt& a, const BigInt& b) {
    BigInt r;
    if (a.sign_ == 0 || b.sign_ == 0) return r;
    umul(a.mag_, b.mag_, r.mag_);
    r.mag_.trim();
    r.sign_ = r.mag_.empty() ? 0 : a.sign_ * b.sign_;
    return r;
  }

  /// Truncated division (C semantics): q rounds toward zero and the
  /// remainder carries the dividend's sign, so a == q*b + r always.
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.sign_ == 0) throw DomainError("BigInt: division by zero");
    int c = ucmp(a.mag_, b.mag_);
    if (c < 0) {
      q = BigInt();
      r = a;
      return;
    }
    BigInt qq, rr;
    udivmod(a.mag_, b.mag_, qq.mag_, rr.mag_);
    qq.mag_.trim();
    rr.mag_.trim();
    qq.sign_ = qq.mag_.empty() ? 0 : a.sign_ * b.sign_;
    rr.sign_ = rr.mag_.empty() ? 0 : a.sign_;
    q = std::move(qq);
    r = std::move(rr);
  }
  friend BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return q;
  }
  friend BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return r;
  }

  BigInt& operator+=(const BigInt& b) { return *this = *this + b; }
  BigInt& operator-=(const BigInt& b) { return *this = *this - b; }
  BigInt& operator*=(const BigInt& b) { return *this = *this * b; }
  BigInt& operator/=(const BigInt& b) { return *this = *this / b; }
  BigInt& operator%=(const BigInt& b) { return *this = *this % b; }

  static BigInt gcd(BigInt a, BigInt b) {
    a.sign_ = a.mag_.empty() ? 0 : 1;
    b.sign_ = b.mag_.empty() ? 0 : 1;
    while (!b.is_zero()) {
      BigInt q, r;
      divmod(a, b, q, r);
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  bool fits_uint64() const noexcept { return mag_.size() <= 1; }
  /// Magnitude as uint64; caller must check fits_uint64().
  uint64_t magnitude_u64() const noexcept {
    return mag_.empty() ? 0 : mag_[0];
  }
  bool fits_int64() const noexcept {
    if (mag_.size() > 1) return false;
    if (mag_.empty()) return true;
    uint64_t m = mag_[0];
    return sign_ > 0 ? m <= uint64_t(INT64_MAX) : m <= uint64_t(INT64_MAX) + 1;
  }
  long long to_int64() const {
    if (!fits_int64()) throw OverflowError("BigInt: does not fit in int64");
    if (mag_.empty()) return 0;
    uint64_t m = mag_[0];
    if (sign_ > 0) return (long long)m;
    if (m == uint64_t(INT64_MAX) + 1) return INT64_MIN;
    return -(long long)m;
  }

  /// Nearest-double conversion, within ~1 ulp (top 192 bits kept).
  double to_double() const noexcept {
    if (sign_ == 0) return 0.0;
    const uint32_t n = mag_.size();
    double r = 0.0;
    const uint32_t take = std::min<uint32_t>(n, 3);
    for (uint32_t i = 0; i < take; ++i) {
      r = r * 18446744073709551616.0 + double(mag_[n - 1 - i]);
    }
    if (n > take) r = std::ldexp(r, 64 * int(n - take));
    return sign_ < 0 ? -r : r;
  }

  uint32_t bit_length() const noexcept {
    if (mag_.empty()) return 0;
    return 64 * (mag_.size() - 1) + (64 - std::countl_zero(mag_.back()));
  }

  std::string to_string() const {
    if (sign_ == 0) return "0";
    // Peel 19 decimal digits at a time; chunks arrive least-significant
    // first and are stitched back together in reverse.
    constexpr uint64_t kChunk = 10000000000000000000ull;  // 10^19
    detail::LimbVec m = mag_;
    std::string rev;  // digits, least significant first
    while (!m.empty()) {
      uint64_t rem = udiv_small_inplace(m, kChunk);
      m.trim();
      int emitted = 0;
      do {
        rev.push_back(char('0' + rem % 10));
        rem /= 10;
        ++emitted;
      } while (rem != 0);
      if (!m.empty()) {
        while (emitted < 19) {
          rev.push_back('0');
          ++emitted;
        }
      }
    }
    std::string res;
    if (sign_ < 0) res.push_back('-');
    res.append(rev.rbegin(), rev.rend());
    return res;
  }

  static BigInt from_string(std::string_view s) {
    BigInt r;
    bool neg = false;
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      neg = s[i] == '-';
      ++i;
    }
    if (i == s.size()) throw DomainError("BigInt: empty numeral");
    for (; i < s.size(); ++i) {
      char c = s[i];
      if (c < '0' || c > '9') throw DomainError("BigInt: bad digit in numeral");
      umul_small_inplace(r.mag_, 10);
      uadd_small_inplace(r.mag_, uint64_t(c - '0'));
    }
    r.mag_.trim();
    r.sign_ = r.mag_.empty() ? 0 : (neg ? -1 : 1);
    return r;
  }

 private:
  using Limbs = detail::LimbVec;

  void assign_int64(long long v) {
    if (v == 0) return;
    sign_ = v < 0 ? -1 : 1;
    uint64_t m = v < 0 ? (~uint64_t(v) + 1) : uint64_t(v);
    mag_.push_back(m);
  }

  static int ucmp(const Limbs& a, const Limbs& b) noexcept {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (uint32_t i = a.size(); i-- > 0;) {
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
  }

  static void uadd(const Limbs& a, const Limbs& b, Limbs& out) {
    const Limbs& x = a.size() >= b.size() ? a : b;
    const Limbs& y = a.size() >= b.size() ? b : a;
    out.resize(x.size());
    unsigned __int128 carry = 0;
    for (uint32_t i = 0; i < x.size(); ++i) {
      unsigned __int128 s = carry + x[i];
      if (i < y.size()) s += y[i];
      out[i] = uint64_t(s);
      carry = s >> 64;
    }
    if (carry) out.push_back(uint64_t(carry));
  }

  // Requires |a| >= |b|.
  static void usub(const Limbs& a, const Limbs& b, Limbs& out) {
    out.resize(a.size());
    uint64_t borrow = 0;
    for (uint32_t i = 0; i < a.size(); ++i) {
      uint64_t bi = i < b.size() ? b[i] : 0;
      uint64_t ai = a[i];
      uint64_t d = ai - bi;
      uint64_t nb = (ai < bi) || (d < borrow) ? 1 : 0;
      out[i] = d - borrow;
      borrow = nb;
    }
    out.trim();
  }

  static void add_signed(const BigInt& a, const BigInt& b, BigInt& r) {
    if (a.sign_ == 0) {
      r = b;
      return;
    }
    if (b.sign_ == 0) {
      r = a;
      return;
    }
    if (a.sign_ == b.sign_) {
      uadd(a.mag_, b.mag_, r.mag_);
      r.sign_ = a.sign_;
      return;
    }
    int c = ucmp(a.mag_, b.mag_);
    if (c == 0) {
      r = BigInt();
      return;
    }
    if (c > 0) {
      usub(a.mag_, b.mag_, r.mag_);
      r.sign_ = a.sign_;
    } else {
      usub(b.mag_, a.mag_, r.mag_);
      r.sign_ = b.sign_;
    }
  }

  static void umul(const Limbs& a, const Limbs& b, Limbs& out) {
    out.clear();
    out.resize(a.size() + b.size());
    for (uint32_t i = 0; i < a.size(); ++i) {
      unsigned __int128 carry = 0;
      uint64_t ai = a[i];
      for (uint32_t j = 0; j < b.size(); ++j) {
        unsigned __int128 t =
            (unsigned __int128)ai * b[j] + out[i + j] + carry;
        out[i + j] = uint64_t(t);
        carry = t >> 64;
      }
      out[i + b.size()] = uint64_t(carry);
    }
  }

  // mag /= d, returns remainder. d != 0.
  static uint64_t udiv_small_inplace(Limbs& m, uint64_t d) {
    unsigned __int128 rem = 0;
    for (uint32_t i = m.size(); i-- > 0;) {
      unsigned __int128 cur = (rem << 64) | m[i];
      m[i] = uint64_t(cur / d);
      rem = cur % d;
    }
    return uint64_t(rem);
  }

  static void umul_small_inplace(Limbs& m, uint64_t f) {
    unsigned __int128 carry = 0;
    for (uint32_t i = 0; i < m.size(); ++i) {
      unsigned __int128 t = (unsigned __int128)m[i] * f + carry;
      m[i] = uint64_t(t);
      carry = t >> 64;
    }
    if (carry) m.push_back(uint64_t(carry));
  }

  static void uadd_small_inplace(Limbs& m, uint64_t v) {
    unsigned __int128 carry = v;
    for (uint32_t i = 0; i < m.size() && carry; ++i) {
      unsigned __int128 t = carry + m[i];
      m[i] = uint64_t(t);
      carry = t >> 64;
    }
    if (carry) m.push_back(uint64_t(carry));
  }

  // General magnitude division, |a| >= |b| > 0. Knuth algorithm D.
  static void udivmod(const Limbs& a, const Limbs& b, Limbs& q, Limbs& r) {
    if (b.size() == 1) {
      Limbs m = a;
      uint64_t rem = udiv_small_inplace(m, b[0]);
      m.trim();
      q = std::move(m);
      r.clear();
      if (rem) r.push_back(rem);
      return;
    }
    const uint32_t n = b.size();
    const uint32_t mlen = a.size() - n;
    const int shift = std::countl_zero(b.back());

    // Normalized copies: u gets one extra top limb.
    Limbs u, v;
    shl_into(a, shift, u);
    if (u.size() == a.size()) u.push_back(0);
    shl_into(b, shift, v);

    q.clear();
    q.resize(mlen + 1);
    const uint64_t vtop = v[n - 1];
    const uint64_t vsec = v[n - 2];
    for (uint32_t jj = mlen + 1; jj-- > 0;) {
      const uint32_t j = jj;
      unsigned __int128 num =
          ((unsigned __int128)u[j + n] << 64) | u[j + n - 1];
      unsigned __int128 qhat = num / vtop;
      unsigned __int128 rhat = num % vtop;
      while (qhat >> 64 ||
             qhat * vsec > ((rhat << 64) | u[j + n - 2])) {
        --qhat;
        rhat += vtop;
        if (rhat >> 64) break;
      }
      // Multiply-subtract qhat * v from u[j .. j+n].
      unsigned __int128 borrow = 0;
      unsigned __int128 carry = 0;
      for (uint32_t i = 0; i < n; ++i) {
        unsigned __int128 p = qhat * v[i] + carry;
        carry = p >> 64;
        uint64_t pl = uint64_t(p);
        uint64_t ui = u[j + i];
        uint64_t d = ui - pl;
        uint64_t nb = ui < pl ? 1 : 0;
        uint64_t d2 = d - uint64_t(borrow);
        if (d < uint64_t(borrow)) nb = 1;
        u[j + i] = d2;
        borrow = nb;
      }
      {
        uint64_t ui = u[j + n];
        uint64_t pl = uint64_t(carry);
        uint64_t d = ui - pl;
        uint64_t nb = ui < pl ? 1 : 0;
        uint64_t d2 = d - uint64_t(borrow);
        if (d < uint64_t(borrow)) nb = 1;
        u[j + n] = d2;
        borrow = nb;
      }
      if (borrow) {
        // qhat was one too large; add v back.
        --qhat;
        unsigned __int128 c2 = 0;
        for (uint32_t i = 0; i < n; ++i) {
          unsigned __int128 s = (unsigned __int128)u[j + i] + v[i] + c2;
          u[j + i] = uint64_t(s);
          c2 = s >> 64;
        }
        u[j + n] = uint64_t(u[j + n] + uint64_t(c2));
      }
      q[j] = uint64_t(qhat);
    }
    q.trim();

    // Remainder = u[0..n) >> shift.
    r.assign(u.data(), n);
    shr_inplace(r, shift);
    r.trim();
  }

  static void shl_into(const Limbs& a, int shift, Limbs& out) {
    out.assign(a.data(), a.size());
    if (shift == 0) return;
    uint64_t carry = 0;
    for (uint32_t i = 0; i < out.size(); ++i) {
      uint64_t cur = out[i];
      out[i] = (cur << shift) | carry;
      carry = cur >> (64 - shift);
    }
    if (carry) out.push_back(carry);
  }

  static void shr_inplace(Limbs& m, int shift) {
    if (shift == 0) return;
    for (uint32_t i = 0; i < m.size(); ++i) {
      uint64_t cur = m[i] >> shift;
      if (i + 1 < m.size()) cur |= m[i + 1] << (64 - shift);
      m[i] = cur;
    }
    m.trim();
  }

  int8_t sign_ = 0;
  Limbs mag_;
};

}  // namespace cfzeta
