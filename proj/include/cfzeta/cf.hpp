#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cfzeta/bigint.hpp"
#include "cfzeta/errors.hpp"
#include "cfzeta/rational.hpp"

namespace cfzeta {

/// Continued-fraction digits of a rational in (0,1], canonical form:
/// every digit >= 1, and the last digit >= 2 whenever there are two or
/// more digits. The empty list encodes 0; x = 1 is the single list [1].
struct CFExpansion {
  std::vector<BigInt> digits;

  std::size_t length() const noexcept { return digits.size(); }

  friend bool operator==(const CFExpansion& a, const CFExpansion& b) {
    return a.digits == b.digits;
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (i) s += ",";
      s += digits[i].to_string();
    }
    s += "]";
    return s;
  }
};

namespace detail {

// Merge a trailing 1 into its predecessor: [.., a, 1] == [.., a+1].
// A single pass suffices; the merged digit is always >= 2.
inline void canonicalize(std::vector<BigInt>& d) {
  if (d.size() >= 2 && d.back() == BigInt(1)) {
    d.pop_back();
    d.back() += BigInt(1);
  }
}

}  // namespace detail

/// Continued-fraction expansion of x in (0,1] by the Euclidean algorithm.
/// The result is canonical and cf_value(cf_expand(x)) == x exactly.
inline CFExpansion cf_expand(const Rational& x) {
  if (x.sign() <= 0 || x > Rational(1)) {
    throw DomainError("cf_expand: x must lie in (0,1], got " + x.to_string());
  }
  CFExpansion e;
  BigInt p = x.num();  // x = p/q in lowest terms, 0 < p <= q
  BigInt q = x.den();
  while (!p.is_zero()) {
    BigInt digit, rem;
    BigInt::divmod(q, p, digit, rem);
    e.digits.push_back(std::move(digit));
    q = std::move(p);
    p = std::move(rem);
  }
  // The Euclidean algorithm already ends with a final digit >= 2, except
  // for x = 1 which is the permitted [1].
  return e;
}

/// Exact value of a digit list: 1/(a1 + 1/(a2 + ...)). Empty list -> 0.
inline Rational cf_value(const CFExpansion& e) {
  BigInt n = 0;
  BigInt d = 1;
  for (std::size_t i = e.digits.size(); i-- > 0;) {
    // 1/(a + n/d) = d/(a*d + n)
    BigInt nd = e.digits[i] * d + n;
    n = std::move(d);
    d = std::move(nd);
  }
  return Rational(std::move(n), std::move(d));
}

/// Gauss map h(x) = 1/x - floor(1/x); drops the leading digit.
inline Rational gauss_map(const Rational& x) {
  if (x.sign() <= 0 || x > Rational(1)) {
    throw DomainError("gauss_map: x must lie in (0,1], got " + x.to_string());
  }
  BigInt q, r;
  BigInt::divmod(x.den(), x.num(), q, r);
  return Rational(std::move(r), x.num());
}

/// Exchange digits at 1-based positions p and q, then re-canonicalize.
/// Positions beyond the expansion length leave it unchanged.
inline CFExpansion swap_digits(const CFExpansion& e, std::size_t p,
                               std::size_t q) {
  if (p == 0 || q == 0) {
    throw DomainError("swap_digits: positions are 1-based and must be >= 1");
  }
  const std::size_t len = e.digits.size();
  if (p > len || q > len || p == q) return e;
  CFExpansion out = e;
  std::swap(out.digits[p - 1], out.digits[q - 1]);
  detail::canonicalize(out.digits);
  return out;
}

/// The digit-swap map on the unit interval: expand, exchange digits p and
/// q, evaluate. Exact; maps (0,1] into (0,1].
inline Rational digit_swap(const Rational& x, std::size_t p, std::size_t q) {
  if (x.sign() <= 0 || x > Rational(1)) {
    throw DomainError("digit_swap: x must lie in (0,1], got " + x.to_string());
  }
  if (p == q) return x;
  return cf_value(swap_digits(cf_expand(x), p, q));
}

}  // namespace cfzeta
