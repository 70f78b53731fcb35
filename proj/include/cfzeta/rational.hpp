#pragma once

#include <string>
#include <utility>

#include "cfzeta/bigint.hpp"
#include "cfzeta/errors.hpp"

namespace cfzeta {

/// Exact rational number. Always stored in lowest terms with a strictly
/// positive denominator; zero is 0/1.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  template <std::integral T>
  Rational(T n) : num_(n), den_(1) {}
  Rational(BigInt n) : num_(std::move(n)), den_(1) {}
  Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    normalize();
  }
  Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

  const BigInt& num() const noexcept { return num_; }
  const BigInt& den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_.is_zero(); }
  int sign() const noexcept { return num_.sign(); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw DomainError("Rational: division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }
  Rational operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
  }

  /// Multiplicative inverse; error on zero.
  Rational reciprocal() const {
    if (is_zero()) throw DomainError("Rational: reciprocal of zero");
    Rational r;
    r.num_ = den_;
    r.den_ = num_;
    if (r.den_.is_negative()) {
      r.num_ = -r.num_;
      r.den_ = -r.den_;
    }
    return r;
  }

  static int compare(const Rational& a, const Rational& b) {
    return BigInt::compare(a.num_ * b.den_, b.num_ * a.den_);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    // Canonical form makes equality componentwise.
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return compare(a, b) < 0;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return compare(a, b) <= 0;
  }
  friend bool operator>(const Rational& a, const Rational& b) {
    return compare(a, b) > 0;
  }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return compare(a, b) >= 0;
  }

  /// floor(num/den) as an integer.
  BigInt floor() const {
    BigInt q, r;
    BigInt::divmod(num_, den_, q, r);
    if (r.is_negative()) q -= BigInt(1);
    return q;
  }

  double to_double() const noexcept {
    // Single-limb operands convert exactly, so IEEE division returns the
    // correctly rounded quotient. That covers every grid abscissa.
    if (num_.fits_uint64() && den_.fits_uint64()) {
      double n = double(num_.magnitude_u64());
      double d = double(den_.magnitude_u64());
      double q = n / d;
      return num_.sign() < 0 ? -q : q;
    }
    return num_.to_double() / den_.to_double();
  }

  std::string to_string() const {
    if (den_ == BigInt(1)) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
  }

 private:
  void normalize() {
    if (den_.is_zero()) throw DomainError("Rational: zero denominator");
    if (num_.is_zero()) {
      den_ = BigInt(1);
      return;
    }
    if (den_.is_negative()) {
      num_ = -num_;
      den_ = -den_;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (g != BigInt(1)) {
      num_ /= g;
      den_ /= g;
    }
  }

  BigInt num_;
  BigInt den_;
};

}  // namespace cfzeta
