#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "mathrec/common/error.hpp"

namespace mathrec::fit {

// Exact rational on int64 with __int128 intermediates. Always normalized:
// denominator > 0, gcd(|num|, den) == 1.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by design
  Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw DomainError("DivideByZero", "rational division by zero");
    return from128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }

  // ⌈num/den⌉ for non-negative values, computed exactly in integers.
  std::int64_t ceil() const {
    if (num_ < 0) return -((-num_) / den_);
    return (num_ + den_ - 1) / den_;
  }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // "num/den", or just "num" for integral values.
  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Exact decimal expansion, rounded half-up at `digits` places.
  std::string to_decimal_string(int digits) const;

private:
  using i128 = __int128;

  void assign(std::int64_t num, std::int64_t den) {
    if (den == 0) throw DomainError("DivideByZero", "rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) g = 1;
    num_ = num / g;
    den_ = den / g;
  }

  static Rational from128(i128 num, i128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    i128 a = num < 0 ? -num : num;
    i128 b = den;
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    if (a == 0) a = 1;
    num /= a;
    den /= a;
    constexpr i128 lo = INT64_MIN, hi = INT64_MAX;
    if (num < lo || num > hi || den > hi) {
      throw DomainError("RationalOverflow", "rational exceeds 64-bit range after reduction");
    }
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  std::int64_t num_;
  std::int64_t den_;
};

inline std::string Rational::to_decimal_string(int digits) const {
  // Long division on non-negative values; callers only print fractions in [0,1].
  i128 num = num_ < 0 ? -num_ : num_;
  i128 den = den_;
  std::string out = num_ < 0 ? "-" : "";
  out += std::to_string(static_cast<long long>(num / den));
  num %= den;
  if (digits <= 0) return out;
  out += '.';
  for (int i = 0; i < digits; ++i) {
    num *= 10;
    out += static_cast<char>('0' + static_cast<int>(num / den));
    num %= den;
  }
  // Round half-up on the next digit, propagating carries.
  if (num * 2 >= den) {
    for (std::size_t i = out.size(); i-- > 0;) {
      if (out[i] == '.') continue;
      if (out[i] == '-') break;
      if (out[i] != '9') {
        ++out[i];
        return out;
      }
      out[i] = '0';
      if (i == 0 || out[i - 1] == '-') {
        out.insert(i, "1");
        return out;
      }
    }
  }
  return out;
}

}  // namespace mathrec::fit
