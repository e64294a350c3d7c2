#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include "utvpi/bound.hpp"

namespace utvpi {

namespace detail {

using int128 = __int128;

inline int128 abs128(int128 v) { return v < 0 ? -v : v; }

inline int128 gcd128(int128 a, int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::int64_t narrow_or_throw(int128 v) {
  if (v > int128(INT64_MAX) || v < int128(INT64_MIN)) {
    throw OverflowError("rational arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace detail

/// Exact rational on 64-bit numerator/denominator, always normalized
/// (gcd 1, positive denominator). Intermediate products run in 128 bits;
/// results that do not reduce back into 64 bits throw OverflowError.
class Rational {
public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design

  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    normalize_from(num, den);
  }

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  bool is_integer() const { return den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    detail::int128 n = detail::int128(a.num_) * b.den_ + detail::int128(b.num_) * a.den_;
    detail::int128 d = detail::int128(a.den_) * b.den_;
    return from_int128(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator-(const Rational& a) {
    Rational r;
    r.num_ = detail::narrow_or_throw(-detail::int128(a.num_));
    r.den_ = a.den_;
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return detail::int128(a.num_) * b.den_ < detail::int128(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  /// Largest integer <= this.
  std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

private:
  static Rational from_int128(detail::int128 n, detail::int128 d) {
    Rational r;
    if (d < 0) {
      n = -n;
      d = -d;
    }
    detail::int128 g = detail::gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    r.num_ = detail::narrow_or_throw(n);
    r.den_ = detail::narrow_or_throw(d);
    return r;
  }

  void normalize_from(std::int64_t num, std::int64_t den) {
    Rational r = from_int128(detail::int128(num), detail::int128(den));
    num_ = r.num_;
    den_ = r.den_;
  }

  std::int64_t num_;
  std::int64_t den_;
};

inline Rational checked_add(const Rational& a, const Rational& b) { return a + b; }

inline Rational exact_half(const Rational& v) {
  return Rational(v.numerator(), checked_mul(v.denominator(), 2));
}

/// floor(v / 2) as a rational (always integral).
inline Rational floor_half(const Rational& v) { return Rational(exact_half(v).floor()); }

inline Rational twice(const Rational& v) {
  return Rational(checked_mul(v.numerator(), 2), v.denominator());
}

inline bool is_even_integer(const Rational& v) {
  return v.is_integer() && v.numerator() % 2 == 0;
}

inline std::string to_display_string(const Rational& v) {
  if (v.is_integer()) return std::to_string(v.numerator());
  return std::to_string(v.numerator()) + "/" + std::to_string(v.denominator());
}

inline std::ostream& operator<<(std::ostream& os, const Rational& v) {
  return os << to_display_string(v);
}

}  // namespace utvpi
