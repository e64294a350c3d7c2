#pragma once

#include <cassert>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace utvpi {

/// Thrown whenever exact arithmetic would leave the representable range.
/// Distinct from any inconsistency verdict: an overflowing operation has no
/// result at all.
class OverflowError : public std::runtime_error {
public:
  explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw OverflowError("integer addition overflow");
  }
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw OverflowError("integer multiplication overflow");
  }
  return r;
}

/// floor(v / 2); an arithmetic shift rounds toward -inf on negatives.
inline std::int64_t floor_half(std::int64_t v) { return v >> 1; }

/// v / 2 for even v.
inline std::int64_t exact_half(std::int64_t v) {
  assert(v % 2 == 0);
  return v / 2;
}

inline std::int64_t twice(std::int64_t v) { return checked_mul(v, 2); }

inline bool is_even_integer(std::int64_t v) { return v % 2 == 0; }

inline std::string to_display_string(std::int64_t v) { return std::to_string(v); }

/// Extended weight: an exact finite value of type Num or +infinity.
/// +infinity absorbs addition; finite addition is exact and throws
/// OverflowError rather than wrapping. Default-constructed bounds are
/// +infinity, matching the empty constraint system.
template <class Num>
class Bound {
public:
  constexpr Bound() : value_{}, finite_(false) {}
  constexpr Bound(Num v) : value_(std::move(v)), finite_(true) {}  // NOLINT: implicit by design

  static constexpr Bound infinity() { return Bound(); }

  constexpr bool is_finite() const { return finite_; }

  const Num& value() const {
    if (!finite_) throw std::logic_error("Bound::value() on +infinity");
    return value_;
  }

  friend Bound operator+(const Bound& a, const Bound& b) {
    if (!a.finite_ || !b.finite_) return infinity();
    return Bound(checked_add(a.value_, b.value_));
  }

  friend bool operator==(const Bound& a, const Bound& b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.value_ == b.value_;
  }
  friend bool operator!=(const Bound& a, const Bound& b) { return !(a == b); }

  friend bool operator<(const Bound& a, const Bound& b) {
    if (!a.finite_) return false;             // +inf is the maximum
    if (!b.finite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const Bound& a, const Bound& b) { return !(b < a); }
  friend bool operator>(const Bound& a, const Bound& b) { return b < a; }
  friend bool operator>=(const Bound& a, const Bound& b) { return !(a < b); }

  friend Bound min(const Bound& a, const Bound& b) { return b < a ? b : a; }

  friend Bound floor_half(const Bound& b) {
    return b.finite_ ? Bound(floor_half(b.value_)) : infinity();
  }
  friend Bound exact_half(const Bound& b) {
    return b.finite_ ? Bound(exact_half(b.value_)) : infinity();
  }
  friend Bound twice(const Bound& b) {
    return b.finite_ ? Bound(twice(b.value_)) : infinity();
  }
  /// Largest even value <= b, i.e. 2*floor(b/2); +inf is left alone.
  friend Bound round_down_even(const Bound& b) {
    return b.finite_ ? Bound(twice(floor_half(b.value_))) : infinity();
  }

  friend std::ostream& operator<<(std::ostream& os, const Bound& b) {
    if (!b.finite_) return os << "+inf";
    return os << to_display_string(b.value_);
  }

private:
  Num value_;
  bool finite_;
};

}  // namespace utvpi
