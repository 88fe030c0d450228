#pragma once

// Rational interval enclosures for quantities that need real square roots
// (lengths, condition numbers, inverse-length sums).

#include <string>

#include "flatkit/scalar.hpp"

namespace flatkit {

struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  explicit Interval(Rational v) : lo(v), hi(std::move(v)) {}
  Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {}

  Rational width() const { return hi - lo; }
  double mid() const { return Rational((lo + hi) / 2).get_d(); }
  bool contains(const Rational& q) const { return lo <= q && q <= hi; }
  /// Certainly below / above a rational value.
  bool below(const Rational& q) const { return hi < q; }
  bool above(const Rational& q) const { return lo > q; }

  Interval& operator+=(const Interval& o) {
    lo += o.lo;
    hi += o.hi;
    return *this;
  }
  friend Interval operator+(Interval a, const Interval& b) { return a += b; }
  friend Interval operator-(const Interval& a, const Interval& b) {
    return {a.lo - b.hi, a.hi - b.lo};
  }
  friend Interval operator*(const Interval& a, const Interval& b);
  /// Division by an interval that excludes zero.
  friend Interval operator/(const Interval& a, const Interval& b);

  /// "lo..hi" with exact rationals.
  std::string to_string() const;
};

/// Enclosure of a field element; relative width at most 2^-bits.
Interval enclose(const Scalar& x, unsigned bits = 96);

/// Enclosure of sqrt over a nonnegative interval.
Interval sqrt_enclose(const Interval& x, unsigned bits = 96);

/// Enclosure of |v| for a field vector.
Interval length_enclose(const Vec2& v, unsigned bits = 96);

/// C(a) = max(|a|, |a^-1|) for det(a) = 1, the larger singular value.
Interval condition_number(const Mat2& a, unsigned bits = 96);

/// Exact test of C(a) == 1 (a is a rotation).
bool is_rotation(const Mat2& a);

}  // namespace flatkit
