#pragma once

// Floating-point filters for exact predicates. A decision taken in doubles
// must clear an error bound scaled by the magnitudes of the exact parts;
// otherwise the caller falls back to exact arithmetic.

#include <cmath>

#include "flatkit/scalar.hpp"

namespace flatkit {

// Double approximation of an exact vector with bounds on the magnitudes of
// its coordinates' parts; rounding errors stay far below 1e-12 of those.
struct Approx {
  double x, y, mx, my;
};

inline double magnitude(const Scalar& s) {
  double m = std::fabs(s.rational_part().get_d());
  if (!s.is_rational()) m += std::fabs(s.irrational_part().get_d()) * std::sqrt(double(s.field()));
  return m;
}

inline Approx approx(const Vec2& v) { return {v.x.to_double(), v.y.to_double(), magnitude(v.x), magnitude(v.y)}; }

inline Approx add(const Approx& a, const Approx& b) { return {a.x + b.x, a.y + b.y, a.mx + b.mx, a.my + b.my}; }

constexpr double kFilter = 1e-11;

}  // namespace flatkit
