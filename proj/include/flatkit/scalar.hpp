#pragma once

// Exact arithmetic over Q and real quadratic fields Q(sqrt(d)).
//
// A Scalar is a + b*sqrt(d) with arbitrary-precision rational a, b. The field
// tag d is 0 for plain rationals. Rational values mix freely with any field;
// two values with nonzero irrational parts over different fields never do.

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace flatkit {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "p/q" or a finite decimal like "-2.35" into an exact rational.
Rational parse_rational(std::string_view text);

/// "num/den", always with an explicit denominator.
std::string rational_to_string(const Rational& q);

/// True when d >= 2 and no square > 1 divides d.
bool is_square_free(long d);

class Scalar {
 public:
  Scalar() = default;
  Scalar(int v) : a_(v) {}
  Scalar(long v) : a_(v) {}
  Scalar(Rational a) : a_(std::move(a)) { a_.canonicalize(); }
  // GMP expression templates (e.g. a * b with rationals) convert directly.
  template <class U>
  Scalar(const __gmp_expr<mpq_t, U>& e) : a_(e) {}
  template <class U>
  Scalar(const __gmp_expr<mpz_t, U>& e) : a_(Rational(e)) {}
  /// a + b*sqrt(d); d must be square-free (or 0 together with b == 0).
  Scalar(Rational a, Rational b, long d);

  /// sqrt(d) as an element of Q(sqrt(d)).
  static Scalar root(long d);

  const Rational& rational_part() const { return a_; }
  const Rational& irrational_part() const { return b_; }
  /// Field tag: 0 for Q, otherwise the square-free d.
  long field() const { return d_; }

  bool is_rational() const { return sgn(b_) == 0; }
  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  int sign() const;

  Scalar conjugate() const;
  /// Field norm a^2 - d*b^2.
  Rational norm() const;
  Scalar abs() const { return sign() < 0 ? -*this : *this; }

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
  friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
  friend Scalar operator*(Scalar x, const Scalar& y) { return x *= y; }
  friend Scalar operator/(Scalar x, const Scalar& y) { return x /= y; }
  friend Scalar operator-(Scalar x) {
    x.a_ = -x.a_;
    x.b_ = -x.b_;
    return x;
  }

  friend bool operator==(const Scalar& x, const Scalar& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend std::strong_ordering operator<=>(const Scalar& x, const Scalar& y);

  double to_double() const;
  /// "num/den" or "num/den+num/den*sqrt(d)".
  std::string to_string() const;
  /// Inverse of to_string; also accepts bare rationals and decimals.
  static Scalar parse(std::string_view text);

  /// Field tag shared by x and y; throws FieldMismatch when incompatible.
  static long merge_field(const Scalar& x, const Scalar& y);

 private:
  Rational a_;
  Rational b_;
  long d_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Scalar& x);

/// 0 for rational values, otherwise the field tag.
inline long field_of(const Scalar& s) { return s.is_rational() ? 0 : s.field(); }

/// Common field of two tags (0 means Q); throws FieldMismatch when both are
/// nonzero and differ.
long join_fields(long a, long b);

/// Exact square root inside the same field, when one exists.
std::optional<Scalar> exact_sqrt(const Scalar& x);

struct Vec2 {
  Scalar x;
  Scalar y;

  Vec2() = default;
  Vec2(Scalar x_, Scalar y_) : x(std::move(x_)), y(std::move(y_)) {}

  bool is_zero() const { return x.is_zero() && y.is_zero(); }
  long field() const { return join_fields(field_of(x), field_of(y)); }
  Scalar norm_sq() const { return x * x + y * y; }

  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  Vec2& operator*=(const Scalar& s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend Vec2 operator*(Vec2 a, const Scalar& s) { return a *= s; }
  friend Vec2 operator*(const Scalar& s, Vec2 a) { return a *= s; }
  friend Vec2 operator/(Vec2 a, const Scalar& s) {
    a.x /= s;
    a.y /= s;
    return a;
  }
  friend bool operator==(const Vec2& a, const Vec2& b) = default;
  /// Lexicographic on (x, y).
  friend std::strong_ordering operator<=>(const Vec2& a, const Vec2& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.y <=> b.y;
  }
};

inline Scalar dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline Scalar cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
/// Counterclockwise quarter turn.
inline Vec2 perp(const Vec2& v) { return {-v.y, v.x}; }

/// Sign of cross(b - a, c - a): +1 for a left turn.
int orient(const Vec2& a, const Vec2& b, const Vec2& c);

/// Exact ordering of |u| against |v| through squared norms.
std::strong_ordering compare_norm(const Vec2& u, const Vec2& v);

/// u and v are nonzero and point the same way.
bool same_direction(const Vec2& u, const Vec2& v);

/// Strict comparison of the counterclockwise angles from ref to x and to y,
/// each taken in [0, 2*pi). All three vectors must be nonzero.
bool angle_less(const Vec2& ref, const Vec2& x, const Vec2& y);

/// v lies in H = {y > 0} u {y = 0, x > 0}.
bool in_upper_half(const Vec2& v);

/// The representative of {v, -v} lying in H.
Vec2 canonical_direction(const Vec2& v);

/// Orders canonical directions by angle from (1, 0).
bool direction_less(const Vec2& u, const Vec2& v);

struct Mat2 {
  Scalar a = 1, b = 0, c = 0, d = 1;  // [[a, b], [c, d]]

  static Mat2 identity() { return {}; }
  static Mat2 diagonal(Scalar p, Scalar q) { return {std::move(p), 0, 0, std::move(q)}; }

  Scalar det() const { return a * d - b * c; }
  Scalar frobenius_sq() const { return a * a + b * b + c * c + d * d; }
  Mat2 inverse() const;
  Vec2 operator()(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  friend Mat2 operator*(const Mat2& l, const Mat2& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c,
            l.c * r.b + l.d * r.d};
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;
  bool is_sl2() const { return det() == Scalar(1); }
  /// Field tag shared by all entries (throws on mixed fields).
  long field() const;
};

/// The SL(2) map scaling `dir` by `factor` and its orthogonal complement by
/// 1/factor. Entries stay in the field of `dir` and `factor`.
Mat2 contraction_along(const Vec2& dir, const Scalar& factor);

}  // namespace flatkit
