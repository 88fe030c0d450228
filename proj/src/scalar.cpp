#include "flatkit/scalar.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

#include "flatkit/errors.hpp"

namespace flatkit {

namespace {

Integer parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw ValidationError("malformed number '" + std::string(whole) + "'");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw ValidationError("malformed number '" + std::string(whole) + "'");
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw ValidationError("malformed number '" + std::string(whole) + "'");
  }
  std::string digits(s.substr(s[0] == '+' ? 1 : 0));
  return Integer(digits, 10);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto s = trim(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(trim(s.substr(0, slash)), text);
    Integer den = parse_integer(trim(s.substr(slash + 1)), text);
    if (den == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto int_part = s.substr(0, dot);
    auto frac_part = s.substr(dot + 1);
    bool negative = !int_part.empty() && int_part[0] == '-';
    if (int_part == "-" || int_part == "+" || int_part.empty()) int_part = "0";
    Integer ip = parse_integer(int_part, text);
    if (frac_part.empty()) return Rational(ip);
    Integer fp = parse_integer(frac_part, text);
    if (frac_part[0] == '-' || frac_part[0] == '+')
      throw ValidationError("malformed number '" + std::string(text) + "'");
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
    Rational q(abs(ip) * scale + fp, scale);
    q.canonicalize();
    return negative ? Rational(-q) : q;
  }
  return Rational(parse_integer(s, text));
}

std::string rational_to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

bool is_square_free(long d) {
  if (d < 2) return false;
  for (long p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) return false;
  }
  return true;
}

Scalar::Scalar(Rational a, Rational b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
  a_.canonicalize();
  b_.canonicalize();
  if (d_ == 0) {
    if (sgn(b_) != 0) throw FieldMismatch("irrational part without a field");
  } else if (!is_square_free(d_)) {
    throw FieldMismatch("field parameter " + std::to_string(d_) + " is not square-free");
  }
}

long join_fields(long a, long b) {
  if (a == 0 || a == b) return b;
  if (b == 0) return a;
  throw FieldMismatch("mixing Q(sqrt(" + std::to_string(a) + ")) with Q(sqrt(" +
                      std::to_string(b) + "))");
}

Scalar Scalar::root(long d) { return Scalar(0, 1, d); }

long Scalar::merge_field(const Scalar& x, const Scalar& y) {
  if (x.d_ == y.d_) return x.d_;
  if (x.d_ == 0 || x.is_rational()) return y.d_;
  if (y.d_ == 0 || y.is_rational()) return x.d_;
  throw FieldMismatch("mixing Q(sqrt(" + std::to_string(x.d_) + ")) with Q(sqrt(" +
                      std::to_string(y.d_) + "))");
}

int Scalar::sign() const {
  int sa = sgn(a_);
  int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // a and b*sqrt(d) have opposite signs: compare a^2 with d*b^2.
  Rational lhs = a_ * a_;
  Rational rhs = b_ * b_ * d_;
  int c = cmp(lhs, rhs);
  return c == 0 ? 0 : (c > 0 ? sa : sb);
}

Scalar Scalar::conjugate() const {
  Scalar r = *this;
  r.b_ = -r.b_;
  return r;
}

Rational Scalar::norm() const { return a_ * a_ - b_ * b_ * d_; }

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.is_rational()) {
    a_ += o.a_;
    return *this;
  }
  d_ = merge_field(*this, o);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  if (o.is_rational()) {
    a_ -= o.a_;
    return *this;
  }
  d_ = merge_field(*this, o);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (o.is_rational()) {
    a_ *= o.a_;
    if (!is_rational()) b_ *= o.a_;
    return *this;
  }
  if (is_rational()) {
    b_ = a_ * o.b_;
    a_ *= o.a_;
    d_ = o.d_;
    return *this;
  }
  d_ = merge_field(*this, o);
  Rational na = a_ * o.a_ + b_ * o.b_ * d_;
  Rational nb = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(na);
  b_ = std::move(nb);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw PreconditionError("division by zero");
  if (o.is_rational()) {
    a_ /= o.a_;
    if (!is_rational()) b_ /= o.a_;
    return *this;
  }
  Rational n = o.norm();
  *this *= o.conjugate();
  a_ /= n;
  b_ /= n;
  return *this;
}

std::strong_ordering operator<=>(const Scalar& x, const Scalar& y) {
  if (x.is_rational() && y.is_rational()) {
    int c = cmp(x.a_, y.a_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  int s = (x - y).sign();
  return s < 0 ? std::strong_ordering::less
               : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

double Scalar::to_double() const {
  double v = a_.get_d();
  if (!is_rational()) v += b_.get_d() * std::sqrt(static_cast<double>(d_));
  return v;
}

std::string Scalar::to_string() const {
  std::string s = rational_to_string(a_);
  if (!is_rational()) s += "+" + rational_to_string(b_) + "*sqrt(" + std::to_string(d_) + ")";
  return s;
}

Scalar Scalar::parse(std::string_view text) {
  auto s = trim(text);
  auto star = s.find("*sqrt(");
  if (star == std::string_view::npos) return Scalar(parse_rational(s));
  if (s.back() != ')') throw ValidationError("malformed scalar '" + std::string(text) + "'");
  // The irrational term starts at the first sign after the leading one.
  auto plus = s.find_first_of("+-", 1);
  if (plus == std::string_view::npos || plus > star)
    throw ValidationError("malformed scalar '" + std::string(text) + "'");
  Rational a = parse_rational(s.substr(0, plus));
  auto coeff = s.substr(plus, star - plus);
  if (coeff[0] == '+') coeff.remove_prefix(1);
  Rational b = parse_rational(coeff);
  auto dtext = s.substr(star + 6, s.size() - star - 7);
  long d = static_cast<long>(parse_integer(trim(dtext), text).get_si());
  return Scalar(std::move(a), std::move(b), d);
}

std::ostream& operator<<(std::ostream& os, const Scalar& x) { return os << x.to_string(); }

namespace {

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t()))
    return std::nullopt;
  Integer n, m;
  mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(m.get_mpz_t(), q.get_den_mpz_t());
  return Rational(n, m);
}

}  // namespace

std::optional<Scalar> exact_sqrt(const Scalar& x) {
  if (x.sign() < 0) return std::nullopt;
  if (x.is_rational()) {
    if (auto r = rational_sqrt(x.rational_part())) return Scalar(*r);
    return std::nullopt;
  }
  // (p + q sqrt d)^2 = a + b sqrt d  =>  p^2 = (a +- sqrt(norm)) / 2.
  auto n = rational_sqrt(x.norm());
  if (!n) return std::nullopt;
  const long d = x.field();
  for (int s : {1, -1}) {
    Rational p2 = (x.rational_part() + s * *n) / 2;
    auto p = rational_sqrt(p2);
    if (!p || sgn(*p) == 0) continue;
    Rational q = x.irrational_part() / (2 * *p);
    Scalar cand(*p, q, d);
    if (cand.sign() < 0) cand = -cand;
    if (cand * cand == x) return cand;
  }
  // Pure multiple of sqrt(d): x = b sqrt d = (q sqrt d)^2 is impossible for
  // b != 0, but a = 0 with p = 0 is covered when norm is a square.
  return std::nullopt;
}

int orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a).sign(); }

std::strong_ordering compare_norm(const Vec2& u, const Vec2& v) {
  Scalar::merge_field(u.x, v.x);
  Scalar::merge_field(u.y, v.y);
  return u.norm_sq() <=> v.norm_sq();
}

bool same_direction(const Vec2& u, const Vec2& v) {
  if (u.is_zero() || v.is_zero()) return false;
  return cross(u, v).is_zero() && dot(u, v).sign() > 0;
}

namespace {

// 0 for angles in [0, pi) measured from ref, 1 for [pi, 2pi).
int half_of(const Vec2& ref, const Vec2& v, int& cross_sign) {
  cross_sign = cross(ref, v).sign();
  if (cross_sign > 0) return 0;
  if (cross_sign < 0) return 1;
  return dot(ref, v).sign() > 0 ? 0 : 1;
}

}  // namespace

bool angle_less(const Vec2& ref, const Vec2& x, const Vec2& y) {
  int cx, cy;
  int hx = half_of(ref, x, cx);
  int hy = half_of(ref, y, cy);
  if (hx != hy) return hx < hy;
  return cross(x, y).sign() > 0;
}

bool in_upper_half(const Vec2& v) {
  int sy = v.y.sign();
  return sy > 0 || (sy == 0 && v.x.sign() > 0);
}

Vec2 canonical_direction(const Vec2& v) { return in_upper_half(v) ? v : -v; }

bool direction_less(const Vec2& u, const Vec2& v) {
  return cross(u, v).sign() > 0;
}

Mat2 Mat2::inverse() const {
  Scalar det_ = det();
  if (det_.is_zero()) throw PreconditionError("singular matrix");
  return {d / det_, -b / det_, -c / det_, a / det_};
}

long Mat2::field() const {
  long f = 0;
  for (const Scalar* s : {&a, &b, &c, &d}) {
    if (s->is_rational()) continue;
    if (f != 0 && f != s->field()) throw FieldMismatch("matrix entries over different fields");
    f = s->field();
  }
  return f;
}

Mat2 contraction_along(const Vec2& dir, const Scalar& factor) {
  if (dir.is_zero()) throw PreconditionError("zero contraction direction");
  if (factor.sign() <= 0) throw PreconditionError("contraction factor must be positive");
  // (c * v v^T + c^-1 * w w^T) / |v|^2 with w = perp(v).
  Scalar n = dir.norm_sq();
  Scalar inv = Scalar(1) / factor;
  const Scalar& x = dir.x;
  const Scalar& y = dir.y;
  Scalar xx = x * x, yy = y * y, xy = x * y;
  return {(factor * xx + inv * yy) / n, (factor - inv) * xy / n, (factor - inv) * xy / n,
          (factor * yy + inv * xx) / n};
}

}  // namespace flatkit
