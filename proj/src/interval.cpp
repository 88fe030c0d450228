#include "flatkit/interval.hpp"

#include <algorithm>

#include "flatkit/errors.hpp"

namespace flatkit {

Interval operator*(const Interval& a, const Interval& b) {
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval operator/(const Interval& a, const Interval& b) {
  if (sgn(b.lo) <= 0 && sgn(b.hi) >= 0) throw PreconditionError("interval division by zero");
  Interval inv(1 / b.hi, 1 / b.lo);
  return a * inv;
}

std::string Interval::to_string() const {
  return rational_to_string(lo) + ".." + rational_to_string(hi);
}

namespace {

// Bracket sqrt(q) for rational q >= 0 with relative width <= 2^-bits.
Interval sqrt_rational(const Rational& q, unsigned bits) {
  if (sgn(q) < 0) throw PreconditionError("square root of a negative value");
  if (sgn(q) == 0) return Interval(Rational(0));
  // sqrt(p/r) = sqrt(p*r*4^k) / (r*2^k).
  Integer scaled = q.get_num() * q.get_den();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * bits);
  Integer s;
  mpz_sqrt(s.get_mpz_t(), scaled.get_mpz_t());
  Integer den = q.get_den();
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
  Rational lo(s, den);
  lo.canonicalize();
  if (s * s == scaled) return Interval(lo);
  Rational hi(s + 1, den);
  hi.canonicalize();
  return {lo, hi};
}

}  // namespace

Interval enclose(const Scalar& x, unsigned bits) {
  if (x.is_rational()) return Interval(x.rational_part());
  // |b| sqrt(d) bracketed to relative 2^-(bits+extra) so that cancellation
  // against a does not blow up the relative width of the sum.
  const Rational& a = x.rational_part();
  const Rational& b = x.irrational_part();
  unsigned extra = 8;
  for (;;) {
    Interval r = sqrt_rational(b * b * x.field(), bits + extra);
    Interval t = sgn(b) > 0 ? Interval(a + r.lo, a + r.hi) : Interval(a - r.hi, a - r.lo);
    // Relative width check: width <= 2^-bits * min|t|.
    Rational lo_abs = sgn(t.lo) > 0 ? t.lo : (sgn(t.hi) < 0 ? Rational(-t.hi) : Rational(0));
    Rational bound = lo_abs;
    mpq_div_2exp(bound.get_mpq_t(), bound.get_mpq_t(), bits);
    if (t.width() <= bound) return t;
    extra *= 2;
    if (extra > 1u << 16) throw InternalError("interval enclosure failed to converge");
  }
}

Interval sqrt_enclose(const Interval& x, unsigned bits) {
  if (sgn(x.lo) < 0) throw PreconditionError("square root of a possibly negative interval");
  return {sqrt_rational(x.lo, bits).lo, sqrt_rational(x.hi, bits).hi};
}

Interval length_enclose(const Vec2& v, unsigned bits) {
  Scalar n = v.norm_sq();
  if (n.is_rational()) return sqrt_rational(n.rational_part(), bits);
  if (auto r = exact_sqrt(n)) return enclose(*r, bits);
  return sqrt_enclose(enclose(n, bits + 8), bits);
}

bool is_rotation(const Mat2& a) { return a.is_sl2() && a.frobenius_sq() == Scalar(2); }

Interval condition_number(const Mat2& a, unsigned bits) {
  if (!a.is_sl2()) throw PreconditionError("condition number needs det = 1");
  Scalar f = a.frobenius_sq();
  if (f == Scalar(2)) return Interval(Rational(1));
  // sigma_max^2 = (F + sqrt(F^2 - 4)) / 2 with F the squared Frobenius norm.
  Scalar disc = f * f - Scalar(4);
  Interval root;
  if (auto r = exact_sqrt(disc)) {
    if (auto s = exact_sqrt((f + *r) / Scalar(2))) return enclose(*s, bits);
    root = enclose(*r, bits + 8);
  } else {
    root = sqrt_enclose(enclose(disc, bits + 8), bits + 8);
  }
  Interval sigma_sq = (enclose(f, bits + 8) + root) * Interval(Rational(1, 2));
  return sqrt_enclose(sigma_sq, bits);
}

}  // namespace flatkit
