#include <gtest/gtest.h>

#include <random>

#include "flatkit/errors.hpp"
#include "flatkit/interval.hpp"
#include "flatkit/scalar.hpp"

using namespace flatkit;

namespace {

Scalar random_scalar(std::mt19937_64& rng, long d) {
  std::uniform_int_distribution<int> num(-50, 50), den(1, 20);
  return Scalar(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)), d);
}

Mat2 random_sl2(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  for (;;) {
    Rational a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng));
    a.canonicalize();
    b.canonicalize();
    c.canonicalize();
    if (sgn(a) == 0) continue;
    Rational d = (1 + b * c) / a;
    return {a, b, c, d};
  }
}

}  // namespace

TEST(Scalar, ParseAndPrintRoundTrip) {
  Scalar x(Rational(3, 4), Rational(-5, 6), 2);
  EXPECT_EQ(x.to_string(), "3/4+-5/6*sqrt(2)");
  EXPECT_EQ(Scalar::parse(x.to_string()), x);
  EXPECT_EQ(Scalar::parse("-7/3"), Scalar(Rational(-7, 3)));
  EXPECT_EQ(Scalar::parse("2.35"), Scalar(Rational(47, 20)));
  EXPECT_EQ(Scalar::parse("-1/2+1/1*sqrt(5)"), Scalar(Rational(-1, 2), 1, 5));
  EXPECT_THROW(Scalar::parse("1/0"), ValidationError);
  EXPECT_THROW(Scalar::parse("abc"), ValidationError);
}

TEST(Scalar, SignIsExact) {
  // 50*sqrt(2) - 69: 5000 > 4761.
  EXPECT_EQ(Scalar(-69, 50, 2).sign(), 1);
  EXPECT_EQ(Scalar(-71, 50, 2).sign(), -1);
  EXPECT_EQ(Scalar(3, -2, 2).sign(), 1);  // 9 > 8
  EXPECT_EQ(Scalar(0, 0, 2).sign(), 0);
}

TEST(Scalar, FieldAxiomsOnRandomInputs) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 300; ++it) {
    Scalar a = random_scalar(rng, 3), b = random_scalar(rng, 3), c = random_scalar(rng, 3);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + b, b + a);
    if (!a.is_zero()) EXPECT_EQ(a * (Scalar(1) / a), Scalar(1));
  }
}

TEST(Scalar, MixingFieldsIsRejected) {
  Scalar r2 = Scalar::root(2), r3 = Scalar::root(3);
  EXPECT_THROW(r2 + r3, FieldMismatch);
  EXPECT_THROW(r2 * r3, FieldMismatch);
  EXPECT_NO_THROW(r2 + Scalar(Rational(1, 3)));
  EXPECT_THROW(Scalar(1, 1, 4), FieldMismatch);
}

TEST(Scalar, ExactSqrt) {
  auto s = exact_sqrt(Scalar(3, 2, 2));  // (1 + sqrt 2)^2
  ASSERT_TRUE(s);
  EXPECT_EQ(*s, Scalar(1, 1, 2));
  EXPECT_FALSE(exact_sqrt(Scalar(2)));
  EXPECT_EQ(*exact_sqrt(Scalar(Rational(9, 4))), Scalar(Rational(3, 2)));
}

TEST(CompareNorm, Examples) {
  EXPECT_EQ(compare_norm({3, 4}, {5, 0}), std::strong_ordering::equal);
  EXPECT_EQ(compare_norm({1, 1}, {Scalar::root(2), 0}), std::strong_ordering::equal);
  EXPECT_EQ(compare_norm({0, Scalar(1, 1, 2)}, {Rational(12, 5), 0}),
            std::strong_ordering::greater);
  EXPECT_THROW(compare_norm({Scalar::root(2), 0}, {Scalar::root(3), 0}), FieldMismatch);
}

TEST(CompareNorm, AntisymmetricAndTransitive) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 200; ++it) {
    Vec2 u(random_scalar(rng, 5), random_scalar(rng, 5));
    Vec2 v(random_scalar(rng, 5), random_scalar(rng, 5));
    Vec2 w(random_scalar(rng, 5), random_scalar(rng, 5));
    EXPECT_EQ(compare_norm(u, v) < 0, compare_norm(v, u) > 0);
    EXPECT_EQ(compare_norm(u, v) == 0, compare_norm(v, u) == 0);
    if (compare_norm(u, v) <= 0 && compare_norm(v, w) <= 0) EXPECT_TRUE(compare_norm(u, w) <= 0);
  }
}

TEST(AnglePredicates, OrderAroundReference) {
  Vec2 ref(1, 0);
  EXPECT_TRUE(angle_less(ref, {1, 0}, {0, 1}));
  EXPECT_TRUE(angle_less(ref, {0, 1}, {-1, 0}));
  EXPECT_TRUE(angle_less(ref, {-1, 0}, {0, -1}));
  EXPECT_FALSE(angle_less(ref, {0, -1}, {1, 0}));
  EXPECT_FALSE(angle_less(ref, {2, 0}, {1, 0}));
  EXPECT_TRUE(in_upper_half({1, 0}));
  EXPECT_FALSE(in_upper_half({-1, 0}));
  EXPECT_EQ(canonical_direction({-1, -2}), Vec2(1, 2));
}

TEST(ConditionNumber, Examples) {
  EXPECT_EQ(condition_number(Mat2::identity()).lo, Rational(1));
  Interval c = condition_number(Mat2::diagonal(3, Rational(1, 3)));
  EXPECT_TRUE(c.contains(3));
  EXPECT_LE(c.width(), Rational(1, 1 << 30));
  EXPECT_THROW(condition_number(Mat2::diagonal(2, 2)), PreconditionError);
}

TEST(ConditionNumber, SubmultiplicativeAndAtLeastOne) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 100; ++it) {
    Mat2 a = random_sl2(rng), b = random_sl2(rng);
    Interval ca = condition_number(a), cb = condition_number(b), cab = condition_number(a * b);
    EXPECT_GE(ca.hi, 1);
    EXPECT_LE(cab.lo, (ca * cb).hi);
    Rational rel = ca.width() / ca.lo;
    EXPECT_LE(rel, Rational(1, Integer(1) << 64));
  }
}

TEST(ConditionNumber, EqualsOneExactlyForRotations) {
  // Rotation by the Pythagorean angle (3/5, 4/5).
  Mat2 r{Rational(3, 5), Rational(-4, 5), Rational(4, 5), Rational(3, 5)};
  EXPECT_TRUE(is_rotation(r));
  EXPECT_EQ(condition_number(r).hi, 1);
  Mat2 shear{1, 1, 0, 1};
  EXPECT_FALSE(is_rotation(shear));
  EXPECT_GT(condition_number(shear).lo, 1);
}

TEST(Contraction, ScalesDirectionAndComplement) {
  Vec2 v(3, 4);
  Mat2 b = contraction_along(v, Rational(1, 2));
  EXPECT_TRUE(b.is_sl2());
  EXPECT_EQ(b(v), Scalar(Rational(1, 2)) * v);
  EXPECT_EQ(b(perp(v)), Scalar(2) * perp(v));
  Interval c = condition_number(b);
  EXPECT_TRUE(c.contains(2));
}
