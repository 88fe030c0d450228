#include "flatkit/corpus.hpp"

#include "flatkit/errors.hpp"

namespace flatkit::corpus {

SurfaceSpec square_torus() { return lattice_torus({1, 0}, {0, 1}); }

SurfaceSpec lattice_torus(const Vec2& v1_in, const Vec2& v2_in) {
  Vec2 v1 = v1_in, v2 = v2_in;
  int o = cross(v1, v2).sign();
  if (o == 0) throw PreconditionError("lattice vectors are collinear");
  if (o < 0) std::swap(v1, v2);
  SurfaceSpec s;
  s.d = join_fields(v1.field(), v2.field());
  s.polygons.push_back({{Vec2(), v1, v1 + v2, v2}});
  s.gluings = {{{0, 0}, {0, 2}}, {{0, 1}, {0, 3}}};
  return s;
}

SurfaceSpec marked_torus(const Vec2& v1_in, const Vec2& v2_in, const Rational& alpha,
                         const Rational& beta) {
  Vec2 v1 = v1_in, v2 = v2_in;
  Rational a = alpha, b = beta;
  int o = cross(v1, v2).sign();
  if (o == 0) throw PreconditionError("lattice vectors are collinear");
  if (o < 0) {
    std::swap(v1, v2);
    std::swap(a, b);
  }
  if (a <= 0 || a >= 1 || b <= 0 || b >= 1)
    throw PreconditionError("marked point must lie inside the fundamental parallelogram");
  Vec2 p = Scalar(a) * v1 + Scalar(b) * v2;
  Vec2 z;
  SurfaceSpec s;
  s.d = lattice_torus(v1, v2).d;
  s.polygons.push_back({{z, v1, p}});
  s.polygons.push_back({{v1, v1 + v2, p}});
  s.polygons.push_back({{v1 + v2, v2, p}});
  s.polygons.push_back({{v2, z, p}});
  s.gluings = {{{0, 0}, {2, 0}}, {{1, 0}, {3, 0}}, {{0, 1}, {1, 2}},
               {{1, 1}, {2, 2}}, {{2, 1}, {3, 2}}, {{3, 1}, {0, 2}}};
  return s;
}

SurfaceSpec regular_octagon() {
  Scalar h(0, Rational(1, 2), 2);  // sqrt(2)/2
  Scalar r2 = Scalar::root(2);
  SurfaceSpec s;
  s.d = 2;
  s.polygons.push_back({{{0, 0},
                         {1, 0},
                         {1 + h, h},
                         {1 + h, 1 + h},
                         {1, 1 + r2},
                         {0, 1 + r2},
                         {-h, 1 + h},
                         {-h, h}}});
  for (int i = 0; i < 4; ++i) s.gluings.push_back({{0, i}, {0, i + 4}});
  return s;
}

SurfaceSpec lshape(const Scalar& w1, const Scalar& w2, const Scalar& h1, const Scalar& H) {
  if (!(Scalar(0) < w2 && w2 < w1 && Scalar(0) < h1 && h1 < H))
    throw PreconditionError("L-shape needs 0 < w2 < w1 and 0 < h1 < H");
  SurfaceSpec s;
  for (const Scalar* x : {&w1, &w2, &h1, &H}) s.d = join_fields(s.d, field_of(*x));
  s.polygons.push_back({{{0, 0}, {w2, 0}, {w1, 0}, {w1, h1}, {w2, h1}, {w2, H}, {0, H}, {0, h1}}});
  s.gluings = {{{0, 0}, {0, 5}}, {{0, 1}, {0, 3}}, {{0, 2}, {0, 7}}, {{0, 4}, {0, 6}}};
  return s;
}

SurfaceSpec golden_l() {
  Scalar phi(Rational(1, 2), Rational(1, 2), 5);
  return lshape(phi, 1, 1, phi);
}

std::vector<Entry> all() {
  return {
      {"square_torus", square_torus()},
      {"skew_torus", lattice_torus({0, 2}, {Rational(1, 2), 0})},
      {"marked_torus", marked_torus({1, 0}, {0, 1}, Rational(1, 2), Rational(1, 2))},
      {"octagon", regular_octagon()},
      {"lshape", lshape(3, 1, 1, 2)},
      {"lshape_tall", lshape(2, 1, 1, 3)},
      {"golden_l", golden_l()},
  };
}

}  // namespace flatkit::corpus
