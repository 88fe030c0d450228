#include <gtest/gtest.h>

#include <numeric>

#include "flatkit/corpus.hpp"
#include "flatkit/cylinder.hpp"
#include "flatkit/errors.hpp"

using namespace flatkit;

namespace {

struct TorusCounts {
  long cylinders = 0;
  Scalar area{0};
};

// Cylinders of a torus with basis v1, v2 and an optional marked point at
// basis coordinates (alpha, beta): every primitive lattice vector w in the
// upper half plane gives one cylinder, or two when the marked point is off
// the lattice lines parallel to w.
TorusCounts torus_cylinder_oracle(const Vec2& v1, const Vec2& v2, const Scalar& t_sq, int box,
                                  const Rational* alpha = nullptr, const Rational* beta = nullptr) {
  TorusCounts out;
  Scalar S = cross(v1, v2);
  if (S.sign() < 0) S = -S;
  for (int i = -box; i <= box; ++i) {
    for (int j = -box; j <= box; ++j) {
      if (std::gcd(i, j) != 1) continue;
      Vec2 w = Scalar(i) * v1 + Scalar(j) * v2;
      if (!in_upper_half(w) || w.norm_sq() > t_sq) continue;
      int pieces = 1;
      if (alpha) {
        Rational k = Rational(i) * *beta - Rational(j) * *alpha;
        if (k.get_den() != 1) pieces = 2;
      }
      out.cylinders += pieces;
      out.area += S;
    }
  }
  return out;
}

}  // namespace

TEST(Decompose, SquareTorus) {
  auto M = TranslationSurface::build(corpus::square_torus());
  auto h = decompose_direction(M, {1, 0}, Scalar(4));
  ASSERT_EQ(h.cylinders.size(), 1u);
  EXPECT_EQ(h.cylinders[0].core, Vec2(1, 0));
  EXPECT_EQ(h.cylinders[0].area, Scalar(1));
  EXPECT_EQ(h.residual, DirectionalDecomposition::kFullyPeriodic);
  auto d = decompose_direction(M, {-2, -2}, Scalar(4));
  ASSERT_EQ(d.cylinders.size(), 1u);
  EXPECT_EQ(d.cylinders[0].length_sq(), Scalar(2));
  EXPECT_EQ(d.cylinders[0].area, Scalar(1));
  EXPECT_EQ(d.cylinders[0].transversal.norm_sq(), Scalar(Rational(1, 2)));
  auto far = decompose_direction(M, {1, 5}, Scalar(4));
  EXPECT_TRUE(far.cylinders.empty());
  EXPECT_EQ(far.residual, DirectionalDecomposition::kUndeterminedAtCap);
}

TEST(Decompose, OctagonHorizontal) {
  auto M = TranslationSurface::build(corpus::regular_octagon());
  auto h = decompose_direction(M, {1, 0}, Scalar(30));
  ASSERT_EQ(h.cylinders.size(), 2u);
  EXPECT_EQ(h.residual, DirectionalDecomposition::kFullyPeriodic);
  std::vector<Scalar> lengths, areas;
  for (const auto& c : h.cylinders) {
    lengths.push_back(c.length_sq());
    areas.push_back(c.area);
    EXPECT_EQ(c.bottom.empty(), false);
    EXPECT_EQ(c.top.empty(), false);
  }
  // Middle rectangle: circumference 1 + sqrt2, height 1. Triangular caps:
  // circumference 2 + sqrt2, height sqrt2/2.
  Scalar r2(0, 1, 2);
  EXPECT_EQ(lengths[0], (Scalar(1) + r2) * (Scalar(1) + r2));
  EXPECT_EQ(lengths[1], (Scalar(2) + r2) * (Scalar(2) + r2));
  EXPECT_EQ(areas[0], Scalar(1) + r2);
  EXPECT_EQ(areas[1], Scalar(1) + r2);
}

TEST(Decompose, BoundariesAreParallelAndSumToCore) {
  for (const auto& e : corpus::all()) {
    auto M = TranslationSurface::build(e.spec);
    for (const auto& c : enumerate_cylinders(M, Scalar(20))) {
      Vec2 b, t;
      for (const auto& s : c.bottom) {
        EXPECT_TRUE(cross(s.holonomy, c.core).is_zero());
        EXPECT_GT(dot(s.holonomy, c.core).sign(), 0);
        b += s.holonomy;
      }
      for (const auto& s : c.top) t += s.holonomy;
      EXPECT_EQ(b, c.core) << e.name;
      EXPECT_EQ(t, -c.core) << e.name;
      EXPECT_GT(c.area.sign(), 0);
      EXPECT_LE(c.area, M.area());
      EXPECT_TRUE(dot(c.core, c.transversal).is_zero());
    }
  }
}

TEST(Enumerate, SquareTorusCounts) {
  auto M = TranslationSurface::build(corpus::square_torus());
  EXPECT_EQ(enumerate_cylinders(M, Scalar(1)).size(), 2u);
  EXPECT_EQ(enumerate_cylinders(M, Scalar(Rational(529, 100))).size(), 8u);
}

TEST(Enumerate, TorusOracle) {
  for (auto [v1, v2] : {std::pair<Vec2, Vec2>{{1, 0}, {0, 1}},
                        {{0, 2}, {Rational(1, 2), 0}},
                        {{3, 1}, {1, 1}},
                        {{1, 0}, {Rational(2, 7), Rational(3, 2)}}}) {
    auto M = TranslationSurface::build(corpus::lattice_torus(v1, v2));
    Scalar t_sq(40);
    auto cyl = enumerate_cylinders(M, t_sq);
    auto want = torus_cylinder_oracle(v1, v2, t_sq, 60);
    EXPECT_EQ(static_cast<long>(cyl.size()), want.cylinders);
    for (const auto& c : cyl) EXPECT_EQ(c.area, M.area());
  }
}

TEST(Enumerate, MarkedTorusSplits) {
  Vec2 v1(1, 0), v2(0, 1);
  for (auto [a, b] : {std::pair{Rational(1, 2), Rational(1, 2)}, {Rational(1, 3), Rational(1, 5)}}) {
    auto M = TranslationSurface::build(corpus::marked_torus(v1, v2, a, b));
    Scalar t_sq(30);
    auto cyl = enumerate_cylinders(M, t_sq);
    auto want = torus_cylinder_oracle(v1, v2, t_sq, 40, &a, &b);
    EXPECT_EQ(static_cast<long>(cyl.size()), want.cylinders);
    Scalar total(0);
    for (const auto& c : cyl) total += c.area;
    EXPECT_EQ(total, want.area);
  }
  // Horizontal direction with the point at (1/2, 1/2): two bands of height 1/2.
  auto M = TranslationSurface::build(corpus::marked_torus(v1, v2, Rational(1, 2), Rational(1, 2)));
  auto h = decompose_direction(M, {1, 0}, Scalar(4));
  ASSERT_EQ(h.cylinders.size(), 2u);
  EXPECT_EQ(h.cylinders[0].area, Scalar(Rational(1, 2)));
  EXPECT_EQ(h.cylinders[1].area, Scalar(Rational(1, 2)));
}

TEST(Enumerate, PatchesTileEachCylinder) {
  for (const auto& e : corpus::all()) {
    auto M = TranslationSurface::build(e.spec);
    auto cyl = enumerate_cylinders(M, Scalar(12));
    for (const auto& c : cyl) {
      auto ps = cylinder_patches(M.mesh(), c);
      EXPECT_EQ(patches_area(ps), c.area) << e.name;
    }
  }
}

TEST(Enumerate, ParallelCylindersAreDisjoint) {
  for (const auto& e : corpus::all()) {
    auto M = TranslationSurface::build(e.spec);
    auto cyl = enumerate_cylinders(M, Scalar(12));
    for (std::size_t i = 0; i < cyl.size(); ++i) {
      for (std::size_t j = i + 1; j < cyl.size(); ++j) {
        if (!(cyl[i].direction == cyl[j].direction)) continue;
        EXPECT_FALSE(patches_overlap(cylinder_patches(M.mesh(), cyl[i]),
                                     cylinder_patches(M.mesh(), cyl[j])))
            << e.name;
      }
    }
  }
}

TEST(Enumerate, EquivariantUnderShear) {
  auto M = TranslationSurface::build(corpus::lshape(3, 1, 1, 2));
  Mat2 a{1, 1, 0, 1};
  auto aM = M.apply(a);
  auto c1 = enumerate_cylinders(M, Scalar(40));
  auto c2 = enumerate_cylinders(aM, Scalar(200));
  long mapped = 0;
  for (const auto& c : c1) {
    Vec2 img = a(c.core);
    bool found = std::any_of(c2.begin(), c2.end(), [&](const Cylinder& d) {
      return d.core == img && d.area == c.area;
    });
    EXPECT_TRUE(found);
    mapped += found;
  }
  EXPECT_GT(mapped, 0);
}

TEST(Enumerate, DeterministicAcrossThreads) {
  auto M = TranslationSurface::build(corpus::golden_l());
  auto a = enumerate_cylinders(M, Scalar(30), 1);
  auto b = enumerate_cylinders(M, Scalar(30), 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(same_cylinder(a[i], b[i]));
}

TEST(Growth, SquareTorusRow) {
  auto M = TranslationSurface::build(corpus::square_torus());
  auto g = growth_table(M, {Scalar(1), Scalar(4), Scalar(9)});
  ASSERT_EQ(g.rows.size(), 3u);
  EXPECT_EQ(g.rows[0].n0, 4);
  EXPECT_EQ(g.rows[0].n1, 2);
  EXPECT_EQ(g.rows[0].n2, Scalar(2));
  EXPECT_TRUE(g.rows[0].sigma.contains(2));
  EXPECT_EQ(g.rows[1].n1, 4);
  EXPECT_EQ(g.rows[2].n1, 8);
  for (const auto& r : g.rows) EXPECT_EQ(r.n2, Scalar(r.n1));
}

TEST(Growth, ChainOnCorpus) {
  for (const auto& e : corpus::all()) {
    auto M = TranslationSurface::build(e.spec);
    auto g = growth_table(M, {Scalar(2), Scalar(8), Scalar(20)});
    for (std::size_t i = 0; i < g.rows.size(); ++i) {
      const auto& r = g.rows[i];
      EXPECT_LE(r.n1, r.n0) << e.name;
      EXPECT_LE(r.n2_over_s, Scalar(r.n1)) << e.name;
      if (i > 0) {
        EXPECT_GE(r.n0, g.rows[i - 1].n0);
        EXPECT_GE(r.n1, g.rows[i - 1].n1);
        EXPECT_GE(r.n2, g.rows[i - 1].n2);
      }
    }
  }
}

TEST(CountThroughPoint, TorusEqualsN1) {
  auto M = TranslationSurface::build(corpus::square_torus());
  SurfacePoint x{0, {Rational(1, 3), Rational(2, 7)}};
  for (int t : {1, 5, 20}) {
    EXPECT_EQ(count_through_point(M, x, Scalar(t)),
              static_cast<long>(enumerate_cylinders(M, Scalar(t)).size()));
  }
}

TEST(CountThroughPoint, BoundaryExcluded) {
  auto M = TranslationSurface::build(corpus::marked_torus({1, 0}, {0, 1}, Rational(1, 2), Rational(1, 2)));
  // On the horizontal saddle through the marked point: only non-horizontal
  // cylinders can contain it.
  const auto& P = M.spec().polygons;
  (void)P;
  auto cyl = enumerate_cylinders(M, Scalar(1));
  ASSERT_EQ(cyl.size(), 4u);
  auto oct = TranslationSurface::build(corpus::regular_octagon());
  SurfacePoint y{0, {Rational(1, 2), Rational(1, 2)}};
  EXPECT_LE(count_through_point(oct, y, Scalar(20)),
            static_cast<long>(enumerate_cylinders(oct, Scalar(20)).size()));
}

TEST(Bounds, SquareTorus) {
  auto M = TranslationSurface::build(corpus::square_torus());
  auto r = check_bounds(M, Scalar(2500));
  EXPECT_TRUE(r.all_pass());
  bool skipped = false;
  for (const auto& c : r.checks) {
    if (c.name == "main-lower") {
      EXPECT_FALSE(c.applicable);
      EXPECT_EQ(c.note, "below threshold — skipped");
      skipped = true;
    }
    if (c.name == "proof-lower") EXPECT_TRUE(c.applicable);
  }
  EXPECT_TRUE(skipped);
}

TEST(Bounds, Constants) {
  EXPECT_EQ(saddle_bound_constant(1), Integer(384) * 384 * 384 * 384 * 384 * 384);
  Integer h2;
  mpz_ui_pow_ui(h2.get_mpz_t(), 800, 256);
  EXPECT_EQ(saddle_bound_constant(2), h2);
  EXPECT_EQ(sigma_bound_constant(1), 7);
  EXPECT_EQ(lower_threshold_factor(2), 2);
}

TEST(Bounds, OctagonAtThreeS) {
  auto M = TranslationSurface::build(corpus::regular_octagon());
  Scalar s_sq = shortest_saddle_connection(M).length_sq();
  auto r = check_bounds(M, Scalar(9) * s_sq);
  EXPECT_TRUE(r.all_pass());
}
