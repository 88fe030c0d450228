#include <gtest/gtest.h>

#include <set>

#include "flatkit/corpus.hpp"
#include "flatkit/errors.hpp"
#include "flatkit/moduli.hpp"

using namespace flatkit;

namespace {

// Shortest nonzero lattice vector by search over a box of coefficients.
Scalar brute_shortest_sq(const Vec2& v1, const Vec2& v2, int box) {
  std::optional<Scalar> best;
  for (int i = -box; i <= box; ++i) {
    for (int j = -box; j <= box; ++j) {
      if (i == 0 && j == 0) continue;
      Scalar n = (Scalar(i) * v1 + Scalar(j) * v2).norm_sq();
      if (!best || n < *best) best = n;
    }
  }
  return *best;
}

Vec2 edge_of(const SurfaceSpec& spec, int polygon, int side) {
  const auto& V = spec.polygons[polygon].vertices;
  return V[(side + 1) % V.size()] - V[side];
}

}  // namespace

TEST(TorusNormalForm, Examples) {
  auto a = torus_normal_form({0, 1}, {1, 0});
  EXPECT_EQ(a.s_sq, Scalar(1));
  EXPECT_EQ(a.area, Scalar(1));
  EXPECT_EQ(a.y_s, Scalar(0));
  auto b = torus_normal_form({0, 2}, {Rational(1, 2), 0});
  EXPECT_EQ(b.s_sq, Scalar(Rational(1, 4)));
  EXPECT_EQ(b.area, Scalar(1));
  EXPECT_EQ(b.y_s, Scalar(0));
  EXPECT_TRUE(b.s.contains(Rational(1, 2)));
  auto c = torus_normal_form({1, 1}, {1, 0});
  EXPECT_EQ(c.s_sq, Scalar(1));
  EXPECT_EQ(c.area, Scalar(1));
  EXPECT_GE(c.y_s.sign(), 0);
  EXPECT_LT(c.y_s, c.s_sq);
  EXPECT_THROW(torus_normal_form({1, 2}, {2, 4}), PreconditionError);
}

TEST(TorusNormalForm, MatchesSearchOracle) {
  std::vector<std::pair<Vec2, Vec2>> cases = {
      {{3, 1}, {1, 1}},
      {{7, 2}, {3, 1}},
      {{1, 0}, {Rational(1, 3), Rational(5, 4)}},
      {{Rational(5, 2), Rational(1, 7)}, {-2, 3}},
      {{Scalar(0, 1, 2), 1}, {1, Scalar(1, 1, 2)}},
  };
  for (const auto& [v1, v2] : cases) {
    auto nf = torus_normal_form(v1, v2);
    EXPECT_EQ(nf.s_sq, brute_shortest_sq(v1, v2, 12));
    EXPECT_EQ(nf.area, cross(v1, v2).abs());
    EXPECT_EQ(cross(nf.shortest, nf.second).abs(), nf.area);
    EXPECT_GE(nf.y_s.sign(), 0);
    EXPECT_LT(nf.y_s, nf.s_sq);
    EXPECT_GE(nf.second.norm_sq() - nf.y_s * nf.y_s / nf.s_sq, Scalar(0));
  }
}

TEST(Periods, RankIsTwoPPlusNMinusOne) {
  struct Case {
    SurfaceSpec spec;
    std::size_t n;
  };
  std::vector<Case> cases = {
      {corpus::square_torus(), 2},
      {corpus::regular_octagon(), 4},
      {corpus::golden_l(), 4},
      {corpus::lshape(Scalar(2), Scalar(1), Scalar(1), Scalar(2)), 4},
      {corpus::marked_torus({1, 0}, {0, 1}, Rational(1, 2), Rational(1, 3)), 3},
  };
  for (const auto& c : cases) {
    auto M = TranslationSurface::build(c.spec);
    auto t = triangulate(M);
    auto basis = homology_basis(t);
    EXPECT_EQ(basis.size(), c.n);
    auto P = period_coordinates(M, t, basis);
    EXPECT_EQ(P.holonomies.size(), c.n);
    for (const auto& tri : t.triangles) EXPECT_TRUE(holonomy(t, {tri[0], tri[1], tri[2]}).is_zero());
  }
}

TEST(Periods, RejectsBadBasis) {
  auto M = TranslationSurface::build(corpus::regular_octagon());
  auto t = triangulate(M);
  EXPECT_THROW(period_coordinates(M, t, {0, 1}), PreconditionError);
  // Three sides of one triangle and one more edge are dependent.
  const auto& tri = t.triangles[0];
  std::set<int> ids = {tri[0] / 2, tri[1] / 2, tri[2] / 2};
  ASSERT_EQ(ids.size(), 3u);
  int extra = 0;
  while (ids.count(extra)) ++extra;
  std::vector<int> bad(ids.begin(), ids.end());
  bad.push_back(extra);
  EXPECT_THROW(period_coordinates(M, t, bad), PreconditionError);
}

TEST(Holonomy, PathsAndHomotopy) {
  auto M = TranslationSurface::build(corpus::square_torus());
  auto t = triangulate(M);
  int horizontal = -1;
  for (int i = 0; i < static_cast<int>(t.edges.size()); ++i) {
    if (t.edges[i].holonomy == Vec2(1, 0)) horizontal = 2 * i;
    if (t.edges[i].holonomy == Vec2(-1, 0)) horizontal = 2 * i + 1;
  }
  ASSERT_GE(horizontal, 0);
  EXPECT_EQ(holonomy(t, {horizontal}), Vec2(1, 0));

  auto O = TranslationSurface::build(corpus::regular_octagon());
  auto u = triangulate(O);
  for (const auto& tri : u.triangles) {
    // Two sides against the reversed third: homotopic across the triangle.
    EXPECT_EQ(holonomy(u, {tri[0], tri[1]}), holonomy(u, {tri[2] ^ 1}));
  }
  // Marked torus: a path through the two distinct points must be consecutive.
  auto P = TranslationSurface::build(corpus::marked_torus({1, 0}, {0, 1}, Rational(1, 2), Rational(1, 3)));
  auto w = triangulate(P);
  int a = -1, b = -1;
  for (int h = 0; h < 2 * static_cast<int>(w.edges.size()) && b < 0; ++h) {
    const auto& e = w.edges[h / 2];
    int start = h % 2 == 0 ? e.start : e.end;
    int end = h % 2 == 0 ? e.end : e.start;
    if (start == end) continue;
    if (a < 0) {
      a = h;
    } else if (start == (a % 2 == 0 ? w.edges[a / 2].start : w.edges[a / 2].end)) {
      b = h;
    }
  }
  ASSERT_GE(b, 0);
  EXPECT_THROW(holonomy(w, {a, b}), PreconditionError);
}

TEST(Periods, RebuildRoundTrip) {
  for (const auto& spec : {corpus::regular_octagon(), corpus::golden_l(),
                           corpus::marked_torus({1, 0}, {Rational(1, 4), 1}, Rational(1, 2), Rational(1, 3))}) {
    auto M = TranslationSurface::build(spec);
    auto t = triangulate(M);
    auto P = period_coordinates(M, t, homology_basis(t));
    auto same = rebuild(M, t, P);
    EXPECT_EQ(same.area(), M.area());
    EXPECT_EQ(same.genus(), M.genus());
    EXPECT_EQ(same.num_singularities(), M.num_singularities());

    auto Q = P;
    Q.holonomies[0] += Vec2(Rational(1, 1000), Rational(-1, 2000));
    auto near = rebuild(M, t, Q);
    EXPECT_EQ(near.genus(), M.genus());
    EXPECT_EQ(near.total_multiplicity(), M.total_multiplicity());
    for (std::size_t i = 0; i < Q.basis.size(); ++i) {
      int h = 2 * Q.basis[i];
      for (int k = 0; k < static_cast<int>(t.triangles.size()); ++k) {
        for (int j = 0; j < 3; ++j) {
          if (t.triangles[k][j] == h) EXPECT_EQ(edge_of(near.spec(), k, j), Q.holonomies[i]);
          if (t.triangles[k][j] == (h ^ 1)) EXPECT_EQ(edge_of(near.spec(), k, j), -Q.holonomies[i]);
        }
      }
    }
    auto far = P;
    far.holonomies[0] = far.holonomies[0] * Scalar(-3);
    EXPECT_THROW(rebuild(M, t, far), ValidationError);
  }
}

TEST(Families, DeterministicAreaOneSamples) {
  for (auto kind : {SurfaceFamily::kTorus, SurfaceFamily::kMarkedTorus, SurfaceFamily::kLShape}) {
    SurfaceFamily F{kind};
    auto a = sample_family(F, 12, 7);
    auto b = sample_family(F, 12, 7);
    auto c = sample_family(F, 12, 8);
    ASSERT_EQ(a.size(), 12u);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].params, b[i].params);
      differs = differs || a[i].params != c[i].params;
      auto M = TranslationSurface::build(a[i].spec);
      EXPECT_EQ(M.area(), Scalar(1)) << to_string(kind);
      if (kind == SurfaceFamily::kLShape) {
        EXPECT_EQ(M.genus(), 2);
        EXPECT_EQ(M.num_singularities(), 1);
      } else {
        EXPECT_EQ(M.genus(), 1);
        EXPECT_EQ(M.num_singularities(), kind == SurfaceFamily::kTorus ? 1 : 2);
      }
    }
    EXPECT_TRUE(differs);
    EXPECT_EQ(family_kind(to_string(kind)), kind);
  }
  EXPECT_THROW(family_kind("sphere"), PreconditionError);
}

TEST(Constants, TorusRatioIsOne) {
  // Every cylinder of a torus fills it, so N2 = N1.
  auto est = estimate_constants({SurfaceFamily::kTorus}, Scalar(16), 6, 3);
  EXPECT_EQ(est.ratio, Rational(1));
  EXPECT_GT(est.c1, 0);
  for (const auto& c : est.per_sample) {
    EXPECT_TRUE(c.within_upper_bound);
    EXPECT_EQ(c.n2, Scalar(c.n1));
  }
}

TEST(Constants, MarkedTorusSmallRun) {
  SurfaceFamily F{SurfaceFamily::kMarkedTorus};
  auto a = estimate_constants(F, Scalar(16), 6, 11, 1);
  auto b = estimate_constants(F, Scalar(16), 6, 11, 3);
  EXPECT_EQ(a.c1, b.c1);
  EXPECT_EQ(a.c2, b.c2);
  EXPECT_GT(a.ratio, 0);
  EXPECT_LT(a.ratio, 1);
  EXPECT_GE(a.c1, a.c2);
  EXPECT_THROW(estimate_constants(F, Scalar(0, 1, 2), 2, 1), PreconditionError);
}
