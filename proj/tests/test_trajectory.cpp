#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "flatkit/corpus.hpp"
#include "flatkit/errors.hpp"
#include "flatkit/trajectory.hpp"

using namespace flatkit;

namespace {

// Oriented saddle connections of a torus with marked points at basis
// coordinates `marks` (first one the origin), by brute force over the lattice.
std::multiset<std::pair<Rational, Rational>> torus_oracle(
    const std::vector<std::pair<Rational, Rational>>& marks, const Vec2& v1, const Vec2& v2,
    const Scalar& r2, int box) {
  auto frac_is_mark = [&](const Rational& x, const Rational& y) {
    for (const auto& [mx, my] : marks) {
      Rational dx = x - mx, dy = y - my;
      if (dx.get_den() == 1 && dy.get_den() == 1) return true;
    }
    return false;
  };
  std::multiset<std::pair<Rational, Rational>> out;
  for (const auto& [ax, ay] : marks) {
    for (const auto& [bx, by] : marks) {
      for (int i = -box; i <= box; ++i) {
        for (int j = -box; j <= box; ++j) {
          Rational hx = bx - ax + i, hy = by - ay + j;
          if (hx == 0 && hy == 0) continue;
          Vec2 h = Scalar(hx) * v1 + Scalar(hy) * v2;
          if (h.norm_sq() > r2) continue;
          // Interior points a + t*h hit a mark only at t = (k - frac)/h.
          bool clean = true;
          for (int k = -2 * box - 2; k <= 2 * box + 2 && clean; ++k) {
            for (const auto& [mx, my] : marks) {
              if (hx != 0) {
                Rational t = (Rational(k) + mx - ax) / hx;
                if (t > 0 && t < 1 && frac_is_mark(ax + t * hx, ay + t * hy)) clean = false;
              } else {
                Rational t = (Rational(k) + my - ay) / hy;
                if (t > 0 && t < 1 && frac_is_mark(ax + t * hx, ay + t * hy)) clean = false;
              }
            }
          }
          if (clean) out.insert({h.x.rational_part(), h.y.rational_part()});
        }
      }
    }
  }
  return out;
}

std::multiset<std::pair<Rational, Rational>> holonomies(const std::vector<SaddleConnection>& v) {
  std::multiset<std::pair<Rational, Rational>> out;
  for (const auto& s : v) out.insert({s.holonomy.x.rational_part(), s.holonomy.y.rational_part()});
  return out;
}

}  // namespace

TEST(Saddles, SquareTorusSmallCounts) {
  auto M = TranslationSurface::build(corpus::square_torus());
  EXPECT_EQ(enumerate_saddle_connections(M, Scalar(1)).size(), 4u);
  EXPECT_EQ(enumerate_saddle_connections(M, Scalar(Rational(529, 100))).size(), 16u);
  EXPECT_TRUE(enumerate_saddle_connections(M, Scalar(Rational(99, 100))).empty());
}

TEST(Saddles, LatticeTorusMatchesPrimitiveVectors) {
  struct Case {
    Vec2 v1, v2;
  };
  for (const auto& c : {Case{{1, 0}, {0, 1}}, Case{{0, 2}, {Rational(1, 2), 0}},
                        Case{{3, 1}, {1, 1}}, Case{{1, 0}, {Rational(1, 3), Rational(5, 4)}}}) {
    auto M = TranslationSurface::build(corpus::lattice_torus(c.v1, c.v2));
    Scalar r2(30);
    auto got = enumerate_saddle_connections(M, r2);
    auto want = torus_oracle({{0, 0}}, c.v1, c.v2, r2, 40);
    EXPECT_EQ(holonomies(got), want);
  }
}

TEST(Saddles, MarkedTorusMatchesOracle) {
  Vec2 v1(1, 0), v2(Rational(1, 4), 1);
  for (auto [a, b] : {std::pair{Rational(1, 2), Rational(1, 2)}, {Rational(1, 3), Rational(2, 5)}}) {
    auto M = TranslationSurface::build(corpus::marked_torus(v1, v2, a, b));
    Scalar r2(20);
    auto got = enumerate_saddle_connections(M, r2);
    auto want = torus_oracle({{0, 0}, {a, b}}, v1, v2, r2, 30);
    EXPECT_EQ(holonomies(got), want);
  }
}

TEST(Saddles, ClosedUnderReversalAndSorted) {
  for (const auto& e : corpus::all()) {
    auto M = TranslationSurface::build(e.spec);
    auto all = enumerate_saddle_connections(M, Scalar(12));
    ASSERT_FALSE(all.empty()) << e.name;
    for (std::size_t i = 0; i + 1 < all.size(); ++i) {
      EXPECT_FALSE(canonical_less(all[i + 1], all[i])) << e.name;
    }
    for (const auto& s : all) {
      auto r = s.reversed();
      bool found = std::any_of(all.begin(), all.end(), [&](const auto& t) { return same_connection(t, r); });
      EXPECT_TRUE(found) << e.name;
      auto w = walk_connection(M.mesh(), s);
      EXPECT_EQ(w.status, WalkResult::kAtVertex);
      EXPECT_EQ(M.mesh().tri(w.vertex.tri).vertex[w.vertex.side], s.end);
    }
  }
}

TEST(Saddles, MonotoneInLength) {
  for (const auto& e : corpus::all()) {
    auto M = TranslationSurface::build(e.spec);
    std::size_t prev = 0;
    for (int r2 : {1, 3, 6, 10, 20}) {
      auto n = enumerate_saddle_connections(M, Scalar(r2)).size();
      EXPECT_GE(n, prev) << e.name;
      prev = n;
    }
  }
}

TEST(Saddles, DeterministicAcrossThreadCounts) {
  auto M = TranslationSurface::build(corpus::regular_octagon());
  auto a = enumerate_saddle_connections(M, Scalar(40), 1);
  auto b = enumerate_saddle_connections(M, Scalar(40), 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(same_connection(a[i], b[i]));
    EXPECT_EQ(a[i].end, b[i].end);
    EXPECT_EQ(a[i].end_sector(), b[i].end_sector());
  }
}

TEST(Saddles, SectorsStayInRange) {
  for (const auto& e : corpus::all()) {
    auto M = TranslationSurface::build(e.spec);
    for (const auto& s : enumerate_saddle_connections(M, Scalar(15))) {
      EXPECT_GE(s.start_sector(), 0);
      EXPECT_LT(s.start_sector(), M.mesh().multiplicity[s.start]);
      EXPECT_GE(s.end_sector(), 0);
      EXPECT_LT(s.end_sector(), M.mesh().multiplicity[s.end]);
    }
  }
}

TEST(Saddles, ConnectionAlongFindsEnumerated) {
  auto M = TranslationSurface::build(corpus::golden_l());
  for (const auto& s : enumerate_saddle_connections(M, Scalar(8))) {
    auto c = connection_along(M.mesh(), s.start, s.start_key, Scalar(8));
    ASSERT_TRUE(c.has_value());
    EXPECT_TRUE(same_connection(*c, s));
    EXPECT_TRUE(same_key(c->end_key, s.end_key));
  }
}

TEST(Saddles, ShortestOnCorpus) {
  auto sq = TranslationSurface::build(corpus::square_torus());
  EXPECT_EQ(shortest_saddle_connection(sq).length_sq(), Scalar(1));
  auto oct = TranslationSurface::build(corpus::regular_octagon());
  EXPECT_EQ(shortest_saddle_connection(oct).length_sq(), Scalar(1));
  auto skew = TranslationSurface::build(corpus::lattice_torus({0, 2}, {Rational(1, 2), 0}));
  EXPECT_EQ(shortest_saddle_connection(skew).length_sq(), Scalar(Rational(1, 4)));
}

TEST(Disjoint, SquareTorusBasis) {
  auto M = TranslationSurface::build(corpus::square_torus());
  auto all = enumerate_saddle_connections(M, Scalar(2));
  auto find = [&](int x, int y) {
    for (const auto& s : all) {
      if (s.holonomy == Vec2(x, y)) return s;
    }
    throw std::runtime_error("missing");
  };
  EXPECT_TRUE(disjoint(M.mesh(), find(1, 0), find(0, 1)));
  EXPECT_TRUE(disjoint(M.mesh(), find(1, 0), find(1, 1)));
  EXPECT_FALSE(disjoint(M.mesh(), find(1, 1), find(1, -1)));
  EXPECT_FALSE(disjoint(M.mesh(), find(1, 0), find(-1, 0)));
  EXPECT_FALSE(disjoint(M.mesh(), find(1, 0), find(1, 0)));
  DisjointnessOracle tri(M.mesh(), {find(1, 0), find(0, 1), find(1, 1)});
  EXPECT_TRUE(tri.pairwise_disjoint());
  EXPECT_FALSE(tri.disjoint_from_all(find(1, -1)));
}

TEST(TraceRay, SquareTorusExamples) {
  auto M = TranslationSurface::build(corpus::square_torus());
  SurfacePoint x{0, {Rational(1, 2), Rational(1, 3)}};
  auto t = trace_ray(M, x, {1, 0}, Scalar(100));
  EXPECT_EQ(t.status, Trajectory::kReturnedToStart);
  EXPECT_EQ(t.displacement, Vec2(1, 0));
  auto u = trace_ray(M, x, {2, 3}, Scalar(100));
  EXPECT_EQ(u.status, Trajectory::kReturnedToStart);
  EXPECT_EQ(u.displacement, Vec2(2, 3));
  auto w = trace_ray(M, x, {1, 0}, Scalar(Rational(1, 4)));
  EXPECT_EQ(w.status, Trajectory::kReachedLengthCap);
  auto v = trace_ray(M, {0, {0, 0}}, {1, 1}, Scalar(100));
  EXPECT_EQ(v.status, Trajectory::kHitSingularity);
  EXPECT_EQ(v.displacement, Vec2(1, 1));
  EXPECT_EQ(to_string(v.status), "hit-singularity");
  EXPECT_THROW(trace_ray(M, {0, {0, 0}}, {-1, 1}, Scalar(4)), PreconditionError);
  EXPECT_THROW(trace_ray(M, {0, {2, 0}}, {1, 1}, Scalar(4)), PreconditionError);
}

TEST(TraceRay, AgreesWithSaddleEnumeration) {
  // Saddle connections from polygon vertices, traced in polygon coordinates.
  for (const auto& e : corpus::all()) {
    auto M = TranslationSurface::build(e.spec);
    const auto& V = M.spec().polygons[0].vertices;
    const int n = static_cast<int>(V.size());
    Vec2 out_e = V[1] - V[0], in_e = V[0] - V[n - 1];
    auto all = enumerate_saddle_connections(M, Scalar(10));
    int checked = 0;
    for (const auto& s : all) {
      if (s.start != M.vertex_class(0, 0)) continue;
      const Vec2& h = s.holonomy;
      bool inside = same_direction(h, out_e) ||
                    (angle_less(out_e, h, -in_e) && !same_direction(h, -in_e));
      if (!inside) continue;
      // Only the sheet of this polygon corner.
      int sheet = M.corner_sheet(0, 0);
      if (angle_less(M.mesh().ref[s.start], h, out_e)) sheet = (sheet + 1) % M.mesh().multiplicity[s.start];
      if (sheet != s.start_sector()) continue;
      auto t = trace_ray(M, {0, V[0]}, h, Scalar(10));
      EXPECT_EQ(t.status, Trajectory::kHitSingularity) << e.name;
      EXPECT_EQ(t.displacement, h) << e.name;
      ++checked;
    }
    EXPECT_GT(checked, 0) << e.name;
  }
}

TEST(Anchor, LocatesPolygonPoints) {
  for (const auto& e : corpus::all()) {
    auto M = TranslationSurface::build(e.spec);
    const auto& V = M.spec().polygons[0].vertices;
    auto ear = ear_clip(V).front();
    Vec2 c = (V[ear[0]] + V[ear[1]] + V[ear[2]]) * Scalar(Rational(1, 3));
    auto a = anchor(M, {0, c});
    auto p = locate(M.mesh(), a);
    EXPECT_GE(p.tri, 0) << e.name;
  }
}
