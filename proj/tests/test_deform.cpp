#include <gtest/gtest.h>

#include <cmath>

#include "flatkit/corpus.hpp"
#include "flatkit/deform.hpp"
#include "flatkit/errors.hpp"

using namespace flatkit;

namespace {

SaddleConnection find_saddle(const TranslationSurface& M, const Vec2& h) {
  for (const auto& s : enumerate_saddle_connections(M, h.norm_sq())) {
    if (s.holonomy == h) return s;
  }
  throw std::runtime_error("missing saddle connection");
}

// Disjointness audit through the developed patches of each cylinder.
void expect_disjoint_cylinders(const Mesh& mesh, const std::vector<Cylinder>& cyl,
                               const std::string& name) {
  std::vector<std::vector<Patch>> patches;
  for (const auto& c : cyl) {
    patches.push_back(cylinder_patches(mesh, c));
    EXPECT_EQ(patches_area(patches.back()), c.area) << name;
  }
  for (std::size_t i = 0; i < cyl.size(); ++i) {
    for (std::size_t j = i + 1; j < cyl.size(); ++j) {
      EXPECT_FALSE(patches_overlap(patches[i], patches[j])) << name;
    }
  }
}

double angle_between_lines(const Vec2& a, const Vec2& b) {
  double t = std::fabs(std::atan2(a.y.to_double(), a.x.to_double()) -
                       std::atan2(b.y.to_double(), b.x.to_double()));
  t = std::fmod(t, M_PI);
  return std::min(t, M_PI - t);
}

}  // namespace

TEST(Triangulate, CountsOnCorpus) {
  for (const auto& e : corpus::all()) {
    auto M = TranslationSurface::build(e.spec);
    auto t = triangulate(M);
    const std::size_t m = M.total_multiplicity();
    EXPECT_EQ(t.edges.size(), 3 * m) << e.name;
    EXPECT_EQ(t.triangles.size(), 2 * m) << e.name;
    EXPECT_EQ(t.area, M.area()) << e.name;
    EXPECT_TRUE(DisjointnessOracle(M.mesh(), t.edges).pairwise_disjoint()) << e.name;
  }
}

TEST(Triangulate, ExtendsGivenFamily) {
  auto M = TranslationSurface::build(corpus::square_torus());
  auto h = find_saddle(M, {1, 0});
  auto t = triangulate(M, {h});
  EXPECT_TRUE(same_connection(t.edges.front(), h));
  EXPECT_EQ(t.edges.size(), 3u);
  auto d = find_saddle(M, {1, 1});
  auto a = find_saddle(M, {1, -1});
  EXPECT_THROW(triangulate(M, {d, a}), PreconditionError);
}

TEST(Exist1, SquareTorusEmptyFamily) {
  auto M = TranslationSurface::build(corpus::square_torus());
  auto out = exist1_step(M, {});
  ASSERT_EQ(out.kind, Exist1Outcome::kNewSaddle);
  EXPECT_EQ(out.new_saddle->holonomy, Vec2(1, 0));
}

TEST(Exist1, MaximalFamilyGivesTriangles) {
  auto M = TranslationSurface::build(corpus::square_torus());
  std::vector<SaddleConnection> fam{find_saddle(M, {1, 0}), find_saddle(M, {0, 1}),
                                    find_saddle(M, {1, 1})};
  auto out = exist1_step(M, fam);
  ASSERT_EQ(out.kind, Exist1Outcome::kPartition);
  EXPECT_EQ(out.partition.triangles.size(), 2u);
  EXPECT_TRUE(out.partition.cylinders.empty());
  EXPECT_EQ(out.partition.triangle_area, Scalar(1));
}

TEST(Exist1, RejectsLongMember) {
  auto M = TranslationSurface::build(corpus::square_torus());
  EXPECT_THROW(exist1_step(M, {find_saddle(M, {2, 1})}), PreconditionError);
}

TEST(Exist1, OctagonGrowsFamily) {
  auto M = TranslationSurface::build(corpus::regular_octagon());
  const Scalar S = M.area();
  auto tri = triangulate(M);
  std::vector<SaddleConnection> fam;
  for (const auto& s : tri.edges) {
    if (fam.size() < 3 && s.length_sq() <= Scalar(2) * S) fam.push_back(s);
  }
  ASSERT_EQ(fam.size(), 3u);
  auto out = exist1_step(M, fam);
  ASSERT_EQ(out.kind, Exist1Outcome::kNewSaddle);
  EXPECT_LE(out.new_saddle->length_sq(), Scalar(8) * S);
  for (const auto& f : fam) EXPECT_TRUE(disjoint(M.mesh(), f, *out.new_saddle));
}

TEST(Cover, CorpusAreasAndDisjointness) {
  for (const auto& e : corpus::all()) {
    auto M = TranslationSurface::build(e.spec);
    const int m = M.total_multiplicity();
    for (Rational delta : {Rational(1, 2), Rational(1, 4), Rational(1, m + 1)}) {
      auto r = cover_by_cylinders(M, delta);
      Scalar total(0);
      for (const auto& c : r.cylinders) total += c.area;
      EXPECT_EQ(total, r.cylinder_area) << e.name;
      EXPECT_GE(total, Scalar(Rational(1) - delta) * M.area()) << e.name;
      EXPECT_LE(r.saddles_added, 3 * m) << e.name;
      EXPECT_LE(r.exist1_calls, 3 * m + 1) << e.name;
      expect_disjoint_cylinders(M.mesh(), r.cylinders, e.name);
    }
  }
}

TEST(Cover, PaperScheduleOnTorus) {
  auto M = TranslationSurface::build(corpus::square_torus());
  auto r = cover_by_cylinders(M, Rational(1, 2), CoverSchedule::kPaper);
  ASSERT_EQ(r.cylinders.size(), 1u);
  EXPECT_EQ(r.cylinders[0].area, Scalar(1));
  EXPECT_TRUE(r.schedule_bounds_hold);
  auto oct = TranslationSurface::build(corpus::regular_octagon());
  EXPECT_THROW(cover_by_cylinders(oct, Rational(1, 2), CoverSchedule::kPaper), PreconditionError);
  EXPECT_THROW(cover_by_cylinders(M, Rational(0)), PreconditionError);
  EXPECT_THROW(cover_by_cylinders(M, Rational(1)), PreconditionError);
}

TEST(BigCylinder, AreaAtLeastSOverM) {
  for (const auto& e : corpus::all()) {
    auto M = TranslationSurface::build(e.spec);
    auto b = find_big_cylinder(M);
    EXPECT_GE(b.cylinder.area * Scalar(M.total_multiplicity()), M.area()) << e.name;
    if (M.genus() == 1) {
      EXPECT_TRUE(b.torus_path);
      EXPECT_LE(b.cylinder.length_sq(), Scalar(4) * M.area()) << e.name;
    }
  }
}

TEST(BigCylinder, MarkedTorusSplit) {
  // The horizontal leaf through (1/2, 1/2) cuts the unit torus into two
  // bands of area 1/2.
  auto M = TranslationSurface::build(
      corpus::marked_torus({1, 0}, {0, 1}, Rational(1, 2), Rational(1, 2)));
  auto b = find_big_cylinder(M);
  EXPECT_EQ(b.cylinder.area, Scalar(Rational(1, 2)));
  EXPECT_EQ(b.cylinder.length_sq(), Scalar(1));
}

TEST(Shortest, TorusAndOctagon) {
  auto sq = TranslationSurface::build(corpus::square_torus());
  auto a = shortest_periodic_geodesic(sq);
  EXPECT_EQ(a.cylinder.length_sq(), Scalar(1));
  EXPECT_TRUE(a.within_bound);
  auto skew = TranslationSurface::build(corpus::lattice_torus({0, 2}, {Rational(1, 2), 0}));
  EXPECT_EQ(shortest_periodic_geodesic(skew).cylinder.length_sq(), Scalar(Rational(1, 4)));

  // Octagon: saddle connections shorter than the short diagonal are sides;
  // the cylinders in side directions have cores 1 + sqrt2 and 2 + sqrt2.
  auto oct = TranslationSurface::build(corpus::regular_octagon());
  auto r = shortest_periodic_geodesic(oct);
  const Scalar diag_sq(Rational(2), Rational(1), 2);
  EXPECT_EQ(r.cylinder.length_sq(), diag_sq);
  for (const auto& s : enumerate_saddle_connections(oct, diag_sq)) {
    if (s.length_sq() == diag_sq) continue;
    EXPECT_EQ(s.length_sq(), Scalar(1));
    for (const auto& c : decompose_direction(oct, s.holonomy, Scalar(20)).cylinders)
      EXPECT_GT(c.length_sq(), diag_sq);
  }
}

TEST(Density, SquareTorus) {
  auto M = TranslationSurface::build(corpus::square_torus());
  auto h = densest_direction_near(M, {1, 0}, Rational(1, 100));
  EXPECT_EQ(h.cylinder.direction, Vec2(1, 0));
  Vec2 v(1, Rational(8, 5));
  auto r = densest_direction_near(M, v, Rational(1, 100));
  EXPECT_LT(angle_between_lines(v, r.cylinder.direction), 1e-2);
  EXPECT_GE(r.cylinder.area, M.area());
}

TEST(Density, OctagonGrid) {
  auto M = TranslationSurface::build(corpus::regular_octagon());
  for (int i = 0; i < 4; ++i) {
    Vec2 v(Rational(3), Rational(2 * i - 3));
    auto r = densest_direction_near(M, v, Rational(1, 100));
    EXPECT_LT(angle_between_lines(v, r.cylinder.direction), 1e-2);
    EXPECT_GE(r.cylinder.area * Scalar(3), M.area());
  }
}
