#include <gtest/gtest.h>

#include <regex>
#include <set>

#include "flatkit/corpus.hpp"
#include "flatkit/render.hpp"

using namespace flatkit;

namespace {

int count(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::set<std::string> edge_colors(const std::string& svg) {
  std::set<std::string> out;
  std::regex re("class=\"edge\"[^>]*stroke=\"(#[0-9a-f]{6})\"");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it)
    out.insert((*it)[1]);
  return out;
}

}  // namespace

TEST(Render, SquareTorusPlain) {
  auto M = TranslationSurface::build(corpus::square_torus());
  auto svg = render_svg(M);
  EXPECT_EQ(count(svg, "class=\"face\""), 1);
  EXPECT_EQ(edge_colors(svg).size(), 2u);
  EXPECT_EQ(count(svg, "class=\"edge\""), 4);
  EXPECT_EQ(count(svg, "class=\"cylinder\""), 0);
  EXPECT_EQ(svg, render_svg(M));
}

TEST(Render, OctagonHorizontalBands) {
  auto M = TranslationSurface::build(corpus::regular_octagon());
  auto dec = decompose_direction(M, {1, 0}, Scalar(20));
  ASSERT_EQ(dec.cylinders.size(), 2u);
  auto svg = render_svg(M, {dec.cylinders});
  EXPECT_EQ(count(svg, "class=\"cylinder\""), 2);
  EXPECT_EQ(count(svg, "<text"), 2);
  EXPECT_EQ(edge_colors(svg).size(), 4u);
}

TEST(Render, PiecesTileEachCylinder) {
  for (const auto& spec : {corpus::regular_octagon(), corpus::golden_l(),
                           corpus::marked_torus({1, 0}, {Rational(1, 4), 1}, Rational(1, 2), Rational(1, 3))}) {
    auto M = TranslationSurface::build(spec);
    auto cyl = enumerate_cylinders(M, Scalar(8));
    ASSERT_FALSE(cyl.empty());
    for (const auto& c : cyl) {
      Scalar total(0);
      for (const auto& p : cylinder_in_polygons(M, c)) {
        ASSERT_GE(p.polygon, 0);
        total += polygon_area(p.vertices);
      }
      EXPECT_EQ(total, c.area);
    }
  }
}

TEST(Render, FullyPeriodicDirectionCoversSurface) {
  auto M = TranslationSurface::build(corpus::golden_l());
  auto dec = decompose_direction(M, {1, 1}, Scalar(40));
  ASSERT_EQ(dec.residual, DirectionalDecomposition::kFullyPeriodic);
  Scalar total(0);
  for (const auto& c : dec.cylinders)
    for (const auto& p : cylinder_in_polygons(M, c)) total += polygon_area(p.vertices);
  EXPECT_EQ(total, M.area());
}
