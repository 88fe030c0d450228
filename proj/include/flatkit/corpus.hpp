#pragma once

// Standard example surfaces.

#include <string>
#include <vector>

#include "flatkit/surface.hpp"

namespace flatkit::corpus {

/// Unit square with opposite sides glued.
SurfaceSpec square_torus();

/// Parallelogram spanned by v1, v2 with opposite sides glued; the basis is
/// reordered to be positively oriented.
SurfaceSpec lattice_torus(const Vec2& v1, const Vec2& v2);

/// The same torus with an extra marked point at p = alpha*v1 + beta*v2,
/// 0 < alpha, beta < 1, built from four triangles.
SurfaceSpec marked_torus(const Vec2& v1, const Vec2& v2, const Rational& alpha,
                         const Rational& beta);

/// Regular octagon with unit sides, opposite sides glued (d = 2).
SurfaceSpec regular_octagon();

/// L-shaped table: a w1 x h1 base with a w2 x (H - h1) column on its left,
/// w2 < w1, h1 < H. Lies in H(2).
SurfaceSpec lshape(const Scalar& w1, const Scalar& w2, const Scalar& h1, const Scalar& H);

/// The golden L (w1 = phi, w2 = 1, h1 = 1, H = phi) over Q(sqrt 5).
SurfaceSpec golden_l();

struct Entry {
  std::string name;
  SurfaceSpec spec;
};

/// The fixed test corpus shipped with the tool.
std::vector<Entry> all();

}  // namespace flatkit::corpus
