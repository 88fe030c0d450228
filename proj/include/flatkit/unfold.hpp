#pragma once

// Rational billiard tables and their unfolding into translation surfaces.

#include <vector>

#include "flatkit/cylinder.hpp"

namespace flatkit {

/// A simple counterclockwise polygon whose interior angles are pi * angles[i].
struct RationalPolygon {
  std::vector<Vec2> vertices;
  std::vector<Rational> angles;
};

/// cos and sin of 2*pi*k/q for q dividing 8 or 12, in the smallest field.
std::pair<Scalar, Scalar> unit_root(long k, long q);

/// Field needed by a set of angles (0, 2 or 3). Throws PreconditionError for
/// denominators outside {1, 2, 3, 4, 6, 8, 12} or when both sqrt 2 and
/// sqrt 3 would be needed.
long angle_field(const std::vector<Rational>& angles);

/// Checks the polygon against its angle data. Throws ValidationError.
void validate(const RationalPolygon& Q);

/// A table built from angles alone: triangles with base (0,0)-(1,0), and
/// the unit square for four right angles.
RationalPolygon polygon_from_angles(const std::vector<Rational>& angles);

/// Linear parts of side reflections and the group they generate, identity
/// first, then in breadth-first order over the generators.
struct ReflectionGroup {
  std::vector<Mat2> generators;
  std::vector<Mat2> elements;
  int order() const { return static_cast<int>(elements.size()); }
  int index_of(const Mat2& g) const;
};

/// Throws PreconditionError("... not rational ...") when the group exceeds
/// `cap` elements.
ReflectionGroup reflection_group(const RationalPolygon& Q, std::size_t cap = 512);

/// Copy k of the table is polygon k of the surface, placed as g_k(Q)
/// (vertex order reversed when det g_k = -1). Copy 0 is the table itself.
struct UnfoldingMap {
  RationalPolygon table;
  ReflectionGroup group;

  /// Table point under the point z of copy k.
  Vec2 to_table(int copy, const Vec2& z) const;
  /// Table vertex under vertex j of copy k.
  int table_vertex(int copy, int j) const;
};

struct Unfolding {
  TranslationSurface surface;
  UnfoldingMap map;
};

Unfolding unfold(const RationalPolygon& Q, std::size_t cap = 512);

/// A billiard trajectory in the table with exact breakpoints.
struct BilliardOrbit {
  std::vector<Vec2> points;
  Trajectory::Status status = Trajectory::kReachedLengthCap;
};

/// Image of a traced geodesic of the unfolded surface in the table.
BilliardOrbit project_orbit(const UnfoldingMap& U, const Trajectory& t);

/// Canonical directions of periodic billiard orbits of length at most
/// sqrt(t_sq) through the interior point x, sorted by angle.
std::vector<Vec2> billiard_periodic_directions(const Unfolding& U, const Vec2& x,
                                               const Scalar& t_sq, int threads = 0);

}  // namespace flatkit
