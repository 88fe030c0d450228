#pragma once

// Families of pairwise disjoint saddle connections and the domains they cut
// the surface into.

#include <array>
#include <vector>

#include "flatkit/trajectory.hpp"

namespace flatkit {

/// One boundary cycle of the complement of a family. Half-edge 2i is member
/// i as given, 2i+1 its reversal; each cycle keeps its domain on the left.
struct FamilyFace {
  std::vector<int> half_edges;
  std::vector<ConeAngle> corners;  // corners[j]: angle between half_edges[j] and the next
  Vec2 holonomy_sum;

  bool is_triangle() const;
  /// Every corner is a straight angle, so the cycle runs along a cylinder
  /// boundary.
  bool is_straight() const;
};

struct FamilyFaces {
  std::vector<SaddleConnection> half_edges;
  std::vector<FamilyFace> faces;
};

/// Boundary cycles of the complement of a pairwise disjoint family.
FamilyFaces family_faces(const Mesh& mesh, const std::vector<SaddleConnection>& family);

struct Triangulation {
  std::vector<SaddleConnection> edges;    // one orientation each
  std::vector<std::array<int, 3>> triangles;  // half-edge ids: 2i edge i, 2i+1 its reversal
  Scalar area;                            // sum of triangle areas
};

/// Extends a pairwise disjoint family to a maximal one (shortest first) and
/// returns the triangulation it cuts out. Throws PreconditionError if the
/// input is not pairwise disjoint.
Triangulation triangulate(const TranslationSurface& M,
                          const std::vector<SaddleConnection>& saddles = {}, int threads = 0);

}  // namespace flatkit
