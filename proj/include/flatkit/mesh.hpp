#pragma once

// Internal triangulated model of a translation surface.
//
// Every singular point (including removable marked points) is a vertex of
// the mesh. Triangles are stored by their three edge vectors; corner i sits
// at local position P_i with P_0 = 0, and edge i runs from P_i to P_{i+1}.
//
// Directions at a cone point of angle 2*pi*k are tagged by a sheet index in
// [0, k): the sheet counts how many times the reference direction of that
// singularity was passed while turning counterclockwise from the reference
// ray. Sheets are invariant under the SL(2,R) action when the reference
// vector is transformed along with the edges.

#include <array>
#include <vector>

#include "flatkit/scalar.hpp"

namespace flatkit {

/// Edge `side` of triangle `tri`, oriented as in that triangle. Also used
/// for corner `side` of `tri` (the corner where that edge starts).
struct HalfEdge {
  int tri = -1;
  int side = -1;
  friend bool operator==(const HalfEdge&, const HalfEdge&) = default;
  friend auto operator<=>(const HalfEdge&, const HalfEdge&) = default;
};

/// A ray position in the cone around a singularity.
struct ConeKey {
  int sheet = 0;
  Vec2 dir;
};

class Mesh {
 public:
  struct Triangle {
    std::array<Vec2, 3> edge;
    std::array<HalfEdge, 3> twin;
    std::array<int, 3> vertex{};  // singularity id at corner i
    std::array<int, 3> sheet{};   // sheet of edge[i] seen from corner i
  };

  std::vector<Triangle> tris;
  std::vector<Vec2> ref;          // reference direction per singularity
  std::vector<int> multiplicity;  // cone angle / 2pi per singularity

  int num_singularities() const { return static_cast<int>(ref.size()); }
  const Triangle& tri(int t) const { return tris[t]; }
  const Vec2& edge(HalfEdge h) const { return tris[h.tri].edge[h.side]; }
  HalfEdge twin(HalfEdge h) const { return tris[h.tri].twin[h.side]; }

  /// Local position of corner c of triangle t.
  Vec2 corner_pos(int t, int c) const;

  /// Sheet of a direction u lying in the closed-open angular range of
  /// corner c of triangle t, [edge[c], -edge[c-1]).
  int sheet_in_corner(int t, int c, const Vec2& u) const;

  /// u lies in [edge[c], -edge[c-1]) at corner c of t.
  bool corner_contains(int t, int c, const Vec2& u) const;

  /// Strict order of cone positions at singularity `sing`.
  bool key_less(int sing, const ConeKey& a, const ConeKey& b) const;

  /// Corner containing a cone position.
  HalfEdge locate(int sing, const ConeKey& key) const;

  /// Cone key of the outgoing direction u at corner (t, c).
  ConeKey key_in_corner(int t, int c, const Vec2& u) const {
    return {sheet_in_corner(t, c, u), u};
  }

  /// Corners grouped by singularity, each list in counterclockwise order
  /// starting at the corner that holds the reference ray on sheet 0.
  std::vector<std::vector<HalfEdge>> corners_by_singularity() const;

  /// Next corner counterclockwise around the same vertex.
  HalfEdge next_corner_ccw(HalfEdge corner) const;

  /// Recomputes sheets from the reference vectors by walking every cone.
  /// Returns the winding count per singularity.
  std::vector<int> recompute_sheets();

  /// Applies a det-1 map to every edge and reference vector, then restores
  /// the Delaunay property.
  void apply(const Mat2& a);

  /// Lawson flips until every edge is locally Delaunay. Returns flip count.
  int make_delaunay();

  /// Flips edge (t, i). Requires the quadrilateral to be strictly convex.
  void flip(int t, int i);

  bool is_locally_delaunay(int t, int i) const;

  Scalar area() const;

  /// Structural self-check (twins, edge vectors, orientation). Throws
  /// InternalError on failure.
  void check() const;
};

}  // namespace flatkit
