#pragma once

// Straight segments on the Delaunay mesh.
//
// A segment leaving a singularity is described by its cone position (sheet
// and direction) and its holonomy. Walking it through the mesh yields the
// triangles it crosses, with local coordinates relative to corner 0 of each
// triangle.

#include <vector>

#include "flatkit/mesh.hpp"

namespace flatkit {

/// A point of the surface given in a triangle's local frame.
struct MeshPoint {
  int tri = -1;
  Vec2 pos;
};

/// The part of a segment inside one triangle, local coordinates.
struct Piece {
  int tri = -1;
  Vec2 from;
  Vec2 to;
};

struct WalkResult {
  enum Status {
    kInside,     // endpoint is a regular point (interior or on an edge)
    kAtVertex,   // endpoint is exactly a singular point
    kHitVertex,  // a singular point was met before the endpoint
  };
  Status status = kInside;
  MeshPoint end;        // kInside: the endpoint
  HalfEdge vertex;      // kAtVertex / kHitVertex: corner holding the vertex
  Vec2 vertex_offset;   // kAtVertex / kHitVertex: holonomy to that vertex
  std::vector<Piece> pieces;
  bool along_edge = false;  // the segment starts along the edge leaving `start`
  HalfEdge start;
};

/// Walks the segment with holonomy u leaving corner `start` (u must lie in
/// the corner's closed-open range).
WalkResult walk_from_corner(const Mesh& mesh, HalfEdge start, const Vec2& u,
                            bool record_pieces = false);

/// Key of direction `to`, reached by turning counterclockwise from `k` by
/// an angle in (0, 2*pi).
ConeKey rotate_ccw(const Mesh& mesh, int sing, const ConeKey& k, const Vec2& to);

/// Key of direction `to`, reached by turning clockwise from `k` by an angle
/// in (0, 2*pi).
ConeKey rotate_cw(const Mesh& mesh, int sing, const ConeKey& k, const Vec2& to);

/// Counterclockwise cone angle from a to b at one singularity, as a number
/// of full turns plus the planar angle class of the remainder.
struct ConeAngle {
  int turns = 0;
  int half = 0;     // 0: remainder in [0, pi), 1: in [pi, 2*pi)
  bool exact = false;  // remainder is exactly 0 (half == 0) or pi (half == 1)

  bool is_pi() const { return turns == 0 && half == 1 && exact; }
  bool less_than_pi() const { return turns == 0 && half == 0; }
};
ConeAngle cone_angle(const Mesh& mesh, int sing, const ConeKey& a, const ConeKey& b);

bool same_key(const ConeKey& a, const ConeKey& b);

/// A regular surface point reached from a singularity by a straight segment
/// free of singular points. Survives re-triangulation and the SL(2,R)
/// action (directions and offset transform, sheets do not).
struct AnchoredPoint {
  int sing = -1;
  ConeKey key;
  Vec2 offset;

  AnchoredPoint transformed(const Mat2& a) const {
    return {sing, {key.sheet, a(key.dir)}, a(offset)};
  }
};

/// Mesh location of an anchored point. Throws PreconditionError if the
/// segment meets a singular point.
MeshPoint locate(const Mesh& mesh, const AnchoredPoint& p);

/// Segment pieces with edges counted on both sides: when a piece lies on a
/// mesh edge, the neighbouring triangle receives the mirrored piece too.
std::vector<Piece> closed_pieces(const Mesh& mesh, const WalkResult& w);

/// Closed segments [a1,b1], [a2,b2] in triangle `tri` share a point that is
/// not a mesh vertex.
bool pieces_meet(const Mesh& mesh, const Piece& p, const Piece& q);

}  // namespace flatkit
