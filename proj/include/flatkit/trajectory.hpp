#pragma once

// Saddle connections and straight-line flow.

#include <optional>
#include <string>
#include <vector>

#include "flatkit/surface.hpp"
#include "flatkit/walk.hpp"

namespace flatkit {

/// An oriented saddle connection. The sector index of an endpoint is the
/// sheet of its cone key.
struct SaddleConnection {
  Vec2 holonomy;
  int start = -1;
  ConeKey start_key;
  int end = -1;
  ConeKey end_key;  // outgoing direction of the reversed connection

  Scalar length_sq() const { return holonomy.norm_sq(); }
  int start_sector() const { return start_key.sheet; }
  int end_sector() const { return end_key.sheet; }
  SaddleConnection reversed() const { return {-holonomy, end, end_key, start, start_key}; }
  SaddleConnection transformed(const Mat2& a) const;
};

/// Same oriented connection (start anchor and holonomy agree).
bool same_connection(const SaddleConnection& a, const SaddleConnection& b);

/// Canonical order: squared length, canonical direction, start singularity,
/// start sector, then the upper-half-plane orientation first.
bool canonical_less(const SaddleConnection& a, const SaddleConnection& b);

/// All oriented saddle connections with |holonomy|^2 <= max_len_sq, sorted
/// canonically. Each geometric connection appears once per orientation.
/// threads <= 0 picks the default worker count.
std::vector<SaddleConnection> enumerate_saddle_connections(const TranslationSurface& M,
                                                           const Scalar& max_len_sq,
                                                           int threads = 0);

/// Same, on a bare mesh.
std::vector<SaddleConnection> enumerate_saddle_connections(const Mesh& mesh,
                                                           const Scalar& max_len_sq,
                                                           int threads = 0);

/// A shortest saddle connection (first in canonical order).
SaddleConnection shortest_saddle_connection(const TranslationSurface& M);

/// The connection leaving `sing` at cone position `key` in direction of
/// key.dir, if it reaches a singular point within squared length max_len_sq.
std::optional<SaddleConnection> connection_along(const Mesh& mesh, int sing, const ConeKey& key,
                                                 const Scalar& max_len_sq);

/// Walks a saddle connection through the mesh, pieces recorded.
WalkResult walk_connection(const Mesh& mesh, const SaddleConnection& s);

/// Interiors are disjoint and the two are not the same segment.
bool disjoint(const Mesh& mesh, const SaddleConnection& a, const SaddleConnection& b);

/// Disjointness against a family, reusing walked pieces of the family.
class DisjointnessOracle {
 public:
  DisjointnessOracle(const Mesh& mesh, const std::vector<SaddleConnection>& family);
  bool disjoint_from_all(const SaddleConnection& s) const;
  bool pairwise_disjoint() const;

 private:
  const Mesh& mesh_;
  std::vector<SaddleConnection> family_;
  std::vector<std::vector<Piece>> pieces_;
};

// ---------------------------------------------------------------------------
// Ray tracing in polygon coordinates.

struct SurfacePoint {
  int polygon = 0;
  Vec2 pos;
};

struct TrajectorySegment {
  int polygon = 0;
  Vec2 from;
  Vec2 to;
};

struct Trajectory {
  enum Status { kReachedLengthCap, kHitSingularity, kReturnedToStart };
  std::vector<TrajectorySegment> segments;
  Vec2 displacement;  // sum of segment holonomies
  Scalar length_sq;   // |displacement|^2 (all segments are parallel)
  Status status = kReachedLengthCap;
};

std::string to_string(Trajectory::Status s);

/// Traces the ray from x in direction v until its squared length reaches
/// cap_sq, it hits a singular point, or it comes back to x. A start at a
/// polygon vertex leaves through that polygon corner; v must point into it.
/// The segment that crosses the cap is reported whole.
Trajectory trace_ray(const TranslationSurface& M, const SurfacePoint& x, const Vec2& v,
                     const Scalar& cap_sq);

/// Anchored form of a polygon point (for mesh-based algorithms). x must not
/// be a polygon vertex.
AnchoredPoint anchor(const TranslationSurface& M, const SurfacePoint& x);

}  // namespace flatkit
