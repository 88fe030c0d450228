#pragma once

// Translation surfaces glued from polygons.

#include <memory>
#include <utility>
#include <vector>

#include "flatkit/mesh.hpp"
#include "flatkit/scalar.hpp"

namespace flatkit {

struct EdgeRef {
  int polygon = 0;
  int edge = 0;
  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

struct PolygonSpec {
  std::vector<Vec2> vertices;  // counterclockwise
  friend bool operator==(const PolygonSpec&, const PolygonSpec&) = default;
};

struct SurfaceSpec {
  long d = 0;  // 0 for Q, else square-free
  std::vector<PolygonSpec> polygons;
  std::vector<std::pair<EdgeRef, EdgeRef>> gluings;

  Vec2 edge_vector(EdgeRef e) const;
};

struct Singularity {
  int multiplicity = 0;
  std::vector<std::pair<int, int>> corners;  // (polygon, vertex)
};

/// Ear-clipping triangulation of a simple counterclockwise polygon; triples
/// of vertex indices, each counterclockwise.
std::vector<std::array<int, 3>> ear_clip(const std::vector<Vec2>& poly);

/// Signed area of a closed polygon.
Scalar polygon_area(const std::vector<Vec2>& poly);

/// Exact test for a simple polygon (no repeated points, no touching edges).
bool polygon_is_simple(const std::vector<Vec2>& poly);

/// Closed-polygon membership (boundary counts as inside).
bool polygon_contains(const std::vector<Vec2>& poly, const Vec2& x);

class TranslationSurface {
 public:
  /// Validates the spec and derives singularities, genus and area.
  /// Throws ValidationError or FieldMismatch on bad input.
  static TranslationSurface build(SurfaceSpec spec);

  const SurfaceSpec& spec() const { return data_->spec; }
  long field() const { return data_->spec.d; }
  int genus() const { return data_->genus; }
  /// m = sum of multiplicities.
  int total_multiplicity() const { return data_->m; }
  int num_singularities() const { return static_cast<int>(data_->sings.size()); }
  const std::vector<Singularity>& singularities() const { return data_->sings; }
  const Scalar& area() const { return data_->area; }

  EdgeRef glued_to(EdgeRef e) const;
  int vertex_class(int polygon, int vertex) const { return data_->vertex_class[polygon][vertex]; }
  /// Sheet of the outgoing polygon edge at a polygon corner.
  int corner_sheet(int polygon, int vertex) const { return data_->corner_sheet[polygon][vertex]; }

  /// Delaunay mesh used by all algorithms.
  const Mesh& mesh() const { return data_->mesh; }

  /// The surface a * omega. Requires det(a) = 1 with entries in the field.
  TranslationSurface apply(const Mat2& a) const;

  /// Equality after canonical sorting of polygons and gluings.
  bool structurally_equal(const TranslationSurface& other) const;

 private:
  struct Data {
    SurfaceSpec spec;
    int genus = 0;
    int m = 0;
    Scalar area;
    std::vector<Singularity> sings;
    std::vector<std::vector<int>> vertex_class;
    std::vector<std::vector<int>> corner_sheet;
    std::vector<std::vector<EdgeRef>> partner;
    Mesh mesh;
  };
  std::shared_ptr<const Data> data_;
};

/// Canonical form used for structural comparison: polygons rotated to start
/// at their lexicographically least vertex and sorted, gluings relabeled
/// and sorted.
SurfaceSpec canonical_spec(const SurfaceSpec& spec);

}  // namespace flatkit
