#pragma once

// SVG drawings of surfaces and cylinders. Geometry stays exact up to the
// final coordinate output, which is the only place doubles appear.

#include <string>
#include <vector>

#include "flatkit/cylinder.hpp"

namespace flatkit {

/// A convex piece of a cylinder inside one polygon, polygon coordinates.
struct PolygonPiece {
  int polygon = -1;
  std::vector<Vec2> vertices;
};

/// The open cylinder cut along the polygon edges and ear diagonals.
std::vector<PolygonPiece> cylinder_in_polygons(const TranslationSurface& M, const Cylinder& c);

struct RenderOptions {
  std::vector<Cylinder> cylinders;  // shaded, in order
  int width = 1000;                 // viewport width
};

/// Polygons side by side at a common scale 1/sqrt(S), glued edge pairs in
/// matching colors, cylinders shaded and labelled with their areas.
std::string render_svg(const TranslationSurface& M, const RenderOptions& options = {});

}  // namespace flatkit
