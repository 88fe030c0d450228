#pragma once

// Periodic cylinders: directional decomposition, enumeration, the counting
// functions and the growth bounds.

#include <string>
#include <vector>

#include "flatkit/interval.hpp"
#include "flatkit/trajectory.hpp"

namespace flatkit {

/// A cylinder of periodic geodesics. The open cylinder is the image of the
/// developed parallelogram {s*core + t*transversal : 0 < t < 1} (s mod 1)
/// placed with its corner at `base`, core leaving along `base_key`.
struct Cylinder {
  Vec2 direction;    // canonical direction of the core
  Vec2 core;         // holonomy of the core curve, parallel to direction
  Vec2 transversal;  // from the bottom boundary to the top
  Scalar area;
  int base = -1;
  ConeKey base_key;
  std::vector<SaddleConnection> bottom;  // along core, cylinder on the left
  std::vector<SaddleConnection> top;     // against core, cylinder on the left

  Scalar length_sq() const { return core.norm_sq(); }
  Interval length(unsigned bits = 96) const { return length_enclose(core, bits); }
  /// area / length.
  Interval width(unsigned bits = 96) const;
  /// The same cylinder seen in the structure a*omega.
  Cylinder transformed(const Mat2& a) const;
};

bool same_cylinder(const Cylinder& a, const Cylinder& b);

/// Order: squared length, direction, base singularity, base sheet.
bool cylinder_less(const Cylinder& a, const Cylinder& b);

struct DirectionalDecomposition {
  enum Residual { kFullyPeriodic, kHasNonCylinderComponents, kUndeterminedAtCap };
  Vec2 direction;
  std::vector<Cylinder> cylinders;
  Residual residual = kUndeterminedAtCap;
  Scalar cap_sq;
};

std::string to_string(DirectionalDecomposition::Residual r);

/// Cylinders in direction v (or -v) whose core has squared length at most
/// cap_sq.
DirectionalDecomposition decompose_direction(const Mesh& mesh, const Vec2& v,
                                             const Scalar& cap_sq);
DirectionalDecomposition decompose_direction(const TranslationSurface& M, const Vec2& v,
                                             const Scalar& cap_sq);

/// All cylinders with squared core length at most max_len_sq.
std::vector<Cylinder> enumerate_cylinders(const Mesh& mesh, const Scalar& max_len_sq,
                                          int threads = 0);
std::vector<Cylinder> enumerate_cylinders(const TranslationSurface& M,
                                          const Scalar& max_len_sq, int threads = 0);

/// Cylinders built from an already enumerated saddle list (all saddles up to
/// max_len_sq, sorted canonically).
std::vector<Cylinder> cylinders_from_saddles(const Mesh& mesh,
                                             const std::vector<SaddleConnection>& saddles,
                                             const Scalar& max_len_sq, int threads = 0);

// ---------------------------------------------------------------------------
// Developed pieces of a cylinder.

/// A convex polygon inside one mesh triangle, local coordinates.
struct Patch {
  int tri = -1;
  std::vector<Vec2> poly;
};

/// Triangle copies covering the developed strip s_lo < s < s_hi, 0 < t < 1.
struct CylinderStrip {
  struct Copy {
    int tri;
    Vec2 offset;  // developed position of corner 0
  };
  std::vector<Copy> copies;
};

CylinderStrip develop(const Mesh& mesh, const Cylinder& c, const Rational& s_lo,
                      const Rational& s_hi);

/// The open cylinder cut into convex patches, one period.
std::vector<Patch> cylinder_patches(const Mesh& mesh, const Cylinder& c);

Scalar patches_area(const std::vector<Patch>& ps);

/// Some pair of patches in the same triangle overlaps in positive area.
bool patches_overlap(const std::vector<Patch>& a, const std::vector<Patch>& b);

/// Point test against the open cylinder. The strip must come from
/// develop(mesh, c, -1/2, 3/2).
bool cylinder_contains(const Cylinder& c, const CylinderStrip& strip, const MeshPoint& x);

// ---------------------------------------------------------------------------
// Counting.

struct GrowthRow {
  Scalar t_sq;
  long n0 = 0;   // oriented saddle connections
  long n1 = 0;   // cylinders
  Scalar n2;     // total cylinder area
  Scalar n2_over_s;
  Interval sigma;  // sum of inverse core lengths
};

struct GrowthTable {
  std::vector<GrowthRow> rows;
};

GrowthTable growth_table(const TranslationSurface& M, const std::vector<Scalar>& thresholds,
                         int threads = 0);

/// Cylinders of squared length at most t_sq whose open interior contains x.
long count_through_point(const TranslationSurface& M, const SurfacePoint& x, const Scalar& t_sq,
                         int threads = 0);

/// The cylinders counted by count_through_point, in cylinder order.
std::vector<Cylinder> cylinders_through_point(const TranslationSurface& M, const SurfacePoint& x,
                                              const Scalar& t_sq, int threads = 0);

/// Same, against a precomputed cylinder list and strips (one per cylinder).
long count_through_point(const Mesh& mesh, const std::vector<Cylinder>& cylinders,
                         const std::vector<CylinderStrip>& strips, const MeshPoint& x,
                         const Scalar& t_sq);

/// Constants of the quadratic bounds for total multiplicity m.
Integer saddle_bound_constant(int m);        // h_m
Integer sigma_bound_constant(int m);         // h~_m
Integer lower_bound_constant(int m);         // (600m)^((2m)^(2m))
Integer lower_threshold_factor(int m);       // l_m

struct BoundCheck {
  std::string name;
  std::string statement;
  std::string note = {};  // margin or reason for skipping
  bool applicable = true;  // false: reported as skipped
  bool pass = true;
};

struct BoundsReport {
  Scalar t_sq;
  long n0 = 0, n1 = 0;
  Scalar n2;
  Scalar s_sq;
  std::vector<BoundCheck> checks;
  bool all_pass() const;
};

BoundsReport check_bounds(const TranslationSurface& M, const Scalar& t_sq, int threads = 0);

}  // namespace flatkit
