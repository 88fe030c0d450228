#pragma once

// Contraction search for cylinders: the dichotomy step, cylinder covers,
// big cylinders and density of cylinder directions.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "flatkit/cylinder.hpp"
#include "flatkit/triangulation.hpp"

namespace flatkit {

/// Domains cut out by a family of disjoint saddle connections, each either
/// a cylinder or a triangle.
struct Partition {
  std::vector<Cylinder> cylinders;
  std::vector<std::array<SaddleConnection, 3>> triangles;
  Scalar cylinder_area;
  Scalar triangle_area;
};

struct Exist1Outcome {
  enum Kind { kNewSaddle, kPartition };
  Kind kind = kNewSaddle;
  std::optional<SaddleConnection> new_saddle;  // squared length <= 8S
  Partition partition;
};

/// Either a saddle connection of squared length at most 8S disjoint from
/// the family (first in canonical order), or the certified partition.
/// Members must be pairwise disjoint with squared length at most 2S.
Exist1Outcome exist1_step(const TranslationSurface& M, const std::vector<SaddleConnection>& family,
                          int threads = 0);

enum class CoverSchedule { kAdaptive, kPaper };

struct CoverResult {
  std::vector<Cylinder> cylinders;        // in the input structure, sorted
  std::vector<SaddleConnection> family;   // final family, input structure
  Mat2 op;                                // final operator a
  Interval condition;                     // C(a)
  Scalar cylinder_area;
  Scalar triangle_area;
  Scalar max_length_sq;                   // longest cylinder core, input structure
  int saddles_added = 0;                  // exist1 iterations that grew the family
  int exist1_calls = 0;
  int attempts = 0;                       // schedules tried
  std::string schedule;                   // "adaptive(e)" or "paper"
  bool schedule_bounds_hold = true;       // paper schedule: conditions (i), (ii)
};

/// Pairwise disjoint cylinders of total area at least (1 - delta) S.
/// The adaptive schedule contracts each new saddle by 2^-ceil(2^(e-k-1))
/// for e = 1, 2, ... until the area bound is certified; the paper schedule
/// uses eps = (8m/delta)^(-2^(3m-1)) and needs m = 1.
CoverResult cover_by_cylinders(const TranslationSurface& M, const Rational& delta,
                               CoverSchedule schedule = CoverSchedule::kAdaptive,
                               int threads = 0);

struct BigCylinder {
  Cylinder cylinder;
  bool torus_path = false;
  bool length_within_bound = true;  // tori: length <= 2 sqrt(S)
};

/// A cylinder of area at least S/m.
BigCylinder find_big_cylinder(const TranslationSurface& M, int threads = 0);

struct ShortestGeodesic {
  Cylinder cylinder;
  bool within_bound = true;  // length <= (8m)^(2^(3m-1)) sqrt(S)
};

/// The cylinder with the shortest core (first in cylinder order).
ShortestGeodesic shortest_periodic_geodesic(const TranslationSurface& M, int threads = 0);

struct DenseDirection {
  Cylinder cylinder;  // in the input structure
  Rational lambda;    // contraction that produced it
  int rounds = 0;
};

/// A cylinder of area at least S/m whose direction makes an angle below
/// tol with v (certified through |cross| < tol |dot|).
DenseDirection densest_direction_near(const TranslationSurface& M, const Vec2& v,
                                      const Rational& tol, int max_rounds = 64, int threads = 0);

}  // namespace flatkit
