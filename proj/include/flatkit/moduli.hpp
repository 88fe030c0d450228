#pragma once

// Period coordinates, parametric surface families and empirical growth
// constants.

#include <cstdint>
#include <string>
#include <vector>

#include "flatkit/cylinder.hpp"
#include "flatkit/triangulation.hpp"

namespace flatkit {

/// Reduced lattice basis: `shortest` is a shortest nonzero lattice vector
/// and `second` satisfies 0 <= y < s where y = <second, shortest>/s.
struct TorusNormalForm {
  Vec2 shortest;
  Vec2 second;
  Scalar s_sq;   // s^2
  Scalar area;   // S
  Scalar y_s;    // y * s, exact
  Interval s;
  Interval y;
};

TorusNormalForm torus_normal_form(const Vec2& v1, const Vec2& v2);

/// Sum of the holonomies along a path of half-edges of a triangulation
/// (2i is edge i, 2i+1 its reversal). Throws PreconditionError when
/// consecutive half-edges do not meet.
Vec2 holonomy(const Triangulation& t, const std::vector<int>& path);

/// Edges of the triangulation outside a spanning tree of the dual graph;
/// they form a basis of relative homology.
std::vector<int> homology_basis(const Triangulation& t);

struct PeriodVector {
  std::vector<int> basis;  // edge ids
  std::vector<Vec2> holonomies;
};

/// Holonomies of the basis edges. Throws PreconditionError unless the basis
/// has rank 2p + n - 1 together with the triangle relations.
PeriodVector period_coordinates(const TranslationSurface& M, const Triangulation& t,
                                const std::vector<int>& basis);

/// The surface with the combinatorics of t and the given periods; one
/// polygon per triangle. Throws ValidationError for degenerate triangles.
TranslationSurface rebuild(const TranslationSurface& M, const Triangulation& t,
                           const PeriodVector& periods);

struct SurfaceFamily {
  enum Kind { kTorus, kMarkedTorus, kLShape };
  Kind kind = kTorus;
  int denominator = 1000;  // parameters are drawn on this rational grid
};

SurfaceFamily::Kind family_kind(const std::string& name);
std::string to_string(SurfaceFamily::Kind k);

struct FamilySample {
  SurfaceSpec spec;
  std::vector<Rational> params;
};

/// Area-one surfaces drawn uniformly from the family's parameter box; the
/// same seed gives the same samples.
std::vector<FamilySample> sample_family(const SurfaceFamily& F, int count, std::uint64_t seed);

struct SampleCount {
  long n1 = 0;
  Scalar n2;
  bool within_upper_bound = true;  // N1 / T^2 <= h_m s^-2
};

struct ConstantEstimate {
  Scalar t_sq;
  int samples = 0;
  int excluded = 0;  // samples without cylinders up to T
  Rational c1;       // family mean of N1 / T^2
  Rational c2;       // family mean of N2 / (S T^2)
  Rational ratio;    // c2 / c1
  std::vector<SampleCount> per_sample;
};

ConstantEstimate estimate_constants(const SurfaceFamily& F, const Scalar& t_sq, int samples,
                                    std::uint64_t seed, int threads = 0);

}  // namespace flatkit
