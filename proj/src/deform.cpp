#include "flatkit/deform.hpp"

#include <algorithm>
#include <map>

#include "flatkit/errors.hpp"

namespace flatkit {

namespace {

bool contains_connection(const std::vector<SaddleConnection>& list, const SaddleConnection& s) {
  return std::any_of(list.begin(), list.end(), [&](const auto& t) { return same_connection(t, s); });
}

// The cylinder bounded on the left by a straight boundary cycle, with the
// face holding the opposite boundary.
std::optional<Partition> certify_partition(const Mesh& mesh, const Scalar& S,
                                           const std::vector<SaddleConnection>& family) {
  auto ff = family_faces(mesh, family);
  const auto& he = ff.half_edges;
  std::vector<int> face_of(he.size());
  for (int f = 0; f < static_cast<int>(ff.faces.size()); ++f) {
    for (int h : ff.faces[f].half_edges) face_of[h] = f;
  }
  auto face_matches = [&](const FamilyFace& f, const std::vector<SaddleConnection>& side) {
    if (f.half_edges.size() != side.size()) return false;
    return std::all_of(f.half_edges.begin(), f.half_edges.end(),
                       [&](int h) { return contains_connection(side, he[h]); });
  };

  Partition p;
  std::vector<bool> used(ff.faces.size(), false);
  for (int i = 0; i < static_cast<int>(ff.faces.size()); ++i) {
    if (used[i]) continue;
    const auto& f = ff.faces[i];
    used[i] = true;
    if (f.is_triangle()) {
      const auto& h = f.half_edges;
      p.triangles.push_back({he[h[0]], he[h[1]], he[h[2]]});
      p.triangle_area += cross(he[h[0]].holonomy, he[h[1]].holonomy) / Scalar(2);
      continue;
    }
    if (!f.is_straight() || f.holonomy_sum.is_zero()) return std::nullopt;
    // Cores point into the upper half-plane: a cycle summing to the core is
    // a bottom, one summing to its negative a top.
    const bool bottom = in_upper_half(f.holonomy_sum);
    const Vec2 core = bottom ? f.holonomy_sum : -f.holonomy_sum;
    auto dec = decompose_direction(mesh, core, core.norm_sq());
    const Cylinder* hit = nullptr;
    for (const auto& c : dec.cylinders) {
      if (c.core == core && face_matches(f, bottom ? c.bottom : c.top)) hit = &c;
    }
    if (!hit) return std::nullopt;
    const auto& other = bottom ? hit->top : hit->bottom;
    int j = -1;
    for (const auto& s : other) {
      int h = -1;
      for (int k = 0; k < static_cast<int>(he.size()); ++k) {
        if (same_connection(he[k], s)) h = k;
      }
      if (h < 0) return std::nullopt;
      if (j >= 0 && face_of[h] != j) return std::nullopt;
      j = face_of[h];
    }
    if (j < 0 || j == i || used[j] || !face_matches(ff.faces[j], other)) return std::nullopt;
    used[j] = true;
    p.cylinders.push_back(*hit);
    p.cylinder_area += hit->area;
  }
  if (p.cylinder_area + p.triangle_area != S) return std::nullopt;
  return p;
}

Exist1Outcome dichotomy(const Mesh& mesh, const Scalar& S,
                        const std::vector<SaddleConnection>& family, int threads) {
  Exist1Outcome out;
  DisjointnessOracle oracle(mesh, family);
  for (const auto& s : enumerate_saddle_connections(mesh, Scalar(8) * S, threads)) {
    if (oracle.disjoint_from_all(s)) {
      out.kind = Exist1Outcome::kNewSaddle;
      out.new_saddle = s;
      return out;
    }
  }
  auto p = certify_partition(mesh, S, family);
  if (!p) throw InternalError("no disjoint saddle connection within 2 sqrt(2S) and no partition");
  out.kind = Exist1Outcome::kPartition;
  out.partition = std::move(*p);
  return out;
}

Rational pow2(long e) {
  Rational r(1);
  if (e >= 0) {
    mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return r;
}

int ceil_log2(const Rational& x) {
  int e = 0;
  while (pow2(e) < x) ++e;
  return e;
}

struct Schedule {
  std::string name;
  std::vector<Scalar> factors;  // contraction applied after the k-th new saddle
  Scalar eps;                   // paper schedule only
  bool paper = false;
};

// Runs the contraction loop. nullopt when the area bound is not reached.
std::optional<CoverResult> run_schedule(const TranslationSurface& M, const Rational& delta,
                                        const Schedule& sch, bool final_attempt, int threads) {
  const int m = M.total_multiplicity();
  const Scalar& S = M.area();
  TranslationSurface cur = M;
  Mat2 a = Mat2::identity();
  std::vector<SaddleConnection> fam;
  CoverResult r;
  r.schedule = sch.name;
  for (;;) {
    if (r.exist1_calls > 3 * m) throw InternalError("more than 3m disjoint saddle connections");
    Exist1Outcome step;
    try {
      step = dichotomy(cur.mesh(), S, fam, threads);
    } catch (const InternalError&) {
      if (final_attempt) throw;
      return std::nullopt;
    }
    ++r.exist1_calls;
    if (step.kind == Exist1Outcome::kNewSaddle) {
      const std::size_t k = fam.size();
      const Scalar& c = sch.factors.at(k);
      Mat2 b = contraction_along(step.new_saddle->holonomy, c);
      fam.push_back(*step.new_saddle);
      cur = cur.apply(b);
      a = b * a;
      for (auto& s : fam) s = s.transformed(b);
      ++r.saddles_added;
      if (sch.paper) {
        // (ii): every member has length at most 2 sqrt(2S) eps^(2^-j), and
        // (i): C(a_j) <= (1/eps)^(1 - 2^-j), with eps^(2^-j) = c^2.
        const Scalar bound = Scalar(8) * S * c * c;
        for (const auto& s : fam) {
          if (s.length_sq() > bound) r.schedule_bounds_hold = false;
        }
        Scalar cap = c / sch.eps;
        if (!cap.is_rational() || condition_number(a, 160).hi > cap.rational_part())
          r.schedule_bounds_hold = false;
      }
      continue;
    }
    auto& part = step.partition;
    if (part.cylinder_area < Scalar(Rational(1) - delta) * S) {
      if (final_attempt) throw InternalError("guaranteed schedule missed the area bound");
      return std::nullopt;
    }
    Mat2 ai = a.inverse();
    for (const auto& c : part.cylinders) r.cylinders.push_back(c.transformed(ai));
    std::sort(r.cylinders.begin(), r.cylinders.end(), cylinder_less);
    for (const auto& s : fam) r.family.push_back(s.transformed(ai));
    r.op = a;
    r.condition = condition_number(a);
    r.cylinder_area = part.cylinder_area;
    r.triangle_area = part.triangle_area;
    for (const auto& c : r.cylinders) r.max_length_sq = std::max(r.max_length_sq, c.length_sq());
    return r;
  }
}

}  // namespace

Exist1Outcome exist1_step(const TranslationSurface& M, const std::vector<SaddleConnection>& family,
                          int threads) {
  const Mesh& mesh = M.mesh();
  const Scalar& S = M.area();
  for (const auto& s : family) {
    if (s.length_sq() > Scalar(2) * S)
      throw PreconditionError("family member longer than sqrt(2S)");
  }
  if (!DisjointnessOracle(mesh, family).pairwise_disjoint())
    throw PreconditionError("family is not pairwise disjoint");
  auto out = dichotomy(mesh, S, family, threads);
  if (out.kind == Exist1Outcome::kPartition) {
    for (const auto& c : out.partition.cylinders) {
      if (c.length_sq() > S) throw InternalError("partition cylinder longer than sqrt(S)");
    }
  }
  return out;
}

CoverResult cover_by_cylinders(const TranslationSurface& M, const Rational& delta,
                               CoverSchedule schedule, int threads) {
  if (delta <= 0 || delta >= 1) throw PreconditionError("delta must lie in (0, 1)");
  const int m = M.total_multiplicity();
  const int steps = 3 * m;
  if (schedule == CoverSchedule::kPaper) {
    if (m != 1) throw PreconditionError("the paper schedule is only implemented for m = 1");
    // eps = (8/delta)^-4; the k-th factor is eps^(2^-(k+1)) = (8/delta)^(-2^(1-k)).
    const Rational q = Rational(8) / delta;
    Schedule sch;
    sch.name = "paper";
    sch.paper = true;
    sch.eps = Scalar(Rational(1) / (q * q * q * q));
    sch.factors = {Scalar(Rational(1) / (q * q)), Scalar(Rational(1) / q)};
    Scalar inv(Rational(1) / q);
    if (auto root = exact_sqrt(inv)) {
      sch.factors.push_back(*root);
    } else {
      // Rounded down: a slightly stronger contraction than the exact one.
      sch.factors.push_back(Scalar(sqrt_enclose(Interval(inv.rational_part()), 128).lo));
    }
    auto r = run_schedule(M, delta, sch, true, threads);
    r->attempts = 1;
    return *r;
  }
  // Dyadic schedules eps = 2^(-2^e); from e_max on the paper's estimate
  // guarantees the area bound.
  const int e_max = std::max(steps, steps - 1 + ceil_log2(Rational(ceil_log2(Rational(8 * m) / delta))));
  for (int e = 1; e <= e_max; ++e) {
    Schedule sch;
    sch.name = "adaptive(" + std::to_string(e) + ")";
    for (int k = 0; k < steps; ++k) {
      long exponent = k < e ? (1L << std::min(e - k - 1, 62)) : 1;
      sch.factors.push_back(Scalar(pow2(-exponent)));
    }
    if (auto r = run_schedule(M, delta, sch, e == e_max, threads)) {
      r->attempts = e;
      return *r;
    }
  }
  throw InternalError("cover schedule exhausted");
}

BigCylinder find_big_cylinder(const TranslationSurface& M, int threads) {
  const Scalar& S = M.area();
  const int m = M.total_multiplicity();
  BigCylinder out;
  if (M.genus() == 1) {
    // Cylinders of a marked torus all have lattice cores; the shortest core
    // is the shortest lattice vector, and its direction splits into pieces
    // at the marked points. Its length is at most 2 sqrt(S).
    out.torus_path = true;
    auto cyl = enumerate_cylinders(M.mesh(), Scalar(4) * S, threads);
    if (cyl.empty()) throw InternalError("torus without a cylinder of length 2 sqrt(S)");
    Scalar shortest = cyl.front().length_sq();
    const Cylinder* best = nullptr;
    for (const auto& c : cyl) {
      if (c.length_sq() != shortest || !same_direction(c.core, cyl.front().core)) continue;
      if (!best || c.area > best->area) best = &c;
    }
    out.cylinder = *best;
    out.length_within_bound = shortest <= Scalar(4) * S;
  } else {
    auto cover = cover_by_cylinders(M, Rational(1, m), CoverSchedule::kAdaptive, threads);
    const Cylinder* best = nullptr;
    for (const auto& c : cover.cylinders) {
      if (!best || c.area > best->area) best = &c;
    }
    if (!best) throw InternalError("cover without cylinders");
    out.cylinder = *best;
  }
  if (out.cylinder.area * Scalar(m) < S) throw InternalError("big cylinder below S/m");
  return out;
}

ShortestGeodesic shortest_periodic_geodesic(const TranslationSurface& M, int threads) {
  const Scalar& S = M.area();
  const int m = M.total_multiplicity();
  Scalar t2 = shortest_saddle_connection(M).length_sq();
  for (int round = 0;; ++round) {
    if (round > 60) throw InternalError("no periodic geodesic found");
    auto cyl = enumerate_cylinders(M.mesh(), t2, threads);
    if (!cyl.empty()) {
      ShortestGeodesic out;
      out.cylinder = cyl.front();
      // l^2 <= (8m)^(2^(3m)) S, squaring up to the exponent.
      Scalar ratio = out.cylinder.length_sq() / S;
      Rational bound(8 * m);
      out.within_bound = ratio <= Scalar(bound);
      for (int i = 0; i < 3 * m && !out.within_bound; ++i) {
        bound *= bound;
        out.within_bound = ratio <= Scalar(bound);
      }
      return out;
    }
    t2 *= Scalar(4);
  }
}

DenseDirection densest_direction_near(const TranslationSurface& M, const Vec2& v,
                                      const Rational& tol, int max_rounds, int threads) {
  if (v.is_zero()) throw PreconditionError("zero direction");
  if (tol <= 0) throw PreconditionError("tolerance must be positive");
  auto close_enough = [&](const Vec2& d) {
    return cross(v, d).abs() < Scalar(tol) * dot(v, d).abs();
  };
  Rational lambda(1);
  for (int round = 0; round < max_rounds; ++round, lambda *= 2) {
    // a v = v / lambda, a u = lambda u.
    Mat2 a = contraction_along(v, Scalar(Rational(1) / lambda));
    auto big = find_big_cylinder(M.apply(a), threads);
    Cylinder c = big.cylinder.transformed(a.inverse());
    if (close_enough(c.direction)) return {c, lambda, round + 1};
  }
  throw Error("iteration cap exceeded at lambda = " + rational_to_string(lambda));
}

}  // namespace flatkit
