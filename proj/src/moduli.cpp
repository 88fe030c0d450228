#include "flatkit/moduli.hpp"

#include <algorithm>
#include <queue>
#include <random>

#include "flatkit/corpus.hpp"
#include "flatkit/errors.hpp"
#include "flatkit/parallel.hpp"

namespace flatkit {

namespace {

Integer floor_of(const Scalar& x) {
  if (x.is_rational()) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), x.rational_part().get_num_mpz_t(), x.rational_part().get_den_mpz_t());
    return q;
  }
  for (unsigned bits = 64;; bits *= 2) {
    Interval e = enclose(x, bits);
    Integer lo, hi;
    mpz_fdiv_q(lo.get_mpz_t(), e.lo.get_num_mpz_t(), e.lo.get_den_mpz_t());
    mpz_fdiv_q(hi.get_mpz_t(), e.hi.get_num_mpz_t(), e.hi.get_den_mpz_t());
    if (lo == hi) return lo;
  }
}

Vec2 half_edge_holonomy(const Triangulation& t, int h) {
  const auto& s = t.edges.at(h / 2);
  return h % 2 == 0 ? s.holonomy : -s.holonomy;
}
int half_edge_start(const Triangulation& t, int h) {
  const auto& s = t.edges.at(h / 2);
  return h % 2 == 0 ? s.start : s.end;
}
int half_edge_end(const Triangulation& t, int h) { return half_edge_start(t, h ^ 1); }

// Rank over Q of integer rows.
int rank_of(std::vector<std::vector<Rational>> rows) {
  int rank = 0;
  const int cols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (int c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r][c] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rank]);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      Rational f = rows[r][c] / rows[rank][c];
      for (int k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

// Triangle and slot of every half-edge.
std::vector<std::pair<int, int>> half_edge_slots(const Triangulation& t) {
  std::vector<std::pair<int, int>> slot(2 * t.edges.size(), {-1, -1});
  for (int k = 0; k < static_cast<int>(t.triangles.size()); ++k) {
    for (int j = 0; j < 3; ++j) slot[t.triangles[k][j]] = {k, j};
  }
  return slot;
}

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  // Uniform on the grid points strictly inside (lo, hi) with denominator den.
  Rational open(const Rational& lo, const Rational& hi, int den) {
    Rational a = lo * den, b = hi * den;
    Integer first = floor_of(Scalar(a)) + 1;
    Integer last = -floor_of(Scalar(-b)) - 1;
    if (last < first) throw PreconditionError("empty parameter box");
    Integer span = last - first + 1;
    Integer k = first + Integer(static_cast<unsigned long>(rng_() % span.get_ui()));
    Rational r(k, den);
    r.canonicalize();
    return r;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

TorusNormalForm torus_normal_form(const Vec2& v1, const Vec2& v2) {
  if (cross(v1, v2).is_zero()) throw PreconditionError("lattice vectors are collinear");
  Vec2 a = v1, b = v2;
  if (b.norm_sq() < a.norm_sq()) std::swap(a, b);
  for (;;) {
    Integer mu = floor_of(dot(a, b) / a.norm_sq() + Scalar(Rational(1, 2)));
    b -= Scalar(Rational(mu)) * a;
    if (b.norm_sq() < a.norm_sq()) {
      std::swap(a, b);
    } else {
      break;
    }
  }
  if (dot(a, b).sign() < 0) b += a;
  TorusNormalForm out;
  out.shortest = a;
  out.second = b;
  out.s_sq = a.norm_sq();
  out.area = cross(a, b).abs();
  out.y_s = dot(a, b);
  out.s = sqrt_enclose(enclose(out.s_sq));
  out.y = enclose(out.y_s) / out.s;
  return out;
}

Vec2 holonomy(const Triangulation& t, const std::vector<int>& path) {
  Vec2 sum;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] < 0 || path[i] >= 2 * static_cast<int>(t.edges.size()))
      throw PreconditionError("unknown half-edge in path");
    if (i > 0 && half_edge_end(t, path[i - 1]) != half_edge_start(t, path[i]))
      throw PreconditionError("path is not consecutive at step " + std::to_string(i));
    sum += half_edge_holonomy(t, path[i]);
  }
  return sum;
}

std::vector<int> homology_basis(const Triangulation& t) {
  auto slot = half_edge_slots(t);
  const int F = static_cast<int>(t.triangles.size());
  std::vector<bool> reached(F, false), tree(t.edges.size(), false);
  std::queue<int> q;
  reached[0] = true;
  q.push(0);
  while (!q.empty()) {
    int k = q.front();
    q.pop();
    for (int h : t.triangles[k]) {
      int other = slot[h ^ 1].first;
      if (reached[other]) continue;
      reached[other] = true;
      tree[h / 2] = true;
      q.push(other);
    }
  }
  std::vector<int> basis;
  for (int i = 0; i < static_cast<int>(t.edges.size()); ++i) {
    if (!tree[i]) basis.push_back(i);
  }
  return basis;
}

PeriodVector period_coordinates(const TranslationSurface& M, const Triangulation& t,
                                const std::vector<int>& basis) {
  const int E = static_cast<int>(t.edges.size());
  const int N = 2 * M.genus() + M.num_singularities() - 1;
  if (static_cast<int>(basis.size()) != N)
    throw PreconditionError("basis must have 2p + n - 1 = " + std::to_string(N) + " elements");
  std::vector<std::vector<Rational>> rows;
  for (const auto& tri : t.triangles) {
    std::vector<Rational> r(E, Rational(0));
    for (int h : tri) r[h / 2] += h % 2 == 0 ? 1 : -1;
    rows.push_back(std::move(r));
  }
  for (int b : basis) {
    if (b < 0 || b >= E) throw PreconditionError("unknown edge in basis");
    std::vector<Rational> r(E, Rational(0));
    r[b] = 1;
    rows.push_back(std::move(r));
  }
  if (rank_of(rows) != E) throw PreconditionError("edges do not form a relative homology basis");
  PeriodVector out;
  out.basis = basis;
  for (int b : basis) out.holonomies.push_back(t.edges[b].holonomy);
  return out;
}

TranslationSurface rebuild(const TranslationSurface& M, const Triangulation& t,
                           const PeriodVector& periods) {
  const int E = static_cast<int>(t.edges.size());
  std::vector<std::optional<Vec2>> hol(E);
  for (std::size_t i = 0; i < periods.basis.size(); ++i) hol.at(periods.basis[i]) = periods.holonomies[i];
  auto value = [&](int h) { return h % 2 == 0 ? *hol[h / 2] : -*hol[h / 2]; };
  // Peel triangles with a single unknown edge.
  for (bool progress = true; progress;) {
    progress = false;
    for (const auto& tri : t.triangles) {
      int unknown = -1, count = 0;
      for (int h : tri) {
        if (!hol[h / 2]) {
          unknown = h;
          ++count;
        }
      }
      if (count != 1) continue;
      Vec2 rest;
      for (int h : tri) {
        if (h != unknown) rest += value(h);
      }
      hol[unknown / 2] = unknown % 2 == 0 ? -rest : rest;
      progress = true;
    }
  }
  for (const auto& h : hol) {
    if (!h) throw PreconditionError("periods do not determine every edge");
  }
  SurfaceSpec spec;
  spec.d = M.field();
  auto slot = half_edge_slots(t);
  for (const auto& tri : t.triangles) {
    Vec2 a = value(tri[0]), b = value(tri[1]);
    if (!(a + b + value(tri[2])).is_zero())
      throw ValidationError("periods violate a triangle relation");
    if (cross(a, b).sign() <= 0) throw ValidationError("periods give a degenerate triangle");
    spec.polygons.push_back({{Vec2(0, 0), a, a + b}});
  }
  for (int i = 0; i < E; ++i) {
    auto [k1, j1] = slot[2 * i];
    auto [k2, j2] = slot[2 * i + 1];
    spec.gluings.push_back({{k1, j1}, {k2, j2}});
  }
  return TranslationSurface::build(std::move(spec));
}

SurfaceFamily::Kind family_kind(const std::string& name) {
  if (name == "torus") return SurfaceFamily::kTorus;
  if (name == "marked-torus") return SurfaceFamily::kMarkedTorus;
  if (name == "lshape") return SurfaceFamily::kLShape;
  throw PreconditionError("unknown family: " + name);
}

std::string to_string(SurfaceFamily::Kind k) {
  switch (k) {
    case SurfaceFamily::kTorus: return "torus";
    case SurfaceFamily::kMarkedTorus: return "marked-torus";
    case SurfaceFamily::kLShape: return "lshape";
  }
  return "?";
}

std::vector<FamilySample> sample_family(const SurfaceFamily& F, int count, std::uint64_t seed) {
  if (count < 0) throw PreconditionError("negative sample count");
  Draw draw(seed);
  const int den = F.denominator;
  std::vector<FamilySample> out;
  while (static_cast<int>(out.size()) < count) {
    FamilySample s;
    if (F.kind == SurfaceFamily::kTorus || F.kind == SurfaceFamily::kMarkedTorus) {
      // Basis (a, 0), (u a, 1/a): area one.
      Rational a = draw.open(Rational(1, 2), Rational(2), den);
      Rational u = draw.open(Rational(-1, den), Rational(1), den);
      Vec2 v1(Scalar(a), 0), v2(Scalar(u * a), Scalar(Rational(1) / a));
      s.params = {a, u};
      if (F.kind == SurfaceFamily::kTorus) {
        s.spec = corpus::lattice_torus(v1, v2);
      } else {
        Rational alpha = draw.open(Rational(0), Rational(1), den);
        Rational beta = draw.open(Rational(0), Rational(1), den);
        s.params.push_back(alpha);
        s.params.push_back(beta);
        s.spec = corpus::marked_torus(v1, v2, alpha, beta);
      }
    } else {
      // Base w1 x h1, column w2 x (H - h1), H fixed by area one.
      Rational w1 = draw.open(Rational(1, 4), Rational(2), den);
      Rational h1 = draw.open(Rational(1, 4), Rational(2), den);
      Rational w2 = draw.open(Rational(1, 4), Rational(2), den);
      if (w2 >= w1 || w1 * h1 >= 1) continue;
      Rational H = h1 + (Rational(1) - w1 * h1) / w2;
      s.params = {w1, w2, h1, H};
      s.spec = corpus::lshape(Scalar(w1), Scalar(w2), Scalar(h1), Scalar(H));
    }
    out.push_back(std::move(s));
  }
  return out;
}

ConstantEstimate estimate_constants(const SurfaceFamily& F, const Scalar& t_sq, int samples,
                                    std::uint64_t seed, int threads) {
  if (!t_sq.is_rational() || t_sq.sign() <= 0) throw PreconditionError("T^2 must be a positive rational");
  auto specs = sample_family(F, samples, seed);
  ConstantEstimate est;
  est.t_sq = t_sq;
  est.samples = samples;
  est.per_sample.resize(specs.size());
  parallel_for(static_cast<int>(specs.size()), threads, [&](int i) {
    auto M = TranslationSurface::build(specs[i].spec);
    auto cyl = enumerate_cylinders(M, t_sq, 1);
    SampleCount c;
    c.n1 = static_cast<long>(cyl.size());
    c.n2 = Scalar(0);
    for (const auto& z : cyl) c.n2 += z.area;
    c.n2 = c.n2 / M.area();
    Scalar s_sq = shortest_saddle_connection(M).length_sq();
    c.within_upper_bound =
        Scalar(c.n1) * s_sq <= Scalar(Rational(saddle_bound_constant(M.total_multiplicity()))) * t_sq;
    est.per_sample[i] = c;
  });
  Rational sum1(0), sum2(0);
  int used = 0;
  for (const auto& c : est.per_sample) {
    if (c.n1 == 0) {
      ++est.excluded;
      continue;
    }
    ++used;
    sum1 += Rational(c.n1);
    sum2 += c.n2.rational_part();
  }
  if (used == 0) throw PreconditionError("no sample has a cylinder up to T");
  const Rational& T2 = t_sq.rational_part();
  est.c1 = sum1 / (T2 * used);
  est.c2 = sum2 / (T2 * used);
  est.ratio = est.c2 / est.c1;
  return est;
}

}  // namespace flatkit
