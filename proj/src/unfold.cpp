#include "flatkit/unfold.hpp"

#include <algorithm>

#include "flatkit/errors.hpp"

namespace flatkit {

namespace {

Scalar half_root(long d) { return Scalar(Rational(0), Rational(1, 2), d); }

Mat2 reflection_along(const Vec2& e) {
  const Scalar n = e.norm_sq();
  const Scalar xx = e.x * e.x, yy = e.y * e.y, xy2 = Scalar(2) * e.x * e.y;
  return {(xx - yy) / n, xy2 / n, xy2 / n, (yy - xx) / n};
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& x) {
  if (orient(a, b, x) != 0) return false;
  return dot(x - a, b - a).sign() >= 0 && dot(x - b, a - b).sign() >= 0;
}

}  // namespace

std::pair<Scalar, Scalar> unit_root(long k, long q) {
  if (q <= 0) throw PreconditionError("bad root of unity");
  Rational deg(360 * (((k % q) + q) % q), q);
  deg.canonicalize();
  if (deg.get_den() != 1) throw PreconditionError("unsupported angle denominator " + std::to_string(q));
  long dg = deg.get_num().get_si();
  const long r = dg % 90;
  std::pair<Scalar, Scalar> cs;
  switch (r) {
    case 0: cs = {Scalar(1), Scalar(0)}; break;
    case 30: cs = {half_root(3), Scalar(Rational(1, 2))}; break;
    case 45: cs = {half_root(2), half_root(2)}; break;
    case 60: cs = {Scalar(Rational(1, 2)), half_root(3)}; break;
    default: throw PreconditionError("unsupported angle denominator " + std::to_string(q));
  }
  for (long quarter = dg / 90; quarter > 0; --quarter) cs = {-cs.second, cs.first};
  return cs;
}

long angle_field(const std::vector<Rational>& angles) {
  long d = 0;
  for (const auto& a : angles) {
    long q = a.get_den().get_si();
    long need = 0;
    switch (q) {
      case 1: case 2: case 4: need = 0; break;
      case 8: need = 2; break;
      case 3: case 6: case 12: need = 3; break;
      default:
        throw PreconditionError("unsupported angle denominator " + std::to_string(q) +
                                " (supported: 1, 2, 3, 4, 6, 8, 12)");
    }
    if (need != 0 && d != 0 && need != d)
      throw PreconditionError("angle set needs both sqrt 2 and sqrt 3");
    if (need != 0) d = need;
  }
  return d;
}

void validate(const RationalPolygon& Q) {
  const int n = static_cast<int>(Q.vertices.size());
  if (n < 3) throw ValidationError("table needs at least 3 vertices");
  if (static_cast<int>(Q.angles.size()) != n) throw ValidationError("one angle per vertex required");
  if (!polygon_is_simple(Q.vertices)) throw ValidationError("table is not a simple polygon");
  if (polygon_area(Q.vertices).sign() <= 0) throw ValidationError("table must be counterclockwise");
  Rational sum(0);
  for (const auto& a : Q.angles) {
    if (a <= 0 || a >= 2 || a == 1) throw ValidationError("angle out of range: " + rational_to_string(a) + " pi");
    sum += a;
  }
  if (sum != n - 2) throw ValidationError("angles do not sum to (n - 2) pi");
  for (int i = 0; i < n; ++i) {
    const Vec2 in = Q.vertices[i] - Q.vertices[(i + n - 1) % n];
    const Vec2 out = Q.vertices[(i + 1) % n] - Q.vertices[i];
    // e^(i theta) is the direction of -in relative to out.
    const Scalar re = -dot(in, out), im = cross(out, -in);
    const Scalar nn = re * re + im * im;
    auto [c, s] = unit_root(Q.angles[i].get_num().get_si(), Q.angles[i].get_den().get_si());
    if ((re * re - im * im) / nn != c || Scalar(2) * re * im / nn != s || (im.sign() > 0) != (Q.angles[i] < 1))
      throw ValidationError("angle at vertex " + std::to_string(i) + " does not match the coordinates");
  }
}

RationalPolygon polygon_from_angles(const std::vector<Rational>& angles) {
  angle_field(angles);
  Rational sum(0);
  for (const auto& a : angles) sum += a;
  if (sum != static_cast<long>(angles.size()) - 2) throw ValidationError("angles do not sum to (n - 2) pi");
  RationalPolygon Q;
  Q.angles = angles;
  auto tan_of = [](const Rational& a) {
    auto [c, s] = unit_root(a.get_num().get_si(), a.get_den().get_si());
    return s / (Scalar(1) + c);
  };
  if (angles.size() == 3) {
    const Rational half(1, 2);
    Vec2 apex;
    if (angles[0] == half) {
      apex = {0, tan_of(angles[1])};
    } else if (angles[1] == half) {
      apex = {1, tan_of(angles[0])};
    } else {
      Scalar ta = tan_of(angles[0]), tb = tan_of(angles[1]);
      Scalar x = tb / (ta + tb);
      apex = {x, x * ta};
    }
    Q.vertices = {Vec2(0, 0), Vec2(1, 0), apex};
  } else if (angles.size() == 4 &&
             std::all_of(angles.begin(), angles.end(), [](const Rational& a) { return a == Rational(1, 2); })) {
    Q.vertices = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  } else {
    throw PreconditionError("coordinates are required for this table");
  }
  validate(Q);
  return Q;
}

int ReflectionGroup::index_of(const Mat2& g) const {
  for (int i = 0; i < order(); ++i) {
    if (elements[i] == g) return i;
  }
  return -1;
}

ReflectionGroup reflection_group(const RationalPolygon& Q, std::size_t cap) {
  ReflectionGroup G;
  const int n = static_cast<int>(Q.vertices.size());
  for (int i = 0; i < n; ++i) {
    Mat2 r = reflection_along(Q.vertices[(i + 1) % n] - Q.vertices[i]);
    G.generators.push_back(r);
  }
  G.elements.push_back(Mat2::identity());
  for (std::size_t k = 0; k < G.elements.size(); ++k) {
    for (const auto& r : G.generators) {
      Mat2 h = G.elements[k] * r;
      if (G.index_of(h) >= 0) continue;
      if (G.elements.size() >= cap)
        throw PreconditionError("table is not rational: reflection group exceeds " + std::to_string(cap) +
                                " elements");
      G.elements.push_back(std::move(h));
    }
  }
  return G;
}

Vec2 UnfoldingMap::to_table(int copy, const Vec2& z) const {
  const Mat2& g = group.elements.at(copy);
  // g is orthogonal: its inverse is its transpose.
  return {g.a * z.x + g.c * z.y, g.b * z.x + g.d * z.y};
}

int UnfoldingMap::table_vertex(int copy, int j) const {
  const int n = static_cast<int>(table.vertices.size());
  if (group.elements.at(copy).det().sign() > 0) return j;
  return n - 1 - j;
}

Unfolding unfold(const RationalPolygon& Q, std::size_t cap) {
  validate(Q);
  long d = angle_field(Q.angles);
  for (const auto& v : Q.vertices) {
    long f = v.field();
    if (f != 0 && d != 0 && f != d) throw FieldMismatch("table coordinates leave the angle field");
    if (f != 0) d = f;
  }
  ReflectionGroup G = reflection_group(Q, cap);
  const int n = static_cast<int>(Q.vertices.size());
  const int N = G.order();
  SurfaceSpec spec;
  spec.d = d;
  auto side_index = [&](int k, int i) {
    return G.elements[k].det().sign() > 0 ? i : ((n - 2 - i) % n + n) % n;
  };
  for (int k = 0; k < N; ++k) {
    const Mat2& g = G.elements[k];
    PolygonSpec p;
    for (int j = 0; j < n; ++j) {
      int src = g.det().sign() > 0 ? j : n - 1 - j;
      p.vertices.push_back(g(Q.vertices[src]));
    }
    spec.polygons.push_back(std::move(p));
  }
  for (int k = 0; k < N; ++k) {
    for (int i = 0; i < n; ++i) {
      int partner = G.index_of(G.elements[k] * G.generators[i]);
      if (partner < 0) throw InternalError("reflection group not closed");
      if (k < partner) spec.gluings.push_back({{k, side_index(k, i)}, {partner, side_index(partner, i)}});
    }
  }
  Unfolding out{TranslationSurface::build(std::move(spec)), {Q, std::move(G)}};
  return out;
}

BilliardOrbit project_orbit(const UnfoldingMap& U, const Trajectory& t) {
  BilliardOrbit out;
  out.status = t.status;
  for (const auto& seg : t.segments) {
    Vec2 a = U.to_table(seg.polygon, seg.from), b = U.to_table(seg.polygon, seg.to);
    if (out.points.empty() || out.points.back() != a) out.points.push_back(a);
    if (out.points.back() != b) out.points.push_back(b);
  }
  return out;
}

std::vector<Vec2> billiard_periodic_directions(const Unfolding& U, const Vec2& x, const Scalar& t_sq,
                                               int threads) {
  const auto& V = U.map.table.vertices;
  const int n = static_cast<int>(V.size());
  if (!polygon_contains(V, x)) throw PreconditionError("point outside the table");
  for (int i = 0; i < n; ++i) {
    if (on_segment(V[i], V[(i + 1) % n], x)) throw PreconditionError("point on the table boundary");
  }
  std::vector<Vec2> dirs;
  for (const auto& c : cylinders_through_point(U.surface, {0, x}, t_sq, threads)) dirs.push_back(c.direction);
  std::sort(dirs.begin(), dirs.end(), direction_less);
  dirs.erase(std::unique(dirs.begin(), dirs.end(), [](const Vec2& a, const Vec2& b) { return same_direction(a, b); }),
             dirs.end());
  return dirs;
}

}  // namespace flatkit
