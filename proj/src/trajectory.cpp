#include "flatkit/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>

#include "filter.hpp"
#include "flatkit/errors.hpp"
#include "flatkit/interval.hpp"
#include "flatkit/parallel.hpp"

namespace flatkit {

namespace {

inline int nxt(int i) { return i == 2 ? 0 : i + 1; }
inline int prv(int i) { return i == 0 ? 2 : i - 1; }

// Squared distance from the origin to the segment [p, q] is at most r2.
bool segment_near_origin(const Vec2& p, const Vec2& q, const Scalar& r2) {
  Vec2 e = q - p;
  if (dot(p, e).sign() >= 0) return p.norm_sq() <= r2;
  if (dot(q, e).sign() <= 0) return q.norm_sq() <= r2;
  Scalar c = cross(p, e);
  return c * c <= r2 * e.norm_sq();
}

// Sign of cross(a, b), or 2 when doubles cannot decide.
int cross_sign(const Approx& a, const Approx& b) {
  double v = a.x * b.y - a.y * b.x;
  double err = kFilter * (a.mx * b.my + a.my * b.mx + 1e-300);
  return v > err ? 1 : v < -err ? -1 : 2;
}

// segment_near_origin in doubles: 1 yes, 0 no, 2 undecided.
int segment_near_origin_approx(const Approx& p, const Approx& q, double r2) {
  double ex = q.x - p.x, ey = q.y - p.y;
  double m2 = (p.mx + q.mx) * (p.mx + q.mx) + (p.my + q.my) * (p.my + q.my) + r2;
  double tol2 = kFilter * 8 * m2, tol4 = kFilter * 16 * m2 * m2;
  auto le = [](double a, double b, double tol) { return a < b - tol ? 1 : a > b + tol ? 0 : 2; };
  double dp = p.x * ex + p.y * ey, dq = q.x * ex + q.y * ey;
  if (dp > tol2) return le(p.x * p.x + p.y * p.y, r2, tol2);
  if (dq < -tol2) return le(q.x * q.x + q.y * q.y, r2, tol2);
  if (dp >= -tol2 || dq <= tol2) return 2;
  double c = p.x * ey - p.y * ex;
  return le(c * c, r2 * (ex * ex + ey * ey), tol4);
}

struct Frame {
  HalfEdge exit;  // edge of a developed triangle about to be crossed
  int offset;     // developed position of corner 0 of exit.tri
  int lo, hi;     // open wedge of directions, lo included if lo_closed
  bool lo_closed;
};

// Saddle connections leaving corner (t, c) with holonomy in the upper half
// plane and squared length at most r2.
void enumerate_from_corner(const Mesh& mesh, int t, int c, const Scalar& r2,
                           std::vector<SaddleConnection>& out) {
  const auto& T = mesh.tri(t);
  const int z = T.vertex[c];
  const Vec2& e = T.edge[c];
  const Vec2 f = -T.edge[prv(c)];
  const Vec2 right(1, 0), left(-1, 0);

  // Wedge = corner range [e, f) intersected with [right, left).
  Vec2 lo, hi;
  if (in_upper_half(e)) {
    lo = e;
  } else if (cross(e, right).sign() > 0 && cross(right, f).sign() > 0) {
    lo = right;
  } else {
    return;
  }
  hi = (cross(lo, left).sign() > 0 && cross(left, f).sign() > 0) ? left : f;

  auto record = [&](const Vec2& X, HalfEdge at) {
    if (X.norm_sq() > r2) return;
    SaddleConnection s;
    s.holonomy = X;
    s.start = z;
    s.start_key = mesh.key_in_corner(t, c, X);
    s.end = mesh.tri(at.tri).vertex[at.side];
    s.end_key = mesh.key_in_corner(at.tri, at.side, -X);
    out.push_back(std::move(s));
  };

  const int nt = static_cast<int>(mesh.tris.size());
  std::vector<std::array<Vec2, 3>> corner(nt), shift(nt);
  std::vector<std::array<Approx, 3>> corner_d(nt), shift_d(nt);
  for (int k = 0; k < nt; ++k) {
    for (int i = 0; i < 3; ++i) corner[k][i] = mesh.corner_pos(k, i);
  }
  for (int k = 0; k < nt; ++k) {
    for (int i = 0; i < 3; ++i) {
      HalfEdge o = mesh.twin({k, i});
      shift[k][i] = corner[k][i] + mesh.tri(k).edge[i] - corner[o.tri][o.side];
      corner_d[k][i] = approx(corner[k][i]);
      shift_d[k][i] = approx(shift[k][i]);
    }
  }
  const double r2_d = r2.to_double();
  std::deque<Vec2> offsets, rays;
  std::deque<Approx> offsets_d, rays_d;
  auto add_offset = [&](Vec2 v) {
    offsets_d.push_back(approx(v));
    offsets.push_back(std::move(v));
    return static_cast<int>(offsets.size()) - 1;
  };
  auto add_ray = [&](Vec2 v) {
    rays_d.push_back(approx(v));
    rays.push_back(std::move(v));
    return static_cast<int>(rays.size()) - 1;
  };

  int root = add_offset(-corner[t][c]);
  int lo_i = add_ray(lo), hi_i = add_ray(hi);
  bool lo_closed = true;
  // Vertex c+1 lies on the ray e.
  if (same_direction(lo, e)) {
    record(e, {t, nxt(c)});
    lo_closed = false;
  }
  std::vector<Frame> stack;
  stack.push_back({{t, nxt(c)}, root, lo_i, hi_i, lo_closed});
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    const int et = fr.exit.tri, es = fr.exit.side;
    const Approx& od = offsets_d[fr.offset];
    Approx Pd = add(od, corner_d[et][es]);
    Approx Qd = add(od, add(corner_d[et][es], approx(mesh.tri(et).edge[es])));
    int near = segment_near_origin_approx(Pd, Qd, r2_d);
    if (near == 2) {
      Vec2 P = offsets[fr.offset] + corner[et][es];
      near = segment_near_origin(P, P + mesh.tri(et).edge[es], r2) ? 1 : 0;
    }
    if (!near) continue;
    HalfEdge in = mesh.twin(fr.exit);
    const int u = in.tri, j = in.side;
    int off_u = add_offset(offsets[fr.offset] + shift[et][es]);
    Approx Xd = add(offsets_d[off_u], corner_d[u][prv(j)]);
    int c_lo = cross_sign(rays_d[fr.lo], Xd);
    int c_hi = cross_sign(Xd, rays_d[fr.hi]);
    std::optional<Vec2> X;
    if (c_lo == 2 || c_hi == 2) {
      X = offsets[off_u] + corner[u][prv(j)];
      c_lo = cross(rays[fr.lo], *X).sign();
      c_hi = cross(*X, rays[fr.hi]).sign();
    }
    auto exact_X = [&]() -> const Vec2& {
      if (!X) X = offsets[off_u] + corner[u][prv(j)];
      return *X;
    };
    if (c_lo > 0 && c_hi > 0) {
      record(exact_X(), {u, prv(j)});
      int x_i = add_ray(exact_X());
      stack.push_back({{u, prv(j)}, off_u, x_i, fr.hi, false});
      stack.push_back({{u, nxt(j)}, off_u, fr.lo, x_i, fr.lo_closed});
    } else if (c_lo == 0) {
      if (fr.lo_closed) record(exact_X(), {u, prv(j)});
      stack.push_back({{u, prv(j)}, off_u, fr.lo, fr.hi, false});
    } else if (c_lo < 0) {
      stack.push_back({{u, prv(j)}, off_u, fr.lo, fr.hi, fr.lo_closed});
    } else {
      stack.push_back({{u, nxt(j)}, off_u, fr.lo, fr.hi, fr.lo_closed});
    }
  }
}

}  // namespace

SaddleConnection SaddleConnection::transformed(const Mat2& a) const {
  return {a(holonomy), start, {start_key.sheet, a(start_key.dir)}, end,
          {end_key.sheet, a(end_key.dir)}};
}

bool same_connection(const SaddleConnection& a, const SaddleConnection& b) {
  return a.start == b.start && same_key(a.start_key, b.start_key) && a.holonomy == b.holonomy;
}

bool canonical_less(const SaddleConnection& a, const SaddleConnection& b) {
  auto c = a.length_sq() <=> b.length_sq();
  if (c != 0) return c < 0;
  Vec2 da = canonical_direction(a.holonomy), db = canonical_direction(b.holonomy);
  if (direction_less(da, db)) return true;
  if (direction_less(db, da)) return false;
  if (a.start != b.start) return a.start < b.start;
  if (a.start_key.sheet != b.start_key.sheet) return a.start_key.sheet < b.start_key.sheet;
  return in_upper_half(a.holonomy) && !in_upper_half(b.holonomy);
}

std::vector<SaddleConnection> enumerate_saddle_connections(const Mesh& mesh,
                                                           const Scalar& max_len_sq,
                                                           int threads) {
  std::vector<SaddleConnection> out;
  if (max_len_sq.sign() <= 0) return out;
  const int n = static_cast<int>(mesh.tris.size()) * 3;
  std::vector<std::vector<SaddleConnection>> per(n);
  parallel_for(n, threads, [&](int i) { enumerate_from_corner(mesh, i / 3, i % 3, max_len_sq, per[i]); });
  std::vector<SaddleConnection> all;
  for (auto& v : per) {
    for (auto& s : v) {
      all.push_back(s.reversed());
      all.push_back(std::move(s));
    }
  }
  // Sort on cached lengths; doubles settle most comparisons.
  struct Key {
    double approx, mag;
    int index;
  };
  std::vector<Key> keys;
  keys.reserve(all.size());
  for (int i = 0; i < static_cast<int>(all.size()); ++i) {
    Scalar l = all[i].length_sq();
    keys.push_back({l.to_double(), magnitude(l), i});
  }
  std::sort(keys.begin(), keys.end(), [&](const Key& a, const Key& b) {
    double tol = kFilter * 64 * (a.mag + b.mag);
    if (a.approx < b.approx - tol) return true;
    if (a.approx > b.approx + tol) return false;
    return canonical_less(all[a.index], all[b.index]);
  });
  out.reserve(all.size());
  for (const auto& k : keys) out.push_back(std::move(all[k.index]));
  return out;
}

std::vector<SaddleConnection> enumerate_saddle_connections(const TranslationSurface& M,
                                                           const Scalar& max_len_sq,
                                                           int threads) {
  return enumerate_saddle_connections(M.mesh(), max_len_sq, threads);
}

SaddleConnection shortest_saddle_connection(const TranslationSurface& M) {
  // Mesh edges join singular points, so the shortest edge bounds s from above.
  const Mesh& mesh = M.mesh();
  Scalar best = mesh.tris[0].edge[0].norm_sq();
  for (const auto& T : mesh.tris) {
    for (const auto& e : T.edge) {
      Scalar l = e.norm_sq();
      if (l < best) best = l;
    }
  }
  auto all = enumerate_saddle_connections(mesh, best);
  if (all.empty()) throw InternalError("no saddle connection up to the shortest mesh edge");
  return all.front();
}

std::optional<SaddleConnection> connection_along(const Mesh& mesh, int sing, const ConeKey& key,
                                                 const Scalar& max_len_sq) {
  HalfEdge corner = mesh.locate(sing, key);
  // Scale the direction to a rational multiple at least as long as the cap.
  Scalar q = max_len_sq / key.dir.norm_sq();
  Interval qi = enclose(q, 32);
  Rational lambda = sqrt_enclose(Interval(qi.hi), 32).hi;
  if (lambda < 1) lambda = 1;
  Vec2 u = Scalar(lambda) * key.dir;
  auto w = walk_from_corner(mesh, corner, u);
  if (w.status == WalkResult::kInside) return std::nullopt;
  if (w.vertex_offset.norm_sq() > max_len_sq) return std::nullopt;
  SaddleConnection s;
  s.holonomy = w.vertex_offset;
  s.start = sing;
  s.start_key = key;
  s.end = mesh.tri(w.vertex.tri).vertex[w.vertex.side];
  s.end_key = mesh.key_in_corner(w.vertex.tri, w.vertex.side, -w.vertex_offset);
  return s;
}

WalkResult walk_connection(const Mesh& mesh, const SaddleConnection& s) {
  HalfEdge corner = mesh.locate(s.start, s.start_key);
  auto w = walk_from_corner(mesh, corner, s.holonomy, true);
  if (w.status != WalkResult::kAtVertex) throw PreconditionError("not a saddle connection");
  return w;
}

bool disjoint(const Mesh& mesh, const SaddleConnection& a, const SaddleConnection& b) {
  DisjointnessOracle oracle(mesh, {a});
  return oracle.disjoint_from_all(b);
}

DisjointnessOracle::DisjointnessOracle(const Mesh& mesh,
                                       const std::vector<SaddleConnection>& family)
    : mesh_(mesh), family_(family) {
  pieces_.reserve(family.size());
  for (const auto& s : family) pieces_.push_back(closed_pieces(mesh, walk_connection(mesh, s)));
}

bool DisjointnessOracle::disjoint_from_all(const SaddleConnection& s) const {
  std::vector<Piece> mine;
  bool walked = false;
  for (std::size_t i = 0; i < family_.size(); ++i) {
    const auto& f = family_[i];
    if (same_connection(f, s) || same_connection(f, s.reversed())) return false;
    if (!walked) {
      mine = closed_pieces(mesh_, walk_connection(mesh_, s));
      walked = true;
    }
    for (const auto& p : mine) {
      for (const auto& q : pieces_[i]) {
        if (pieces_meet(mesh_, p, q)) return false;
      }
    }
  }
  return true;
}

bool DisjointnessOracle::pairwise_disjoint() const {
  for (std::size_t i = 0; i < family_.size(); ++i) {
    for (std::size_t j = i + 1; j < family_.size(); ++j) {
      if (same_connection(family_[i], family_[j]) ||
          same_connection(family_[i], family_[j].reversed()))
        return false;
      for (const auto& p : pieces_[i]) {
        for (const auto& q : pieces_[j]) {
          if (pieces_meet(mesh_, p, q)) return false;
        }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

std::string to_string(Trajectory::Status s) {
  switch (s) {
    case Trajectory::kReachedLengthCap:
      return "reached-length-cap";
    case Trajectory::kHitSingularity:
      return "hit-singularity";
    case Trajectory::kReturnedToStart:
      return "returned-to-start";
  }
  return "?";
}

namespace {

struct BoundaryHit {
  Scalar lambda;  // parameter along v
  int edge = -1;
  bool at_vertex = false;
};

// First boundary point of polygon `poly` hit by y + lambda*v, lambda > 0.
BoundaryHit first_exit(const std::vector<Vec2>& poly, const Vec2& y, const Vec2& v) {
  const int n = static_cast<int>(poly.size());
  BoundaryHit best;
  bool have = false;
  auto consider = [&](const Scalar& lambda, int edge, bool vertex) {
    if (lambda.sign() <= 0) return;
    if (!have || lambda < best.lambda || (lambda == best.lambda && vertex && !best.at_vertex)) {
      best = {lambda, edge, vertex};
      have = true;
    }
  };
  for (int k = 0; k < n; ++k) {
    const Vec2& a = poly[k];
    Vec2 e = poly[(k + 1) % n] - a;
    Scalar den = cross(v, e);
    if (den.is_zero()) {
      // Parallel edge: only its endpoints can stop the ray.
      for (int end = 0; end < 2; ++end) {
        Vec2 w = poly[(k + end) % n] - y;
        if (cross(v, w).is_zero() && dot(v, w).sign() > 0) {
          consider(dot(v, w) / v.norm_sq(), k, true);
        }
      }
      continue;
    }
    Vec2 w = a - y;
    Scalar lambda = cross(w, e) / den;
    Scalar mu = cross(w, v) / den;
    if (mu.sign() < 0 || mu > Scalar(1)) continue;
    consider(lambda, k, mu.is_zero() || mu == Scalar(1));
  }
  if (!have) throw InternalError("ray does not leave the polygon");
  return best;
}

bool on_open_segment(const Vec2& a, const Vec2& b, const Vec2& x) {
  if (!cross(b - a, x - a).is_zero()) return false;
  return dot(x - a, x - b).sign() < 0;
}

}  // namespace

Trajectory trace_ray(const TranslationSurface& M, const SurfacePoint& x, const Vec2& v,
                     const Scalar& cap_sq) {
  if (v.is_zero()) throw PreconditionError("zero direction");
  const auto& spec = M.spec();
  if (x.polygon < 0 || x.polygon >= static_cast<int>(spec.polygons.size()))
    throw PreconditionError("point outside the surface");
  const auto& P0 = spec.polygons[x.polygon].vertices;
  if (!polygon_contains(P0, x.pos)) throw PreconditionError("point outside the surface");

  // Equivalent representations of x (two when x lies on an edge).
  std::vector<SurfacePoint> copies{x};
  int start_vertex = -1;
  for (int k = 0; k < static_cast<int>(P0.size()); ++k) {
    if (P0[k] == x.pos) start_vertex = k;
  }
  int cur = x.polygon;
  Vec2 y = x.pos;
  if (start_vertex < 0) {
    for (int k = 0; k < static_cast<int>(P0.size()); ++k) {
      const Vec2& a = P0[k];
      const Vec2& b = P0[(k + 1) % P0.size()];
      if (!on_open_segment(a, b, x.pos)) continue;
      EdgeRef g = M.glued_to({x.polygon, k});
      const auto& Pg = spec.polygons[g.polygon].vertices;
      Vec2 xg = Pg[g.edge] + (x.pos - b);
      copies.push_back({g.polygon, xg});
      // Leaving outward: continue from the glued copy.
      if (cross(b - a, v).sign() < 0) {
        cur = g.polygon;
        y = xg;
      }
    }
  } else {
    const int n = static_cast<int>(P0.size());
    Vec2 out_e = P0[(start_vertex + 1) % n] - P0[start_vertex];
    Vec2 in_e = P0[start_vertex] - P0[(start_vertex + n - 1) % n];
    // v must lie in [out_e, -in_e) counterclockwise.
    bool ok = same_direction(v, out_e) ||
              (angle_less(out_e, v, -in_e) && !same_direction(v, -in_e));
    if (!ok) throw PreconditionError("direction does not point into the polygon corner");
  }

  Trajectory tr;
  const std::size_t guard = 10000000;
  for (std::size_t step = 0; step < guard; ++step) {
    const auto& poly = spec.polygons[cur].vertices;
    BoundaryHit hit = first_exit(poly, y, v);
    Vec2 z = y + hit.lambda * v;
    // Return to x inside this segment.
    if (start_vertex < 0 && step > 0) {
      for (const auto& c : copies) {
        if (c.polygon != cur) continue;
        if (c.pos == y || on_open_segment(y, z, c.pos) || c.pos == z) {
          Vec2 d = tr.displacement + (c.pos - y);
          if (d.norm_sq() <= cap_sq) {
            tr.segments.push_back({cur, y, c.pos});
            tr.displacement = d;
            tr.length_sq = d.norm_sq();
            tr.status = Trajectory::kReturnedToStart;
            return tr;
          }
        }
      }
    } else if (start_vertex < 0 && step == 0) {
      // A first segment can only return through a later copy of x.
    }
    Vec2 d = tr.displacement + (z - y);
    tr.segments.push_back({cur, y, z});
    tr.displacement = d;
    tr.length_sq = d.norm_sq();
    if (hit.at_vertex && tr.length_sq <= cap_sq) {
      tr.status = Trajectory::kHitSingularity;
      return tr;
    }
    if (tr.length_sq >= cap_sq) {
      tr.status = Trajectory::kReachedLengthCap;
      return tr;
    }
    const int n = static_cast<int>(poly.size());
    EdgeRef g = M.glued_to({cur, hit.edge});
    const auto& Pg = spec.polygons[g.polygon].vertices;
    Vec2 b = poly[(hit.edge + 1) % n];
    y = Pg[g.edge] + (z - b);
    cur = g.polygon;
    // The start copy on an edge can coincide with the entry point.
    if (start_vertex < 0) {
      for (const auto& c : copies) {
        if (c.polygon == cur && c.pos == y) {
          tr.status = Trajectory::kReturnedToStart;
          return tr;
        }
      }
    }
  }
  throw InternalError("ray tracing exceeded its step budget");
}

AnchoredPoint anchor(const TranslationSurface& M, const SurfacePoint& x) {
  const auto& spec = M.spec();
  if (x.polygon < 0 || x.polygon >= static_cast<int>(spec.polygons.size()))
    throw PreconditionError("point outside the surface");
  const auto& poly = spec.polygons[x.polygon].vertices;
  const int n = static_cast<int>(poly.size());
  for (const auto& tri : ear_clip(poly)) {
    std::vector<Vec2> t{poly[tri[0]], poly[tri[1]], poly[tri[2]]};
    if (!polygon_contains(t, x.pos)) continue;
    for (int k : tri) {
      if (poly[k] == x.pos) throw PreconditionError("point is singular");
    }
    const int j = tri[0];
    const int z = M.vertex_class(x.polygon, j);
    const Mesh& mesh = M.mesh();
    Vec2 dir = x.pos - poly[j];
    Vec2 out_e = poly[(j + 1) % n] - poly[j];
    int sheet = M.corner_sheet(x.polygon, j);
    if (angle_less(mesh.ref[z], dir, out_e)) sheet = (sheet + 1) % mesh.multiplicity[z];
    return {z, {sheet, dir}, dir};
  }
  throw PreconditionError("point outside the surface");
}

}  // namespace flatkit
