#include "flatkit/walk.hpp"

#include "flatkit/errors.hpp"

namespace flatkit {

namespace {

inline int nxt(int i) { return i == 2 ? 0 : i + 1; }
inline int prv(int i) { return i == 0 ? 2 : i - 1; }

// Point where the line t*u meets the line through p with direction e.
Vec2 line_hit(const Vec2& u, const Vec2& p, const Vec2& e) {
  Scalar lambda = cross(p, e) / cross(u, e);
  return {lambda * u.x, lambda * u.y};
}

}  // namespace

bool same_key(const ConeKey& a, const ConeKey& b) {
  return a.sheet == b.sheet && same_direction(a.dir, b.dir);
}

ConeKey rotate_ccw(const Mesh& mesh, int sing, const ConeKey& k, const Vec2& to) {
  int m = mesh.multiplicity[sing];
  int s = k.sheet + (angle_less(mesh.ref[sing], to, k.dir) ? 1 : 0);
  return {s % m, to};
}

ConeKey rotate_cw(const Mesh& mesh, int sing, const ConeKey& k, const Vec2& to) {
  int m = mesh.multiplicity[sing];
  int s = k.sheet - (angle_less(mesh.ref[sing], k.dir, to) ? 1 : 0);
  return {(s + m) % m, to};
}

ConeAngle cone_angle(const Mesh& mesh, int sing, const ConeKey& a, const ConeKey& b) {
  int m = mesh.multiplicity[sing];
  const Vec2& r = mesh.ref[sing];
  // Full turns: sheet difference, minus one if b's planar angle (from the
  // reference) is smaller than a's.
  int turns = b.sheet - a.sheet;
  if (angle_less(r, b.dir, a.dir)) --turns;
  turns = ((turns % m) + m) % m;
  ConeAngle out;
  out.turns = turns;
  int c = cross(a.dir, b.dir).sign();
  if (c > 0) {
    out.half = 0;
  } else if (c < 0) {
    out.half = 1;
  } else if (dot(a.dir, b.dir).sign() > 0) {
    out.half = 0;
    out.exact = true;
  } else {
    out.half = 1;
    out.exact = true;
  }
  return out;
}

WalkResult walk_from_corner(const Mesh& mesh, HalfEdge start, const Vec2& u, bool record) {
  if (u.is_zero()) throw PreconditionError("zero-length segment");
  WalkResult res;
  res.start = start;
  const int t0 = start.tri, c = start.side;
  const auto& T0 = mesh.tri(t0);
  // Developed frame: the start vertex sits at the origin.
  Vec2 offset = -mesh.corner_pos(t0, c);
  const Vec2& E = u;

  if (same_direction(u, T0.edge[c])) {
    auto cmp = compare_norm(u, T0.edge[c]);
    if (record) res.pieces.push_back({t0, mesh.corner_pos(t0, c), E - offset});
    res.along_edge = true;
    if (cmp < 0) {
      res.status = WalkResult::kInside;
      res.end = {t0, E - offset};
    } else {
      res.status = cmp == 0 ? WalkResult::kAtVertex : WalkResult::kHitVertex;
      res.vertex = {t0, nxt(c)};
      res.vertex_offset = T0.edge[c];
      if (cmp > 0 && record) res.pieces.back().to = mesh.corner_pos(t0, nxt(c));
    }
    return res;
  }

  // Inside the corner: either the endpoint is in this triangle or the
  // segment leaves through the opposite edge.
  {
    Vec2 A = offset + mesh.corner_pos(t0, nxt(c));
    Vec2 B = offset + mesh.corner_pos(t0, prv(c));
    if (orient(A, B, E) >= 0) {
      res.status = WalkResult::kInside;
      res.end = {t0, E - offset};
      if (record) res.pieces.push_back({t0, mesh.corner_pos(t0, c), E - offset});
      return res;
    }
    if (record) {
      Vec2 hit = line_hit(u, A, B - A);
      res.pieces.push_back({t0, mesh.corner_pos(t0, c), hit - offset});
    }
  }

  HalfEdge exit{t0, nxt(c)};
  for (std::size_t guard = 0;; ++guard) {
    if (guard > 100000000) throw InternalError("segment walk did not terminate");
    const auto& Tp = mesh.tri(exit.tri);
    // Developed endpoints of the exit edge.
    Vec2 P = offset + mesh.corner_pos(exit.tri, exit.side);
    Vec2 Q = P + Tp.edge[exit.side];
    HalfEdge in = mesh.twin(exit);
    const int u_t = in.tri, j = in.side;
    // In the new triangle, corner j sits at Q and corner j+1 at P.
    offset = Q - mesh.corner_pos(u_t, j);
    const Vec2& A = P;  // right endpoint as seen from the start
    const Vec2& B = Q;  // left endpoint
    Vec2 X = offset + mesh.corner_pos(u_t, prv(j));
    Vec2 entry;
    if (record) entry = line_hit(u, P, Q - P) - offset;

    if (orient(A, X, E) >= 0 && orient(X, B, E) >= 0) {
      if (record) res.pieces.push_back({u_t, entry, E - offset});
      if (E == X) {
        res.status = WalkResult::kAtVertex;
        res.vertex = {u_t, prv(j)};
        res.vertex_offset = X;
      } else {
        res.status = WalkResult::kInside;
        res.end = {u_t, E - offset};
      }
      return res;
    }
    int side = cross(u, X).sign();
    if (side == 0) {
      if (record) res.pieces.push_back({u_t, entry, X - offset});
      res.status = WalkResult::kHitVertex;
      res.vertex = {u_t, prv(j)};
      res.vertex_offset = X;
      return res;
    }
    // X on the left: leave through A-X (side j+1); else through X-B.
    HalfEdge next = side > 0 ? HalfEdge{u_t, nxt(j)} : HalfEdge{u_t, prv(j)};
    if (record) {
      Vec2 p0 = offset + mesh.corner_pos(u_t, next.side);
      Vec2 hit = line_hit(u, p0, mesh.tri(u_t).edge[next.side]);
      res.pieces.push_back({u_t, entry, hit - offset});
    }
    exit = next;
  }
}

MeshPoint locate(const Mesh& mesh, const AnchoredPoint& p) {
  HalfEdge corner = mesh.locate(p.sing, p.key);
  auto w = walk_from_corner(mesh, corner, p.offset);
  if (w.status != WalkResult::kInside)
    throw PreconditionError("anchored segment meets a singular point");
  return w.end;
}

std::vector<Piece> closed_pieces(const Mesh& mesh, const WalkResult& w) {
  std::vector<Piece> out = w.pieces;
  if (w.along_edge && !w.pieces.empty()) {
    // The segment runs along edge (t, c) where corner c is its start.
    const Piece& p = w.pieces.front();
    const HalfEdge e = w.start;
    HalfEdge o = mesh.twin(e);
    // The start of e is the end of its twin.
    Vec2 start_here = mesh.corner_pos(e.tri, e.side);
    Vec2 start_there = mesh.corner_pos(o.tri, o.side) + mesh.edge(o);
    Vec2 shift = start_there - start_here;
    out.push_back({o.tri, p.from + shift, p.to + shift});
  }
  return out;
}

bool pieces_meet(const Mesh& mesh, const Piece& p, const Piece& q) {
  if (p.tri != q.tri) return false;
  auto is_vertex = [&](const Vec2& x) {
    for (int c = 0; c < 3; ++c) {
      if (mesh.corner_pos(p.tri, c) == x) return true;
    }
    return false;
  };
  const Vec2 &a = p.from, &b = p.to, &c = q.from, &d = q.to;
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  auto on_segment = [](const Vec2& s, const Vec2& e, const Vec2& x) {
    // x collinear with s-e assumed.
    return dot(x - s, x - e).sign() <= 0;
  };
  if (o1 == 0 && o2 == 0) {
    // Collinear: overlap of positive length, or a shared non-vertex point.
    Vec2 dir = b - a;
    auto param = [&](const Vec2& x) { return dot(x - a, dir); };
    Scalar p0 = Scalar(0), p1 = param(b), q0 = param(c), q1 = param(d);
    if (q1 < q0) std::swap(q0, q1);
    Scalar lo = q0 > p0 ? q0 : p0;
    Scalar hi = q1 < p1 ? q1 : p1;
    if (lo < hi) return true;
    if (lo == hi) {
      // A single shared point: an endpoint of one of the pieces.
      for (const Vec2* x : {&a, &b, &c, &d}) {
        if (param(*x) == lo && on_segment(a, b, *x) && on_segment(c, d, *x)) return !is_vertex(*x);
      }
    }
    return false;
  }
  if (o1 == 0 && on_segment(a, b, c) && !is_vertex(c)) return true;
  if (o2 == 0 && on_segment(a, b, d) && !is_vertex(d)) return true;
  if (o3 == 0 && on_segment(c, d, a) && !is_vertex(a)) return true;
  if (o4 == 0 && on_segment(c, d, b) && !is_vertex(b)) return true;
  return false;
}

}  // namespace flatkit
