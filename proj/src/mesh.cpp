#include "flatkit/mesh.hpp"

#include <string>

#include "flatkit/errors.hpp"

namespace flatkit {

namespace {

inline int nxt(int i) { return i == 2 ? 0 : i + 1; }
inline int prv(int i) { return i == 0 ? 2 : i - 1; }

Scalar incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  Vec2 ad = a - d, bd = b - d, cd = c - d;
  Scalar la = ad.norm_sq(), lb = bd.norm_sq(), lc = cd.norm_sq();
  return la * cross(bd, cd) - lb * cross(ad, cd) + lc * cross(ad, bd);
}

}  // namespace

Vec2 Mesh::corner_pos(int t, int c) const {
  const auto& T = tris[t];
  if (c == 0) return {};
  if (c == 1) return T.edge[0];
  return -T.edge[2];
}

bool Mesh::corner_contains(int t, int c, const Vec2& u) const {
  const auto& T = tris[t];
  const Vec2& start = T.edge[c];
  Vec2 end = -T.edge[prv(c)];
  if (same_direction(u, start)) return true;
  return cross(start, u).sign() > 0 && cross(u, end).sign() > 0;
}

int Mesh::sheet_in_corner(int t, int c, const Vec2& u) const {
  const auto& T = tris[t];
  int s = T.sheet[c];
  const Vec2& r = ref[T.vertex[c]];
  if (angle_less(r, u, T.edge[c])) s = (s + 1) % multiplicity[T.vertex[c]];
  return s;
}

bool Mesh::key_less(int sing, const ConeKey& a, const ConeKey& b) const {
  if (a.sheet != b.sheet) return a.sheet < b.sheet;
  return angle_less(ref[sing], a.dir, b.dir);
}

HalfEdge Mesh::locate(int sing, const ConeKey& key) const {
  for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
    for (int c = 0; c < 3; ++c) {
      if (tris[t].vertex[c] != sing) continue;
      if (!corner_contains(t, c, key.dir)) continue;
      if (sheet_in_corner(t, c, key.dir) == key.sheet) return {t, c};
    }
  }
  throw InternalError("cone position not found at singularity " + std::to_string(sing));
}

HalfEdge Mesh::next_corner_ccw(HalfEdge corner) const {
  // The ray -edge[c-1] is the start ray of the twin of edge c-1.
  return twin({corner.tri, prv(corner.side)});
}

std::vector<std::vector<HalfEdge>> Mesh::corners_by_singularity() const {
  std::vector<std::vector<HalfEdge>> out(ref.size());
  std::vector<std::array<bool, 3>> seen(tris.size(), {false, false, false});
  for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
    for (int c = 0; c < 3; ++c) {
      if (seen[t][c]) continue;
      int s = tris[t].vertex[c];
      // Start the cycle at the corner containing the reference ray on sheet 0.
      HalfEdge start = locate(s, {0, ref[s]});
      HalfEdge h = start;
      do {
        seen[h.tri][h.side] = true;
        out[s].push_back(h);
        h = next_corner_ccw(h);
      } while (h != start);
    }
  }
  return out;
}

std::vector<int> Mesh::recompute_sheets() {
  std::vector<int> winding(ref.size(), -1);
  std::vector<std::array<bool, 3>> seen(tris.size(), {false, false, false});
  for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
    for (int c = 0; c < 3; ++c) {
      if (seen[t][c]) continue;
      int s = tris[t].vertex[c];
      if (winding[s] >= 0) throw InternalError("singularity split across corner cycles");
      const Vec2& r = ref[s];
      // Find a corner whose range contains the reference ray.
      HalfEdge start{t, c};
      HalfEdge h = start;
      bool found = false;
      do {
        if (corner_contains(h.tri, h.side, r)) {
          start = h;
          found = true;
          break;
        }
        h = next_corner_ccw(h);
      } while (h != start);
      if (!found) throw InternalError("reference ray not inside its cone");
      // Sheet of the start ray of `start`: it is at or after the reference
      // ray within this corner only if it equals it.
      int sheet = same_direction(tris[start.tri].edge[start.side], r) ? 0 : -1;
      int wraps = 0;
      h = start;
      do {
        auto& T = tris[h.tri];
        seen[h.tri][h.side] = true;
        T.sheet[h.side] = sheet;
        HalfEdge n = next_corner_ccw(h);
        const Vec2& from = T.edge[h.side];
        const Vec2& to = tris[n.tri].edge[n.side];
        // Passing the reference ray while turning from `from` to `to`.
        if (!angle_less(r, from, to)) {
          ++sheet;
          ++wraps;
        }
        h = n;
      } while (h != start);
      if (wraps < 1) throw InternalError("cone with no full turn");
      winding[s] = wraps;
      // Normalize: the start corner holds sheet 0 for directions >= ref.
      // Sheets were numbered from -1 when the start ray precedes ref.
      h = start;
      do {
        auto& T = tris[h.tri];
        T.sheet[h.side] = ((T.sheet[h.side] % wraps) + wraps) % wraps;
        h = next_corner_ccw(h);
      } while (h != start);
    }
  }
  multiplicity = winding;
  return winding;
}

bool Mesh::is_locally_delaunay(int t, int i) const {
  HalfEdge o = tris[t].twin[i];
  Vec2 X = corner_pos(t, i);
  Vec2 Y = corner_pos(t, nxt(i));
  Vec2 A = corner_pos(t, nxt(nxt(i)));
  Vec2 B = X + tris[o.tri].edge[nxt(o.side)];
  return incircle(X, Y, A, B).sign() <= 0;
}

void Mesh::flip(int t, int i) {
  HalfEdge o = tris[t].twin[i];
  int u = o.tri, j = o.side;
  if (u == t) throw InternalError("flip of an edge glued to its own triangle");
  const Triangle T = tris[t];
  const Triangle U = tris[u];
  const int i1 = nxt(i), i2 = nxt(i1);
  const int j1 = nxt(j), j2 = nxt(j1);

  Vec2 X = corner_pos(t, i);
  Vec2 Y = corner_pos(t, i1);
  Vec2 A = corner_pos(t, i2);
  Vec2 B = X + U.edge[j1];
  if (orient(X, B, Y) <= 0 || orient(Y, A, X) <= 0 || orient(A, X, B) <= 0 ||
      orient(B, Y, A) <= 0) {
    throw InternalError("flip of a non-convex quadrilateral");
  }

  Triangle nt, nu;
  nt.edge = {X - A, B - X, A - B};
  nu.edge = {Y - B, A - Y, B - A};
  nt.vertex = {T.vertex[i2], T.vertex[i], U.vertex[j2]};
  nu.vertex = {U.vertex[j2], T.vertex[i1], T.vertex[i2]};
  nt.sheet = {T.sheet[i2], U.sheet[j1], sheet_in_corner(u, j2, A - B)};
  nu.sheet = {U.sheet[j2], T.sheet[i1], sheet_in_corner(t, i2, B - A)};

  // Old half-edges that survive, and where they land.
  const HalfEdge old_sides[4] = {{t, i2}, {u, j1}, {u, j2}, {t, i1}};
  const HalfEdge new_sides[4] = {{t, 0}, {t, 1}, {u, 0}, {u, 1}};
  auto remap = [&](HalfEdge h) {
    for (int k = 0; k < 4; ++k) {
      if (h == old_sides[k]) return new_sides[k];
    }
    return h;
  };
  const HalfEdge old_twins[4] = {T.twin[i2], U.twin[j1], U.twin[j2], T.twin[i1]};

  tris[t] = nt;
  tris[u] = nu;
  tris[t].twin[2] = {u, 2};
  tris[u].twin[2] = {t, 2};
  for (int k = 0; k < 4; ++k) {
    HalfEdge target = remap(old_twins[k]);
    HalfEdge self = new_sides[k];
    tris[self.tri].twin[self.side] = target;
    tris[target.tri].twin[target.side] = self;
  }
}

int Mesh::make_delaunay() {
  int flips = 0;
  const int limit = 100000 + 100 * static_cast<int>(tris.size() * tris.size());
  bool changed = true;
  while (changed) {
    changed = false;
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      for (int i = 0; i < 3; ++i) {
        if (!is_locally_delaunay(t, i)) {
          flip(t, i);
          changed = true;
          if (++flips > limit) throw InternalError("Delaunay flipping did not terminate");
        }
      }
    }
  }
  return flips;
}

void Mesh::apply(const Mat2& a) {
  for (auto& T : tris) {
    for (auto& e : T.edge) e = a(e);
  }
  for (auto& r : ref) r = a(r);
  make_delaunay();
}

Scalar Mesh::area() const {
  Scalar s;
  for (const auto& T : tris) s += cross(T.edge[0], T.edge[1]);
  return s / Scalar(2);
}

void Mesh::check() const {
  for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
    const auto& T = tris[t];
    if (!(T.edge[0] + T.edge[1] + T.edge[2]).is_zero())
      throw InternalError("triangle edges do not close");
    if (cross(T.edge[0], T.edge[1]).sign() <= 0)
      throw InternalError("triangle not positively oriented");
    for (int i = 0; i < 3; ++i) {
      HalfEdge o = T.twin[i];
      if (o.tri < 0 || o.tri >= static_cast<int>(tris.size()))
        throw InternalError("dangling twin");
      if (tris[o.tri].twin[o.side] != HalfEdge{t, i}) throw InternalError("asymmetric twins");
      if (!(tris[o.tri].edge[o.side] + T.edge[i]).is_zero())
        throw InternalError("twin edges are not opposite");
      if (tris[o.tri].vertex[o.side] != T.vertex[nxt(i)])
        throw InternalError("twin endpoints disagree");
    }
  }
}

}  // namespace flatkit
