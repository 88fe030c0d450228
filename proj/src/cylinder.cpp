#include "flatkit/cylinder.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>

#include "filter.hpp"
#include "flatkit/errors.hpp"
#include "flatkit/parallel.hpp"

namespace flatkit {

namespace {

struct SheetKey {
  int sing;
  int sheet;
  friend auto operator<=>(const SheetKey&, const SheetKey&) = default;
};

// Saddles of one direction: `plus` all point along v; the reversed copies
// are the -v saddles.
struct DirectionSaddles {
  Vec2 v;
  std::vector<SaddleConnection> plus;
  std::map<SheetKey, int> plus_at;   // (start, start sheet)
  std::map<SheetKey, int> minus_at;  // (end, end sheet) = start of the reverse

  void index() {
    std::sort(plus.begin(), plus.end(), canonical_less);
    for (int i = 0; i < static_cast<int>(plus.size()); ++i) {
      plus_at[{plus[i].start, plus[i].start_sector()}] = i;
      minus_at[{plus[i].end, plus[i].end_sector()}] = i;
    }
  }
};

int lookup(const std::map<SheetKey, int>& m, int sing, int sheet) {
  auto it = m.find({sing, sheet});
  return it == m.end() ? -1 : it->second;
}

// Next +v saddle after plus[i] along a boundary with the cylinder on the left.
int next_plus(const Mesh& mesh, const DirectionSaddles& ds, int i) {
  const auto& g = ds.plus[i];
  ConeKey k = rotate_cw(mesh, g.end, g.end_key, ds.v);
  return lookup(ds.plus_at, g.end, k.sheet);
}

// Same for the -v saddles (index i stands for plus[i].reversed()).
int next_minus(const Mesh& mesh, const DirectionSaddles& ds, int i) {
  const auto& g = ds.plus[i];
  ConeKey k = rotate_cw(mesh, g.start, g.start_key, -ds.v);
  return lookup(ds.minus_at, g.start, k.sheet);
}

// Affine coordinates (s, t) with q = s*core + t*transversal.
struct StripFrame {
  Vec2 L, sigma;
  Scalar A;
  StripFrame(const Vec2& l, const Vec2& sg) : L(l), sigma(sg), A(cross(L, sigma)) {}
  explicit StripFrame(const Cylinder& c) : StripFrame(c.core, c.transversal) {}
  Scalar s(const Vec2& q) const { return cross(q, sigma) / A; }
  Scalar t(const Vec2& q) const { return cross(L, q) / A; }
};

// Linear functionals g with the region {g >= 0}.
using Functional = std::function<Scalar(const Vec2&)>;

// Parameter range [lo, hi] of the part of PQ inside the closed region, when
// the segment meets the open region.
std::optional<std::pair<Scalar, Scalar>> clip_segment(const Vec2& P, const Vec2& Q,
                                                      const std::vector<Functional>& gs) {
  Scalar lo(0), hi(1);
  for (const auto& g : gs) {
    Scalar g0 = g(P), g1 = g(Q);
    if (g0.sign() < 0 && g1.sign() < 0) return std::nullopt;
    if (g0.sign() < 0) {
      Scalar m = g0 / (g0 - g1);
      if (m > lo) lo = m;
    } else if (g1.sign() < 0) {
      Scalar m = g0 / (g0 - g1);
      if (m < hi) hi = m;
    }
  }
  if (!(lo < hi)) return std::nullopt;
  Vec2 mid = P + ((lo + hi) / Scalar(2)) * (Q - P);
  for (const auto& g : gs) {
    if (g(mid).sign() <= 0) return std::nullopt;
  }
  return std::pair{lo, hi};
}

bool segment_meets_open(const Vec2& P, const Vec2& Q, const std::vector<Functional>& gs) {
  return clip_segment(P, Q, gs).has_value();
}

std::vector<Vec2> clip(const std::vector<Vec2>& poly, const Functional& g) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    Scalar ga = g(a), gb = g(b);
    if (ga.sign() >= 0) out.push_back(a);
    if ((ga.sign() > 0 && gb.sign() < 0) || (ga.sign() < 0 && gb.sign() > 0)) {
      out.push_back(a + (ga / (ga - gb)) * (b - a));
    }
  }
  return out;
}

std::vector<Functional> strip_constraints(const StripFrame& f, const Rational& s_lo,
                                          const Rational& s_hi) {
  return {
      [f](const Vec2& q) { return f.t(q); },
      [f](const Vec2& q) { return Scalar(1) - f.t(q); },
      [f, s_lo](const Vec2& q) { return f.s(q) - Scalar(s_lo); },
      [f, s_hi](const Vec2& q) { return Scalar(s_hi) - f.s(q); },
  };
}

struct TopVertex {
  Vec2 sigma;  // transversal reaching the top boundary
  int sing = -1;
  ConeKey key;  // top saddle leaving the vertex against the core
};

// Develops the strip above the bottom boundary in order of height until the
// first singular vertex. Every copy is entered below the current best
// height, so it lies inside the open cylinder where the development is
// single-valued; no singular vertex can sit strictly inside.
TopVertex sweep_to_top(const Mesh& mesh, const Cylinder& c, const Vec2& v, const Scalar& area) {
  const Vec2& L = c.core;
  const Vec2 sigma_max = perp(L) * (area / L.norm_sq());
  const StripFrame f(L, sigma_max);

  // Exploration runs in doubles on a box widened by kSlack; rounding errors
  // are orders of magnitude below it. Vertex decisions near a boundary and
  // the height itself are exact.
  constexpr double kSlack = 1e-7;
  const double Lx = L.x.to_double(), Ly = L.y.to_double();
  const double Sx = sigma_max.x.to_double(), Sy = sigma_max.y.to_double();
  const double A = Lx * Sy - Ly * Sx;
  auto st = [&](double x, double y) {
    return std::pair<double, double>{(x * Sy - y * Sx) / A, (Lx * y - Ly * x) / A};
  };
  const int nt = static_cast<int>(mesh.tris.size());
  std::vector<std::array<std::pair<double, double>, 3>> corner(nt);
  std::vector<std::array<Vec2, 3>> shift_exact(nt);
  for (int t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      Vec2 p = mesh.corner_pos(t, k);
      corner[t][k] = {p.x.to_double(), p.y.to_double()};
      HalfEdge o = mesh.twin({t, k});
      shift_exact[t][k] = p + mesh.tri(t).edge[k] - mesh.corner_pos(o.tri, o.side);
    }
  }

  Scalar t_cur(1);
  double t_cur_d = 1;
  const std::vector<Functional> gs{
      [&f](const Vec2& q) { return f.t(q); },
      [&f, &t_cur](const Vec2& q) { return t_cur - f.t(q); },
      [&f](const Vec2& q) { return f.s(q); },
      [&f](const Vec2& q) { return Scalar(1) - f.s(q); },
  };
  struct Item {
    double key;
    long order;
    int tri;
    Vec2 offset;
    double ox, oy;
  };
  auto later = [](const Item& a, const Item& b) {
    if (a.key != b.key) return b.key < a.key;
    return a.order > b.order;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(later)> pq(later);
  // Equal exact offsets give equal doubles; distinct ones rarely collide.
  std::map<std::tuple<int, double, double>, std::vector<Vec2>> seen;
  auto visit = [&](int tri, const Vec2& off, double ox, double oy) {
    auto& slot = seen[{tri, ox, oy}];
    for (const auto& w : slot) {
      if (w == off) return false;
    }
    slot.push_back(off);
    return true;
  };
  HalfEdge start = mesh.locate(c.base, rotate_ccw(mesh, c.base, c.base_key, L + perp(L)));
  Vec2 off0 = -mesh.corner_pos(start.tri, start.side);
  pq.push({0.0, 0, start.tri, off0, off0.x.to_double(), off0.y.to_double()});
  visit(start.tri, off0, off0.x.to_double(), off0.y.to_double());
  long order = 1;
  bool found = false;
  HalfEdge best{-1, -1};
  while (!pq.empty()) {
    Item it = pq.top();
    pq.pop();
    if (found && it.key > t_cur_d + kSlack) break;
    if (order > 20000000) throw InternalError("cylinder sweep too large");
    std::array<std::pair<double, double>, 3> P;
    for (int k = 0; k < 3; ++k) {
      P[k] = st(it.ox + corner[it.tri][k].first, it.oy + corner[it.tri][k].second);
      auto [s, t] = P[k];
      if (t < -kSlack || s < -kSlack || s > 1 + kSlack || t > t_cur_d + kSlack) continue;
      bool clear = t > kSlack && s > kSlack && s < 1 - kSlack && t < t_cur_d - kSlack;
      if (!clear) {
        Vec2 V = it.offset + mesh.corner_pos(it.tri, k);
        if (cross(L, V).sign() <= 0) continue;
        Scalar te = f.t(V), se = f.s(V);
        if (te.sign() <= 0 || se.sign() < 0 || se > Scalar(1) || te > t_cur) continue;
        if (found && !(te < t_cur)) continue;
        t_cur = te;
      } else {
        t_cur = f.t(it.offset + mesh.corner_pos(it.tri, k));
      }
      t_cur_d = t_cur.to_double();
      found = true;
      best = {it.tri, k};
    }
    for (int i = 0; i < 3; ++i) {
      // Clip the edge to the box widened by `pad` and take its lowest point.
      auto [s0, t0] = P[i];
      auto [s1, t1] = P[(i + 1) % 3];
      auto clip = [&](double pad) -> std::optional<double> {
        double lo = 0, hi = 1;
        auto bound = [&](double g0, double g1) {  // keep g >= 0
          if (g0 < 0 && g1 < 0) {
            lo = 1;
            hi = 0;
          } else if (g0 < 0) {
            lo = std::max(lo, g0 / (g0 - g1));
          } else if (g1 < 0) {
            hi = std::min(hi, g0 / (g0 - g1));
          }
        };
        bound(t0 + pad, t1 + pad);
        bound(t_cur_d + pad - t0, t_cur_d + pad - t1);
        bound(s0 + pad, s1 + pad);
        bound(1 + pad - s0, 1 + pad - s1);
        if (lo > hi) return std::nullopt;
        return std::min(t0 + lo * (t1 - t0), t0 + hi * (t1 - t0));
      };
      auto wide = clip(kSlack);
      if (!wide) continue;
      // Only edges meeting the open strip are crossed: beyond its boundary
      // the development is no longer single-valued.
      if (!clip(-kSlack)) {
        Vec2 Pe = it.offset + mesh.corner_pos(it.tri, i);
        Vec2 Qe = Pe + mesh.tri(it.tri).edge[i];
        // Edges along the bottom boundary are the common case.
        if (cross(L, Pe).sign() <= 0 && cross(L, Qe).sign() <= 0) continue;
        int sp = cross(Pe, sigma_max).sign(), sq = cross(Qe, sigma_max).sign();
        if (sp <= 0 && sq <= 0) continue;
        if (!segment_meets_open(Pe, Qe, gs)) continue;
      }
      double key = *wide - kSlack;
      HalfEdge o = mesh.twin({it.tri, i});
      Vec2 off = it.offset + shift_exact[it.tri][i];
      // Doubles taken from the exact offset, so revisits produce equal keys.
      double ox = off.x.to_double(), oy = off.y.to_double();
      if (!visit(o.tri, off, ox, oy)) continue;
      pq.push({key, order++, o.tri, std::move(off), ox, oy});
    }
  }
  if (!found) throw InternalError("cylinder height not found");

  TopVertex out;
  out.sigma = sigma_max * t_cur;
  out.sing = mesh.tri(best.tri).vertex[best.side];
  // A downward direction in the corner: one of its two bounding rays.
  const Vec2& e = mesh.tri(best.tri).edge[best.side];
  const Vec2 g = -mesh.tri(best.tri).edge[best.side == 0 ? 2 : best.side - 1];
  ConeKey ke = mesh.key_in_corner(best.tri, best.side, e);
  ConeKey down;
  if (cross(L, e).sign() < 0) {
    down = ke;
  } else if (cross(L, g).sign() < 0) {
    down = rotate_ccw(mesh, out.sing, ke, g);
  } else {
    throw InternalError("top vertex corner does not face the cylinder");
  }
  out.key = rotate_cw(mesh, out.sing, down, -v);
  return out;
}


// cylinder_less on cached lengths; doubles settle most comparisons.
void sort_cylinders(std::vector<Cylinder>& v) {
  struct Key {
    double approx, mag;
    int index;
  };
  std::vector<Key> keys;
  keys.reserve(v.size());
  for (int i = 0; i < static_cast<int>(v.size()); ++i) {
    Scalar l = v[i].length_sq();
    keys.push_back({l.to_double(), magnitude(l), i});
  }
  std::sort(keys.begin(), keys.end(), [&](const Key& a, const Key& b) {
    double tol = kFilter * 64 * (a.mag + b.mag);
    if (a.approx < b.approx - tol) return true;
    if (a.approx > b.approx + tol) return false;
    return cylinder_less(v[a.index], v[b.index]);
  });
  std::vector<Cylinder> out;
  out.reserve(v.size());
  for (const auto& k : keys) out.push_back(std::move(v[k.index]));
  v = std::move(out);
}

std::vector<int> rotate_to_least(std::vector<int> loop, const DirectionSaddles& ds, bool reversed) {
  auto key = [&](int i) { return reversed ? ds.plus[i].reversed() : ds.plus[i]; };
  auto it = std::min_element(loop.begin(), loop.end(),
                             [&](int a, int b) { return canonical_less(key(a), key(b)); });
  std::rotate(loop.begin(), it, loop.end());
  return loop;
}

// Cylinders with bottom saddles among ds.plus and squared core length at
// most cap_sq. Sets `complete` when every +v saddle closes up into a loop.
std::vector<Cylinder> cylinders_in_direction(const Mesh& mesh, const DirectionSaddles& ds,
                                             const Scalar& cap_sq, const Scalar& area,
                                             bool& complete) {
  complete = true;
  const int n = static_cast<int>(ds.plus.size());
  std::vector<Cylinder> out;
  if (n == 0) return out;

  std::vector<char> seen(n, 0);
  for (int i0 = 0; i0 < n; ++i0) {
    if (seen[i0]) continue;
    std::vector<int> loop{i0};
    seen[i0] = 1;
    bool closed = false;
    for (int j = next_plus(mesh, ds, i0); j >= 0; j = next_plus(mesh, ds, j)) {
      if (j == i0) {
        closed = true;
        break;
      }
      if (seen[j]) break;
      seen[j] = 1;
      loop.push_back(j);
    }
    if (!closed) {
      complete = false;
      continue;
    }
    loop = rotate_to_least(loop, ds, false);
    Vec2 L;
    for (int j : loop) L += ds.plus[j].holonomy;
    if (L.norm_sq() > cap_sq) {
      complete = false;
      continue;
    }

    Cylinder c;
    c.core = L;
    c.direction = canonical_direction(L);
    c.base = ds.plus[loop[0]].start;
    c.base_key = ds.plus[loop[0]].start_key;
    for (int j : loop) c.bottom.push_back(ds.plus[j]);

    // Height: sweep the developed strip upward from the bottom. The first
    // singular vertex with 0 <= s <= 1 lies on the top boundary.
    auto top_vertex = sweep_to_top(mesh, c, ds.v, area);
    c.transversal = top_vertex.sigma;
    c.area = cross(L, c.transversal);
    int top0 = lookup(ds.minus_at, top_vertex.sing, top_vertex.key.sheet);
    if (top0 < 0) throw InternalError("top boundary saddle missing");
    std::vector<int> top{top0};
    Vec2 Lt = ds.plus[top0].holonomy;
    for (int j = next_minus(mesh, ds, top0); j != top0; j = next_minus(mesh, ds, j)) {
      if (j < 0 || top.size() > ds.plus.size()) throw InternalError("top boundary does not close");
      top.push_back(j);
      Lt += ds.plus[j].holonomy;
    }
    if (Lt != L) throw InternalError("top boundary length differs from the core");
    for (int j : rotate_to_least(top, ds, true)) c.top.push_back(ds.plus[j].reversed());
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

Interval Cylinder::width(unsigned bits) const {
  return enclose(area, bits) / length(bits);
}

Cylinder Cylinder::transformed(const Mat2& a) const {
  Cylinder c;
  c.core = a(core);
  c.direction = canonical_direction(c.core);
  c.transversal = a(transversal);
  c.area = area;
  c.base = base;
  c.base_key = {base_key.sheet, a(base_key.dir)};
  for (const auto& s : bottom) c.bottom.push_back(s.transformed(a));
  for (const auto& s : top) c.top.push_back(s.transformed(a));
  return c;
}

bool same_cylinder(const Cylinder& a, const Cylinder& b) {
  return a.base == b.base && same_key(a.base_key, b.base_key) && a.core == b.core;
}

bool cylinder_less(const Cylinder& a, const Cylinder& b) {
  auto c = a.length_sq() <=> b.length_sq();
  if (c != 0) return c < 0;
  if (direction_less(a.direction, b.direction)) return true;
  if (direction_less(b.direction, a.direction)) return false;
  if (a.base != b.base) return a.base < b.base;
  return a.base_key.sheet < b.base_key.sheet;
}

std::string to_string(DirectionalDecomposition::Residual r) {
  switch (r) {
    case DirectionalDecomposition::kFullyPeriodic:
      return "fully-periodic";
    case DirectionalDecomposition::kHasNonCylinderComponents:
      return "has-non-cylinder-components";
    case DirectionalDecomposition::kUndeterminedAtCap:
      return "undetermined-at-cap";
  }
  return "?";
}

DirectionalDecomposition decompose_direction(const Mesh& mesh, const Vec2& v,
                                             const Scalar& cap_sq) {
  if (v.is_zero()) throw PreconditionError("zero direction");
  DirectionalDecomposition out;
  out.direction = canonical_direction(v);
  out.cap_sq = cap_sq;
  DirectionSaddles ds;
  ds.v = out.direction;
  for (int z = 0; z < mesh.num_singularities(); ++z) {
    for (int k = 0; k < mesh.multiplicity[z]; ++k) {
      if (auto s = connection_along(mesh, z, {k, ds.v}, cap_sq)) ds.plus.push_back(*s);
    }
  }
  ds.index();
  Scalar area = mesh.area();
  bool complete = false;
  out.cylinders = cylinders_in_direction(mesh, ds, cap_sq, area, complete);
  std::sort(out.cylinders.begin(), out.cylinders.end(), cylinder_less);
  Scalar total(0);
  for (const auto& c : out.cylinders) total += c.area;
  out.residual = total == area ? DirectionalDecomposition::kFullyPeriodic
                               : DirectionalDecomposition::kUndeterminedAtCap;
  return out;
}

DirectionalDecomposition decompose_direction(const TranslationSurface& M, const Vec2& v,
                                             const Scalar& cap_sq) {
  return decompose_direction(M.mesh(), v, cap_sq);
}

std::vector<Cylinder> cylinders_from_saddles(const Mesh& mesh,
                                             const std::vector<SaddleConnection>& saddles,
                                             const Scalar& max_len_sq, int threads) {
  // Group by direction: sort on the angle in doubles, exact near ties.
  struct Key {
    double angle, mag;
    int index;
  };
  std::vector<Key> keys;
  for (int i = 0; i < static_cast<int>(saddles.size()); ++i) {
    const auto& s = saddles[i];
    if (!in_upper_half(s.holonomy) || s.length_sq() > max_len_sq) continue;
    Approx h = approx(s.holonomy);
    keys.push_back({std::atan2(h.y, h.x), (h.mx + h.my) / std::hypot(h.x, h.y), i});
  }
  auto same_dir = [&](const Key& a, const Key& b) {
    return cross(saddles[a.index].holonomy, saddles[b.index].holonomy).is_zero();
  };
  std::sort(keys.begin(), keys.end(), [&](const Key& a, const Key& b) {
    double tol = kFilter * 64 * (a.mag + b.mag);
    if (a.angle < b.angle - tol) return true;
    if (a.angle > b.angle + tol) return false;
    const Vec2 &x = saddles[a.index].holonomy, &y = saddles[b.index].holonomy;
    if (direction_less(x, y)) return true;
    if (direction_less(y, x)) return false;
    return a.index < b.index;
  });
  std::vector<DirectionSaddles> groups;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    if (k == 0 || !same_dir(keys[k - 1], keys[k])) {
      groups.emplace_back();
      groups.back().v = saddles[keys[k].index].holonomy;
    }
    groups.back().plus.push_back(saddles[keys[k].index]);
  }
  for (auto& g : groups) g.index();
  Scalar area = mesh.area();
  std::vector<std::vector<Cylinder>> per(groups.size());
  parallel_for(static_cast<int>(groups.size()), threads, [&](int i) {
    bool complete = false;
    per[i] = cylinders_in_direction(mesh, groups[i], max_len_sq, area, complete);
  });
  std::vector<Cylinder> out;
  for (auto& v : per)
    for (auto& c : v) out.push_back(std::move(c));
  sort_cylinders(out);
  return out;
}

std::vector<Cylinder> enumerate_cylinders(const Mesh& mesh, const Scalar& max_len_sq,
                                          int threads) {
  auto saddles = enumerate_saddle_connections(mesh, max_len_sq, threads);
  return cylinders_from_saddles(mesh, saddles, max_len_sq, threads);
}

std::vector<Cylinder> enumerate_cylinders(const TranslationSurface& M, const Scalar& max_len_sq,
                                          int threads) {
  return enumerate_cylinders(M.mesh(), max_len_sq, threads);
}

// ---------------------------------------------------------------------------

CylinderStrip develop(const Mesh& mesh, const Cylinder& c, const Rational& s_lo,
                      const Rational& s_hi) {
  StripFrame f(c);
  auto gs = strip_constraints(f, s_lo, s_hi);
  ConeKey k = rotate_ccw(mesh, c.base, c.base_key, c.core + c.transversal);
  HalfEdge corner = mesh.locate(c.base, k);
  CylinderStrip out;
  std::set<std::pair<int, Vec2>> seen;
  std::vector<CylinderStrip::Copy> queue{{corner.tri, -mesh.corner_pos(corner.tri, corner.side)}};
  seen.insert({queue[0].tri, queue[0].offset});
  const std::size_t guard = 20000000;
  while (!queue.empty()) {
    auto cp = queue.back();
    queue.pop_back();
    out.copies.push_back(cp);
    if (out.copies.size() > guard) throw InternalError("cylinder development too large");
    for (int i = 0; i < 3; ++i) {
      Vec2 P = cp.offset + mesh.corner_pos(cp.tri, i);
      Vec2 Q = P + mesh.tri(cp.tri).edge[i];
      if (!segment_meets_open(P, Q, gs)) continue;
      HalfEdge o = mesh.twin({cp.tri, i});
      CylinderStrip::Copy next{o.tri, Q - mesh.corner_pos(o.tri, o.side)};
      if (seen.insert({next.tri, next.offset}).second) queue.push_back(next);
    }
  }
  std::sort(out.copies.begin(), out.copies.end(), [](const auto& a, const auto& b) {
    if (a.tri != b.tri) return a.tri < b.tri;
    return a.offset < b.offset;
  });
  return out;
}

std::vector<Patch> cylinder_patches(const Mesh& mesh, const Cylinder& c) {
  StripFrame f(c);
  auto gs = strip_constraints(f, 0, 1);
  std::vector<Patch> out;
  for (const auto& cp : develop(mesh, c, 0, 1).copies) {
    std::vector<Vec2> poly;
    for (int i = 0; i < 3; ++i) poly.push_back(cp.offset + mesh.corner_pos(cp.tri, i));
    for (const auto& g : gs) {
      poly = clip(poly, g);
      if (poly.size() < 3) break;
    }
    if (poly.size() < 3 || polygon_area(poly).sign() <= 0) continue;
    for (auto& q : poly) q -= cp.offset;
    out.push_back({cp.tri, std::move(poly)});
  }
  return out;
}

Scalar patches_area(const std::vector<Patch>& ps) {
  Scalar total(0);
  for (const auto& p : ps) total += polygon_area(p.poly);
  return total;
}

bool patches_overlap(const std::vector<Patch>& a, const std::vector<Patch>& b) {
  for (const auto& p : a) {
    for (const auto& q : b) {
      if (p.tri != q.tri) continue;
      std::vector<Vec2> poly = p.poly;
      const std::size_t n = q.poly.size();
      for (std::size_t i = 0; i < n && poly.size() >= 3; ++i) {
        Vec2 s = q.poly[i], e = q.poly[(i + 1) % n] - s;
        poly = clip(poly, [s, e](const Vec2& x) { return cross(e, x - s); });
      }
      if (poly.size() >= 3 && polygon_area(poly).sign() > 0) return true;
    }
  }
  return false;
}

bool cylinder_contains(const Cylinder& c, const CylinderStrip& strip, const MeshPoint& x) {
  StripFrame f(c);
  auto lo = std::lower_bound(strip.copies.begin(), strip.copies.end(), x.tri,
                             [](const auto& cp, int t) { return cp.tri < t; });
  for (auto it = lo; it != strip.copies.end() && it->tri == x.tri; ++it) {
    Scalar t = f.t(it->offset + x.pos);
    if (t.sign() > 0 && t < Scalar(1)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------

GrowthTable growth_table(const TranslationSurface& M, const std::vector<Scalar>& thresholds,
                         int threads) {
  GrowthTable out;
  if (thresholds.empty()) return out;
  for (std::size_t i = 0; i + 1 < thresholds.size(); ++i) {
    if (thresholds[i + 1] < thresholds[i]) throw PreconditionError("thresholds must be sorted");
  }
  const Scalar& top = thresholds.back();
  auto saddles = enumerate_saddle_connections(M, top, threads);
  auto cyl = cylinders_from_saddles(M.mesh(), saddles, top, threads);
  std::vector<Interval> inv;
  for (const auto& c : cyl) inv.push_back(Interval(Rational(1)) / c.length(64));
  for (const auto& t : thresholds) {
    GrowthRow r;
    r.t_sq = t;
    for (const auto& s : saddles) r.n0 += s.length_sq() <= t;
    r.n2 = Scalar(0);
    r.sigma = Interval(Rational(0));
    for (std::size_t i = 0; i < cyl.size(); ++i) {
      if (cyl[i].length_sq() > t) continue;
      ++r.n1;
      r.n2 += cyl[i].area;
      r.sigma += inv[i];
    }
    r.n2_over_s = r.n2 / M.area();
    out.rows.push_back(std::move(r));
  }
  return out;
}

long count_through_point(const Mesh& mesh, const std::vector<Cylinder>& cylinders,
                         const std::vector<CylinderStrip>& strips, const MeshPoint& x,
                         const Scalar& t_sq) {
  (void)mesh;
  long n = 0;
  for (std::size_t i = 0; i < cylinders.size(); ++i) {
    if (cylinders[i].length_sq() > t_sq) continue;
    n += cylinder_contains(cylinders[i], strips[i], x);
  }
  return n;
}

std::vector<Cylinder> cylinders_through_point(const TranslationSurface& M, const SurfacePoint& x,
                                              const Scalar& t_sq, int threads) {
  MeshPoint p = locate(M.mesh(), anchor(M, x));
  auto cyl = enumerate_cylinders(M, t_sq, threads);
  std::vector<char> hit(cyl.size(), 0);
  parallel_for(static_cast<int>(cyl.size()), threads, [&](int i) {
    auto strip = develop(M.mesh(), cyl[i], Rational(-1, 2), Rational(3, 2));
    hit[i] = cylinder_contains(cyl[i], strip, p);
  });
  std::vector<Cylinder> out;
  for (std::size_t i = 0; i < cyl.size(); ++i) {
    if (hit[i]) out.push_back(std::move(cyl[i]));
  }
  return out;
}

long count_through_point(const TranslationSurface& M, const SurfacePoint& x, const Scalar& t_sq,
                         int threads) {
  return static_cast<long>(cylinders_through_point(M, x, t_sq, threads).size());
}

// ---------------------------------------------------------------------------

namespace {

// Exponents beyond this are not expanded; comparisons fall back to 2^e.
constexpr unsigned long kMaxExpandBits = 1ul << 22;

unsigned long saturating_pow(unsigned long b, unsigned long e) {
  unsigned long r = 1;
  for (unsigned long i = 0; i < e; ++i) {
    if (r > std::numeric_limits<unsigned long>::max() / b) return std::numeric_limits<unsigned long>::max();
    r *= b;
  }
  return r;
}

// A constant base^exp, kept symbolic when too large to expand.
struct Power {
  unsigned long base = 1;
  unsigned long exp = 0;
  bool expandable() const {
    unsigned long bits = 0;
    for (unsigned long b = base; b > 1; b >>= 1) ++bits;
    return exp <= kMaxExpandBits / std::max(1ul, bits);
  }
  Integer value() const {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
  }
};

Power h_power(int m) {
  if (m == 1) return {384, 6};
  return {400ul * m, saturating_pow(2ul * m, 2ul * m)};
}

Power h_tilde_power(int m) {
  if (m == 1) return {7, 1};
  return h_power(m);
}

Power lower_power(int m) { return {600ul * m, saturating_pow(2ul * m, 2ul * m)}; }

Power l_power(int m) {
  if (m <= 2) return {2, 1};
  return {2, saturating_pow(2, 4ul * m)};
}

// Decides x <= p (x >= 0). Returns 1 / 0, or -1 when p is too large to
// expand and x exceeds the cheap lower bound 2^exp.
int le_power(const Scalar& x, const Power& p) {
  if (p.expandable()) return x <= Scalar(Rational(p.value())) ? 1 : 0;
  Rational hi = enclose(x, 32).hi;
  if (sgn(hi) <= 0) return 1;
  Integer q = hi.get_num() / hi.get_den() + 1;
  return mpz_sizeinbase(q.get_mpz_t(), 2) <= p.exp ? 1 : -1;
}

std::string power_string(const Power& p) {
  return std::to_string(p.base) + "^" + std::to_string(p.exp);
}

}  // namespace

Integer saddle_bound_constant(int m) { return h_power(m).value(); }
Integer sigma_bound_constant(int m) { return h_tilde_power(m).value(); }
Integer lower_bound_constant(int m) { return lower_power(m).value(); }
Integer lower_threshold_factor(int m) { return l_power(m).value(); }

bool BoundsReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return !c.applicable || c.pass; });
}

BoundsReport check_bounds(const TranslationSurface& M, const Scalar& t_sq, int threads) {
  if (t_sq.sign() <= 0) throw PreconditionError("threshold must be positive");
  const int m = M.total_multiplicity();
  const Scalar& S = M.area();
  BoundsReport r;
  r.t_sq = t_sq;
  r.s_sq = shortest_saddle_connection(M).length_sq();
  auto saddles = enumerate_saddle_connections(M, t_sq, threads);
  auto cyl = cylinders_from_saddles(M.mesh(), saddles, t_sq, threads);
  r.n0 = static_cast<long>(saddles.size());
  r.n1 = static_cast<long>(cyl.size());
  r.n2 = Scalar(0);
  Interval sigma(Rational(0));
  for (const auto& c : cyl) {
    r.n2 += c.area;
    sigma += Interval(Rational(1)) / c.length(64);
  }
  const Scalar N0(r.n0), N1(r.n1);

  auto verdict = [](BoundCheck& b, int v) {
    b.pass = v == 1;
    if (v < 0) b.note = "constant too large to expand; bound undecided";
  };

  {
    BoundCheck b{"saddle-upper", "N0 <= h_m s^-2 T^2, h_m = " + power_string(h_power(m))};
    Scalar ratio = N0 * r.s_sq / t_sq;
    verdict(b, le_power(ratio, h_power(m)));
    if (b.note.empty()) b.note = "N0 s^2 / T^2 = " + ratio.to_string();
    r.checks.push_back(b);
  }
  if (m == 1) {
    BoundCheck b{"torus-saddle-upper", "N0 <= 7 s^-2 T^2"};
    b.pass = N0 * r.s_sq <= Scalar(7) * t_sq;
    b.note = "N0 = " + std::to_string(r.n0) + ", 7 s^-2 T^2 = " + (Scalar(7) * t_sq / r.s_sq).to_string();
    r.checks.push_back(b);
    BoundCheck c{"torus-shortest", "s^2 <= 3S/2"};
    c.pass = Scalar(2) * r.s_sq <= Scalar(3) * S;
    c.note = "s^2 = " + r.s_sq.to_string() + ", S = " + S.to_string();
    r.checks.push_back(c);
  }
  {
    BoundCheck b{"cylinders-vs-saddles", "N1 <= N0"};
    b.pass = r.n1 <= r.n0;
    r.checks.push_back(b);
    BoundCheck c{"area-vs-cylinders", "N2/S <= N1"};
    c.pass = r.n2 <= N1 * S;
    r.checks.push_back(c);
  }
  {
    // sigma <= 2 C0 T with C0 = h~_m s^-2, squared: sigma^2 s^4 / (4 T^2) <= h~_m^2.
    BoundCheck b{"sigma-upper", "sigma(T) <= 2 h~_m s^-2 T"};
    Scalar hi(sigma.hi);
    Scalar x = hi * hi * r.s_sq * r.s_sq / (Scalar(4) * t_sq);
    Power p = h_tilde_power(m);
    p.exp *= 2;
    verdict(b, le_power(x, p));
    if (b.note.empty()) b.note = "sigma = " + sigma.to_string();
    r.checks.push_back(b);
  }
  {
    // Lower bound, only at T >= 2^(2^(4m)) sqrt(S).
    BoundCheck b{"main-lower", "N2/S >= (600m)^-((2m)^(2m)) s^2 S^-2 T^2 for T >= 2^(2^(4m)) sqrt(S)"};
    Power thr{2, 2 * saturating_pow(2, 4ul * m)};
    int below = le_power(t_sq / S, thr);
    bool at_threshold = below == 1 && t_sq / S == Scalar(Rational(thr.value()));
    if (below != 0 && !at_threshold) {
      b.applicable = false;
      b.note = "below threshold — skipped";
    } else {
      Power p = lower_power(m);
      verdict(b, le_power(r.s_sq * t_sq / (r.n2 * S), p));
    }
    r.checks.push_back(b);
  }
  {
    // Constant from the proof, valid for T >= l_m sqrt(S).
    BoundCheck b{"proof-lower", "N2/S >= (8 m l_m^4 h~_m)^-1 s^2 S^-2 T^2 for T >= l_m sqrt(S)"};
    Power l = l_power(m);
    Power l2 = l;
    l2.exp *= 2;
    int below = le_power(t_sq / S, l2);
    bool at = below == 1 && l2.expandable() && t_sq / S == Scalar(Rational(l2.value()));
    if (below != 0 && !at) {
      b.applicable = false;
      b.note = "below threshold — skipped";
    } else if (!l.expandable() || !h_tilde_power(m).expandable()) {
      b.applicable = false;
      b.note = "constant too large to expand — skipped";
    } else {
      Integer k = 8 * m * l.value() * l.value() * l.value() * l.value() * h_tilde_power(m).value();
      Scalar lhs = Scalar(Rational(k)) * r.n2 * S;
      b.pass = lhs >= r.s_sq * t_sq;
      b.note = "N2 = " + r.n2.to_string();
    }
    r.checks.push_back(b);
  }
  return r;
}

}  // namespace flatkit
