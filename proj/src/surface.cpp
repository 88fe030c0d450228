#include "flatkit/surface.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <string>

#include "flatkit/errors.hpp"

namespace flatkit {

namespace {

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  if (orient(a, b, p) != 0) return false;
  return dot(p - a, p - b).sign() <= 0;
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  return on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) ||
         on_segment(c, d, b);
}

bool in_closed_triangle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& x) {
  return orient(a, b, x) >= 0 && orient(b, c, x) >= 0 && orient(c, a, x) >= 0;
}

std::string where(int p, int i) {
  return "polygon " + std::to_string(p) + " edge " + std::to_string(i);
}

void check_field(const Scalar& s, long d) {
  if (!s.is_rational() && s.field() != d)
    throw FieldMismatch("coordinate " + s.to_string() + " outside the declared field");
}

}  // namespace

Vec2 SurfaceSpec::edge_vector(EdgeRef e) const {
  const auto& v = polygons.at(e.polygon).vertices;
  int n = static_cast<int>(v.size());
  return v[(e.edge + 1) % n] - v[e.edge];
}

Scalar polygon_area(const std::vector<Vec2>& poly) {
  Scalar s;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    s += cross(poly[i], poly[(i + 1) % poly.size()]);
  }
  return s / Scalar(2);
}

bool polygon_is_simple(const std::vector<Vec2>& poly) {
  const int n = static_cast<int>(poly.size());
  if (n < 3) return false;
  for (int i = 0; i < n; ++i) {
    if (poly[i] == poly[(i + 1) % n]) return false;
  }
  for (int i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    // Adjacent edge folding back onto this one.
    const Vec2& c = poly[(i + 2) % n];
    if (orient(a, b, c) == 0 && dot(a - b, c - b).sign() > 0) return false;
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(a, b, poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return true;
}

bool polygon_contains(const std::vector<Vec2>& poly, const Vec2& x) {
  const int n = static_cast<int>(poly.size());
  bool inside = false;
  for (int i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    if (on_segment(a, b, x)) return true;
    bool a_above = a.y > x.y;
    bool b_above = b.y > x.y;
    if (a_above != b_above) {
      // x is left of the upward edge (or right of the downward edge).
      int o = orient(a, b, x);
      if ((b_above && o > 0) || (!b_above && o < 0)) inside = !inside;
    }
  }
  return inside;
}

std::vector<std::array<int, 3>> ear_clip(const std::vector<Vec2>& poly) {
  std::vector<int> idx(poly.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::array<int, 3>> out;
  while (idx.size() > 3) {
    const int n = static_cast<int>(idx.size());
    bool clipped = false;
    for (int k = 0; k < n; ++k) {
      int a = idx[(k + n - 1) % n], b = idx[k], c = idx[(k + 1) % n];
      if (orient(poly[a], poly[b], poly[c]) <= 0) continue;
      bool empty = true;
      for (int q : idx) {
        if (q == a || q == b || q == c) continue;
        if (in_closed_triangle(poly[a], poly[b], poly[c], poly[q])) {
          empty = false;
          break;
        }
      }
      if (!empty) continue;
      out.push_back({a, b, c});
      idx.erase(idx.begin() + k);
      clipped = true;
      break;
    }
    if (!clipped) throw ValidationError("polygon could not be triangulated");
  }
  if (orient(poly[idx[0]], poly[idx[1]], poly[idx[2]]) <= 0)
    throw ValidationError("polygon could not be triangulated");
  out.push_back({idx[0], idx[1], idx[2]});
  return out;
}

TranslationSurface TranslationSurface::build(SurfaceSpec spec) {
  auto data = std::make_shared<Data>();
  const long d = spec.d;
  if (d != 0 && !is_square_free(d))
    throw ValidationError("field parameter d = " + std::to_string(d) + " is not square-free");

  const int F = static_cast<int>(spec.polygons.size());
  if (F == 0) throw ValidationError("surface has no polygons");
  for (int p = 0; p < F; ++p) {
    const auto& v = spec.polygons[p].vertices;
    if (v.size() < 3) throw ValidationError("polygon " + std::to_string(p) + " has fewer than 3 vertices");
    for (const auto& q : v) {
      check_field(q.x, d);
      check_field(q.y, d);
    }
    if (!polygon_is_simple(v)) throw ValidationError("polygon " + std::to_string(p) + " is not simple");
    if (polygon_area(v).sign() <= 0)
      throw ValidationError("polygon " + std::to_string(p) + " is not counterclockwise");
  }

  // Perfect matching of edges with opposite vectors.
  data->partner.resize(F);
  int total_edges = 0;
  for (int p = 0; p < F; ++p) {
    data->partner[p].assign(spec.polygons[p].vertices.size(), EdgeRef{-1, -1});
    total_edges += static_cast<int>(spec.polygons[p].vertices.size());
  }
  auto valid_ref = [&](EdgeRef e) {
    return e.polygon >= 0 && e.polygon < F && e.edge >= 0 &&
           e.edge < static_cast<int>(spec.polygons[e.polygon].vertices.size());
  };
  for (const auto& [a, b] : spec.gluings) {
    if (!valid_ref(a) || !valid_ref(b)) throw ValidationError("gluing references a missing edge");
    if (a == b) throw ValidationError(where(a.polygon, a.edge) + " is glued to itself");
    for (EdgeRef e : {a, b}) {
      if (data->partner[e.polygon][e.edge].polygon != -1)
        throw ValidationError(where(e.polygon, e.edge) + " is glued twice");
    }
    if (!(spec.edge_vector(a) + spec.edge_vector(b)).is_zero())
      throw ValidationError("edge vectors not opposite: " + where(a.polygon, a.edge) + " and " +
                            where(b.polygon, b.edge));
    data->partner[a.polygon][a.edge] = b;
    data->partner[b.polygon][b.edge] = a;
  }
  for (int p = 0; p < F; ++p) {
    for (std::size_t i = 0; i < data->partner[p].size(); ++i) {
      if (data->partner[p][i].polygon == -1)
        throw ValidationError(where(p, static_cast<int>(i)) + " is not glued");
    }
  }

  {
    std::vector<bool> seen(F, false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    int count = 1;
    while (!q.empty()) {
      int p = q.front();
      q.pop();
      for (const auto& e : data->partner[p]) {
        if (!seen[e.polygon]) {
          seen[e.polygon] = true;
          ++count;
          q.push(e.polygon);
        }
      }
    }
    if (count != F) throw ValidationError("surface is disconnected");
  }

  // Fan the polygons into triangles.
  Mesh& mesh = data->mesh;
  std::vector<std::vector<HalfEdge>> edge_half(F);
  std::vector<std::vector<HalfEdge>> corner_half(F);  // corner (p,i) -> some triangle corner
  for (int p = 0; p < F; ++p) {
    const auto& v = spec.polygons[p].vertices;
    const int n = static_cast<int>(v.size());
    edge_half[p].assign(n, HalfEdge{});
    corner_half[p].assign(n, HalfEdge{});
    std::map<std::pair<int, int>, HalfEdge> diagonals;
    for (const auto& tri : ear_clip(v)) {
      int t = static_cast<int>(mesh.tris.size());
      Mesh::Triangle T;
      for (int k = 0; k < 3; ++k) {
        int a = tri[k], b = tri[(k + 1) % 3];
        T.edge[k] = v[b] - v[a];
        corner_half[p][a] = {t, k};
        if (b == (a + 1) % n) {
          edge_half[p][a] = {t, k};
        } else {
          auto key = std::minmax(a, b);
          auto it = diagonals.find(key);
          if (it == diagonals.end()) {
            diagonals[key] = {t, k};
          } else {
            T.twin[k] = it->second;
            mesh.tris[it->second.tri].twin[it->second.side] = {t, k};
          }
        }
      }
      mesh.tris.push_back(T);
    }
  }
  for (int p = 0; p < F; ++p) {
    for (std::size_t i = 0; i < edge_half[p].size(); ++i) {
      HalfEdge h = edge_half[p][i];
      EdgeRef o = data->partner[p][i];
      mesh.tris[h.tri].twin[h.side] = edge_half[o.polygon][o.edge];
    }
  }

  // Vertex classes from corner cycles, numbered by first polygon corner.
  const int ntri = static_cast<int>(mesh.tris.size());
  std::vector<std::array<int, 3>> cls(ntri, {-1, -1, -1});
  data->vertex_class.resize(F);
  int k_classes = 0;
  std::vector<HalfEdge> class_start;
  for (int p = 0; p < F; ++p) {
    const int n = static_cast<int>(spec.polygons[p].vertices.size());
    data->vertex_class[p].assign(n, -1);
    for (int i = 0; i < n; ++i) {
      HalfEdge h0 = edge_half[p][i];
      if (cls[h0.tri][h0.side] >= 0) continue;
      int id = k_classes++;
      class_start.push_back(h0);
      HalfEdge h = h0;
      do {
        cls[h.tri][h.side] = id;
        h = mesh.next_corner_ccw(h);
      } while (h != h0);
    }
  }
  for (int t = 0; t < ntri; ++t) {
    for (int c = 0; c < 3; ++c) mesh.tris[t].vertex[c] = cls[t][c];
  }
  data->sings.resize(k_classes);
  for (int p = 0; p < F; ++p) {
    for (std::size_t i = 0; i < edge_half[p].size(); ++i) {
      HalfEdge h = corner_half[p][i];
      int id = cls[h.tri][h.side];
      data->vertex_class[p][i] = id;
      data->sings[id].corners.emplace_back(p, static_cast<int>(i));
    }
  }
  mesh.ref.resize(k_classes);
  for (int s = 0; s < k_classes; ++s) mesh.ref[s] = mesh.edge(class_start[s]);
  std::vector<int> mult = mesh.recompute_sheets();

  data->corner_sheet.resize(F);
  for (int p = 0; p < F; ++p) {
    const int n = static_cast<int>(edge_half[p].size());
    data->corner_sheet[p].resize(n);
    for (int i = 0; i < n; ++i) {
      HalfEdge h = edge_half[p][i];
      data->corner_sheet[p][i] = mesh.tris[h.tri].sheet[h.side];
    }
  }

  int m = 0;
  for (int s = 0; s < k_classes; ++s) {
    if (mult[s] < 1) throw ValidationError("cone angle not a positive multiple of 2*pi");
    data->sings[s].multiplicity = mult[s];
    m += mult[s];
  }
  const int E = total_edges / 2;
  const int chi = k_classes - E + F;
  if (chi % 2 != 0 || chi > 2) throw ValidationError("glued complex is not a closed orientable surface");
  const int genus = (2 - chi) / 2;
  if (genus == 0) throw ValidationError("genus 0: the sphere carries no translation structure");
  if (m != 2 * genus - 2 + k_classes)
    throw ValidationError("cone angles inconsistent with the Euler characteristic");
  data->genus = genus;
  data->m = m;

  Scalar area;
  for (const auto& poly : spec.polygons) area += polygon_area(poly.vertices);
  data->area = area;

  mesh.make_delaunay();
  mesh.check();
  if (mesh.area() != area) throw InternalError("mesh area differs from polygon area");

  data->spec = std::move(spec);
  TranslationSurface out;
  out.data_ = std::move(data);
  return out;
}

EdgeRef TranslationSurface::glued_to(EdgeRef e) const {
  return data_->partner.at(e.polygon).at(e.edge);
}

TranslationSurface TranslationSurface::apply(const Mat2& a) const {
  if (!a.is_sl2()) throw PreconditionError("apply_matrix needs det = 1");
  long f = a.field();
  if (f != 0 && f != field())
    throw FieldMismatch("matrix entries leave the surface field");
  auto data = std::make_shared<Data>(*data_);
  for (auto& poly : data->spec.polygons) {
    for (auto& v : poly.vertices) v = a(v);
  }
  data->mesh.apply(a);
  TranslationSurface out;
  out.data_ = std::move(data);
  return out;
}

SurfaceSpec canonical_spec(const SurfaceSpec& spec) {
  const int F = static_cast<int>(spec.polygons.size());
  std::vector<int> shift(F, 0);
  std::vector<PolygonSpec> rotated(F);
  for (int p = 0; p < F; ++p) {
    const auto& v = spec.polygons[p].vertices;
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i) {
      if (v[i] < v[best]) best = i;
    }
    shift[p] = best;
    for (std::size_t i = 0; i < v.size(); ++i) {
      rotated[p].vertices.push_back(v[(best + i) % v.size()]);
    }
  }
  std::vector<int> order(F);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::lexicographical_compare_three_way(
               rotated[a].vertices.begin(), rotated[a].vertices.end(),
               rotated[b].vertices.begin(), rotated[b].vertices.end()) < 0;
  });
  std::vector<int> new_id(F);
  SurfaceSpec out;
  out.d = spec.d;
  for (int k = 0; k < F; ++k) {
    new_id[order[k]] = k;
    out.polygons.push_back(rotated[order[k]]);
  }
  auto relabel = [&](EdgeRef e) {
    int n = static_cast<int>(spec.polygons[e.polygon].vertices.size());
    return EdgeRef{new_id[e.polygon], ((e.edge - shift[e.polygon]) % n + n) % n};
  };
  for (const auto& [a, b] : spec.gluings) {
    EdgeRef x = relabel(a), y = relabel(b);
    if (y < x) std::swap(x, y);
    out.gluings.emplace_back(x, y);
  }
  std::sort(out.gluings.begin(), out.gluings.end());
  return out;
}

bool TranslationSurface::structurally_equal(const TranslationSurface& other) const {
  SurfaceSpec a = canonical_spec(spec());
  SurfaceSpec b = canonical_spec(other.spec());
  return a.d == b.d && a.polygons == b.polygons && a.gluings == b.gluings;
}

}  // namespace flatkit
