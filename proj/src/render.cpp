#include "flatkit/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "flatkit/errors.hpp"

namespace flatkit {

namespace {

// Convex polygon clipped to {q : cross(b - a, q - a) >= 0}.
std::vector<Vec2> clip_left_of(const std::vector<Vec2>& poly, const Vec2& a, const Vec2& b) {
  std::vector<Vec2> out;
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    Scalar gp = cross(b - a, p - a), gq = cross(b - a, q - a);
    if (gp.sign() >= 0) out.push_back(p);
    if ((gp.sign() > 0 && gq.sign() < 0) || (gp.sign() < 0 && gq.sign() > 0))
      out.push_back(p + (gp / (gp - gq)) * (q - p));
  }
  return out;
}

std::vector<Vec2> intersect_convex(std::vector<Vec2> poly, const std::vector<Vec2>& with) {
  const int n = static_cast<int>(with.size());
  for (int i = 0; i < n && !poly.empty(); ++i) poly = clip_left_of(poly, with[i], with[(i + 1) % n]);
  return poly;
}

// Segment PQ meets the open triangle T (counterclockwise).
bool meets_open_triangle(const Vec2& P, const Vec2& Q, const std::array<Vec2, 3>& T) {
  Scalar lo(0), hi(1);
  for (int i = 0; i < 3; ++i) {
    const Vec2 &a = T[i], &b = T[(i + 1) % 3];
    Scalar g0 = cross(b - a, P - a), g1 = cross(b - a, Q - a);
    if (g0.sign() <= 0 && g1.sign() <= 0) return false;
    if (g0.sign() < 0) lo = std::max(lo, g0 / (g0 - g1));
    if (g1.sign() < 0) hi = std::min(hi, g0 / (g0 - g1));
  }
  if (!(lo < hi)) return false;
  Vec2 mid = P + ((lo + hi) / Scalar(2)) * (Q - P);
  for (int i = 0; i < 3; ++i) {
    if (cross(T[(i + 1) % 3] - T[i], mid - T[i]).sign() <= 0) return false;
  }
  return true;
}

struct Copy {
  int tri;
  Vec2 offset;  // polygon position of the triangle's local origin
};

// Mesh triangle copies covering the ear triangle E of a polygon. E holds
// no singular point inside, so its development is single-valued.
std::vector<Copy> develop_ear(const TranslationSurface& M, int polygon, const std::array<Vec2, 3>& E) {
  const Mesh& mesh = M.mesh();
  Vec2 x = (E[0] + E[1] + E[2]) * Scalar(Rational(1, 3));
  MeshPoint mp = locate(mesh, anchor(M, {polygon, x}));
  std::vector<Copy> out{{mp.tri, x - mp.pos}};
  std::set<std::pair<int, Vec2>> seen{{mp.tri, x - mp.pos}};
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Copy cp = out[k];
    for (int i = 0; i < 3; ++i) {
      Vec2 P = cp.offset + mesh.corner_pos(cp.tri, i);
      Vec2 Q = P + mesh.tri(cp.tri).edge[i];
      if (!meets_open_triangle(P, Q, E)) continue;
      HalfEdge o = mesh.twin({cp.tri, i});
      Vec2 off = Q - mesh.corner_pos(o.tri, o.side);
      if (seen.insert({o.tri, off}).second) out.push_back({o.tri, off});
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#393b79", "#637939"};
const char* kFill[] = {"#fdd49e", "#c6dbef", "#c7e9c0", "#dadaeb", "#fcbba1", "#d9d9d9"};

}  // namespace

std::vector<PolygonPiece> cylinder_in_polygons(const TranslationSurface& M, const Cylinder& c) {
  const Mesh& mesh = M.mesh();
  std::map<int, std::vector<Patch>> by_tri;
  for (auto& p : cylinder_patches(mesh, c)) by_tri[p.tri].push_back(std::move(p));
  std::vector<PolygonPiece> out;
  const auto& polys = M.spec().polygons;
  for (int pi = 0; pi < static_cast<int>(polys.size()); ++pi) {
    const auto& V = polys[pi].vertices;
    for (const auto& ear : ear_clip(V)) {
      std::array<Vec2, 3> E{V[ear[0]], V[ear[1]], V[ear[2]]};
      if (cross(E[1] - E[0], E[2] - E[0]).sign() < 0) std::swap(E[1], E[2]);
      std::vector<Vec2> Ev(E.begin(), E.end());
      for (const auto& cp : develop_ear(M, pi, E)) {
        auto it = by_tri.find(cp.tri);
        if (it == by_tri.end()) continue;
        for (const auto& patch : it->second) {
          std::vector<Vec2> moved;
          for (const auto& q : patch.poly) moved.push_back(q + cp.offset);
          auto piece = intersect_convex(moved, Ev);
          if (piece.size() < 3 || polygon_area(piece).sign() <= 0) continue;
          out.push_back({pi, std::move(piece)});
        }
      }
    }
  }
  return out;
}

std::string render_svg(const TranslationSurface& M, const RenderOptions& options) {
  const auto& spec = M.spec();
  if (options.width <= 0) throw PreconditionError("viewport width must be positive");
  // Presentational transform: doubles from here on.
  const double unit = 1.0 / std::sqrt(M.area().to_double());
  struct Box {
    double x0, y0, x1, y1;
  };
  std::vector<Box> boxes;
  for (const auto& p : spec.polygons) {
    Box b{1e300, 1e300, -1e300, -1e300};
    for (const auto& v : p.vertices) {
      double x = v.x.to_double() * unit, y = v.y.to_double() * unit;
      b = {std::min(b.x0, x), std::min(b.y0, y), std::max(b.x1, x), std::max(b.y1, y)};
    }
    boxes.push_back(b);
  }
  const double gap = 0.25;
  std::vector<double> shift_x;
  double cursor = 0, height = 0;
  for (const auto& b : boxes) {
    shift_x.push_back(cursor - b.x0);
    cursor += (b.x1 - b.x0) + gap;
    height = std::max(height, b.y1 - b.y0);
  }
  const double total = cursor - gap;
  const double margin = 20;
  const double scale = (options.width - 2 * margin) / std::max(total, 1e-9);
  const double H = height * scale + 2 * margin;
  auto px = [&](int poly, const Vec2& v) {
    double x = (v.x.to_double() * unit + shift_x[poly]) * scale + margin;
    double y = H - margin - (v.y.to_double() * unit - boxes[poly].y0) * scale;
    return fmt(x) + "," + fmt(y);
  };
  auto points = [&](int poly, const std::vector<Vec2>& vs) {
    std::string s;
    for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? " " : "") + px(poly, vs[i]);
    return s;
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + std::to_string(options.width) +
         " " + fmt(H) + "\" width=\"" + std::to_string(options.width) + "\" height=\"" + fmt(H) + "\">\n";
  for (int p = 0; p < static_cast<int>(spec.polygons.size()); ++p) {
    out += "  <polygon class=\"face\" data-polygon=\"" + std::to_string(p) + "\" points=\"" +
           points(p, spec.polygons[p].vertices) + "\" fill=\"#ffffff\" stroke=\"none\"/>\n";
  }
  for (std::size_t k = 0; k < options.cylinders.size(); ++k) {
    const auto& c = options.cylinders[k];
    auto pieces = cylinder_in_polygons(M, c);
    out += "  <g class=\"cylinder\" data-index=\"" + std::to_string(k) + "\" data-area=\"" +
           c.area.to_string() + "\" fill=\"" + kFill[k % 6] + "\" fill-opacity=\"0.8\">\n";
    for (const auto& piece : pieces)
      out += "    <polygon points=\"" + points(piece.polygon, piece.vertices) + "\"/>\n";
    if (!pieces.empty()) {
      // Label at the centroid of the largest piece.
      auto best = std::max_element(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) {
        return polygon_area(a.vertices) < polygon_area(b.vertices);
      });
      Vec2 centroid;
      for (const auto& v : best->vertices) centroid += v;
      centroid = centroid * Scalar(Rational(1, static_cast<long>(best->vertices.size())));
      auto at = px(best->polygon, centroid);
      auto comma = at.find(',');
      out += "    <text x=\"" + at.substr(0, comma) + "\" y=\"" + at.substr(comma + 1) +
             "\" font-size=\"14\" text-anchor=\"middle\" fill=\"#000000\">area " + c.area.to_string() +
             "</text>\n";
    }
    out += "  </g>\n";
  }
  for (std::size_t g = 0; g < spec.gluings.size(); ++g) {
    const char* color = kPalette[g % 12];
    for (const EdgeRef& e : {spec.gluings[g].first, spec.gluings[g].second}) {
      const auto& V = spec.polygons[e.polygon].vertices;
      const Vec2& a = V[e.edge];
      const Vec2& b = V[(e.edge + 1) % V.size()];
      auto pa = px(e.polygon, a), pb = px(e.polygon, b);
      auto ca = pa.find(','), cb = pb.find(',');
      out += "  <line class=\"edge\" data-pair=\"" + std::to_string(g) + "\" x1=\"" + pa.substr(0, ca) +
             "\" y1=\"" + pa.substr(ca + 1) + "\" x2=\"" + pb.substr(0, cb) + "\" y2=\"" +
             pb.substr(cb + 1) + "\" stroke=\"" + color + "\" stroke-width=\"3\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace flatkit
