#include "flatkit/triangulation.hpp"

#include <algorithm>

#include "flatkit/errors.hpp"

namespace flatkit {

bool FamilyFace::is_triangle() const {
  if (half_edges.size() != 3) return false;
  return std::all_of(corners.begin(), corners.end(), [](const ConeAngle& a) { return a.less_than_pi(); });
}

bool FamilyFace::is_straight() const {
  return std::all_of(corners.begin(), corners.end(), [](const ConeAngle& a) { return a.is_pi(); });
}

FamilyFaces family_faces(const Mesh& mesh, const std::vector<SaddleConnection>& family) {
  FamilyFaces out;
  for (const auto& s : family) {
    out.half_edges.push_back(s);
    out.half_edges.push_back(s.reversed());
  }
  const auto& he = out.half_edges;
  const int H = static_cast<int>(he.size());
  std::vector<std::vector<int>> around(mesh.num_singularities());
  for (int h = 0; h < H; ++h) around[he[h].start].push_back(h);
  std::vector<int> pos(H);
  for (int w = 0; w < mesh.num_singularities(); ++w) {
    auto& list = around[w];
    std::sort(list.begin(), list.end(),
              [&](int a, int b) { return mesh.key_less(w, he[a].start_key, he[b].start_key); });
    for (int i = 0; i < static_cast<int>(list.size()); ++i) pos[list[i]] = i;
  }
  // The domain left of h sits clockwise of h's reversal at the end point;
  // the next boundary half-edge is the first one met turning that way.
  std::vector<int> next(H);
  std::vector<ConeAngle> corner(H);
  for (int h = 0; h < H; ++h) {
    const int w = he[h].end, r = h ^ 1;
    const auto& list = around[w];
    const int n = static_cast<int>(list.size());
    next[h] = list[(pos[r] + n - 1) % n];
    if (n == 1) {
      corner[h] = {mesh.multiplicity[w], 0, true};
    } else {
      corner[h] = cone_angle(mesh, w, he[next[h]].start_key, he[r].start_key);
    }
  }
  std::vector<bool> seen(H, false);
  for (int h0 = 0; h0 < H; ++h0) {
    if (seen[h0]) continue;
    FamilyFace f;
    for (int h = h0; !seen[h]; h = next[h]) {
      seen[h] = true;
      f.half_edges.push_back(h);
      f.corners.push_back(corner[h]);
      f.holonomy_sum += he[h].holonomy;
    }
    out.faces.push_back(std::move(f));
  }
  return out;
}

Triangulation triangulate(const TranslationSurface& M, const std::vector<SaddleConnection>& saddles,
                          int threads) {
  const Mesh& mesh = M.mesh();
  if (!DisjointnessOracle(mesh, saddles).pairwise_disjoint())
    throw PreconditionError("saddle connections are not pairwise disjoint");
  const std::size_t target = 3 * static_cast<std::size_t>(M.total_multiplicity());
  std::vector<SaddleConnection> family = saddles;
  if (family.size() > target) throw PreconditionError("more than 3m disjoint saddle connections");
  Scalar r2 = M.area();
  for (int round = 0; family.size() < target; ++round) {
    if (round > 40) throw InternalError("triangulation did not close");
    for (const auto& s : enumerate_saddle_connections(mesh, r2, threads)) {
      if (family.size() == target) break;
      if (!in_upper_half(s.holonomy)) continue;
      if (DisjointnessOracle(mesh, family).disjoint_from_all(s)) family.push_back(s);
    }
    r2 *= Scalar(4);
  }

  Triangulation out;
  out.edges = family;
  auto faces = family_faces(mesh, family);
  for (const auto& f : faces.faces) {
    if (!f.is_triangle()) throw InternalError("maximal family has a non-triangular domain");
    const auto& h = f.half_edges;
    out.triangles.push_back({h[0], h[1], h[2]});
    out.area += cross(faces.half_edges[h[0]].holonomy, faces.half_edges[h[1]].holonomy) / Scalar(2);
  }
  if (out.triangles.size() != 2 * static_cast<std::size_t>(M.total_multiplicity()))
    throw InternalError("triangle count differs from 2m");
  if (out.area != M.area()) throw InternalError("triangles do not cover the surface");
  return out;
}

}  // namespace flatkit
