#include "flatkit/io.hpp"

#include <fstream>
#include <sstream>

#include "flatkit/errors.hpp"

namespace flatkit {

namespace {

Json integer_to_json(const Integer& z) {
  if (z.fits_slong_p()) return Json(static_cast<long long>(z.get_si()));
  return Json(z.get_str());
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    Integer z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw ValidationError("malformed integer in JSON");
    return z;
  }
  throw ValidationError("expected an integer in JSON");
}

Rational make_rational(const Integer& n, const Integer& d) {
  if (d == 0) throw ValidationError("zero denominator in JSON scalar");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

}  // namespace

Json scalar_to_json(const Scalar& s) {
  const Rational& a = s.rational_part();
  const Rational& b = s.irrational_part();
  return Json::array({integer_to_json(a.get_num()), integer_to_json(a.get_den()),
                      integer_to_json(b.get_num()), integer_to_json(b.get_den())});
}

Scalar scalar_from_json(const Json& j, long d) {
  if (!j.is_array() || j.size() != 4) throw ValidationError("scalar must be four integers");
  Rational a = make_rational(integer_from_json(j[0]), integer_from_json(j[1]));
  Rational b = make_rational(integer_from_json(j[2]), integer_from_json(j[3]));
  if (sgn(b) != 0 && d == 0) throw FieldMismatch("irrational coordinate in a rational surface");
  if (sgn(b) == 0) return Scalar(a);
  return Scalar(a, b, d);
}

Json spec_to_json(const SurfaceSpec& spec) {
  Json out;
  out["field"] = Json::object();
  out["field"]["d"] = spec.d == 0 ? Json(nullptr) : Json(spec.d);
  Json polys = Json::array();
  for (const auto& p : spec.polygons) {
    Json verts = Json::array();
    for (const auto& v : p.vertices) {
      verts.push_back(Json::array({scalar_to_json(v.x), scalar_to_json(v.y)}));
    }
    Json pj;
    pj["vertices"] = verts;
    polys.push_back(pj);
  }
  out["polygons"] = polys;
  Json glue = Json::array();
  for (const auto& [a, b] : spec.gluings) {
    glue.push_back(Json::array({Json::array({a.polygon, a.edge}), Json::array({b.polygon, b.edge})}));
  }
  out["gluings"] = glue;
  return out;
}

SurfaceSpec spec_from_json(const Json& j) {
  try {
    SurfaceSpec spec;
    const auto& f = j.at("field").at("d");
    spec.d = f.is_null() ? 0 : f.get<long>();
    for (const auto& pj : j.at("polygons")) {
      PolygonSpec p;
      for (const auto& vj : pj.at("vertices")) {
        if (!vj.is_array() || vj.size() != 2) throw ValidationError("vertex must be a pair of scalars");
        p.vertices.emplace_back(scalar_from_json(vj[0], spec.d), scalar_from_json(vj[1], spec.d));
      }
      spec.polygons.push_back(std::move(p));
    }
    for (const auto& gj : j.at("gluings")) {
      if (!gj.is_array() || gj.size() != 2) throw ValidationError("gluing must be a pair of edges");
      EdgeRef a{gj[0].at(0).get<int>(), gj[0].at(1).get<int>()};
      EdgeRef b{gj[1].at(0).get<int>(), gj[1].at(1).get<int>()};
      spec.gluings.emplace_back(a, b);
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed surface JSON: ") + e.what());
  }
}

std::string spec_to_text(const SurfaceSpec& spec) {
  // One polygon and one gluing per line keeps files diffable.
  const Json j = spec_to_json(spec);
  std::ostringstream os;
  os << "{\n  \"field\": " << j["field"].dump() << ",\n  \"polygons\": [\n";
  const auto& polys = j["polygons"];
  for (std::size_t i = 0; i < polys.size(); ++i) {
    os << "    " << polys[i].dump() << (i + 1 < polys.size() ? ",\n" : "\n");
  }
  os << "  ],\n  \"gluings\": [\n";
  const auto& glue = j["gluings"];
  for (std::size_t i = 0; i < glue.size(); ++i) {
    os << "    " << glue[i].dump() << (i + 1 < glue.size() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
  return os.str();
}

SurfaceSpec spec_from_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  return spec_from_json(j);
}

SurfaceSpec read_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return spec_from_text(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

}  // namespace flatkit
