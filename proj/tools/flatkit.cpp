// Command-line front end.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "flatkit/corpus.hpp"
#include "flatkit/deform.hpp"
#include "flatkit/errors.hpp"
#include "flatkit/io.hpp"
#include "flatkit/moduli.hpp"
#include "flatkit/parallel.hpp"
#include "flatkit/render.hpp"
#include "flatkit/unfold.hpp"

using namespace flatkit;

namespace {

// Bad option values are usage errors (exit 2), not input errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rational parse_rational_option(const std::string& name, const std::string& text) {
  try {
    Scalar s = Scalar::parse(text);
    if (!s.is_rational()) throw UsageError(name + " must be rational: " + text);
    return s.rational_part();
  } catch (const Error&) {
    throw UsageError("malformed " + name + ": " + text);
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) out.push_back(item);
  return out;
}

Vec2 parse_vector_option(const std::string& name, const std::string& text) {
  auto parts = split(text, ',');
  if (parts.size() != 2) throw UsageError(name + " needs two comma separated numbers: " + text);
  try {
    return {Scalar::parse(parts[0]), Scalar::parse(parts[1])};
  } catch (const Error&) {
    throw UsageError("malformed " + name + ": " + text);
  }
}

// Squared length from --max-length-sq, or from --max-length when rational.
Scalar length_sq_option(const std::string& sq, const std::string& plain, bool required) {
  if (!sq.empty() && !plain.empty()) throw UsageError("give only one of --max-length-sq and --max-length");
  if (!sq.empty()) {
    Rational r = parse_rational_option("--max-length-sq", sq);
    if (r <= 0) throw UsageError("--max-length-sq must be positive");
    return Scalar(r);
  }
  if (!plain.empty()) {
    Rational r = parse_rational_option("--max-length", plain);
    if (r <= 0) throw UsageError("--max-length must be positive");
    return Scalar(Rational(r * r));
  }
  if (required) throw UsageError("--max-length-sq is required");
  return Scalar(0);
}

std::string str(const Scalar& s) { return s.to_string(); }
std::string str(const Rational& q) { return rational_to_string(q); }
// Interval cells, rounded outward to the grid 10^-12.
std::string str(const Interval& i) {
  const Integer grid("1000000000000");
  Rational lo = i.lo * grid, hi = i.hi * grid;
  Integer l, h;
  mpz_fdiv_q(l.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  mpz_cdiv_q(h.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
  Rational a(l, grid), b(h, grid);
  a.canonicalize();
  b.canonicalize();
  return rational_to_string(a) + ".." + rational_to_string(b);
}

Json vec_json(const Vec2& v) { return Json::array({str(v.x), str(v.y)}); }

Json cylinder_json(const Cylinder& c) {
  Json j;
  j["direction"] = vec_json(c.direction);
  j["core"] = vec_json(c.core);
  j["transversal"] = vec_json(c.transversal);
  j["len_sq"] = str(c.length_sq());
  j["area"] = str(c.area);
  j["base"] = c.base;
  j["bottom_saddles"] = c.bottom.size();
  j["top_saddles"] = c.top.size();
  return j;
}

struct Output {
  std::string path;  // empty: stdout
  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
    } else {
      write_text_file(path, text);
    }
  }
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    out += "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

RationalPolygon read_coords(const std::string& path, const std::vector<Rational>& angles) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
  long d = 0;
  if (j.contains("field") && j["field"].contains("d") && !j["field"]["d"].is_null()) d = j["field"]["d"].get<long>();
  RationalPolygon Q;
  for (const auto& v : j.at("vertices")) Q.vertices.push_back({scalar_from_json(v.at(0), d), scalar_from_json(v.at(1), d)});
  Q.angles = angles;
  return Q;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flatkit: exact computations on translation surfaces"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default FLATKIT_THREADS or all cores)");

  std::string input, out_path, csv_path, max_sq, max_len, grid, delta = "", schedule = "adaptive";
  std::string angles, coords, start, direction, family;
  bool project = false, estimate = false;
  int count = 0;
  std::uint64_t seed = 1;

  auto* validate_cmd = app.add_subcommand("validate", "check a surface file and print its invariants");
  validate_cmd->add_option("surface", input, "surface JSON")->required();

  auto* unfold_cmd = app.add_subcommand("unfold", "unfold a rational billiard table");
  unfold_cmd->add_option("--angles", angles, "interior angles as fractions of pi, p1/q1,p2/q2,...")->required();
  unfold_cmd->add_option("--coords", coords, "JSON file with the table's vertices");
  unfold_cmd->add_flag("--project", project, "trace a billiard orbit and emit it as CSV");
  unfold_cmd->add_option("--start", start, "orbit start x,y inside the table");
  unfold_cmd->add_option("--direction", direction, "orbit direction x,y");
  unfold_cmd->add_option("--max-length-sq", max_sq, "squared orbit length");
  unfold_cmd->add_option("--max-length", max_len, "orbit length (rational)");
  unfold_cmd->add_option("--out", out_path, "output file");

  auto* saddles_cmd = app.add_subcommand("saddles", "enumerate saddle connections");
  saddles_cmd->add_option("surface", input, "surface JSON")->required();
  saddles_cmd->add_option("--max-length-sq", max_sq, "squared length bound NUM/DEN");
  saddles_cmd->add_option("--max-length", max_len, "length bound (rational)");
  saddles_cmd->add_option("--csv", csv_path, "CSV output file");

  auto* cylinders_cmd = app.add_subcommand("cylinders", "enumerate periodic cylinders");
  cylinders_cmd->add_option("surface", input, "surface JSON")->required();
  cylinders_cmd->add_option("--max-length-sq", max_sq, "squared core length bound NUM/DEN");
  cylinders_cmd->add_option("--max-length", max_len, "core length bound (rational)");
  cylinders_cmd->add_option("--csv", csv_path, "CSV output file");

  auto* growth_cmd = app.add_subcommand("growth", "counting functions on a grid of squared lengths");
  growth_cmd->add_option("surface", input, "surface JSON")->required();
  growth_cmd->add_option("--grid", grid, "squared lengths T1,T2,...")->required();
  growth_cmd->add_option("--csv", csv_path, "CSV output file");

  auto* cover_cmd = app.add_subcommand("cover", "disjoint cylinders filling all but delta of the area");
  cover_cmd->add_option("surface", input, "surface JSON")->required();
  cover_cmd->add_option("--delta", delta, "area fraction P/Q left uncovered")->required();
  cover_cmd->add_option("--schedule", schedule, "paper or adaptive")->check(CLI::IsMember({"paper", "adaptive"}));
  cover_cmd->add_option("--out", out_path, "output file");

  auto* big_cmd = app.add_subcommand("big-cylinder", "a cylinder of area at least S/m");
  big_cmd->add_option("surface", input, "surface JSON")->required();
  big_cmd->add_option("--out", out_path, "output file");

  auto* shortest_cmd = app.add_subcommand("shortest", "shortest periodic geodesic");
  shortest_cmd->add_option("surface", input, "surface JSON")->required();
  shortest_cmd->add_option("--out", out_path, "output file");

  auto* sample_cmd = app.add_subcommand("sample", "sample a surface family and estimate growth constants");
  sample_cmd->add_option("--family", family, "torus, marked-torus or lshape")
      ->required()
      ->check(CLI::IsMember({"torus", "marked-torus", "lshape"}));
  sample_cmd->add_option("--count", count, "number of samples")->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", seed, "random seed");
  sample_cmd->add_option("--max-length-sq", max_sq, "squared length T^2 for the estimate");
  sample_cmd->add_option("--max-length", max_len, "length T (rational)");
  sample_cmd->add_flag("--estimate", estimate, "count cylinders and estimate c1, c2");
  sample_cmd->add_option("--out", out_path, "JSON output file");
  sample_cmd->add_option("--csv", csv_path, "CSV of per-sample rows");

  auto* render_cmd = app.add_subcommand("render", "SVG drawing of a surface");
  render_cmd->add_option("surface", input, "surface JSON")->required();
  render_cmd->add_option("--direction", direction, "shade the cylinders of direction x,y");
  render_cmd->add_option("--max-length-sq", max_sq, "squared core length cap for --direction (default 64 S)");
  render_cmd->add_option("--max-length", max_len, "core length cap (rational)");
  render_cmd->add_option("--out", out_path, "SVG output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const Output out{out_path};
    if (validate_cmd->parsed()) {
      auto M = TranslationSurface::build(read_spec_file(input));
      std::string mult;
      for (const auto& s : M.singularities()) mult += (mult.empty() ? "" : ",") + std::to_string(s.multiplicity);
      std::cout << "genus = " << M.genus() << "\n"
                << "singularities = " << M.num_singularities() << "\n"
                << "multiplicities = " << mult << "\n"
                << "m = " << M.total_multiplicity() << "\n"
                << "S = " << str(M.area()) << "\n";
    } else if (unfold_cmd->parsed()) {
      std::vector<Rational> a;
      for (const auto& t : split(angles, ',')) a.push_back(parse_rational_option("--angles", t));
      RationalPolygon Q = coords.empty() ? polygon_from_angles(a) : read_coords(coords, a);
      auto U = unfold(Q);
      if (!project) {
        out.write(spec_to_text(U.surface.spec()));
      } else {
        if (start.empty() || direction.empty()) throw UsageError("--project needs --start and --direction");
        Vec2 x = parse_vector_option("--start", start), v = parse_vector_option("--direction", direction);
        Scalar cap = length_sq_option(max_sq, max_len, true);
        auto t = trace_ray(U.surface, {0, x}, v, cap);
        auto orbit = project_orbit(U.map, t);
        std::vector<std::vector<std::string>> rows;
        for (const auto& p : orbit.points) rows.push_back({str(p.x), str(p.y)});
        out.write(csv({"x", "y"}, rows));
        std::cerr << "status = " << to_string(orbit.status) << "\n";
      }
    } else if (saddles_cmd->parsed()) {
      auto M = TranslationSurface::build(read_spec_file(input));
      Scalar cap = length_sq_option(max_sq, max_len, true);
      auto all = enumerate_saddle_connections(M, cap, threads);
      std::vector<std::vector<std::string>> rows;
      for (const auto& s : all)
        rows.push_back({str(s.length_sq()), str(s.holonomy.x), str(s.holonomy.y), std::to_string(s.start),
                        std::to_string(s.start_sector()), std::to_string(s.end)});
      auto text = csv({"len_sq", "hol_x", "hol_y", "start_sing", "start_sector", "end_sing"}, rows);
      if (csv_path.empty()) {
        std::cout << text;
      } else {
        write_text_file(csv_path, text);
        std::cout << "saddle connections = " << rows.size() << "\n";
      }
    } else if (cylinders_cmd->parsed()) {
      auto M = TranslationSurface::build(read_spec_file(input));
      Scalar cap = length_sq_option(max_sq, max_len, true);
      auto cyl = enumerate_cylinders(M, cap, threads);
      std::vector<std::vector<std::string>> rows;
      for (const auto& c : cyl)
        rows.push_back({str(c.direction.x), str(c.direction.y), str(c.length_sq()), str(c.area),
                        std::to_string(c.bottom.size() + c.top.size())});
      auto text = csv({"dir_x", "dir_y", "len_sq", "area", "n_boundary_saddles"}, rows);
      if (csv_path.empty()) {
        std::cout << text;
      } else {
        write_text_file(csv_path, text);
        std::cout << "cylinders = " << rows.size() << "\n";
      }
    } else if (growth_cmd->parsed()) {
      auto M = TranslationSurface::build(read_spec_file(input));
      std::vector<Scalar> ts;
      for (const auto& t : split(grid, ',')) {
        Rational r = parse_rational_option("--grid", t);
        if (r <= 0) throw UsageError("--grid values must be positive");
        ts.push_back(Scalar(r));
      }
      auto table = growth_table(M, ts, threads);
      std::vector<std::vector<std::string>> rows;
      for (const auto& r : table.rows)
        rows.push_back({str(r.t_sq), std::to_string(r.n0), std::to_string(r.n1), str(r.n2), str(r.n2_over_s),
                        str(r.sigma)});
      auto text = csv({"t_sq", "n0", "n1", "n2", "n2_over_s", "sigma"}, rows);
      if (csv_path.empty()) {
        std::cout << text;
      } else {
        write_text_file(csv_path, text);
        std::cout << "rows = " << rows.size() << "\n";
      }
    } else if (cover_cmd->parsed()) {
      auto M = TranslationSurface::build(read_spec_file(input));
      Rational d = parse_rational_option("--delta", delta);
      auto r = cover_by_cylinders(M, d, schedule == "paper" ? CoverSchedule::kPaper : CoverSchedule::kAdaptive,
                                  threads);
      Json j;
      j["delta"] = str(d);
      j["schedule"] = r.schedule;
      j["cylinders"] = Json::array();
      for (const auto& c : r.cylinders) j["cylinders"].push_back(cylinder_json(c));
      j["cylinder_area"] = str(r.cylinder_area);
      j["target_area"] = str(Scalar(Rational(1 - d)) * M.area());
      j["area_bound_holds"] = r.cylinder_area >= Scalar(Rational(1 - d)) * M.area();
      j["triangle_area"] = str(r.triangle_area);
      j["max_length_sq"] = str(r.max_length_sq);
      j["family_size"] = r.family.size();
      j["exist1_calls"] = r.exist1_calls;
      j["saddles_added"] = r.saddles_added;
      j["attempts"] = r.attempts;
      j["condition"] = str(r.condition);
      j["schedule_bounds_hold"] = r.schedule_bounds_hold;
      out.write(dump(j));
    } else if (big_cmd->parsed()) {
      auto M = TranslationSurface::build(read_spec_file(input));
      auto b = find_big_cylinder(M, threads);
      Json j;
      j["cylinder"] = cylinder_json(b.cylinder);
      j["area_bound"] = str(M.area() / Scalar(M.total_multiplicity()));
      j["area_bound_holds"] = b.cylinder.area * Scalar(M.total_multiplicity()) >= M.area();
      j["torus_path"] = b.torus_path;
      j["length_within_bound"] = b.length_within_bound;
      out.write(dump(j));
    } else if (shortest_cmd->parsed()) {
      auto M = TranslationSurface::build(read_spec_file(input));
      auto s = shortest_periodic_geodesic(M, threads);
      Json j;
      j["cylinder"] = cylinder_json(s.cylinder);
      j["length"] = str(s.cylinder.length());
      j["within_bound"] = s.within_bound;
      out.write(dump(j));
    } else if (sample_cmd->parsed()) {
      SurfaceFamily F{family_kind(family)};
      Json j;
      j["family"] = family;
      j["seed"] = seed;
      j["count"] = count;
      auto samples = sample_family(F, count, seed);
      std::vector<std::vector<std::string>> rows;
      std::optional<ConstantEstimate> est;
      if (estimate) {
        Scalar t_sq = length_sq_option(max_sq, max_len, true);
        est = estimate_constants(F, t_sq, count, seed, threads);
        j["t_sq"] = str(t_sq);
      }
      j["samples"] = Json::array();
      for (int i = 0; i < count; ++i) {
        Json s;
        s["params"] = Json::array();
        std::vector<std::string> row{std::to_string(i)};
        std::string params;
        for (const auto& p : samples[i].params) {
          s["params"].push_back(str(p));
          params += (params.empty() ? "" : " ") + str(p);
        }
        row.push_back(params);
        if (est) {
          const auto& c = est->per_sample[i];
          s["n1"] = c.n1;
          s["n2"] = str(c.n2);
          s["within_upper_bound"] = c.within_upper_bound;
          row.push_back(std::to_string(c.n1));
          row.push_back(str(c.n2));
          row.push_back(c.within_upper_bound ? "true" : "false");
        } else {
          s["surface"] = spec_to_json(samples[i].spec);
        }
        j["samples"].push_back(std::move(s));
        rows.push_back(std::move(row));
      }
      if (est) {
        j["excluded"] = est->excluded;
        j["c1"] = str(est->c1);
        j["c2"] = str(est->c2);
        j["ratio"] = str(est->ratio);
      }
      out.write(dump(j));
      if (!csv_path.empty()) {
        std::vector<std::string> header{"index", "params"};
        if (est) header.insert(header.end(), {"n1", "n2", "within_upper_bound"});
        write_text_file(csv_path, csv(header, rows));
      }
    } else if (render_cmd->parsed()) {
      auto M = TranslationSurface::build(read_spec_file(input));
      RenderOptions opt;
      if (!direction.empty()) {
        Vec2 v = parse_vector_option("--direction", direction);
        Scalar cap = length_sq_option(max_sq, max_len, false);
        if (cap.is_zero()) cap = Scalar(64) * M.area();
        opt.cylinders = decompose_direction(M, v, cap).cylinders;
      } else if (!max_sq.empty() || !max_len.empty()) {
        throw UsageError("--max-length-sq needs --direction");
      }
      out.write(render_svg(M, opt));
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
