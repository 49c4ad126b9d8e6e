#include "zermelo/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace zermelo {

using nlohmann::json;

namespace {

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected a JSON object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ParseError(where + ": unknown key \"" + key + "\"");
}

double number_at(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.at(key).is_number()) throw ParseError(where + ": \"" + key + "\" must be a number");
  return obj.at(key).get<double>();
}

Space parse_space(const json& root) {
  const std::string tag = root.at("space").get<std::string>();
  if (tag == "euclidean") return Space::euclidean();
  if (tag == "spherical") {
    SphereParams sp;
    if (root.contains("sphere_radius_km")) sp.radius = root.at("sphere_radius_km").get<double>();
    return Space::spherical(sp);
  }
  throw ParseError("space must be \"euclidean\" or \"spherical\", got \"" + tag + "\"");
}

}  // namespace

GridField load_grid_field(const std::filesystem::path& path) {
  const json root = read_json_file(path);
  require_keys(root, {"format", "space", "x1_axis", "x2_axis", "u", "v"}, path.string());
  if (!root.contains("format") || root.at("format") != "cgrid-v1")
    throw ParseError(path.string() + ": format must be \"cgrid-v1\"");
  for (const char* key : {"space", "x1_axis", "x2_axis", "u", "v"})
    if (!root.contains(key)) throw ParseError(path.string() + ": missing key \"" + key + "\"");

  const Space space = parse_space(root);
  const auto x1 = root.at("x1_axis").get<std::vector<double>>();
  const auto x2 = root.at("x2_axis").get<std::vector<double>>();

  const json& ju = root.at("u");
  const json& jv = root.at("v");
  if (!ju.is_array() || !jv.is_array() || ju.size() != x2.size() || jv.size() != x2.size())
    throw ShapeMismatchError(path.string() + ": u/v must have one row per x2 node");

  std::vector<double> u, v;
  std::vector<std::uint8_t> land;
  u.reserve(x1.size() * x2.size());
  v.reserve(u.capacity());
  land.reserve(u.capacity());
  for (std::size_t j = 0; j < x2.size(); ++j) {
    const json& ru = ju[j];
    const json& rv = jv[j];
    if (!ru.is_array() || !rv.is_array() || ru.size() != x1.size() || rv.size() != x1.size())
      throw ShapeMismatchError(path.string() + ": row " + std::to_string(j) +
                               " length does not match x1_axis");
    for (std::size_t i = 0; i < x1.size(); ++i) {
      const bool lu = ru[i].is_null();
      const bool lv = rv[i].is_null();
      if (lu != lv)
        throw ParseError(path.string() + ": land must be null in both u and v (row " +
                         std::to_string(j) + ", col " + std::to_string(i) + ")");
      land.push_back(lu ? 1 : 0);
      u.push_back(lu ? 0.0 : ru[i].get<double>());
      v.push_back(lv ? 0.0 : rv[i].get<double>());
    }
  }
  return GridField(x1, x2, std::move(u), std::move(v), std::move(land), space);
}

void save_grid_field(const GridField& grid, const std::filesystem::path& path) {
  json root;
  root["format"] = "cgrid-v1";
  root["space"] = grid.space().is_spherical() ? "spherical" : "euclidean";
  root["x1_axis"] = grid.x1_axis();
  root["x2_axis"] = grid.x2_axis();
  const std::size_t nx = grid.x1_axis().size();
  const std::size_t ny = grid.x2_axis().size();
  json ju = json::array();
  json jv = json::array();
  for (std::size_t j = 0; j < ny; ++j) {
    json ru = json::array();
    json rv = json::array();
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t c = j * nx + i;
      if (grid.land_mask()[c]) {
        ru.push_back(nullptr);
        rv.push_back(nullptr);
      } else {
        ru.push_back(grid.u()[c]);
        rv.push_back(grid.v()[c]);
      }
    }
    ju.push_back(std::move(ru));
    jv.push_back(std::move(rv));
  }
  root["u"] = std::move(ju);
  root["v"] = std::move(jv);
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << root.dump(1) << "\n";
}

std::unique_ptr<Field> RunManifest::make_field() const {
  if (!builtin_field.empty()) return make_builtin_field(builtin_field);
  return std::make_unique<GridField>(load_grid_field(grid_path));
}

void RunManifest::validate() const {
  if (builtin_field.empty() == grid_path.empty())
    throw ConfigError("manifest: exactly one of a builtin field or a grid path is required");
  if (!deterministic) throw ConfigError("manifest: runs are always deterministic");
  if (smoothing.iterations < 0) throw ConfigError("manifest: smoothing iterations < 0");
  if (!(smoothing.fd_step > 0.0)) throw ConfigError("manifest: fd_step must be positive");
  if (smoothing.singular_margin < 0.0)
    throw ConfigError("manifest: singular_margin must be nonnegative");
  search.validate();
}

std::string RunManifest::to_json() const {
  json root;
  root["space"] = space.is_spherical() ? "spherical" : "euclidean";
  if (space.is_spherical()) root["sphere_radius_km"] = space.sphere().radius;
  if (!builtin_field.empty())
    root["field"] = {{"builtin", builtin_field}};
  else
    root["field"] = {{"grid", grid_path.string()}};
  root["start"] = {start.x1, start.x2};
  root["goal"] = {goal.x1, goal.x2};
  root["vessel_speed"] = search.speed;
  root["search"] = {{"fan_size", search.fan_size},
                    {"cone", search.cone},
                    {"max_deviation", search.max_deviation},
                    {"refine_cone", search.refine_cone},
                    {"dt", search.dt},
                    {"tau", search.tau},
                    {"goal_radius", search.goal_radius},
                    {"max_outer", search.max_outer},
                    {"max_leg_iters", search.max_leg_iters},
                    {"threads", search.threads}};
  root["smoothing"] = {{"iterations", smoothing.iterations},
                       {"fd_step", smoothing.fd_step},
                       {"singular_margin", smoothing.singular_margin},
                       {"threads", smoothing.threads}};
  if (vessel)
    root["vessel"] = {{"displacement_t", vessel->displacement},
                      {"length_m", vessel->length},
                      {"sfoc", vessel->sfoc}};
  root["output"] = {{"route_csv", route_csv.string()}, {"summary_json", summary_json.string()}};
  root["deterministic"] = deterministic;
  return root.dump();
}

RunManifest parse_manifest(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  require_keys(root,
               {"space", "sphere_radius_km", "field", "start", "goal", "vessel_speed", "search",
                "smoothing", "vessel", "output", "deterministic"},
               "manifest");
  for (const char* key : {"space", "field", "start", "goal", "vessel_speed"})
    if (!root.contains(key)) throw ParseError(std::string("manifest: missing key \"") + key + "\"");

  RunManifest m;
  m.space = parse_space(root);
  if (m.space.is_spherical()) {
    m.search = HSConfig::spherical_defaults();
    m.smoothing.iterations = 2000;
  }

  const json& field = root.at("field");
  require_keys(field, {"builtin", "grid"}, "manifest.field");
  if (field.contains("builtin") == field.contains("grid"))
    throw ParseError("manifest.field: exactly one of \"builtin\" or \"grid\"");
  if (field.contains("builtin")) m.builtin_field = field.at("builtin").get<std::string>();
  if (field.contains("grid")) m.grid_path = field.at("grid").get<std::string>();

  auto parse_point = [&](const char* key) {
    const json& arr = root.at(key);
    if (!arr.is_array() || arr.size() != 2)
      throw ParseError(std::string("manifest: \"") + key + "\" must be [x1, x2]");
    return normalized(m.space, {arr[0].get<double>(), arr[1].get<double>()});
  };
  m.start = parse_point("start");
  m.goal = parse_point("goal");
  m.search.speed = number_at(root, "vessel_speed", "manifest");

  if (root.contains("search")) {
    const json& s = root.at("search");
    require_keys(s,
                 {"fan_size", "cone", "max_deviation", "refine_cone", "dt", "tau", "goal_radius",
                  "max_outer", "max_leg_iters", "threads"},
                 "manifest.search");
    if (s.contains("fan_size")) m.search.fan_size = s.at("fan_size").get<int>();
    if (s.contains("cone")) m.search.cone = s.at("cone").get<double>();
    if (s.contains("max_deviation")) m.search.max_deviation = s.at("max_deviation").get<double>();
    if (s.contains("refine_cone")) m.search.refine_cone = s.at("refine_cone").get<double>();
    if (s.contains("dt")) m.search.dt = s.at("dt").get<double>();
    if (s.contains("tau")) m.search.tau = s.at("tau").get<double>();
    if (s.contains("goal_radius")) m.search.goal_radius = s.at("goal_radius").get<double>();
    if (s.contains("max_outer")) m.search.max_outer = s.at("max_outer").get<int>();
    if (s.contains("max_leg_iters")) m.search.max_leg_iters = s.at("max_leg_iters").get<long>();
    if (s.contains("threads")) m.search.threads = s.at("threads").get<int>();
  }
  if (root.contains("smoothing")) {
    const json& s = root.at("smoothing");
    require_keys(s, {"iterations", "fd_step", "singular_margin", "threads"}, "manifest.smoothing");
    if (s.contains("iterations")) m.smoothing.iterations = s.at("iterations").get<int>();
    if (s.contains("fd_step")) m.smoothing.fd_step = s.at("fd_step").get<double>();
    if (s.contains("singular_margin"))
      m.smoothing.singular_margin = s.at("singular_margin").get<double>();
    if (s.contains("threads")) m.smoothing.threads = s.at("threads").get<int>();
  }
  if (root.contains("vessel")) {
    const json& v = root.at("vessel");
    require_keys(v, {"displacement_t", "length_m", "sfoc"}, "manifest.vessel");
    VesselSpec spec;
    spec.displacement = number_at(v, "displacement_t", "manifest.vessel");
    spec.length = number_at(v, "length_m", "manifest.vessel");
    if (v.contains("sfoc")) spec.sfoc = v.at("sfoc").get<double>();
    m.vessel = spec;
  }
  if (root.contains("output")) {
    const json& o = root.at("output");
    require_keys(o, {"route_csv", "summary_json"}, "manifest.output");
    if (o.contains("route_csv")) m.route_csv = o.at("route_csv").get<std::string>();
    if (o.contains("summary_json")) m.summary_json = o.at("summary_json").get<std::string>();
  }
  if (root.contains("deterministic")) m.deterministic = root.at("deterministic").get<bool>();
  m.validate();
  return m;
}

RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str());
}

RunManifest apply_overrides(RunManifest m, const std::map<std::string, std::string>& overrides) {
  auto as_double = [](const std::string& key, const std::string& val) {
    try {
      std::size_t pos = 0;
      const double x = std::stod(val, &pos);
      if (pos != val.size()) throw std::invalid_argument(val);
      return x;
    } catch (const std::exception&) {
      throw ConfigError("override " + key + ": not a number: \"" + val + "\"");
    }
  };
  auto as_point = [&](const std::string& key, const std::string& val) {
    const auto comma = val.find(',');
    if (comma == std::string::npos)
      throw ConfigError("override " + key + ": expected \"x1,x2\"");
    return Point{as_double(key, val.substr(0, comma)), as_double(key, val.substr(comma + 1))};
  };
  for (const auto& [key, val] : overrides) {
    if (key == "vessel_speed") m.search.speed = as_double(key, val);
    else if (key == "fan_size") m.search.fan_size = static_cast<int>(as_double(key, val));
    else if (key == "cone") m.search.cone = as_double(key, val);
    else if (key == "max_deviation") m.search.max_deviation = as_double(key, val);
    else if (key == "refine_cone") m.search.refine_cone = as_double(key, val);
    else if (key == "dt") m.search.dt = as_double(key, val);
    else if (key == "tau") m.search.tau = as_double(key, val);
    else if (key == "goal_radius") m.search.goal_radius = as_double(key, val);
    else if (key == "max_outer") m.search.max_outer = static_cast<int>(as_double(key, val));
    else if (key == "max_leg_iters") m.search.max_leg_iters = static_cast<long>(as_double(key, val));
    else if (key == "threads") {
      m.search.threads = static_cast<int>(as_double(key, val));
      m.smoothing.threads = m.search.threads;
    } else if (key == "smoothing_iterations")
      m.smoothing.iterations = static_cast<int>(as_double(key, val));
    else if (key == "fd_step") m.smoothing.fd_step = as_double(key, val);
    else if (key == "singular_margin") m.smoothing.singular_margin = as_double(key, val);
    else if (key == "start") m.start = normalized(m.space, as_point(key, val));
    else if (key == "goal") m.goal = normalized(m.space, as_point(key, val));
    else if (key == "route_csv") m.route_csv = val;
    else if (key == "summary_json") m.summary_json = val;
    else throw ConfigError("unknown override key: " + key);
  }
  m.validate();
  return m;
}

namespace {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void RouteRecord::write(const std::filesystem::path& csv,
                        const std::filesystem::path& summary) const {
  std::ofstream out(csv);
  if (!out) throw ParseError("cannot write " + csv.string());
  out << "t,x1,x2,alpha\n";
  for (const RouteRow& row : rows)
    out << format_double(row.t) << ',' << format_double(row.x1) << ',' << format_double(row.x2)
        << ',' << format_double(row.alpha) << '\n';
  out.close();

  json s;
  s["travel_time"] = travel_time;
  s["path_length"] = path_length;
  if (fuel_kg) s["fuel_kg"] = *fuel_kg;
  s["reached"] = reached;
  s["leg_boundaries"] = leg_boundaries;
  s["action_trace_length"] = action_trace_length;
  s["smoothing_rejected_land"] = smoothing_rejected_land;
  s["rows_csv"] = csv.filename().string();
  s["manifest"] = json::parse(manifest_json);
  std::ofstream sout(summary);
  if (!sout) throw ParseError("cannot write " + summary.string());
  sout << s.dump(1) << "\n";
}

RouteRecord load_route_record(const std::filesystem::path& summary_json) {
  const json s = read_json_file(summary_json);
  RouteRecord rec;
  rec.travel_time = s.at("travel_time").get<double>();
  rec.path_length = s.at("path_length").get<double>();
  if (s.contains("fuel_kg")) rec.fuel_kg = s.at("fuel_kg").get<double>();
  rec.reached = s.at("reached").get<bool>();
  rec.leg_boundaries = s.at("leg_boundaries").get<std::vector<double>>();
  rec.action_trace_length = s.at("action_trace_length").get<std::size_t>();
  rec.smoothing_rejected_land = s.at("smoothing_rejected_land").get<bool>();
  rec.manifest_json = s.at("manifest").dump();

  const std::filesystem::path csv = summary_json.parent_path() / s.at("rows_csv").get<std::string>();
  std::ifstream in(csv);
  if (!in) throw ParseError("cannot open " + csv.string());
  std::string line;
  if (!std::getline(in, line) || line != "t,x1,x2,alpha")
    throw ParseError(csv.string() + ": bad route CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    RouteRow row;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &row.t, &row.x1, &row.x2, &row.alpha) != 4)
      throw ParseError(csv.string() + ": bad row: " + line);
    rec.rows.push_back(row);
  }
  return rec;
}

namespace {

bool crosses_land(const std::vector<Point>& pts, const Field& field, const Space& space) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (field.is_land(pts[i])) return true;
    if (i + 1 < pts.size() && field.is_land(geodesic_midpoint(space, pts[i], pts[i + 1])))
      return true;
  }
  return false;
}

}  // namespace

RouteRecord plan_route(const RunManifest& manifest) {
  manifest.validate();
  const std::unique_ptr<Field> field = manifest.make_field();
  const Space& space = manifest.space;

  if (field->is_land(manifest.start)) throw LandStartError("plan_route: start point is on land");
  if (field->is_land(manifest.goal)) throw LandGoalError("plan_route: goal point is on land");

  const Route hs = hybrid_search(manifest.start, manifest.goal, manifest.search, *field, space);

  RouteRecord rec;
  rec.reached = hs.reached;
  rec.manifest_json = manifest.to_json();
  for (const ShotTrajectory& leg : hs.legs) rec.leg_boundaries.push_back(leg.back().t);

  const std::vector<TrajectoryState> raw = hs.flatten();
  bool use_smoothed = false;
  DiscreteRoute smoothed;
  if (manifest.smoothing.iterations > 0 && raw.size() >= 2 &&
      raw.back().t > raw.front().t) {
    const DiscreteRoute sampled = resample_by_time(hs, 200, space);
    SmoothResult res = space.is_spherical()
                           ? smooth_spherical(sampled, manifest.smoothing, manifest.search.speed,
                                              *field)
                           : smooth(sampled, manifest.smoothing, manifest.search.speed, *field);
    rec.action_trace_length = res.action_trace.size();
    if (crosses_land(res.route.points, *field, space)) {
      rec.smoothing_rejected_land = true;
    } else {
      smoothed = std::move(res.route);
      use_smoothed = true;
    }
  }

  std::vector<Point> polyline;
  if (use_smoothed) {
    polyline = smoothed.points;
    const std::vector<double> headings =
        path_headings(polyline, manifest.search.speed, *field, space);
    for (std::size_t j = 0; j < polyline.size(); ++j)
      rec.rows.push_back({raw.front().t + smoothed.h * static_cast<double>(j), polyline[j].x1,
                          polyline[j].x2, headings[j]});
  } else {
    polyline.reserve(raw.size());
    for (const TrajectoryState& s : raw) {
      polyline.push_back(s.pos);
      rec.rows.push_back({s.t, s.pos.x1, s.pos.x2, s.alpha});
    }
  }

  if (polyline.size() >= 2) {
    const PathMetrics metrics =
        route_metrics(polyline, manifest.search.speed, *field, space, manifest.vessel);
    rec.travel_time = metrics.travel_time;
    rec.path_length = metrics.path_length;
    rec.fuel_kg = metrics.fuel_kg;
  }

  rec.write(manifest.route_csv, manifest.summary_json);
  return rec;
}

PathMetrics baseline_metrics(const RunManifest& manifest) {
  manifest.validate();
  const std::unique_ptr<Field> field = manifest.make_field();
  const std::vector<Point> path = min_distance_route(manifest.space, manifest.start,
                                                     manifest.goal, 129);
  return route_metrics(path, manifest.search.speed, *field, manifest.space, manifest.vessel);
}

RunManifest benchmark_manifest(const std::string& name) {
  RunManifest m;
  m.space = Space::euclidean();
  m.builtin_field = name;
  m.search = HSConfig{};  // unit speed, N=21, cone pi, dt 0.01, tau 0.1, d 0.1
  m.smoothing = SmoothingConfig{};
  if (name == "circular") {
    m.start = {3.0, 2.0};
    m.goal = {-7.0, 2.0};
  } else if (name == "four_vortices") {
    m.start = {0.0, 0.0};
    m.goal = {6.0, 2.0};
  } else {
    throw ConfigError("unknown benchmark: " + name);
  }
  m.route_csv = name + "_route.csv";
  m.summary_json = name + "_summary.json";
  return m;
}

BenchmarkReport run_benchmark(const std::string& name,
                              const std::map<std::string, std::string>& overrides) {
  const RunManifest manifest = apply_overrides(benchmark_manifest(name), overrides);
  BenchmarkReport report;
  report.field_name = name;
  report.min_distance_time = baseline_metrics(manifest).travel_time;
  report.record = plan_route(manifest);
  report.hs_time = report.record.travel_time;
  return report;
}

void emit_plot_data(const RouteRecord& record, const Field& field, const PlotBBox& bbox,
                    double resolution, const std::filesystem::path& field_csv,
                    const std::filesystem::path& route_csv) {
  if (!(resolution > 0.0)) throw ConfigError("emit_plot_data: resolution must be positive");
  if (bbox.x1_max < bbox.x1_min || bbox.x2_max < bbox.x2_min)
    throw ConfigError("emit_plot_data: empty bbox");

  const auto nx = static_cast<std::size_t>(
      std::floor((bbox.x1_max - bbox.x1_min) / resolution + 1e-9)) + 1;
  const auto ny = static_cast<std::size_t>(
      std::floor((bbox.x2_max - bbox.x2_min) / resolution + 1e-9)) + 1;

  std::ofstream out(field_csv);
  if (!out) throw ParseError("cannot write " + field_csv.string());
  out << "x1,x2,w1,w2,land\n";
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const Point p{bbox.x1_min + resolution * static_cast<double>(i),
                    bbox.x2_min + resolution * static_cast<double>(j)};
      if (!field.in_domain(p))
        throw OutOfDomainError("emit_plot_data: bbox outside field domain");
      FieldSample w{0.0, 0.0};
      try {
        w = field.sample(p);
      } catch (const AllLandCellError&) {
        // fully land-locked cell; keep zeros
      }
      const int land = field.is_land(p) ? 1 : 0;
      out << format_double(p.x1) << ',' << format_double(p.x2) << ',' << format_double(w.w1)
          << ',' << format_double(w.w2) << ',' << land << '\n';
    }
  }
  out.close();

  std::ofstream rout(route_csv);
  if (!rout) throw ParseError("cannot write " + route_csv.string());
  rout << "t,x1,x2,alpha\n";
  for (const RouteRow& row : record.rows)
    rout << format_double(row.t) << ',' << format_double(row.x1) << ',' << format_double(row.x2)
         << ',' << format_double(row.alpha) << '\n';
}

}  // namespace zermelo
