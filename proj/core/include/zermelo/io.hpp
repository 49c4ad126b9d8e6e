#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zermelo/analysis.hpp"
#include "zermelo/field.hpp"
#include "zermelo/geometry.hpp"
#include "zermelo/search.hpp"
#include "zermelo/smoothing.hpp"

namespace zermelo {

/// Load a "cgrid-v1" JSON current grid. Land is encoded as null in both u
/// and v. Throws ParseError / ShapeMismatchError / NonMonotonicAxisError.
GridField load_grid_field(const std::filesystem::path& path);

/// Write a grid in the same format; loading it back reproduces every sample
/// bit-exactly.
void save_grid_field(const GridField& grid, const std::filesystem::path& path);

/// A complete description of one planning run.
struct RunManifest {
  Space space;
  std::string builtin_field;             // one of make_builtin_field's names, or
  std::filesystem::path grid_path;       // a cgrid-v1 file (exactly one of the two)
  Point start;
  Point goal;
  HSConfig search;
  SmoothingConfig smoothing;
  std::optional<VesselSpec> vessel;
  std::filesystem::path route_csv = "route.csv";
  std::filesystem::path summary_json = "route_summary.json";
  bool deterministic = true;

  std::unique_ptr<Field> make_field() const;
  void validate() const;  // throws ConfigError
  std::string to_json() const;
};

/// Parse a manifest from JSON text / file. Unknown keys are rejected.
RunManifest parse_manifest(const std::string& json_text);
RunManifest load_manifest(const std::filesystem::path& path);

/// Simple "--key value" overrides applied on top of a manifest, mirroring
/// the JSON keys (e.g. "dt", "tau", "smoothing_iterations", "threads").
RunManifest apply_overrides(RunManifest m, const std::map<std::string, std::string>& overrides);

struct RouteRow {
  double t = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double alpha = 0.0;
};

/// The result of record of a run: per-state rows plus a summary.
struct RouteRecord {
  std::vector<RouteRow> rows;
  double travel_time = 0.0;  // re-measured along the polyline
  double path_length = 0.0;
  std::optional<double> fuel_kg;
  bool reached = false;
  std::vector<double> leg_boundaries;  // junction times of the piecewise route
  std::size_t action_trace_length = 0;
  bool smoothing_rejected_land = false;  // smoothed route crossed land; raw route kept
  std::string manifest_json;             // echo, so plot-data can rebuild the field

  void write(const std::filesystem::path& csv, const std::filesystem::path& summary) const;
};

RouteRecord load_route_record(const std::filesystem::path& summary_json);

/// Run the full pipeline described by a manifest and write its records.
RouteRecord plan_route(const RunManifest& manifest);

/// Metrics of the minimum-distance route for a manifest's endpoints.
PathMetrics baseline_metrics(const RunManifest& manifest);

struct BenchmarkReport {
  std::string field_name;
  double min_distance_time = 0.0;
  double hs_time = 0.0;  // measured on the smoothed route (or raw if iterations == 0)
  RouteRecord record;
};

/// Run a named synthetic benchmark ("circular" or "four_vortices") with the
/// standard unit-speed parameters, comparing the minimum-distance route with
/// the search + smoothing pipeline.
BenchmarkReport run_benchmark(const std::string& name,
                              const std::map<std::string, std::string>& overrides = {});

/// The standard manifest behind run_benchmark, for reuse and tests.
RunManifest benchmark_manifest(const std::string& name);

struct PlotBBox {
  double x1_min = 0.0, x1_max = 0.0;
  double x2_min = 0.0, x2_max = 0.0;
};

/// Write a field-sample grid (x1,x2,w1,w2,land rows) and the route polyline
/// for external plotting. Throws OutOfDomainError when the bbox leaves the
/// field domain.
void emit_plot_data(const RouteRecord& record, const Field& field, const PlotBBox& bbox,
                    double resolution, const std::filesystem::path& field_csv,
                    const std::filesystem::path& route_csv);

}  // namespace zermelo
