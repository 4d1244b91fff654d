#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace rtn {

// Plot description (JSON):
//   {"x": "k", "y": "gamma", "series": "observable_id" (optional grouping column),
//    "filter": {"column": value, ...} (optional exact-match row filter),
//    "log_x": false, "log_y": true, "style": "line" | "scatter",
//    "title": "...", "slope": true (annotate least-squares slope of each series),
//    "output": "path.svg" (optional, default <csv stem>.svg), "width": 640, "height": 420}
struct PlotSpec {
  std::string x, y, series;
  std::vector<std::pair<std::string, double>> filter;
  bool log_x = false, log_y = false;
  bool scatter = false;
  bool slope = false;
  std::string title;
  std::string output;
  int width = 640, height = 420;
};

PlotSpec plot_spec_from_json(const nlohmann::json& j);

struct PlotSeries {
  std::string name;
  std::vector<double> x, y;
  // least-squares slope of (x', y') where primes denote the axis transform
  double slope = 0.0;
  // decay rate -slope when the y axis is logarithmic (natural log)
  double decay_rate = 0.0;
};

struct PlotResult {
  std::string svg_path;
  std::vector<PlotSeries> series;
};

// Reads the CSV (header row, comma separated), renders a standalone SVG, writes it
// and returns the rendered series. Throws InvalidParameter on a missing column or an
// empty series; nothing is written in that case.
PlotResult emit_plot(const std::string& csv_path, const PlotSpec& spec);

// Pure rendering (deterministic): used by emit_plot.
std::string render_svg(const std::vector<PlotSeries>& series, const PlotSpec& spec);

}  // namespace rtn
