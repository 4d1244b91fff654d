#include "rtn/plot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "rtn/campaign.hpp"
#include "rtn/types.hpp"

namespace rtn {

using nlohmann::json;

PlotSpec plot_spec_from_json(const json& j) {
  PlotSpec s;
  try {
    s.x = j.at("x").get<std::string>();
    s.y = j.at("y").get<std::string>();
    s.series = j.value("series", std::string());
    s.log_x = j.value("log_x", false);
    s.log_y = j.value("log_y", false);
    const std::string style = j.value("style", std::string("line"));
    if (style != "line" && style != "scatter") throw InvalidParameter("plot: style must be line or scatter");
    s.scatter = style == "scatter";
    s.slope = j.value("slope", false);
    s.title = j.value("title", std::string());
    s.output = j.value("output", std::string());
    s.width = j.value("width", 640);
    s.height = j.value("height", 420);
    if (j.contains("filter"))
      for (auto it = j.at("filter").begin(); it != j.at("filter").end(); ++it)
        s.filter.emplace_back(it.key(), it.value().get<double>());
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("plot spec: ") + e.what());
  }
  if (s.width < 100 || s.height < 100) throw InvalidParameter("plot spec: width and height must be >= 100");
  return s;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_num(const std::string& s) {
  if (s == "nan") return NAN;
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    return pos == s.size() ? v : NAN;
  } catch (...) {
    return NAN;
  }
}

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<')
      o += "&lt;";
    else if (c == '>')
      o += "&gt;";
    else if (c == '&')
      o += "&amp;";
    else if (c == '"')
      o += "&quot;";
    else
      o += c;
  }
  return o;
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

void fit_slope(PlotSeries& s, const PlotSpec& spec) {
  const std::size_t n = s.x.size();
  if (n < 2) return;
  double mx = 0, my = 0;
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = spec.log_x ? std::log(s.x[i]) : s.x[i];
    ys[i] = spec.log_y ? std::log(s.y[i]) : s.y[i];
    mx += xs[i];
    my += ys[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  s.slope = sxx > 0 ? sxy / sxx : 0.0;
  s.decay_rate = -s.slope;
}

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const PlotSpec& spec) {
  const double W = spec.width, H = spec.height;
  const double ml = 70, mr = 20, mt = 36, mb = 50;
  auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  if (x1 - x0 <= 0) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 <= 0) y0 -= 0.5, y1 += 0.5;
  auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double v) { return H - mb - (ty(v) - y0) / (y1 - y0) * (H - mt - mb); };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << ' ' << H << "\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  if (!spec.title.empty())
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
      << esc(spec.title) << "</text>\n";
  // axes box
  o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\"" << H - mt - mb
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  // ticks: 5 per axis in transformed coordinates
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
    const double sx = ml + (W - ml - mr) * i / 4.0, sy = H - mb - (H - mt - mb) * i / 4.0;
    const double lx = spec.log_x ? std::pow(10.0, fx) : fx, ly = spec.log_y ? std::pow(10.0, fy) : fy;
    o << "<text x=\"" << fmt(sx) << "\" y=\"" << H - mb + 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(lx, 3) << "</text>\n";
    o << "<text x=\"" << ml - 6 << "\" y=\"" << fmt(sy + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(ly, 3) << "</text>\n";
  }
  o << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << esc(spec.x)
    << (spec.log_x ? " (log)" : "") << "</text>\n";
  o << "<text x=\"16\" y=\"" << (mt + H - mb) / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"13\" transform=\"rotate(-90 16 " << (mt + H - mb) / 2 << ")\">" << esc(spec.y)
    << (spec.log_y ? " (log)" : "") << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* col = kColors[k % 8];
    if (spec.scatter) {
      for (std::size_t i = 0; i < s.x.size(); ++i)
        o << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i])) << "\" r=\"3\" fill=\"" << col
          << "\"/>\n";
    } else {
      o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) o << (i ? " " : "") << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i]));
      o << "\"/>\n";
    }
    std::string label = s.name.empty() ? spec.y : s.name;
    if (spec.slope) label += spec.log_y && !spec.log_x ? " rate=" + fmt(s.decay_rate, 8) : " slope=" + fmt(s.slope, 8);
    o << "<text x=\"" << W - mr - 6 << "\" y=\"" << mt + 16 + 15 * k << "\" text-anchor=\"end\" "
      << "font-family=\"sans-serif\" font-size=\"11\" fill=\"" << col << "\">" << esc(label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

PlotResult emit_plot(const std::string& csv_path, const PlotSpec& spec) {
  std::ifstream f(csv_path);
  if (!f) throw InvalidParameter("plot: cannot open " + csv_path);
  std::string line;
  if (!std::getline(f, line)) throw InvalidParameter("plot: empty CSV " + csv_path);
  const auto header = split(line);
  auto col = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InvalidParameter("plot: missing column '" + name + "'");
    return std::size_t(it - header.begin());
  };
  const std::size_t cx = col(spec.x), cy = col(spec.y);
  const std::size_t cs = spec.series.empty() ? 0 : col(spec.series);
  std::vector<std::pair<std::size_t, double>> filt;
  for (const auto& [name, v] : spec.filter) filt.emplace_back(col(name), v);

  std::map<std::string, PlotSeries> groups;
  std::vector<std::string> order;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw InvalidParameter("plot: ragged CSV row");
    bool keep = true;
    for (const auto& [c, v] : filt)
      if (parse_num(cells[c]) != v) keep = false;
    if (!keep) continue;
    const double x = parse_num(cells[cx]), y = parse_num(cells[cy]);
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    if ((spec.log_x && x <= 0) || (spec.log_y && y <= 0)) continue;
    const std::string key = spec.series.empty() ? "" : cells[cs];
    if (!groups.count(key)) {
      order.push_back(key);
      groups[key].name = spec.series.empty() ? "" : spec.series + "=" + key;
    }
    groups[key].x.push_back(x);
    groups[key].y.push_back(y);
  }
  PlotResult res;
  for (const auto& key : order) {
    PlotSeries s = groups[key];
    fit_slope(s, spec);
    res.series.push_back(std::move(s));
  }
  if (res.series.empty()) throw InvalidParameter("plot: empty series (no plottable rows)");
  const std::string svg = render_svg(res.series, spec);
  res.svg_path = spec.output.empty() ? std::filesystem::path(csv_path).replace_extension(".svg").string() : spec.output;
  std::ofstream out(res.svg_path, std::ios::binary);
  if (!out) throw InvalidParameter("plot: cannot write " + res.svg_path);
  out << svg;
  return res;
}

}  // namespace rtn
