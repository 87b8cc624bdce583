// Copyright 2026 The monosde Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "monosde/plot.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "monosde/error.h"

namespace monosde {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string TickLabel(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::vector<std::size_t> Thin(std::size_t n, std::size_t max_points) {
  std::vector<std::size_t> keep;
  if (n == 0) return keep;
  const std::size_t m = std::max<std::size_t>(max_points, 2);
  const std::size_t stride = std::max<std::size_t>(1, (n + m - 2) / (m - 1));
  for (std::size_t i = 0; i < n; i += stride) keep.push_back(i);
  if (keep.back() != n - 1) keep.push_back(n - 1);
  return keep;
}

}  // namespace

std::string RenderSvg(const std::vector<PlotSeries>& series, Metric metric,
                      const PlotOptions& options, PlotInfo* info) {
  if (series.empty()) throw ParameterError("plot: no series given");
  const std::vector<double>& index = series.front().summary.index;
  if (index.empty()) throw ParameterError("plot: series '" + series.front().label + "' is empty");
  for (const PlotSeries& s : series) {
    if (s.summary.index != index) {
      throw ParameterError("plot: series '" + s.label +
                           "' does not share the index grid of '" +
                           series.front().label + "'");
    }
  }
  const std::vector<std::size_t> keep = Thin(index.size(), options.max_points);

  // Data range over the plotted points.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  bool log_y = true;
  for (const PlotSeries& s : series) {
    const MetricSummary& m = s.summary[metric];
    for (std::size_t i : keep) {
      for (double v : {m.mean[i], m.min[i], m.max[i]}) {
        if (!std::isfinite(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        if (v <= 0.0) log_y = false;
      }
    }
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
    log_y = false;
  }
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
  double y0 = ty(lo), y1 = ty(hi);
  if (log_y) {
    y0 = std::floor(y0);
    y1 = std::ceil(y1);
  }
  if (y1 - y0 < 1e-12) {
    y0 -= log_y ? 1.0 : std::max(1.0, std::abs(y0) * 0.1);
    y1 += log_y ? 1.0 : std::max(1.0, std::abs(y1) * 0.1);
  }
  const double x0 = index[keep.front()];
  double x1 = index[keep.back()];
  if (x1 <= x0) x1 = x0 + 1.0;

  const double left = 80, right = options.width - 170.0, top = 40,
               bottom = options.height - 60.0;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (right - left); };
  auto py = [&](double v) {
    return bottom - (ty(v) - y0) / (y1 - y0) * (bottom - top);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
     << "\" height=\"" << options.height << "\" viewBox=\"0 0 "
     << options.width << " " << options.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    os << "<text x=\"" << Fixed((left + right) / 2) << "\" y=\"24\" "
       << "text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
       << Escape(options.title) << "</text>\n";
  }

  // Axes and ticks.
  os << "<g stroke=\"black\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << Fixed(left) << "\" y1=\"" << Fixed(bottom) << "\" x2=\""
     << Fixed(right) << "\" y2=\"" << Fixed(bottom) << "\"/>\n";
  os << "<line x1=\"" << Fixed(left) << "\" y1=\"" << Fixed(top) << "\" x2=\""
     << Fixed(left) << "\" y2=\"" << Fixed(bottom) << "\"/>\n";
  os << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  std::vector<double> y_ticks;
  if (log_y) {
    const int step = std::max(1, static_cast<int>(std::ceil((y1 - y0) / 8)));
    for (int e = static_cast<int>(y0); e <= static_cast<int>(y1); e += step) {
      y_ticks.push_back(std::pow(10.0, e));
    }
  } else {
    for (int i = 0; i <= 5; ++i) y_ticks.push_back(y0 + (y1 - y0) * i / 5.0);
  }
  for (double v : y_ticks) {
    const double y = py(v);
    os << "<line x1=\"" << Fixed(left - 5) << "\" y1=\"" << Fixed(y) << "\" x2=\""
       << Fixed(left) << "\" y2=\"" << Fixed(y) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << Fixed(left - 8) << "\" y=\"" << Fixed(y + 4)
       << "\" text-anchor=\"end\">" << TickLabel(v) << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double v = x0 + (x1 - x0) * i / 5.0;
    const double x = px(v);
    os << "<line x1=\"" << Fixed(x) << "\" y1=\"" << Fixed(bottom) << "\" x2=\""
       << Fixed(x) << "\" y2=\"" << Fixed(bottom + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << Fixed(x) << "\" y=\"" << Fixed(bottom + 18)
       << "\" text-anchor=\"middle\">" << TickLabel(v) << "</text>\n";
  }
  os << "<text x=\"" << Fixed((left + right) / 2) << "\" y=\""
     << Fixed(options.height - 15.0) << "\" text-anchor=\"middle\" "
     << "font-size=\"13\">" << Escape(options.x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << Fixed((top + bottom) / 2)
     << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
     << Fixed((top + bottom) / 2) << ")\">" << MetricName(metric)
     << (log_y ? " (log scale)" : "") << "</text>\n</g>\n";

  // Bands first, then mean lines on top.
  std::size_t plotted = 0;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const MetricSummary& m = series[s].summary[metric];
    const char* color = kPalette[s % std::size(kPalette)];
    std::ostringstream upper, lower;
    std::vector<std::string> lower_points;
    for (std::size_t i : keep) {
      if (!std::isfinite(m.min[i]) || !std::isfinite(m.max[i])) continue;
      upper << Fixed(px(index[i])) << "," << Fixed(py(m.max[i])) << " ";
      lower_points.push_back(Fixed(px(index[i])) + "," + Fixed(py(m.min[i])));
    }
    std::reverse(lower_points.begin(), lower_points.end());
    for (const std::string& p : lower_points) lower << p << " ";
    os << "<polygon class=\"band\" fill=\"" << color
       << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"" << upper.str()
       << lower.str() << "\"/>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const MetricSummary& m = series[s].summary[metric];
    const char* color = kPalette[s % std::size(kPalette)];
    std::ostringstream path;
    bool pen_down = false;
    std::size_t count = 0;
    for (std::size_t i : keep) {
      if (!std::isfinite(m.mean[i])) {
        pen_down = false;
        continue;
      }
      path << (pen_down ? "L" : "M") << Fixed(px(index[i])) << ","
           << Fixed(py(m.mean[i])) << " ";
      pen_down = true;
      ++count;
    }
    plotted = std::max(plotted, count);
    os << "<path class=\"mean\" fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" d=\"" << path.str() << "\"/>\n";
  }

  // Legend.
  os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    const double y = top + 10 + 22.0 * s;
    os << "<rect x=\"" << Fixed(right + 15) << "\" y=\"" << Fixed(y - 8)
       << "\" width=\"24\" height=\"12\" fill=\"" << color
       << "\" fill-opacity=\"0.2\"/>\n";
    os << "<line x1=\"" << Fixed(right + 15) << "\" y1=\"" << Fixed(y - 2)
       << "\" x2=\"" << Fixed(right + 39) << "\" y2=\"" << Fixed(y - 2)
       << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << Fixed(right + 45) << "\" y=\"" << Fixed(y + 2)
       << "\">" << Escape(series[s].label);
    if (series[s].summary.replicas > 0) {
      os << " (R=" << series[s].summary.replicas << ")";
    }
    os << "</text>\n";
  }
  os << "</g>\n</svg>\n";
  if (info != nullptr) {
    info->log_y = log_y;
    info->points_per_series = plotted;
  }
  return os.str();
}

PlotInfo PlotEnsembleFiles(const std::vector<std::string>& csv_paths,
                           Metric metric, const std::string& out_path,
                           const PlotOptions& options) {
  if (csv_paths.empty()) throw ParameterError("plot: no CSV files given");
  std::vector<PlotSeries> series;
  for (const std::string& path : csv_paths) {
    std::ifstream in(path);
    if (!in) throw Error("plot: cannot read " + path);
    std::string label = std::filesystem::path(path).stem().string();
    const std::string suffix = "_ensemble";
    if (label.size() > suffix.size() &&
        label.compare(label.size() - suffix.size(), suffix.size(), suffix) == 0) {
      label.resize(label.size() - suffix.size());
    }
    series.push_back({label, ReadEnsembleCsv(in)});
  }
  PlotInfo info;
  const std::string svg = RenderSvg(series, metric, options, &info);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("plot: cannot write " + out_path);
  out << svg;
  return info;
}

}  // namespace monosde
