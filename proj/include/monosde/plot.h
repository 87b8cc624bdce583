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

#ifndef MONOSDE_PLOT_H_
#define MONOSDE_PLOT_H_

#include <string>
#include <vector>

#include "monosde/metrics.h"

namespace monosde {

struct PlotSeries {
  std::string label;
  EnsembleSummary summary;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "iteration k";
  int width = 800;
  int height = 500;
  // Series longer than this are thinned by a fixed stride (the last point
  // is always kept). Means and extrema are computed before thinning.
  std::size_t max_points = 2000;
};

struct PlotInfo {
  bool log_y = false;
  std::size_t points_per_series = 0;
};

// Mean line and min/max band per series. The y axis is logarithmic unless a
// plotted value is <= 0. All series must share one index grid.
std::string RenderSvg(const std::vector<PlotSeries>& series, Metric metric,
                      const PlotOptions& options, PlotInfo* info = nullptr);

// Reads ensemble CSVs (labels from the file names) and writes an SVG.
PlotInfo PlotEnsembleFiles(const std::vector<std::string>& csv_paths,
                           Metric metric, const std::string& out_path,
                           const PlotOptions& options);

}  // namespace monosde

#endif  // MONOSDE_PLOT_H_
