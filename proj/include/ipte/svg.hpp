// Copyright 2026 The ipte Authors
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

#ifndef IPTE_SVG_HPP_
#define IPTE_SVG_HPP_

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ipte::io {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (x, y)
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;  // base-10
  int width = 800;
  int height = 500;
};

// SVG 1.1 line chart with one <polyline> per series and a legend. Throws
// ConfigError for an empty series list and DataError naming the series when
// it has fewer than two points or, with log_y, a non-positive value.
std::string RenderLineChart(std::span<const Series> series,
                            const PlotOptions& options);

// Path through the points in order (one <polyline>) plus one <circle> marker
// per point. Needs at least one point.
std::string RenderTrajectory(const Series& trajectory,
                             const PlotOptions& options);

}  // namespace ipte::io

#endif  // IPTE_SVG_HPP_
