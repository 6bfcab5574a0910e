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

#include "ipte/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "ipte/error.hpp"

namespace ipte::io {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                    "#bcbd22", "#17becf"};
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 150;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 55;

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string Label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void Add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void Widen(double pad) {
    if (hi <= lo) {
      lo -= pad;
      hi += pad;
    }
  }
};

// Maps data coordinates onto the plotting area; y is already log10'd when
// the chart uses a log axis.
class Frame {
 public:
  Frame(const PlotOptions& o, Range x, Range y)
      : o_(o), x_(x), y_(y) {
    x_.Widen(0.5);
    y_.Widen(o.log_y ? 0.5 : std::max(std::abs(y_.lo) * 0.1, 0.5));
  }

  double Px(double x) const {
    return kMarginLeft + (x - x_.lo) / (x_.hi - x_.lo) * PlotWidth();
  }
  double Py(double y) const {
    return kMarginTop + (y_.hi - y) / (y_.hi - y_.lo) * PlotHeight();
  }
  double PlotWidth() const { return o_.width - kMarginLeft - kMarginRight; }
  double PlotHeight() const { return o_.height - kMarginTop - kMarginBottom; }

  void Open(std::ostringstream& out) const {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
        << o_.width << "\" height=\"" << o_.height << "\" viewBox=\"0 0 "
        << o_.width << ' ' << o_.height << "\">\n"
        << "<title>" << Escape(o_.title) << "</title>\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << o_.width << "\" height=\""
        << o_.height << "\" fill=\"white\"/>\n"
        << "<text x=\"" << o_.width / 2
        << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">"
        << Escape(o_.title) << "</text>\n";
    Axes(out);
  }

  static void Close(std::ostringstream& out) { out << "</svg>\n"; }

 private:
  void Axes(std::ostringstream& out) const {
    const double left = kMarginLeft;
    const double right = kMarginLeft + PlotWidth();
    const double top = kMarginTop;
    const double bottom = kMarginTop + PlotHeight();
    out << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
        << "<line x1=\"" << Num(left) << "\" y1=\"" << Num(bottom) << "\" x2=\""
        << Num(right) << "\" y2=\"" << Num(bottom) << "\"/>\n"
        << "<line x1=\"" << Num(left) << "\" y1=\"" << Num(top) << "\" x2=\""
        << Num(left) << "\" y2=\"" << Num(bottom) << "\"/>\n";
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
      const double x = x_.lo + (x_.hi - x_.lo) * i / kTicks;
      out << "<line x1=\"" << Num(Px(x)) << "\" y1=\"" << Num(bottom)
          << "\" x2=\"" << Num(Px(x)) << "\" y2=\"" << Num(bottom + 5)
          << "\"/>\n";
    }
    for (double y : YTicks()) {
      out << "<line x1=\"" << Num(left - 5) << "\" y1=\"" << Num(Py(y))
          << "\" x2=\"" << Num(left) << "\" y2=\"" << Num(Py(y)) << "\"/>\n";
    }
    out << "</g>\n<g class=\"tick-labels\" font-family=\"sans-serif\" "
           "font-size=\"11\">\n";
    for (int i = 0; i <= kTicks; ++i) {
      const double x = x_.lo + (x_.hi - x_.lo) * i / kTicks;
      out << "<text x=\"" << Num(Px(x)) << "\" y=\"" << Num(bottom + 18)
          << "\" text-anchor=\"middle\">" << Label(x) << "</text>\n";
    }
    for (double y : YTicks()) {
      out << "<text x=\"" << Num(left - 8) << "\" y=\"" << Num(Py(y) + 4)
          << "\" text-anchor=\"end\">"
          << Label(o_.log_y ? std::pow(10.0, y) : y) << "</text>\n";
    }
    out << "<text x=\"" << Num(left + PlotWidth() / 2) << "\" y=\""
        << Num(bottom + 40) << "\" text-anchor=\"middle\">"
        << Escape(o_.x_label) << "</text>\n"
        << "<text x=\"18\" y=\"" << Num(top + PlotHeight() / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << Num(top + PlotHeight() / 2) << ")\">"
        << Escape(o_.y_label + (o_.log_y ? " (log10)" : "")) << "</text>\n"
        << "</g>\n";
  }

  std::vector<double> YTicks() const {
    std::vector<double> ticks;
    if (o_.log_y) {
      for (double d = std::ceil(y_.lo); d <= std::floor(y_.hi); d += 1.0) {
        ticks.push_back(d);
      }
      if (ticks.size() >= 2) return ticks;
      ticks.clear();
    }
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
      ticks.push_back(y_.lo + (y_.hi - y_.lo) * i / kTicks);
    }
    return ticks;
  }

  PlotOptions o_;
  Range x_;
  Range y_;
};

double MapY(double y, const PlotOptions& o) { return o.log_y ? std::log10(y) : y; }

void CheckValues(const Series& s, const PlotOptions& o) {
  for (const auto& [x, y] : s.points) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw DataError("series '" + s.name + "' has a non-finite value");
    }
    if (o.log_y && y <= 0.0) {
      throw DataError("series '" + s.name +
                      "' has a non-positive value on a log axis");
    }
  }
}

std::string Polyline(const Series& s, const Frame& f, const PlotOptions& o,
                     const char* color) {
  std::ostringstream out;
  out << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    if (i > 0) out << ' ';
    out << Num(f.Px(s.points[i].first)) << ','
        << Num(f.Py(MapY(s.points[i].second, o)));
  }
  out << "\"/>\n";
  return out.str();
}

}  // namespace

std::string RenderLineChart(std::span<const Series> series,
                            const PlotOptions& options) {
  if (series.empty()) throw ConfigError("nothing to plot");
  Range xr;
  Range yr;
  for (const Series& s : series) {
    if (s.points.size() < 2) {
      throw DataError("series '" + s.name + "' needs at least 2 points");
    }
    CheckValues(s, options);
    for (const auto& [x, y] : s.points) {
      xr.Add(x);
      yr.Add(MapY(y, options));
    }
  }
  const Frame frame(options, xr, yr);
  std::ostringstream out;
  frame.Open(out);
  out << "<g class=\"series\">\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << Polyline(series[i], frame, options, kPalette[i % std::size(kPalette)]);
  }
  out << "</g>\n<g class=\"legend\" font-family=\"sans-serif\" "
         "font-size=\"12\">\n";
  const double lx = options.width - kMarginRight + 15;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double ly = kMarginTop + 10 + 18.0 * static_cast<double>(i);
    out << "<line x1=\"" << Num(lx) << "\" y1=\"" << Num(ly) << "\" x2=\""
        << Num(lx + 20) << "\" y2=\"" << Num(ly) << "\" stroke=\""
        << kPalette[i % std::size(kPalette)] << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << Num(lx + 26) << "\" y=\"" << Num(ly + 4) << "\">"
        << Escape(series[i].name) << "</text>\n";
  }
  out << "</g>\n";
  Frame::Close(out);
  return out.str();
}

std::string RenderTrajectory(const Series& trajectory,
                             const PlotOptions& options) {
  if (trajectory.points.empty()) {
    throw DataError("series '" + trajectory.name + "' has no points");
  }
  CheckValues(trajectory, options);
  Range xr;
  Range yr;
  for (const auto& [x, y] : trajectory.points) {
    xr.Add(x);
    yr.Add(MapY(y, options));
  }
  const Frame frame(options, xr, yr);
  std::ostringstream out;
  frame.Open(out);
  out << "<g class=\"series\">\n"
      << Polyline(trajectory, frame, options, "#7f7f7f");
  // Markers shade from light (first epoch) to dark (last epoch).
  const std::size_t n = trajectory.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 1.0;
    const int shade = static_cast<int>(std::lround(200.0 * (1.0 - t)));
    const auto& [x, y] = trajectory.points[i];
    out << "<circle cx=\"" << Num(frame.Px(x)) << "\" cy=\""
        << Num(frame.Py(MapY(y, options))) << "\" r=\"4\" fill=\"rgb("
        << shade << ',' << shade << ",255)\"/>\n";
  }
  out << "</g>\n<g class=\"legend\" font-family=\"sans-serif\" "
         "font-size=\"12\">\n<text x=\""
      << Num(options.width - kMarginRight + 15) << "\" y=\""
      << Num(kMarginTop + 14) << "\">" << Escape(trajectory.name)
      << "</text>\n</g>\n";
  Frame::Close(out);
  return out.str();
}

}  // namespace ipte::io
