// Copyright 2026 The QTL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtl/harness/plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

#include "qtl/errors.hpp"
#include "qtl/stats.hpp"

namespace qtl::harness {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v, int precision = 2) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      const double d = std::max(std::abs(lo) * 0.1, 0.5);
      lo -= d;
      hi += d;
    }
    const double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
};

class Canvas {
 public:
  Canvas(Range x, Range y, std::string title, std::string xlabel, std::string ylabel)
      : x_(x), y_(y) {
    body_ += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
             "\" fill=\"white\"/>\n";
    text(kWidth / 2, 24, title, "middle", 16);
    text(kLeft + (kWidth - kLeft - kRight) / 2, kHeight - 12, xlabel, "middle", 13);
    body_ += "<text x=\"18\" y=\"" + num(kTop + (kHeight - kTop - kBottom) / 2) +
             "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
             num(kTop + (kHeight - kTop - kBottom) / 2) + ")\">" + escape(ylabel) + "</text>\n";
    axes();
  }

  double px(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight); }
  double py(double y) const {
    return kHeight - kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom);
  }

  void text(double x, double y, const std::string& s, const char* anchor = "start", int size = 12) {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + std::to_string(size) +
             "\" text-anchor=\"" + anchor + "\">" + escape(s) + "</text>\n";
  }

  void circle(double x, double y, const char* color) {
    body_ += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) + "\" r=\"3.5\" fill=\"" + color + "\"/>\n";
  }

  void line(double x0, double y0, double x1, double y1, const char* color, const char* dash = nullptr) {
    body_ += "<line x1=\"" + num(px(x0)) + "\" y1=\"" + num(py(y0)) + "\" x2=\"" + num(px(x1)) + "\" y2=\"" +
             num(py(y1)) + "\" stroke=\"" + color + "\" stroke-width=\"1.5\"";
    if (dash) body_ += std::string(" stroke-dasharray=\"") + dash + "\"";
    body_ += "/>\n";
  }

  void polyline(const std::vector<double>& xs, const std::vector<double>& ys, const char* color) {
    body_ += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
      body_ += num(px(xs[i])) + "," + num(py(ys[i])) + " ";
    }
    body_ += "\"/>\n";
  }

  void bar(double x_center, double width, double value, const char* color) {
    const double base = std::clamp(0.0, y_.lo, y_.hi);
    const double top = std::max(py(value), py(y_.hi));
    const double bottom = py(base);
    body_ += "<rect x=\"" + num(px(x_center - width / 2)) + "\" y=\"" + num(std::min(top, bottom)) +
             "\" width=\"" + num(px(x_center + width / 2) - px(x_center - width / 2)) + "\" height=\"" +
             num(std::abs(bottom - top)) + "\" fill=\"" + color + "\"/>\n";
  }

  void legend(std::size_t slot, const std::string& label, const char* color) {
    const double y = kTop + 8 + 16.0 * static_cast<double>(slot);
    body_ += "<rect x=\"" + num(kWidth - kRight - 150) + "\" y=\"" + num(y - 9) +
             "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
    text(kWidth - kRight - 135, y, label);
  }

  std::string finish() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           num(kWidth) + "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) +
           "\" font-family=\"sans-serif\">\n" + body_ + "</svg>\n";
  }

 private:
  void axes() {
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    body_ += "<path d=\"M" + num(x0) + "," + num(y1) + " L" + num(x0) + "," + num(y0) + " L" + num(x1) + "," +
             num(y0) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
      const double xv = x_.lo + (x_.hi - x_.lo) * k / 4.0;
      const double yv = y_.lo + (y_.hi - y_.lo) * k / 4.0;
      body_ += "<line x1=\"" + num(px(xv)) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(px(xv)) + "\" y2=\"" +
               num(y0 + 5) + "\" stroke=\"black\"/>\n";
      text(px(xv), y0 + 18, num(xv, 3), "middle", 10);
      body_ += "<line x1=\"" + num(x0 - 5) + "\" y1=\"" + num(py(yv)) + "\" x2=\"" + num(x0) + "\" y2=\"" +
               num(py(yv)) + "\" stroke=\"black\"/>\n";
      text(x0 - 8, py(yv) + 3, num(yv, 3), "end", 10);
    }
  }

  Range x_, y_;
  std::string body_;
};

void require_rows(const Table& table) {
  if (table.rows.empty()) throw Error(ErrorCode::NoData, "table '" + table.name + "' has no rows to plot");
}

struct LogPoints {
  std::vector<double> x, y, y_mc;
};

LogPoints scaling_points(const Table& table) {
  const auto n = table.numeric_column("n");
  const auto rms = table.numeric_column("analytic_rms");
  std::vector<double> mc(n.size(), std::numeric_limits<double>::quiet_NaN());
  if (table.has_column("mc_estimate")) mc = table.numeric_column("mc_estimate");
  LogPoints out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(rms[i] > 0.0)) continue;
    out.x.push_back(std::log(n[i] + 1.0));
    out.y.push_back(std::log(rms[i]));
    out.y_mc.push_back(mc[i] > 0.0 ? std::log(mc[i]) : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

std::string scaling_plot(const Table& table) {
  const LogPoints pts = scaling_points(table);
  if (pts.x.empty()) throw Error(ErrorCode::NoData, "table '" + table.name + "' has no positive RMS values");
  Range xr, yr;
  for (std::size_t i = 0; i < pts.x.size(); ++i) {
    xr.include(pts.x[i]);
    yr.include(pts.y[i]);
    yr.include(pts.y_mc[i]);
  }
  xr.pad();
  yr.pad();
  Canvas c(xr, yr, "Typical deviation scaling", "ln(n + 1)", "ln RMS deviation");
  for (std::size_t i = 0; i < pts.x.size(); ++i) {
    c.circle(pts.x[i], pts.y[i], kPalette[0]);
    if (std::isfinite(pts.y_mc[i])) c.circle(pts.x[i], pts.y_mc[i], kPalette[1]);
  }
  c.legend(0, "analytic", kPalette[0]);
  if (table.has_column("mc_estimate")) c.legend(1, "Monte Carlo", kPalette[1]);
  if (const auto slope = scaling_plot_slope(table)) {
    const auto fit = stats::fit_line(pts.x, pts.y);
    const double a = *std::min_element(pts.x.begin(), pts.x.end());
    const double b = *std::max_element(pts.x.begin(), pts.x.end());
    c.line(a, fit.intercept + fit.slope * a, b, fit.intercept + fit.slope * b, "black", "6,4");
    c.text(kLeft + 12, kTop + 14, "slope = " + num(*slope, 3));
  }
  return c.finish();
}

std::string trajectory_plot(const Table& table) {
  const auto t = table.numeric_column("t");
  std::vector<std::string> series;
  for (const auto& col : table.columns)
    if (col.rfind("S_", 0) == 0) series.push_back(col);
  if (series.empty()) throw Error(ErrorCode::Shape, "table '" + table.name + "' has no S_* columns");
  std::vector<std::vector<double>> ys;
  Range xr, yr;
  for (double v : t) xr.include(v);
  for (const auto& col : series) {
    ys.push_back(table.numeric_column(col));
    for (double v : ys.back()) yr.include(v);
  }
  yr.include(0.0);
  xr.pad();
  yr.pad();
  Canvas c(xr, yr, "Oscillator entropies", "t", "entropy (nats)");
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    c.polyline(t, ys[k], color);
    c.legend(k, series[k], color);
  }
  return c.finish();
}

std::string populations_plot(const Table& table) {
  const auto pred = table.numeric_column("p_pred");
  const auto obs = table.numeric_column("p_obs_mean");
  std::vector<double> labels;
  if (table.has_column("E")) labels = table.numeric_column("E");
  const double count = static_cast<double>(pred.size());
  Range xr{-0.5, count - 0.5};
  Range yr{0.0, 0.0};
  for (std::size_t i = 0; i < pred.size(); ++i) {
    yr.include(pred[i]);
    yr.include(obs[i]);
  }
  yr.hi *= 1.1;
  if (yr.hi <= 0.0) yr.hi = 1.0;
  Canvas c(xr, yr, "Level populations", "level", "p(E)");
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double x = static_cast<double>(i);
    c.bar(x - 0.18, 0.34, pred[i], kPalette[0]);
    c.bar(x + 0.18, 0.34, obs[i], kPalette[1]);
    if (!labels.empty()) c.text(c.px(x), kHeight - kBottom + 32, "E=" + num(labels[i], 2), "middle", 10);
  }
  c.legend(0, "predicted", kPalette[0]);
  c.legend(1, "observed", kPalette[1]);
  return c.finish();
}

}  // namespace

std::string_view to_string(PlotKind kind) {
  switch (kind) {
    case PlotKind::Scaling: return "scaling";
    case PlotKind::Trajectory: return "trajectory";
    case PlotKind::Populations: return "populations";
  }
  return "unknown";
}

std::optional<double> scaling_plot_slope(const Table& table) {
  require_rows(table);
  const LogPoints pts = scaling_points(table);
  if (pts.x.size() < 2) return std::nullopt;
  return stats::fit_line(pts.x, pts.y).slope;
}

std::string emit_plot(const Table& table, PlotKind kind) {
  require_rows(table);
  switch (kind) {
    case PlotKind::Scaling: return scaling_plot(table);
    case PlotKind::Trajectory: return trajectory_plot(table);
    case PlotKind::Populations: return populations_plot(table);
  }
  throw Error(ErrorCode::InvalidParameter, "unknown plot kind");
}

}  // namespace qtl::harness
