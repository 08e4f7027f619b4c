// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#include "anomset/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace anomset {

namespace {

constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 20;
constexpr int kPanelGap = 30;
constexpr int kMarginBottom = 30;

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v == 0.0 ? 0.0 : v);
  return buf;
}

std::string label_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Span {
  std::size_t begin;
  std::size_t end;  // exclusive row index
};

std::vector<Span> anomalous_runs(const std::vector<double>* labels) {
  std::vector<Span> runs;
  if (!labels) return runs;
  for (std::size_t i = 0; i < labels->size();) {
    if ((*labels)[i] != 1.0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < labels->size() && (*labels)[j] == 1.0) ++j;
    runs.push_back({i, j});
    i = j;
  }
  return runs;
}

}  // namespace

std::string render_svg(const CsvTable& data, const PlotOptions& options) {
  std::vector<std::size_t> columns;
  if (options.vars.empty()) {
    for (std::size_t i = 0; i < data.header.size(); ++i) {
      if (data.header[i] != "t" && data.header[i] != "label") columns.push_back(i);
    }
  } else {
    for (const auto& name : options.vars) {
      const auto idx = data.find(name);
      if (idx < 0 || name == "t" || name == "label") {
        throw PlotError("no variable column named '" + name + "'");
      }
      columns.push_back(static_cast<std::size_t>(idx));
    }
  }
  if (columns.empty()) throw PlotError("dataset has no variable columns to plot");
  if (columns.size() > kMaxPlotVariables) {
    throw PlotError("too many variables to plot (" + std::to_string(columns.size()) + " > " +
                    std::to_string(kMaxPlotVariables) + "); select some with --vars a,b");
  }

  const std::size_t n = data.rows();
  const auto t_idx = data.find("t");
  const auto l_idx = data.find("label");
  const std::vector<double>* labels =
      l_idx >= 0 ? &data.columns[static_cast<std::size_t>(l_idx)] : nullptr;
  auto t_at = [&](std::size_t i) {
    return t_idx >= 0 ? data.columns[static_cast<std::size_t>(t_idx)][i] : static_cast<double>(i);
  };
  const double t_lo = n ? t_at(0) : 0.0;
  const double t_hi = n ? t_at(n - 1) : 1.0;
  const double t_span = t_hi > t_lo ? t_hi - t_lo : 1.0;

  const int plot_w = options.width - kMarginLeft - kMarginRight;
  const int ph = options.panel_height;
  const int height = kMarginTop + static_cast<int>(columns.size()) * (ph + kPanelGap) + kMarginBottom;
  auto x_of = [&](double t) { return kMarginLeft + (t - t_lo) / t_span * plot_w; };

  const auto runs = anomalous_runs(labels);

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) +
         "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
         std::to_string(options.width) + " " + std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg += "<g font-family=\"sans-serif\" font-size=\"11\">\n";

  for (std::size_t p = 0; p < columns.size(); ++p) {
    const auto& ys = data.columns[columns[p]];
    const int top = kMarginTop + static_cast<int>(p) * (ph + kPanelGap);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double y : ys) {
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
    if (ys.empty()) lo = hi = 0.0;
    if (hi == lo) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double pad = (hi - lo) * 0.05;
    lo -= pad;
    hi += pad;
    auto y_of = [&](double y) { return top + (hi - y) / (hi - lo) * ph; };

    svg += "<g class=\"panel\">\n";
    for (const auto& run : runs) {
      const double x0 = x_of(t_at(run.begin));
      const double x1 = x_of(run.end < n ? t_at(run.end) : t_hi);
      svg += "<rect class=\"anomaly\" x=\"" + fixed(x0) + "\" y=\"" + std::to_string(top) +
             "\" width=\"" + fixed(std::max(x1 - x0, 1.0)) + "\" height=\"" + std::to_string(ph) +
             "\" fill=\"#e53935\" fill-opacity=\"0.25\"/>\n";
    }
    svg += "<rect x=\"" + std::to_string(kMarginLeft) + "\" y=\"" + std::to_string(top) +
           "\" width=\"" + std::to_string(plot_w) + "\" height=\"" + std::to_string(ph) +
           "\" fill=\"none\" stroke=\"#444444\"/>\n";

    // At most two points (min and max) per pixel column.
    svg += "<polyline fill=\"none\" stroke=\"#1e63b5\" stroke-width=\"1\" points=\"";
    const bool decimate = n > static_cast<std::size_t>(2 * plot_w);
    bool first = true;
    auto emit = [&](double t, double y) {
      if (!first) svg += ' ';
      first = false;
      svg += fixed(x_of(t)) + "," + fixed(y_of(y));
    };
    if (!decimate) {
      for (std::size_t i = 0; i < n; ++i) emit(t_at(i), ys[i]);
    } else {
      std::size_t i = 0;
      while (i < n) {
        const auto col = static_cast<long>(std::floor(x_of(t_at(i))));
        std::size_t j = i, imin = i, imax = i;
        while (j < n && static_cast<long>(std::floor(x_of(t_at(j)))) == col) {
          if (ys[j] < ys[imin]) imin = j;
          if (ys[j] > ys[imax]) imax = j;
          ++j;
        }
        const auto a = std::min(imin, imax);
        const auto b = std::max(imin, imax);
        emit(t_at(a), ys[a]);
        if (b != a) emit(t_at(b), ys[b]);
        i = j;
      }
    }
    svg += "\"/>\n";

    const std::string name = escape(data.header[columns[p]]);
    svg += "<text x=\"" + std::to_string(kMarginLeft) + "\" y=\"" + std::to_string(top - 5) +
           "\">" + name + "</text>\n";
    svg += "<text x=\"" + std::to_string(kMarginLeft - 5) + "\" y=\"" + std::to_string(top + 10) +
           "\" text-anchor=\"end\">" + label_number(hi - pad) + "</text>\n";
    svg += "<text x=\"" + std::to_string(kMarginLeft - 5) + "\" y=\"" + std::to_string(top + ph) +
           "\" text-anchor=\"end\">" + label_number(lo + pad) + "</text>\n";
    svg += "</g>\n";
  }

  const int axis_y = height - kMarginBottom + 15;
  svg += "<text x=\"" + std::to_string(kMarginLeft) + "\" y=\"" + std::to_string(axis_y) + "\">t=" +
         label_number(t_lo) + "</text>\n";
  svg += "<text x=\"" + std::to_string(kMarginLeft + plot_w) + "\" y=\"" +
         std::to_string(axis_y) + "\" text-anchor=\"end\">t=" + label_number(t_hi) + "</text>\n";
  svg += "</g>\n</svg>\n";
  return svg;
}

void plot(const std::filesystem::path& data_path, const std::filesystem::path& out_path,
          const PlotOptions& options) {
  const auto svg = render_svg(read_csv(data_path), options);
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + out_path.string() + " for writing");
  out << svg;
  out.flush();
  if (!out) throw IoError("write failed: " + out_path.string());
}

}  // namespace anomset
