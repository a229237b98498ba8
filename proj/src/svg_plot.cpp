#include "trajadv/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "trajadv/errors.hpp"

namespace trajadv {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
      const double pad = std::max(std::abs(hi) * 0.05, 1e-3);
      lo -= pad;
      hi += pad;
    }
  }
};

// Round step of 1, 2 or 5 times a power of ten giving about `target` ticks.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  const double nice = f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0;
  return nice * mag;
}

std::string num(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  return fmt::format("{:.6g}", v);
}

}  // namespace

std::string render_svg(const std::vector<double>& x, const std::vector<PlotSeries>& series,
                       const PlotOptions& opts) {
  if (x.empty()) throw InputError("nothing to plot");
  for (const auto& s : series) {
    if (s.y.size() != x.size()) {
      throw InputError(fmt::format("series '{}' has {} points, expected {}", s.name, s.y.size(), x.size()));
    }
  }

  const double W = opts.width;
  const double H = opts.height;
  const double left = 70, right = 20, top = opts.title.empty() ? 20 : 40;
  const double bottom = 50 + 18.0 * static_cast<double>((series.size() + 3) / 4);
  const double pw = W - left - right;
  const double ph = H - top - bottom;

  Range rx, ry;
  for (double v : x) rx.add(v);
  for (const auto& s : series) {
    for (double v : s.y) ry.add(v);
  }
  rx.finish();
  ry.finish();
  auto sx = [&](double v) { return left + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto sy = [&](double v) { return top + (ry.hi - v) / (ry.hi - ry.lo) * ph; };

  std::string out;
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      opts.width, opts.height, opts.width, opts.height);
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", opts.width,
                     opts.height);
  if (!opts.title.empty()) {
    out += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                       num(W / 2), escape(opts.title));
  }

  // Grid and ticks.
  const double xstep = nice_step(rx.hi - rx.lo, 8);
  for (double v = std::ceil(rx.lo / xstep) * xstep; v <= rx.hi + 1e-9 * xstep; v += xstep) {
    const double px = sx(v);
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#e0e0e0\"/>\n", num(px),
                       num(top), num(top + ph));
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", num(px),
                       num(top + ph + 15), num(v));
  }
  const double ystep = nice_step(ry.hi - ry.lo, 6);
  for (double v = std::ceil(ry.lo / ystep) * ystep; v <= ry.hi + 1e-9 * ystep; v += ystep) {
    const double py = sy(v);
    out += fmt::format("<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"#e0e0e0\"/>\n", num(py),
                       num(left), num(left + pw));
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", num(left - 6),
                       num(py + 4), num(v));
  }
  out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
                     num(left), num(top), num(pw), num(ph));
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", num(left + pw / 2),
                     num(top + ph + 32), escape(opts.x_label));

  // Series.
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    std::string pts;
    auto flush = [&]() {
      if (pts.empty()) return;
      out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                         color, pts);
      pts.clear();
    };
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double yv = series[i].y[k];
      if (!std::isfinite(x[k]) || !std::isfinite(yv)) {
        flush();
        continue;
      }
      if (!pts.empty()) pts += ' ';
      pts += fmt::format("{:.2f},{:.2f}", sx(x[k]), sy(yv));
    }
    flush();
  }

  // Legend below the axis label, four entries per line.
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double lx = left + static_cast<double>(i % 4) * (pw / 4);
    const double ly = top + ph + 48 + 18.0 * static_cast<double>(i / 4);
    out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                       num(lx), num(ly - 4), num(lx + 20), num(ly - 4), kPalette[i % std::size(kPalette)]);
    out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", num(lx + 26), num(ly), escape(series[i].name));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace trajadv
