#pragma once
// Braid diagram rendering: strands drawn as polylines in the (x, t)-plane,
// time running top to bottom, with the under strand broken at each crossing.
// Output bytes are a pure function of the input samples and events.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "braidflow/crossings.hpp"
#include "braidflow/errors.hpp"
#include "braidflow/integrator.hpp"

namespace braidflow {

namespace detail {

inline void append_svg_num(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  out += buf;
}

// Fixed palette; strand i keeps its color across renders.
inline const char* strand_color(int strand) {
  static const char* palette[8] = {"#1f6feb", "#d1242f", "#1a7f37", "#8250df",
                                   "#bf5e0a", "#0f7b8a", "#b02a6e", "#57606a"};
  return palette[(strand - 1) % 8];
}

}  // namespace detail

// Half-width, in time units, of the gap cut from the under strand around a
// crossing. One letter lasts one time unit, so 0.05 clears the over strand
// without touching neighbouring crossings.
inline constexpr double kUnderGapHalfWidth = 0.05;

inline std::string render_braid_svg(const StrandSet& set,
                                    const std::vector<CrossingEvent>& events) {
  const int n = set.layout.n;
  if (n < 1 || set.times.size() < 2)
    throw InputError("diagram rendering needs at least two time samples");

  // For each event, find the under strand by ordering strand lifts just
  // before the crossing: slots k and k+1 hold the participants, and the sign
  // says which of the two dives (positive crossings put the left strand on
  // top).
  std::vector<std::vector<std::pair<double, double>>> cuts(
      static_cast<std::size_t>(n));
  for (const CrossingEvent& ev : events) {
    if (ev.slot < 1 || ev.slot >= n)
      throw InputError("crossing event slot is out of range for the diagram");
    const double t_pre = ev.time - kUnderGapHalfWidth;
    std::size_t ti = 0;
    while (ti + 1 < set.times.size() && set.times[ti + 1] <= t_pre) ++ti;
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) order[static_cast<std::size_t>(s)] = s;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return set.samples[static_cast<std::size_t>(a)][ti].x_lift <
             set.samples[static_cast<std::size_t>(b)][ti].x_lift;
    });
    const int left = order[static_cast<std::size_t>(ev.slot - 1)];
    const int right = order[static_cast<std::size_t>(ev.slot)];
    const int under = ev.sign > 0 ? right : left;
    cuts[static_cast<std::size_t>(under)].push_back(
        {ev.time - kUnderGapHalfWidth, ev.time + kUnderGapHalfWidth});
  }

  // Plot frame: the x-range comes from the data so drifting lifts (full
  // twists) stay in view.
  double x_lo = set.samples[0][0].x_lift, x_hi = x_lo;
  for (const auto& strand : set.samples)
    for (const MapPoint& z : strand) {
      x_lo = std::min(x_lo, z.x_lift);
      x_hi = std::max(x_hi, z.x_lift);
    }
  const double pad = std::max(0.05, 0.04 * (x_hi - x_lo));
  x_lo -= pad;
  x_hi += pad;

  const double t0 = set.times.front();
  const double t1 = set.times.back();
  const double margin = 40.0;
  const double width = 480.0;
  const double height = 2 * margin + 140.0 * std::max(1.0, t1 - t0);
  const auto px = [&](double x) {
    return margin + (x - x_lo) * (width - 2 * margin) / (x_hi - x_lo);
  };
  const auto py = [&](double t) {
    return margin + (t - t0) * (height - 2 * margin) / std::max(1e-12, t1 - t0);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
  detail::append_svg_num(svg, width);
  svg += "\" height=\"";
  detail::append_svg_num(svg, height);
  svg += "\" viewBox=\"0 0 ";
  detail::append_svg_num(svg, width);
  svg += ' ';
  detail::append_svg_num(svg, height);
  svg += "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  // Light rules at whole-letter boundaries.
  for (double t = std::ceil(t0); t <= t1 + 1e-9; t += 1.0) {
    svg += "<line x1=\"";
    detail::append_svg_num(svg, margin * 0.5);
    svg += "\" y1=\"";
    detail::append_svg_num(svg, py(t));
    svg += "\" x2=\"";
    detail::append_svg_num(svg, width - margin * 0.5);
    svg += "\" y2=\"";
    detail::append_svg_num(svg, py(t));
    svg += "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
  }

  for (int s = 0; s < n; ++s) {
    const std::vector<MapPoint>& samples =
        set.samples[static_cast<std::size_t>(s)];
    const std::vector<std::pair<double, double>>& strand_cuts =
        cuts[static_cast<std::size_t>(s)];
    const auto hidden = [&](double t) {
      for (const auto& c : strand_cuts)
        if (t > c.first && t < c.second) return true;
      return false;
    };
    std::string d;
    bool open = false;
    for (std::size_t ti = 0; ti < set.times.size(); ++ti) {
      if (hidden(set.times[ti])) {
        open = false;
        continue;
      }
      d += open ? " L " : (d.empty() ? "M " : " M ");
      detail::append_svg_num(d, px(samples[ti].x_lift));
      d += ' ';
      detail::append_svg_num(d, py(set.times[ti]));
      open = true;
    }
    svg += "<path d=\"";
    svg += d;
    svg += "\" fill=\"none\" stroke=\"";
    svg += detail::strand_color(s + 1);
    svg += "\" stroke-width=\"2.5\" stroke-linecap=\"round\" "
           "stroke-linejoin=\"round\"/>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace braidflow
