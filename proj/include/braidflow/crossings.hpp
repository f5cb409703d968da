#pragma once
// Crossing detection on traced strands: project to the (x, t)-plane with y as
// depth, track the x-order of the strands through time, and turn each adjacent
// transposition into a signed braid letter.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "braidflow/braid_word.hpp"
#include "braidflow/errors.hpp"
#include "braidflow/integrator.hpp"

namespace braidflow {

struct CrossingEvent {
  double time = 0;
  int slot = 0;  // adjacent position index k, as in sigma_k
  int sign = +1;
  double y_gap = 0;  // |y_i - y_j| at the crossing (transversality margin)
};

// Positions of all strands at an arbitrary time; detection refines crossing
// times through this, so a caller holding the exact trajectory generator can
// supply better-than-interpolated values.
using StrandResampler =
    std::function<std::vector<MapPoint>(double t)>;

namespace detail {

inline StrandResampler interpolating_resampler(const StrandSet& strands) {
  return [&strands](double t) {
    const std::vector<double>& times = strands.times;
    std::vector<MapPoint> out(strands.samples.size());
    std::size_t hi =
        static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) -
                                 times.begin());
    if (hi == 0) hi = 1;
    if (hi >= times.size()) hi = times.size() - 1;
    const std::size_t lo = hi - 1;
    const double span = times[hi] - times[lo];
    const double u = span > 0 ? (t - times[lo]) / span : 0.0;
    for (std::size_t i = 0; i < strands.samples.size(); ++i) {
      const MapPoint& a = strands.samples[i][lo];
      const MapPoint& b = strands.samples[i][hi];
      out[i] = {a.x_lift + u * (b.x_lift - a.x_lift), a.y + u * (b.y - a.y)};
    }
    return out;
  };
}

// Indices sorted by lifted x; exact ties keep the incoming relative order.
inline std::vector<int> x_order(const std::vector<MapPoint>& pts,
                                const std::vector<int>& previous) {
  std::vector<int> rank(pts.size());
  for (std::size_t r = 0; r < previous.size(); ++r)
    rank[static_cast<std::size_t>(previous[r])] = static_cast<int>(r);
  std::vector<int> order = previous;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double xa = pts[static_cast<std::size_t>(a)].x_lift;
    const double xb = pts[static_cast<std::size_t>(b)].x_lift;
    if (xa != xb) return xa < xb;
    return rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)];
  });
  return order;
}

// If `next` is `prev` with one adjacent pair swapped, return that pair's
// position; -1 if the orders are equal; -2 for anything more complicated.
inline int single_transposition_at(const std::vector<int>& prev,
                                   const std::vector<int>& next) {
  for (std::size_t i = 0; i + 1 < prev.size(); ++i) {
    if (prev[i] == next[i]) continue;
    if (prev[i] == next[i + 1] && prev[i + 1] == next[i] &&
        std::equal(prev.begin() + static_cast<long>(i) + 2, prev.end(),
                   next.begin() + static_cast<long>(i) + 2))
      return static_cast<int>(i);
    return -2;
  }
  return -1;
}

struct CrossingScan {
  const StrandResampler* resample = nullptr;
  std::vector<CrossingEvent> events;

  // Locate the crossing of a (left) and b within [ta, tb] by bisection on
  // sign(x_a - x_b), then a final linear root inside the last bracket.
  void emit_crossing(int a, int b, int position, double ta, double tb) {
    std::vector<MapPoint> pa = (*resample)(ta);
    std::vector<MapPoint> pb = (*resample)(tb);
    double f_lo = pa[static_cast<std::size_t>(a)].x_lift -
                  pa[static_cast<std::size_t>(b)].x_lift;
    double f_hi = pb[static_cast<std::size_t>(a)].x_lift -
                  pb[static_cast<std::size_t>(b)].x_lift;
    double lo = ta, hi = tb;
    while (hi - lo > 1e-10 && f_lo != 0.0) {
      const double mid = (lo + hi) / 2;
      const std::vector<MapPoint> pm = (*resample)(mid);
      const double fm = pm[static_cast<std::size_t>(a)].x_lift -
                        pm[static_cast<std::size_t>(b)].x_lift;
      if (fm == 0.0) {
        lo = hi = mid;
        f_lo = 0.0;
        break;
      }
      if ((fm < 0) == (f_lo < 0)) {
        lo = mid;
        f_lo = fm;
      } else {
        hi = mid;
        f_hi = fm;
      }
    }
    double t_cross = lo;
    if (f_lo != f_hi) t_cross = lo + (hi - lo) * (f_lo / (f_lo - f_hi));
    const std::vector<MapPoint> pc = (*resample)(t_cross);
    const double y_left = pc[static_cast<std::size_t>(a)].y;
    const double y_right = pc[static_cast<std::size_t>(b)].y;
    const double gap = std::abs(y_left - y_right);
    if (gap < 1e-6)
      throw NumericalError(
          "crossing is not transverse: depth gap below 1e-6 at t = " +
          std::to_string(t_cross));
    CrossingEvent ev;
    ev.time = t_cross;
    ev.slot = position + 1;
    ev.sign = y_left > y_right ? +1 : -1;
    ev.y_gap = gap;
    events.push_back(ev);
  }

  // Process one time interval whose endpoint orders may differ; returns the
  // order in effect at tb. Intervals with more than one transposition are
  // split dyadically (resampling the trajectories), never guessed.
  std::vector<int> process(double ta, double tb,
                           const std::vector<MapPoint>& xb,
                           std::vector<int> order, int depth) {
    const std::vector<int> next = x_order(xb, order);
    if (next == order) return next;
    const int at = single_transposition_at(order, next);
    if (at >= 0) {
      emit_crossing(order[static_cast<std::size_t>(at)],
                    order[static_cast<std::size_t>(at) + 1], at, ta, tb);
      return next;
    }
    if (depth >= 8)
      throw NumericalError(
          "crossing order between samples unresolvable after 8 dyadic "
          "refinements near t = " +
          std::to_string(ta));
    const double tm = (ta + tb) / 2;
    const std::vector<MapPoint> xm = (*resample)(tm);
    std::vector<int> mid_order =
        process(ta, tm, xm, std::move(order), depth + 1);
    return process(tm, tb, xb, std::move(mid_order), depth + 1);
  }
};

}  // namespace detail

inline std::vector<CrossingEvent> detect_crossings(
    const StrandSet& strands, const StrandResampler& resample = {}) {
  const int n = strands.layout.n;
  if (strands.samples.size() != static_cast<std::size_t>(n) ||
      strands.times.size() < 2)
    throw InputError("strand set is empty or inconsistent with its layout");
  for (const auto& s : strands.samples)
    if (s.size() != strands.times.size())
      throw InputError("strand sample counts disagree with the time grid");

  const StrandResampler fallback = detail::interpolating_resampler(strands);
  const StrandResampler& at = resample ? resample : fallback;

  auto column = [&](std::size_t k) {
    std::vector<MapPoint> pts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      pts[static_cast<std::size_t>(i)] =
          strands.samples[static_cast<std::size_t>(i)][k];
    return pts;
  };

  // Adjacent-pair bookkeeping on lifted x reads off the circle order only
  // while the strands span at most one full turn; a wider spread means the
  // extreme strands have passed each other through the seam unseen.
  for (std::size_t k = 0; k < strands.times.size(); ++k) {
    double lo = strands.samples[0][k].x_lift, hi = lo;
    for (int i = 1; i < n; ++i) {
      lo = std::min(lo, strands.samples[static_cast<std::size_t>(i)][k].x_lift);
      hi = std::max(hi, strands.samples[static_cast<std::size_t>(i)][k].x_lift);
    }
    if (hi - lo > 1.0 + 1e-12)
      throw NumericalError(
          "strand spread exceeds a full turn; crossings at the circle seam "
          "would be missed");
  }

  detail::CrossingScan scan;
  scan.resample = &at;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  order = detail::x_order(column(0), order);

  for (std::size_t k = 1; k < strands.times.size(); ++k) {
    order = scan.process(strands.times[k - 1], strands.times[k], column(k),
                         std::move(order), 0);
  }
  std::sort(scan.events.begin(), scan.events.end(),
            [](const CrossingEvent& a, const CrossingEvent& b) {
              return a.time < b.time;
            });
  return scan.events;
}

inline BraidWord word_from_crossings(const std::vector<CrossingEvent>& events,
                                     int n) {
  if (n < 2) throw InputError("word_from_crossings needs at least 2 strands");
  BraidWord w;
  w.n_strands = n;
  for (const CrossingEvent& ev : events) {
    if (ev.slot < 1 || ev.slot > n - 1)
      throw InputError("crossing slot out of range for the strand count");
    w.letters.push_back({ev.slot, ev.sign});
  }
  return w;
}

}  // namespace braidflow
