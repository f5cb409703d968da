#pragma once
// Hamilton's equations over a schedule.  The per-segment Hamiltonian is
// normalized to unit local time, and a sub-step occupies physical duration
// 1/m, so the physical vector field is m * (H_y, -H_x).  Integration is
// fixed-step (classical 4th order by default, implicit midpoint as an
// option), with steps aligned to sub-step boundaries so each segment's
// field, including its endpoint values, is attributed to that segment.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "braidflow/errors.hpp"
#include "braidflow/hamiltonian.hpp"
#include "braidflow/layout.hpp"
#include "braidflow/parallel.hpp"
#include "braidflow/schedule.hpp"
#include "braidflow/twist_map.hpp"

namespace braidflow {

enum class IntegratorMethod { rk4, implicit_midpoint };

struct IntegratorOpts {
  int steps_per_substep = 200;
  IntegratorMethod method = IntegratorMethod::rk4;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<MapPoint> points;
};

namespace detail {

struct Velocity {
  double dx = 0;
  double dy = 0;
};

// One integration piece lives inside a single sub-step window (or spans the
// whole time range for the empty word).  Pinning the owning segment and its
// absolute start time keeps endpoint evaluations (local time exactly 0 or 1)
// attributed to this segment rather than its neighbour.
struct PieceContext {
  const Segment* seg = nullptr;  // null for the empty word
  const GeneratorShape* shape = nullptr;
  double t0_abs = 0;  // absolute time where this sub-step window begins
};

inline Velocity flow_rhs(const Schedule& sched, const PieceContext& ctx,
                         double t, const MapPoint& z) {
  if (ctx.seg == nullptr) {
    const HamiltonianValue v = hamiltonian_full(sched, t, z.x_lift, z.y);
    return {v.hy, -v.hx};
  }
  const double s = std::clamp((t - ctx.t0_abs) * sched.m, 0.0, 1.0);
  const HamiltonianValue v = segment_hamiltonian(
      *ctx.shape, sched.warp, s, z.x_lift, z.y,
      ctx.seg->direction == SegmentDirection::reversed);
  return {sched.m * v.hy, -sched.m * v.hx};
}

template <typename Record>
inline MapPoint advance_piece(const Schedule& sched, const PieceContext& ctx,
                              MapPoint z, double ta, double tb,
                              const IntegratorOpts& opts, Record&& record) {
  const double span = tb - ta;
  if (!(span > 0)) return z;
  const double substeps = ctx.seg ? span * sched.m : span;
  const int nsteps =
      std::max(1, static_cast<int>(std::lround(substeps *
                                               opts.steps_per_substep)));
  const double h = span / nsteps;
  if (!(h > 1e-15)) throw NumericalError("integrator step size underflow");
  for (int i = 0; i < nsteps; ++i) {
    const double t = ta + i * h;
    if (opts.method == IntegratorMethod::rk4) {
      const Velocity k1 = flow_rhs(sched, ctx, t, z);
      const Velocity k2 = flow_rhs(
          sched, ctx, t + h / 2,
          {z.x_lift + h / 2 * k1.dx, z.y + h / 2 * k1.dy});
      const Velocity k3 = flow_rhs(
          sched, ctx, t + h / 2,
          {z.x_lift + h / 2 * k2.dx, z.y + h / 2 * k2.dy});
      const Velocity k4 =
          flow_rhs(sched, ctx, t + h, {z.x_lift + h * k3.dx, z.y + h * k3.dy});
      z.x_lift += h / 6 * (k1.dx + 2 * k2.dx + 2 * k3.dx + k4.dx);
      z.y += h / 6 * (k1.dy + 2 * k2.dy + 2 * k3.dy + k4.dy);
    } else {
      const double tmid = t + h / 2;
      const Velocity guess = flow_rhs(sched, ctx, t, z);
      MapPoint znew{z.x_lift + h * guess.dx, z.y + h * guess.dy};
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        const Velocity vm = flow_rhs(sched, ctx, tmid,
                                     {(z.x_lift + znew.x_lift) / 2,
                                      (z.y + znew.y) / 2});
        const MapPoint next{z.x_lift + h * vm.dx, z.y + h * vm.dy};
        const double delta = std::abs(next.x_lift - znew.x_lift) +
                             std::abs(next.y - znew.y);
        znew = next;
        if (delta <= 1e-14 * (1 + std::abs(znew.x_lift) + std::abs(znew.y))) {
          converged = true;
          break;
        }
      }
      if (!converged)
        throw NumericalError("implicit midpoint iteration failed to converge");
      z = znew;
    }
    record(ta + (i + 1) * h, z);
  }
  return z;
}

inline PieceContext piece_context(const Schedule& sched, double tmid) {
  PieceContext ctx;
  const TimeLocation loc = locate_time(sched, tmid);
  ctx.seg = loc.seg;
  ctx.shape = loc.shape;
  const double period = sched.period;
  // Absolute start of the occurrence of this sub-step that contains tmid.
  const double k = std::floor((tmid - loc.seg->t0) / period);
  ctx.t0_abs = loc.seg->t0 + period * k;
  return ctx;
}

// Split [t0, t1] at sub-step boundaries and hand each piece its segment.
template <typename Piece>
inline void for_each_piece(const Schedule& sched, double t0, double t1,
                           Piece&& piece) {
  if (sched.word.letters.empty()) {
    piece(PieceContext{}, t0, t1);
    return;
  }
  const int m = sched.m;
  double cursor = t0;
  const long k_lo = static_cast<long>(std::floor(t0 * m)) + 1;
  const long k_hi = static_cast<long>(std::ceil(t1 * m)) - 1;
  for (long k = k_lo; k <= k_hi; ++k) {
    const double tb = static_cast<double>(k) / m;
    if (tb <= cursor + 1e-13) continue;
    if (tb >= t1 - 1e-13) break;
    piece(piece_context(sched, (cursor + tb) / 2), cursor, tb);
    cursor = tb;
  }
  if (t1 > cursor)
    piece(piece_context(sched, (cursor + t1) / 2), cursor, t1);
}

}  // namespace detail

// Endpoint of the flow from t0 to t1 (t1 >= t0; times beyond one period wrap
// through the schedule's periodicity).
inline MapPoint integrate_to(const Schedule& sched, MapPoint z0, double t0,
                             double t1, IntegratorOpts opts = {}) {
  if (!(t1 >= t0)) throw InputError("integrate_to requires t1 >= t0");
  MapPoint z = z0;
  detail::for_each_piece(
      sched, t0, t1,
      [&](const detail::PieceContext& ctx, double ta, double tb) {
        z = detail::advance_piece(sched, ctx, z, ta, tb, opts,
                                  [](double, MapPoint) {});
      });
  return z;
}

// Trajectory sampled at the integrator's own step grid.
inline Trajectory integrate_flow(const Schedule& sched, MapPoint z0, double t0,
                                 double t1, IntegratorOpts opts = {}) {
  if (!(t1 >= t0)) throw InputError("integrate_flow requires t1 >= t0");
  Trajectory traj;
  traj.times.push_back(t0);
  traj.points.push_back(z0);
  MapPoint z = z0;
  detail::for_each_piece(
      sched, t0, t1,
      [&](const detail::PieceContext& ctx, double ta, double tb) {
        z = detail::advance_piece(sched, ctx, z, ta, tb, opts,
                                  [&](double t, MapPoint zt) {
                                    traj.times.push_back(t);
                                    traj.points.push_back(zt);
                                  });
      });
  return traj;
}

// Dense output at caller-chosen times (nondecreasing, first >= t0).
inline Trajectory integrate_flow_at(const Schedule& sched, MapPoint z0,
                                    double t0,
                                    const std::vector<double>& times,
                                    IntegratorOpts opts = {}) {
  Trajectory traj;
  MapPoint z = z0;
  double cursor = t0;
  for (double t : times) {
    if (t < cursor - 1e-13)
      throw InputError("integrate_flow_at requires nondecreasing times");
    if (t > cursor) {
      z = integrate_to(sched, z, cursor, t, opts);
      cursor = t;
    }
    traj.times.push_back(t);
    traj.points.push_back(z);
  }
  return traj;
}

// Upper bound on how far one certified sub-step map can move any point of
// the band: shear transport plus the bump's drag and rotation chord.
inline double substep_displacement_bound(const GeneratorShape& shape,
                                         const Annulus& ann) {
  const double s = std::abs(std::sin(shape.theta));
  const double r = std::sqrt(2 * shape.eps);
  const double ymax = std::max(std::abs(ann.a_bound), std::abs(ann.b_bound));
  return 1.5 * (s * (ymax + r) + 2 * r * std::sin(std::abs(shape.theta) / 2));
}

// Discrete-isotopy path: exact sub-step endpoints joined by straight chords.
inline Trajectory isotopy_sample(const Schedule& sched, MapPoint z0,
                                 int samples_per_substep) {
  if (samples_per_substep < 2)
    throw InputError("isotopy_sample requires at least 2 samples per sub-step");
  Trajectory traj;
  if (sched.word.letters.empty()) {
    for (int j = 0; j <= samples_per_substep; ++j) {
      traj.times.push_back(sched.period * j / samples_per_substep);
      traj.points.push_back(z0);
    }
    return traj;
  }
  MapPoint z = z0;
  for (const Segment& seg : sched.segments) {
    const GeneratorShape& shape =
        sched.shapes[static_cast<std::size_t>(seg.index - 1)];
    const MapPoint znext = seg.direction == SegmentDirection::forward
                               ? map_forward_unchecked(shape, z)
                               : map_backward_unchecked(shape, z);
    const double disp =
        std::hypot(znext.x_lift - z.x_lift, znext.y - z.y);
    if (disp > substep_displacement_bound(shape, sched.layout.annulus) + 1e-9)
      throw NumericalError(
          "sub-step displacement exceeds the certified bound; "
          "the subdivision is too coarse for this band");
    for (int j = 0; j < samples_per_substep; ++j) {
      const double u = static_cast<double>(j) / samples_per_substep;
      traj.times.push_back(seg.t0 + (seg.t1 - seg.t0) * u);
      traj.points.push_back({z.x_lift + u * (znext.x_lift - z.x_lift),
                             z.y + u * (znext.y - z.y)});
    }
    z = znext;
  }
  traj.times.push_back(sched.segments.back().t1);
  traj.points.push_back(z);
  return traj;
}

struct StrandSet {
  StrandLayout layout;
  std::vector<double> times;
  std::vector<std::vector<MapPoint>> samples;  // samples[strand][time index]
  double min_separation = 0;
};

enum class TraceMethod { ode, isotopy };

namespace detail {

inline std::vector<double> trace_time_grid(const Schedule& sched,
                                           int samples_per_substep) {
  std::vector<double> times;
  if (sched.word.letters.empty()) {
    for (int j = 0; j <= samples_per_substep; ++j)
      times.push_back(sched.period * j / samples_per_substep);
    return times;
  }
  for (const Segment& seg : sched.segments)
    for (int j = 0; j < samples_per_substep; ++j)
      times.push_back(seg.t0 + (seg.t1 - seg.t0) * j / samples_per_substep);
  times.push_back(sched.segments.back().t1);
  return times;
}

}  // namespace detail

// Trace all marked strands over one period and enforce the separation and
// displacement invariants that make the result a geometric braid.
inline StrandSet trace_strands(const Schedule& sched,
                               int samples_per_substep = 64,
                               TraceMethod method = TraceMethod::isotopy,
                               IntegratorOpts opts = {}, int threads = 1) {
  StrandSet set;
  set.layout = sched.layout;
  set.times = detail::trace_time_grid(sched, samples_per_substep);
  const int n = sched.layout.n;
  set.samples.resize(static_cast<std::size_t>(n));

  parallel_chunks(n, threads, [&](long lo, long hi, int) {
    for (long i = lo; i < hi; ++i) {
      const MapPoint z0{sched.layout.positions[static_cast<std::size_t>(i)],
                        0.0};
      Trajectory traj =
          method == TraceMethod::isotopy
              ? isotopy_sample(sched, z0, samples_per_substep)
              : integrate_flow_at(sched, z0, 0.0, set.times, opts);
      set.samples[static_cast<std::size_t>(i)] = std::move(traj.points);
    }
  });

  // The ODE trace must land on the discrete sub-step endpoints; the isotopy
  // trace is built from them, so only the ODE method pays this cross-check.
  if (method == TraceMethod::ode && !sched.word.letters.empty()) {
    for (int i = 0; i < n; ++i) {
      MapPoint z{sched.layout.positions[static_cast<std::size_t>(i)], 0.0};
      for (std::size_t k = 0; k < sched.segments.size(); ++k) {
        const Segment& seg = sched.segments[k];
        const GeneratorShape& shape =
            sched.shapes[static_cast<std::size_t>(seg.index - 1)];
        z = seg.direction == SegmentDirection::forward
                ? map_forward_unchecked(shape, z)
                : map_backward_unchecked(shape, z);
        const MapPoint& ode_pt =
            set.samples[static_cast<std::size_t>(i)]
                       [(k + 1) * static_cast<std::size_t>(samples_per_substep)];
        if (std::hypot(ode_pt.x_lift - z.x_lift, ode_pt.y - z.y) > 1e-6)
          throw NumericalError(
              "ODE trace disagrees with the discrete sub-step maps beyond "
              "1e-6");
      }
    }
  }

  // Pairwise separation in the (circle x, y) metric.
  double min_sep = std::numeric_limits<double>::infinity();
  for (std::size_t ti = 0; ti < set.times.size(); ++ti) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const MapPoint& a = set.samples[static_cast<std::size_t>(i)][ti];
        const MapPoint& b = set.samples[static_cast<std::size_t>(j)][ti];
        const double d =
            std::hypot(circle_dist(a.x_lift, b.x_lift), a.y - b.y);
        min_sep = std::min(min_sep, d);
      }
    }
  }
  set.min_separation = min_sep;
  if (!(min_sep >= 1e-4))
    throw NumericalError("strand separation fell below 1e-4");

  // Per-sample displacement stays below half the spectator clearance.
  double clearance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sched.layout.centers.size(); ++k) {
    for (int j = 0; j < n; ++j) {
      if (j == static_cast<int>(k) || j == static_cast<int>(k) + 1) continue;
      clearance = std::min(
          clearance, circle_dist(sched.layout.positions[static_cast<std::size_t>(j)],
                                 sched.layout.centers[k]));
    }
  }
  if (std::isfinite(clearance)) {
    for (const auto& strand : set.samples) {
      for (std::size_t ti = 1; ti < strand.size(); ++ti) {
        const double d = std::hypot(strand[ti].x_lift - strand[ti - 1].x_lift,
                                    strand[ti].y - strand[ti - 1].y);
        if (!(d <= clearance / 2 + 1e-12))
          throw NumericalError(
              "per-sample strand displacement exceeds half the spectator "
              "clearance");
      }
    }
  }
  return set;
}

struct FlowMapReport {
  double max_error = 0;
  double tolerance = 1e-6;
  bool pass = false;
  std::size_t arg_segment = 0;
  MapPoint arg_point{};
};

// Compare the ODE time-(sub-step) map against the discrete generating map on
// every segment, for each probe point.
inline FlowMapReport flow_map_check(const Schedule& sched,
                                    const std::vector<MapPoint>& points,
                                    IntegratorOpts opts = {}) {
  FlowMapReport rep;
  for (std::size_t k = 0; k < sched.segments.size(); ++k) {
    const Segment& seg = sched.segments[k];
    const GeneratorShape& shape =
        sched.shapes[static_cast<std::size_t>(seg.index - 1)];
    for (const MapPoint& z : points) {
      const MapPoint ode = integrate_to(sched, z, seg.t0, seg.t1, opts);
      const MapPoint disc = seg.direction == SegmentDirection::forward
                                ? map_forward_unchecked(shape, z)
                                : map_backward_unchecked(shape, z);
      const double err =
          std::hypot(ode.x_lift - disc.x_lift, ode.y - disc.y);
      if (err > rep.max_error) {
        rep.max_error = err;
        rep.arg_segment = k;
        rep.arg_point = z;
      }
    }
  }
  rep.pass = rep.max_error <= rep.tolerance;
  return rep;
}

}  // namespace braidflow
