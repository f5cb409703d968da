#pragma once
// Time-periodic Hamiltonian realizing a schedule.  Within one sub-step at
// warped time tau = W(s) the generating family h_tau moves a phase point
// along an isotopy whose generator is
//
//   H(s, x1, y1) = -W'(s) * P,   P = d/dtau [h_tau] = g(x0, u) - g_X(x0, u) d,
//
// where d solves g_X(x1 - tau d, x1 + (1 - tau) d) = y1, x0 = x1 - tau d and
// u = x0 + d.  The rate equation is regular down to tau = 0, so the same
// formula covers the whole sub-step; on the pure shear zone it collapses to
// W'(s) (sin theta / 2) y^2.  Reversed segments run the negated, time
// reflected Hamiltonian, which integrates to the exact inverse map.

#include <cmath>
#include <utility>

#include "braidflow/errors.hpp"
#include "braidflow/family.hpp"
#include "braidflow/schedule.hpp"

namespace braidflow {

struct HamiltonianValue {
  double h = 0;
  double hx = 0;
  double hy = 0;
};

namespace detail {

struct TimeLocation {
  const Segment* seg = nullptr;
  const GeneratorShape* shape = nullptr;
  double s = 0;  // local sub-step time in [0, 1]
};

inline TimeLocation locate_time(const Schedule& sched, double t) {
  const double period = sched.period;
  double tm = t - period * std::floor(t / period);
  if (!(tm >= 0) || tm >= period) tm = 0;  // exact multiples and -0 wrap here
  const long letters = static_cast<long>(sched.word.letters.size());
  long L = static_cast<long>(std::floor(tm));
  if (L > letters - 1) L = letters - 1;
  const double u = tm - static_cast<double>(L);
  const int m = sched.m;
  int j = static_cast<int>(u * m);
  if (j > m - 1) j = m - 1;
  TimeLocation loc;
  loc.seg = &sched.segments[static_cast<std::size_t>(L * m + j)];
  loc.shape = &sched.shapes[static_cast<std::size_t>(loc.seg->index - 1)];
  loc.s = u * m - j;
  return loc;
}

inline HamiltonianValue segment_hamiltonian(const GeneratorShape& shape,
                                            const WarpSpec& warp, double s,
                                            double x, double y, bool reversed) {
  const double se = reversed ? 1 - s : s;
  const double flip = reversed ? -1.0 : 1.0;
  if (in_literal_buffer(warp, se)) {
    // Buffer zones trade the twist flow for the free Hamiltonian y^2/2.
    return {flip * 0.5 * y * y, 0.0, flip * y};
  }
  const WarpValue w = warp_eval(warp, se);
  const double tau = w.w;
  const double x1 = x - shape.center;
  const double d = family_rate_solve(shape, tau, x1, y);
  const double x0 = x1 - tau * d;
  const GDerivs G = g_eval(shape, x0, x0 + d);

  const double P = G.g - G.gX * d;
  const double Fd = -tau * G.gxX + (1 - tau) * G.gXX;
  const double gsum = G.gx + G.gX;
  const double gcross = G.gxX + G.gXX;
  const double dP_dx1 = gsum - gcross * d;
  const double dP_dd = -tau * gsum - Fd * d;
  const double dd_dx1 = -gcross / Fd;
  const double dd_dy1 = 1 / Fd;

  HamiltonianValue out;
  out.h = flip * (-w.w_prime * P);
  out.hx = flip * (-w.w_prime * (dP_dx1 + dP_dd * dd_dx1));
  out.hy = flip * (-w.w_prime * (dP_dd * dd_dy1));
  return out;
}

}  // namespace detail

inline HamiltonianValue hamiltonian_full(const Schedule& sched, double t,
                                         double x, double y) {
  if (sched.word.letters.empty()) {
    const double c = sched.trivial_coeff;
    return {c * y * y, 0.0, 2 * c * y};
  }
  const detail::TimeLocation loc = detail::locate_time(sched, t);
  return detail::segment_hamiltonian(
      *loc.shape, sched.warp, loc.s, x, y,
      loc.seg->direction == SegmentDirection::reversed);
}

inline double hamiltonian_eval(const Schedule& sched, double t, double x,
                               double y) {
  return hamiltonian_full(sched, t, x, y).h;
}

inline std::pair<double, double> hamiltonian_gradient(const Schedule& sched,
                                                      double t, double x,
                                                      double y) {
  const HamiltonianValue v = hamiltonian_full(sched, t, x, y);
  return {v.hx, v.hy};
}

}  // namespace braidflow
