#pragma once
// Interpolating family of generating functions
//
//   h_t(x0, x1) = t g(x0, u),   u = x0 + (x1 - x0)/t,
//
// joining the identity (t -> 0) to the full twist map (h_1 = g). On the
// pure shear zone h_t = (x1 - x0)^2 / (2 t sin theta) exactly, the family
// of partial shears, so extremals there are straight lines.
//
// The Hamiltonian layer needs h_t's isotopy expressed at the current phase
// point: given (x1, y1) and tau, find the displacement rate d = (x1 - x0)/tau
// solving g_X(x1 - tau d, x1 + (1 - tau) d) = y1. That equation is regular
// down to tau = 0 (unlike the (x0, x1) chart, whose u = x0 + (x1-x0)/t
// degenerates), strictly monotone in d, and carries closed-form solutions
// in both flat zones.

#include <cmath>

#include "braidflow/errors.hpp"
#include "braidflow/generating_function.hpp"
#include "braidflow/twist_map.hpp"

namespace braidflow {

struct FamilyValue {
  double h = 0;
  double dh_dt = 0;
  double dh_dx0 = 0;
  double dh_dx1 = 0;
};

// Direct evaluation in the (x0, x1) chart. Below t_min the pair (x0, u)
// either clears the bump (generic x0 != x1) or the whole value is O(t);
// the shear asymptotic keeps the standalone query well-posed either way.
// x0, x1 are center-relative lifted coordinates.
inline FamilyValue family_eval(const GeneratorShape& shape, double t, double x0,
                               double x1) {
  if (!(t > 0 && t <= 1)) throw InputError("family_eval requires t in (0, 1]");
  const double s = std::sin(shape.theta);
  constexpr double t_min = 1e-3;
  if (t < t_min) {
    const double d = x1 - x0;
    return {d * d / (2 * t * s), -d * d / (2 * t * t * s), -d / (t * s),
            d / (t * s)};
  }
  const double u = x0 + (x1 - x0) / t;
  const GDerivs g = g_eval(shape, x0, u);
  FamilyValue out;
  out.h = t * g.g;
  out.dh_dx1 = g.gX;
  out.dh_dx0 = t * g.gx + (t - 1) * g.gX;
  out.dh_dt = g.g - g.gX * (x1 - x0) / t;
  return out;
}

// Displacement-rate solve at the current point, center-relative: returns d
// with g_X(x1 - tau d, x1 + (1 - tau) d) = y1. Monotone in d with slope
// -tau g_xX + (1 - tau) g_XX >= tau/(2 sin theta) + bounded-away terms
// (certified by certify_family_twist), so bracketed Newton converges.
inline double family_rate_solve(const GeneratorShape& shape, double tau,
                                double x1, double y1) {
  if (!(tau >= 0 && tau <= 1))
    throw InputError("family_rate_solve requires tau in [0, 1]");
  const double s = std::sin(shape.theta);
  const double c = std::cos(shape.theta);

  // Shear candidate: d = s y1 solves the equation whenever the resulting
  // pair clears the bump support, for every tau.
  {
    const double d = s * y1;
    const double x0 = x1 - tau * d, u = x1 + (1 - tau) * d;
    if (pair_radius_sq(x0, u) >= 2 * shape.eps) return d;
  }
  // Rotation candidate: with the bump flat, g_X is linear and d solves in
  // closed form; accept when the pair stays in the core.
  {
    const double k = std::round(x1);
    const double slope = 1 / s - shape.xi * (1 - tau);
    const double d = (y1 + shape.xi * (x1 - k)) / slope;
    const double x0 = x1 - tau * d, u = x1 + (1 - tau) * d;
    const double a = x0 - k, B = u - k;
    if (a * a + B * B <= shape.eps) return d;
  }

  auto F = [&](double d) {
    return g_eval(shape, x1 - tau * d, x1 + (1 - tau) * d).gX - y1;
  };
  auto dF = [&](double d) {
    const GDerivs g = g_eval(shape, x1 - tau * d, x1 + (1 - tau) * d);
    return -tau * g.gxX + (1 - tau) * g.gXX;
  };
  const double R = 4 * std::sqrt(2 * shape.eps);
  double d0 = s * y1;
  double lo = d0 - R, hi = d0 + R;
  for (int k2 = 0; F(lo) > 0; ++k2) {
    lo -= R;
    if (k2 > 60) throw NumericalError("family rate bracket failed (low side)");
  }
  for (int k2 = 0; F(hi) < 0; ++k2) {
    hi += R;
    if (k2 > 60) throw NumericalError("family rate bracket failed (high side)");
  }
  return detail::rtsafe(F, dF, lo, hi, d0);
}

}  // namespace braidflow
