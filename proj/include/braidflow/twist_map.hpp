#pragma once
// The area-preserving twist map generated by g: given (x, y), the image
// (X, Y) solves y = -g_x(x, X), Y = g_X(x, X). Monotonicity (-g_xX > 0,
// certified separately) makes the solve a bracketed Newton iteration, and
// the two flat zones of the bump admit exact closed forms that bypass it:
// plain shear where the bump vanishes, rigid clockwise rotation by theta
// where it is flat. Candidates are accepted only when the resulting pair
// lies in the zone that justifies them, which is exactly when they solve
// the implicit system.

#include <cmath>
#include <vector>

#include "braidflow/errors.hpp"
#include "braidflow/generating_function.hpp"

namespace braidflow {

struct Annulus {
  double a_bound = -0.5;
  double b_bound = 0.5;
};

struct MapPoint {
  double x_lift = 0;  // universal-cover coordinate; reduce mod 1 only at I/O
  double y = 0;
};

namespace detail {

// Safeguarded Newton for strictly monotone scalar equations: keeps a
// bracket, falls back to bisection whenever the Newton step leaves it.
// F must be increasing on [lo, hi] with F(lo) <= 0 <= F(hi).
template <class F, class DF>
inline double rtsafe(F f, DF df, double lo, double hi, double x0) {
  double x = x0;
  if (x < lo || x > hi) x = 0.5 * (lo + hi);
  double fx = f(x);
  for (int it = 0; it < 100; ++it) {
    if (std::abs(fx) < 1e-14) return x;
    if (fx > 0)
      hi = x;
    else
      lo = x;
    const double d = df(x);
    double next = x - fx / d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    fx = f(x);
    if (step < 1e-13 * (1 + std::abs(x))) return x;
  }
  throw NumericalError("implicit twist-map solve did not converge");
}

// Forward solve in center-relative lifted coordinates.
inline MapPoint map_forward_rel(const GeneratorShape& shape, double x,
                                double y) {
  const double s = std::sin(shape.theta);
  const double c = std::cos(shape.theta);

  // Shear candidate, valid when the pair clears the bump support.
  const double Xs = x + s * y;
  if (pair_radius_sq(x, Xs) >= 2 * shape.eps) return {Xs, y};

  // Rotation candidate around the nearest translate, valid when the pair
  // sits inside the flat core. Acceptance is exact: the closed form solves
  // the implicit system whenever its zone condition holds.
  const double k = std::round(x);
  const double a = x - k;
  const double A = c * a + s * y;
  if (a * a + A * A <= shape.eps) return {k + A, -s * a + c * y};

  const double R = 2 * std::sqrt(2 * shape.eps);
  double lo = Xs - R, hi = Xs + R;
  auto G = [&](double X) { return -g_eval(shape, x, X).gx - y; };
  auto dG = [&](double X) { return -g_eval(shape, x, X).gxX; };
  for (int k2 = 0; G(lo) > 0; ++k2) {
    lo -= R;
    if (k2 > 60) throw NumericalError("bracket expansion failed (low side)");
  }
  for (int k2 = 0; G(hi) < 0; ++k2) {
    hi += R;
    if (k2 > 60) throw NumericalError("bracket expansion failed (high side)");
  }
  const double X = rtsafe(G, dG, lo, hi, Xs);
  return {X, g_eval(shape, x, X).gX};
}

// Inverse solve: given (X, Y), find x with g_X(x, X) = Y (strictly
// decreasing in x), then y = -g_x(x, X).
inline MapPoint map_backward_rel(const GeneratorShape& shape, double X,
                                 double Y) {
  const double s = std::sin(shape.theta);
  const double c = std::cos(shape.theta);

  const double xs = X - s * Y;
  if (pair_radius_sq(xs, X) >= 2 * shape.eps) return {xs, Y};

  const double k = std::round(X);
  const double A = X - k;
  const double a = c * A - s * Y;
  if (a * a + A * A <= shape.eps) return {k + a, s * A + c * Y};

  const double R = 2 * std::sqrt(2 * shape.eps);
  double lo = xs - R, hi = xs + R;
  // F is decreasing; negate to reuse the increasing-function solver.
  auto G = [&](double x) { return Y - g_eval(shape, x, X).gX; };
  auto dG = [&](double x) { return -g_eval(shape, x, X).gxX; };
  for (int k2 = 0; G(lo) > 0; ++k2) {
    lo -= R;
    if (k2 > 60) throw NumericalError("bracket expansion failed (low side)");
  }
  for (int k2 = 0; G(hi) < 0; ++k2) {
    hi += R;
    if (k2 > 60) throw NumericalError("bracket expansion failed (high side)");
  }
  const double x = rtsafe(G, dG, lo, hi, xs);
  return {x, -g_eval(shape, x, X).gx};
}

}  // namespace detail

inline void require_in_annulus(const Annulus& ann, const MapPoint& z) {
  if (!(z.y >= ann.a_bound && z.y <= ann.b_bound))
    throw InputError("point lies outside the annulus");
}

// Unchecked core: defined for every y; images near the band edge may leave
// the band slightly when the bump reaches it, which iterated curve tracking
// relies on being representable.
inline MapPoint map_forward_unchecked(const GeneratorShape& shape,
                                      const MapPoint& z) {
  const MapPoint rel =
      detail::map_forward_rel(shape, z.x_lift - shape.center, z.y);
  return {rel.x_lift + shape.center, rel.y};
}

inline MapPoint map_backward_unchecked(const GeneratorShape& shape,
                                       const MapPoint& z) {
  const MapPoint rel =
      detail::map_backward_rel(shape, z.x_lift - shape.center, z.y);
  return {rel.x_lift + shape.center, rel.y};
}

inline MapPoint map_forward(const GeneratorShape& shape, const Annulus& ann,
                            const MapPoint& z) {
  require_in_annulus(ann, z);
  return map_forward_unchecked(shape, z);
}

inline MapPoint map_backward(const GeneratorShape& shape, const Annulus& ann,
                             const MapPoint& z) {
  require_in_annulus(ann, z);
  return map_backward_unchecked(shape, z);
}

inline std::vector<MapPoint> map_iterate(const GeneratorShape& shape,
                                         const Annulus& ann, const MapPoint& z,
                                         int steps) {
  if (steps < 0) throw InputError("map_iterate requires steps >= 0");
  require_in_annulus(ann, z);
  std::vector<MapPoint> orbit;
  orbit.reserve(static_cast<std::size_t>(steps) + 1);
  orbit.push_back(z);
  for (int k = 0; k < steps; ++k)
    orbit.push_back(map_forward_unchecked(shape, orbit.back()));
  return orbit;
}

// One half twist: m_iters = 2q applications rotate the flat core by
// sign * pi in total.
inline MapPoint half_twist_map(const GeneratorShape& shape, const Annulus& ann,
                               const MapPoint& z) {
  require_in_annulus(ann, z);
  MapPoint w = z;
  for (int k = 0; k < shape.m_iters; ++k) w = map_forward_unchecked(shape, w);
  return w;
}

// Finite-difference Jacobian determinant. Stencils are clipped at the band
// edge; the one-sided branches use the three-point second-order form so the
// boundary rows keep the interior accuracy.
inline double jacobian_det(const GeneratorShape& shape, const Annulus& ann,
                           const MapPoint& z, double h = 1e-6) {
  require_in_annulus(ann, z);
  auto fwd = [&](double x, double y) {
    return map_forward_unchecked(shape, {x, y});
  };
  const MapPoint xp = fwd(z.x_lift + h, z.y);
  const MapPoint xm = fwd(z.x_lift - h, z.y);
  const double dXdx = (xp.x_lift - xm.x_lift) / (2 * h);
  const double dYdx = (xp.y - xm.y) / (2 * h);

  double dXdy, dYdy;
  if (z.y + h <= ann.b_bound && z.y - h >= ann.a_bound) {
    const MapPoint yp = fwd(z.x_lift, z.y + h);
    const MapPoint ym = fwd(z.x_lift, z.y - h);
    dXdy = (yp.x_lift - ym.x_lift) / (2 * h);
    dYdy = (yp.y - ym.y) / (2 * h);
  } else {
    const double dir = (z.y + h > ann.b_bound) ? -1.0 : 1.0;
    const MapPoint f0 = fwd(z.x_lift, z.y);
    const MapPoint f1 = fwd(z.x_lift, z.y + dir * h);
    const MapPoint f2 = fwd(z.x_lift, z.y + 2 * dir * h);
    dXdy = dir * (-3 * f0.x_lift + 4 * f1.x_lift - f2.x_lift) / (2 * h);
    dYdy = dir * (-3 * f0.y + 4 * f1.y - f2.y) / (2 * h);
  }
  return dXdx * dYdy - dXdy * dYdx;
}

}  // namespace braidflow
