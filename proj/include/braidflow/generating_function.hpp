#pragma once
// The localized-rotation generating function and its analytic partials.
//
// In lifted coordinates relative to the generator center, with s = sin(theta)
// and the squared pair radius t = (x-k)^2 + (X-k)^2 taken at the nearest
// integer translate k,
//
//   g(x, X) = (x - X)^2 / (2 s)  -  rho(t) t / 2,
//   rho(t)  = xi c_eps(t),
//
// which is a plain shear where the bump vanishes (t >= 2 eps) and an exact
// clockwise rotation by theta where it is flat (t <= eps). Everything the
// map and Hamiltonian layers need reduces to g and the partials computed
// here.

#include <cmath>
#include <numbers>

#include "braidflow/errors.hpp"
#include "braidflow/mollifier.hpp"

namespace braidflow {

struct GeneratorShape {
  int q = 8;           // subdivision; theta = sign * pi / (2q)
  double theta = 0;
  double xi = 0;       // tan(theta/2), optionally rescaled by the test hook
  double eps = 0.1;    // bump threshold in squared displacement units
  double center = 0;   // bump center on the circle, in [0, 1)
  int m_iters = 16;    // iterations per half twist
  int sign = +1;

  static GeneratorShape make(int q, double eps, double center, int sign = +1,
                             double xi_scale = 1.0) {
    if (q < 3) throw InputError("subdivision q must be at least 3");
    if (eps <= 0) throw InputError("bump threshold eps must be positive");
    // Nearest-translate evaluation on the circle needs the diagonal balls of
    // radius sqrt(2 eps) around (k, k) to stay disjoint; the exact bound is
    // sqrt(2)/2, kept with a small margin.
    if (std::sqrt(2 * eps) > 0.7)
      throw InputError("bump threshold too large for circle evaluation");
    if (!(center >= 0 && center < 1))
      throw InputError("generator center must lie in [0, 1)");
    if (sign != +1 && sign != -1) throw InputError("sign must be +1 or -1");
    GeneratorShape s;
    s.q = q;
    s.sign = sign;
    s.theta = sign * std::numbers::pi / (2.0 * q);
    s.xi = std::tan(s.theta / 2) * xi_scale;
    s.eps = eps;
    s.center = center;
    s.m_iters = 2 * q;
    return s;
  }
};

// rho and two derivatives with respect to the squared pair radius.
inline MollifierValue rho_eval(const GeneratorShape& shape, double t) {
  if (t < 0) throw InputError("rho_eval requires t >= 0");
  MollifierValue c = mollifier_c(shape.eps, t);
  return {shape.xi * c.value, shape.xi * c.d1, shape.xi * c.d2};
}

enum class Region { rotation, blend, shear };

struct GDerivs {
  double g = 0;
  double gx = 0;
  double gX = 0;
  double gxx = 0;
  double gxX = 0;
  double gXX = 0;
};

namespace detail {

// Nearest integer translate of the diagonal; unique because the bump balls
// are disjoint (see GeneratorShape::make).
inline double nearest_translate(double x, double X) {
  return std::round(0.5 * (x + X));
}

}  // namespace detail

// Squared pair radius at the nearest translate; the zone classifier below
// and the map fast paths both key off it.
inline double pair_radius_sq(double x, double X) {
  const double k = detail::nearest_translate(x, X);
  const double a = x - k, B = X - k;
  return a * a + B * B;
}

inline Region region_of(const GeneratorShape& shape, double x, double X) {
  const double t = pair_radius_sq(x, X);
  if (t <= shape.eps) return Region::rotation;
  if (t < 2 * shape.eps) return Region::blend;
  return Region::shear;
}

// x and X are lifted coordinates relative to shape.center.
inline GDerivs g_eval(const GeneratorShape& shape, double x, double X) {
  const double s = std::sin(shape.theta);
  const double d = x - X;
  GDerivs out;
  out.g = d * d / (2 * s);
  out.gx = d / s;
  out.gX = -d / s;
  out.gxx = 1 / s;
  out.gxX = -1 / s;
  out.gXX = 1 / s;

  const double k = detail::nearest_translate(x, X);
  const double a = x - k, B = X - k;
  const double t = a * a + B * B;
  if (t >= 2 * shape.eps) return out;  // bump support cleared

  const MollifierValue rho = rho_eval(shape, t);
  const double p = rho.d1 * t + rho.value;       // d/dt of rho t
  const double r = rho.d2 * t + 2 * rho.d1;      // d/dt of the line above
  out.g -= 0.5 * rho.value * t;
  out.gx -= a * p;
  out.gX -= B * p;
  out.gxx -= p + 2 * a * a * r;
  out.gXX -= p + 2 * B * B * r;
  out.gxX -= 2 * a * B * r;
  return out;
}

}  // namespace braidflow
