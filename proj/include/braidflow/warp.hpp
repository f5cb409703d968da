#pragma once
// Sub-step time warps. The smooth warp W(t) = B(t)/B(1) with
// B(t) = integral_0^t b(3s) b(3(1-s)) ds has every derivative vanishing at
// the endpoints, which is what makes segment junctions C^infinity. The
// integrand is identically 1 on [1/3, 2/3] and symmetric about 1/2, so
// B(1) = 2/3 and W(1/2) = 1/2 exactly. Evaluation uses a cached prefix
// table of per-cell Gauss-Legendre integrals plus a partial-cell rule, so
// W itself is smooth to machine precision (an interpolation table would
// introduce kinks that a fourth-order integrator convergence study sees).

#include <array>
#include <cmath>
#include <vector>

#include "braidflow/errors.hpp"
#include "braidflow/mollifier.hpp"

namespace braidflow {

enum class WarpKind { smooth_bump, literal_eq17, none };

struct WarpSpec {
  WarpKind kind = WarpKind::smooth_bump;
  double eps_tilde = 0.05;  // buffer width in literal mode
};

struct WarpValue {
  double w = 0;
  double w_prime = 0;
};

namespace detail {

inline double warp_integrand(double s) {
  return mollifier_b(3 * s).value * mollifier_b(3 * (1 - s)).value;
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
struct GL16 {
  static constexpr std::array<double, 8> x = {
      0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
      0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
      0.9445750230732326, 0.9894009349916499};
  static constexpr std::array<double, 8> w = {
      0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
      0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
      0.0622535239386479, 0.0271524594117541};
};

template <class F>
inline double gl16(F f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0;
  for (int k = 0; k < 8; ++k) {
    acc += GL16::w[static_cast<std::size_t>(k)] *
           (f(mid - half * GL16::x[static_cast<std::size_t>(k)]) +
            f(mid + half * GL16::x[static_cast<std::size_t>(k)]));
  }
  return acc * half;
}

struct WarpTable {
  static constexpr int cells = 512;
  std::vector<double> prefix;  // prefix[j] = B(j / cells)
  double total = 0;            // B(1); analytically 2/3

  WarpTable() {
    prefix.resize(cells + 1, 0.0);
    for (int j = 0; j < cells; ++j) {
      const double a = static_cast<double>(j) / cells;
      const double b = static_cast<double>(j + 1) / cells;
      prefix[static_cast<std::size_t>(j + 1)] =
          prefix[static_cast<std::size_t>(j)] + gl16(warp_integrand, a, b);
    }
    total = prefix[cells];
  }

  double integral_to(double t) const {
    if (t <= 0) return 0;
    if (t >= 1) return total;
    const int j = std::min(static_cast<int>(t * cells), cells - 1);
    const double a = static_cast<double>(j) / cells;
    return prefix[static_cast<std::size_t>(j)] + gl16(warp_integrand, a, t);
  }
};

inline const WarpTable& warp_table() {
  static const WarpTable table;
  return table;
}

}  // namespace detail

inline WarpValue warp_eval(const WarpSpec& spec, double t) {
  if (!(t >= 0 && t <= 1)) throw InputError("warp_eval requires t in [0, 1]");
  switch (spec.kind) {
    case WarpKind::none:
      return {t, 1.0};
    case WarpKind::smooth_bump: {
      const detail::WarpTable& tab = detail::warp_table();
      return {tab.integral_to(t) / tab.total,
              detail::warp_integrand(t) / tab.total};
    }
    case WarpKind::literal_eq17: {
      const double e = spec.eps_tilde;
      if (!(e > 0 && e < 0.25))
        throw InputError("literal warp requires eps_tilde in (0, 0.25)");
      if (t <= e) return {0.0, 0.0};
      if (t >= 1 - e) return {1.0, 0.0};
      const double slope = 1.0 / (1 - 2 * e);
      return {(t - e) * slope, slope};
    }
  }
  throw InputError("unknown warp kind");
}

// Buffer windows of the literal warp run the quadratic Hamiltonian y^2/2
// instead of the warped family; the flat W there is a bookkeeping value.
inline bool in_literal_buffer(const WarpSpec& spec, double t) {
  return spec.kind == WarpKind::literal_eq17 &&
         (t <= spec.eps_tilde || t >= 1 - spec.eps_tilde);
}

}  // namespace braidflow
