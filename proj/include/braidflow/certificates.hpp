#pragma once
// Numerical certificates behind the twist-map construction.
//
// certify_rho bounds the bump's perturbation of the cross partial in one
// variable: |bump part of g_xX| = |2 a B (rho'' t + 2 rho')| <= 2t |rho'' t/2
// + rho'| by |2 a B| <= t, so sup over the support of 2t |rho'' t/2 + rho'|
// |sin theta| < 1 keeps -g_xX within a factor of the unperturbed 1/sin theta
// everywhere, for every pair. certify_twist then measures the realized
// margin on the map's graph: over a phase-space grid it solves for the image
// and records min(-g_xX) at the realized pairs.

#include <cmath>
#include <vector>

#include "braidflow/family.hpp"
#include "braidflow/generating_function.hpp"
#include "braidflow/parallel.hpp"
#include "braidflow/twist_map.hpp"

namespace braidflow {

struct CertReport {
  bool pass = false;
  double extremum = 0;      // the certified sup or min
  double arg_extremum = 0;  // where it was attained (t for rho)
  long grid_points = 0;
  double margin = 0;
};

struct GridSpec {
  int nx = 256;
  int ny = 256;
};

struct TwistReport {
  bool pass = false;
  double extremum = 0;  // min over the grid of -g_xX at realized pairs
  double arg_x = 0;     // phase-space location of the minimum
  double arg_y = 0;
  GridSpec grid;
  double threshold = 0;
  double margin = 0;
};

inline CertReport certify_rho(const GeneratorShape& shape,
                              int grid_points = 2000) {
  if (grid_points < 100)
    throw InputError("certify_rho requires at least 100 grid points");
  CertReport rep;
  rep.grid_points = grid_points;
  const double s = std::abs(std::sin(shape.theta));
  double sup = 0, arg = 0;
  for (int i = 1; i <= grid_points; ++i) {
    const double t = 2 * shape.eps * i / grid_points;
    const MollifierValue rho = rho_eval(shape, t);
    const double v = 2 * t * std::abs(rho.d2 * t / 2 + rho.d1) * s;
    if (v > sup) {
      sup = v;
      arg = t;
    }
  }
  rep.extremum = sup;
  rep.arg_extremum = arg;
  rep.pass = sup < 1;
  rep.margin = 1 - sup;
  return rep;
}

// Grid over one period of x around the center and the full band of y;
// each point is mapped forward and -g_xX evaluated at the realized pair.
inline TwistReport certify_twist(const GeneratorShape& shape,
                                 GridSpec grid = {}, Annulus ann = {},
                                 int threads = 1) {
  if (static_cast<long>(grid.nx) * grid.ny < 200L * 200L)
    throw InputError("certify_twist requires at least a 200x200 grid");
  TwistReport rep;
  rep.grid = grid;
  rep.threshold = 0.5 / std::abs(std::sin(shape.theta));

  struct ChunkMin {
    double val = 0, x = 0, y = 0;
    bool set = false;
  };
  std::vector<ChunkMin> mins(static_cast<std::size_t>(threads < 1 ? 1 : threads));

  parallel_chunks(grid.nx, threads, [&](long lo, long hi, int worker) {
    ChunkMin local;
    for (long i = lo; i < hi; ++i) {
      const double x =
          shape.center - 0.5 + static_cast<double>(i) / (grid.nx - 1);
      for (int j = 0; j < grid.ny; ++j) {
        const double y =
            ann.a_bound +
            (ann.b_bound - ann.a_bound) * static_cast<double>(j) / (grid.ny - 1);
        const MapPoint img = map_forward_unchecked(shape, {x, y});
        const double v =
            -g_eval(shape, x - shape.center, img.x_lift - shape.center).gxX;
        if (!local.set || v < local.val) {
          local = {v, x, y, true};
        }
      }
    }
    mins[static_cast<std::size_t>(worker)] = local;
  });

  bool any = false;
  for (const ChunkMin& m : mins) {
    if (!m.set) continue;
    if (!any || m.val < rep.extremum) {
      rep.extremum = m.val;
      rep.arg_x = m.x;
      rep.arg_y = m.y;
      any = true;
    }
  }
  rep.pass = any && rep.extremum >= rep.threshold;
  rep.margin = rep.extremum - rep.threshold;
  return rep;
}

struct FamilyTwistReport {
  bool pass = false;
  double extremum = 0;      // min over the grid of the interpolation twist rate
  double arg_t = 0;         // interpolation parameter attaining the minimum
  double arg_x = 0, arg_y = 0;
  GridSpec grid;
  double threshold = 0;
  double margin = 0;
};

inline const std::vector<double>& default_family_t_grid() {
  static const std::vector<double> grid = {0.1, 0.25, 0.5, 0.75, 1.0};
  return grid;
}

// Monotonicity certificate for the whole interpolation family, not just its
// endpoint map.  For each sampled parameter t the rate equation is solved at
// every phase-space grid point and the effective twist of the time-t map,
//   -g_xX(x0, u) - (1 - 1/t) * g_XX(x0, u),
// is evaluated at the realized pair.  At t = 1 this reduces to the quantity
// checked by certify_twist.
inline FamilyTwistReport certify_family_twist(
    const GeneratorShape& shape, const std::vector<double>& t_grid,
    GridSpec grid = {}, Annulus ann = {}, int threads = 1) {
  if (static_cast<long>(grid.nx) * grid.ny < 200L * 200L)
    throw InputError("certify_family_twist requires at least a 200x200 grid");
  if (t_grid.empty())
    throw InputError("certify_family_twist requires a nonempty t grid");
  for (double t : t_grid)
    if (!(t > 0) || !(t <= 1))
      throw InputError("certify_family_twist t grid values must lie in (0, 1]");

  FamilyTwistReport rep;
  rep.grid = grid;
  rep.threshold = 0.1 / std::abs(std::sin(shape.theta));

  struct ChunkMin {
    double val = 0, t = 0, x = 0, y = 0;
    bool set = false;
  };
  std::vector<ChunkMin> mins(static_cast<std::size_t>(threads < 1 ? 1 : threads));

  parallel_chunks(grid.nx, threads, [&](long lo, long hi, int worker) {
    ChunkMin local;
    for (long i = lo; i < hi; ++i) {
      const double x1 = -0.5 + static_cast<double>(i) / (grid.nx - 1);
      for (int j = 0; j < grid.ny; ++j) {
        const double y1 =
            ann.a_bound +
            (ann.b_bound - ann.a_bound) * static_cast<double>(j) / (grid.ny - 1);
        for (double t : t_grid) {
          const double d = family_rate_solve(shape, t, x1, y1);
          const double x0 = x1 - t * d;
          const GDerivs G = g_eval(shape, x0, x0 + d);
          const double v = -G.gxX - (1.0 - 1.0 / t) * G.gXX;
          if (!local.set || v < local.val) {
            local = {v, t, x1, y1, true};
          }
        }
      }
    }
    mins[static_cast<std::size_t>(worker)] = local;
  });

  bool any = false;
  for (const ChunkMin& m : mins) {
    if (!m.set) continue;
    if (!any || m.val < rep.extremum) {
      rep.extremum = m.val;
      rep.arg_t = m.t;
      rep.arg_x = m.x + shape.center;
      rep.arg_y = m.y;
      any = true;
    }
  }
  rep.pass = any && rep.extremum >= rep.threshold;
  rep.margin = rep.extremum - rep.threshold;
  return rep;
}

}  // namespace braidflow
