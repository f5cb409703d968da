#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "braidflow/integrator.hpp"
#include "braidflow/normal_form.hpp"

using namespace braidflow;

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937& gen, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(gen()) / 4294967296.0);
}

// Period-map determinant as the product of per-sub-step finite-difference
// determinants along the orbit. One central difference across the whole
// period is ill-conditioned (third derivatives of the composed map are
// enormous near the bump transition); factoring uses det(AB) = det A det B.
double factored_period_det(const Schedule& sched, MapPoint z, double h) {
  double det = 1;
  for (const Segment& seg : sched.segments) {
    MapPoint xp = integrate_to(sched, {z.x_lift + h, z.y}, seg.t0, seg.t1);
    MapPoint xm = integrate_to(sched, {z.x_lift - h, z.y}, seg.t0, seg.t1);
    MapPoint yp = integrate_to(sched, {z.x_lift, z.y + h}, seg.t0, seg.t1);
    MapPoint ym = integrate_to(sched, {z.x_lift, z.y - h}, seg.t0, seg.t1);
    det *= ((xp.x_lift - xm.x_lift) * (yp.y - ym.y) -
            (yp.x_lift - ym.x_lift) * (xp.y - xm.y)) /
           (4 * h * h);
    z = integrate_to(sched, z, seg.t0, seg.t1);
  }
  return det;
}

}  // namespace

TEST_CASE("flow integration benchmarks", "[integrator]") {
  StrandLayout lay = make_layout(3);
  Schedule smooth = build_schedule(parse_word("s1", 3), lay, 8);
  Schedule none =
      build_schedule(parse_word("s1", 3), lay, 8, WarpSpec{WarpKind::none, 0.05});
  const double c1 = lay.centers[0];
  const double delta = lay.delta;
  const double sin_theta = std::sin(kPi / 16);

  SECTION("empty word keeps every point fixed") {
    Schedule triv = build_schedule(BraidWord{3, {}}, lay, 8);
    for (IntegratorMethod method :
         {IntegratorMethod::rk4, IntegratorMethod::implicit_midpoint}) {
      IntegratorOpts opts;
      opts.method = method;
      MapPoint z = integrate_to(triv, {0.37, -0.21}, 0.0, 1.0, opts);
      REQUIRE(z.x_lift == 0.37);
      REQUIRE(z.y == -0.21);
    }
    Trajectory traj = integrate_flow(triv, {0.8, 0.4}, 0.0, 1.0);
    for (const MapPoint& p : traj.points) {
      REQUIRE(p.x_lift == 0.8);
      REQUIRE(p.y == 0.4);
    }
  }

  SECTION("empty word with a quadratic Hamiltonian drifts linearly") {
    Schedule triv = build_schedule(BraidWord{3, {}}, lay, 8);
    triv.trivial_coeff = 0.3;
    // H = 0.3 y^2: dx/dt = 0.6 y, dy/dt = 0, in physical time.
    MapPoint z = integrate_to(triv, {0.2, 0.15}, 0.0, 2.5);
    REQUIRE_THAT(z.x_lift,
                 Catch::Matchers::WithinAbs(0.2 + 0.6 * 0.15 * 2.5, 1e-12));
    REQUIRE(z.y == 0.15);
  }

  SECTION("shear-zone orbit composes to the m-fold shear") {
    // Start far from the bump with y = 0.1; the whole orbit stays in the
    // shear zone, so the period map is exactly x + 16 sin(theta) y.
    const MapPoint z0{c1 + 0.3, 0.1};
    const double want = z0.x_lift + 16 * sin_theta * 0.1;

    MapPoint zl = integrate_to(none, z0, 0.0, 1.0);
    REQUIRE_THAT(zl.x_lift, Catch::Matchers::WithinAbs(want, 1e-11));
    REQUIRE(zl.y == 0.1);  // H_x vanishes identically in the shear zone

    MapPoint zs = integrate_to(smooth, z0, 0.0, 1.0);
    REQUIRE_THAT(zs.x_lift, Catch::Matchers::WithinAbs(want, 1e-11));
    REQUIRE(zs.y == 0.1);
  }

  SECTION("half-twist endpoint matches the discrete swap") {
    MapPoint z = integrate_to(smooth, {c1 - delta, 0.0}, 0.0, 1.0);
    REQUIRE_THAT(z.x_lift, Catch::Matchers::WithinAbs(c1 + delta, 1e-9));
    REQUIRE_THAT(z.y, Catch::Matchers::WithinAbs(0.0, 1e-9));
  }

  SECTION("integration beyond one period wraps through the schedule") {
    const MapPoint z0{0.41, -0.13};
    MapPoint two = integrate_to(smooth, z0, 0.0, 2.0);
    MapPoint once = integrate_to(smooth, z0, 0.0, 1.0);
    MapPoint again = integrate_to(smooth, once, 0.0, 1.0);
    REQUIRE_THAT(two.x_lift, Catch::Matchers::WithinAbs(again.x_lift, 1e-12));
    REQUIRE_THAT(two.y, Catch::Matchers::WithinAbs(again.y, 1e-12));
  }

  SECTION("dense output composes exactly like a single run") {
    const MapPoint z0{0.12, 0.22};
    Trajectory traj =
        integrate_flow_at(smooth, z0, 0.0, {0.0, 0.25, 0.5, 0.5, 0.7});
    REQUIRE(traj.points.size() == 5);
    REQUIRE(traj.points[0].x_lift == z0.x_lift);
    // Repeated times repeat the point bitwise.
    REQUIRE(traj.points[2].x_lift == traj.points[3].x_lift);
    REQUIRE(traj.points[2].y == traj.points[3].y);
    // Piece boundaries are identical, so splitting the run changes nothing.
    MapPoint direct = integrate_to(smooth, z0, 0.0, 0.7);
    REQUIRE(traj.points[4].x_lift == direct.x_lift);
    REQUIRE(traj.points[4].y == direct.y);
  }

  SECTION("trajectory sampling grid") {
    Trajectory traj = integrate_flow(smooth, {0.4, 0.1}, 0.0, 1.0);
    REQUIRE(traj.times.size() == 3201);  // 16 sub-steps x 200 steps + start
    REQUIRE(traj.times.front() == 0.0);
    REQUIRE_THAT(traj.times.back(), Catch::Matchers::WithinAbs(1.0, 1e-12));
    for (std::size_t i = 1; i < traj.times.size(); ++i)
      REQUIRE(traj.times[i] > traj.times[i - 1]);
  }

  SECTION("input validation") {
    REQUIRE_THROWS_AS(integrate_to(smooth, {0.1, 0.0}, 0.5, 0.4), InputError);
    REQUIRE_THROWS_AS(
        integrate_flow_at(smooth, {0.1, 0.0}, 0.0, {0.5, 0.4}), InputError);
    REQUIRE_THROWS_AS(isotopy_sample(smooth, {0.1, 0.0}, 1), InputError);
  }
}

TEST_CASE("ODE map agrees with the discrete maps", "[integrator]") {
  StrandLayout lay = make_layout(3);
  Schedule smooth = build_schedule(parse_word("s1", 3), lay, 8);
  Schedule none =
      build_schedule(parse_word("s1", 3), lay, 8, WarpSpec{WarpKind::none, 0.05});
  Schedule inverse = build_schedule(parse_word("s1^-1", 3), lay, 8);
  const double c1 = lay.centers[0];

  const std::vector<MapPoint> mixed = {
      {c1 + 0.02, 0.0}, {c1 + 0.3, 0.1},  {0.6, -0.25},    {0.9, 0.3},
      {c1 - lay.delta, 0.0}, {c1 + 0.1, -0.4}, {c1 - 0.21, 0.17}};

  SECTION("default accuracy on mixed points") {
    FlowMapReport rep = flow_map_check(smooth, mixed);
    REQUIRE(rep.pass);
    REQUIRE(rep.tolerance == 1e-6);
    REQUIRE(rep.max_error > 0);
    REQUIRE(rep.max_error <= 1e-9);
  }

  SECTION("time-reversed letters integrate to the inverse maps") {
    FlowMapReport rep = flow_map_check(inverse, mixed);
    REQUIRE(rep.pass);
    REQUIRE(rep.max_error <= 1e-9);
  }

  SECTION("shear-zone flow is exact") {
    // In the shear zone the field is linear in y and constant in time, so
    // the one-step integrator reproduces the map to rounding error.
    FlowMapReport rep =
        flow_map_check(none, {{c1 + 0.3, 0.1}, {c1 - 0.35, -0.2}});
    REQUIRE(rep.max_error <= 1e-10);
  }

  SECTION("classical 4th-order convergence under step halving") {
    // With the identity warp the field's time derivatives do not vanish at
    // sub-step junctions, so the leading error term survives and halving
    // shows the textbook 16x. (The smooth warp's flat junctions cancel the
    // quadrature part of the error, which looks like superconvergence at
    // coarse steps; see the warped variant below.)
    const std::vector<MapPoint> transition = {{c1 + 0.20, 0.0},
                                              {c1 + 0.23, 0.05},
                                              {c1 - 0.20, -0.04},
                                              {c1 + 0.17, 0.1},
                                              {c1 + 0.26, -0.08}};
    double err[3];
    const int steps[3] = {25, 50, 100};
    for (int i = 0; i < 3; ++i) {
      IntegratorOpts opts;
      opts.steps_per_substep = steps[i];
      err[i] = flow_map_check(none, transition, opts).max_error;
    }
    REQUIRE(err[0] / err[1] >= 12.0);
    REQUIRE(err[0] / err[1] <= 20.0);
    REQUIRE(err[1] / err[2] >= 12.0);
    REQUIRE(err[1] / err[2] <= 20.0);

    // Smooth warp reaches the classical regime at finer steps.
    IntegratorOpts o100, o200;
    o100.steps_per_substep = 100;
    o200.steps_per_substep = 200;
    const double s100 = flow_map_check(smooth, transition, o100).max_error;
    const double s200 = flow_map_check(smooth, transition, o200).max_error;
    REQUIRE(s100 / s200 >= 12.0);
    REQUIRE(s100 / s200 <= 20.0);
  }

  SECTION("implicit midpoint is second order") {
    const std::vector<MapPoint> transition = {
        {c1 + 0.20, 0.0}, {c1 + 0.23, 0.05}, {c1 - 0.20, -0.04}};
    IntegratorOpts o200, o400;
    o200.method = o400.method = IntegratorMethod::implicit_midpoint;
    o200.steps_per_substep = 200;
    o400.steps_per_substep = 400;
    const double e200 = flow_map_check(smooth, transition, o200).max_error;
    const double e400 = flow_map_check(smooth, transition, o400).max_error;
    REQUIRE(e200 <= 2e-6);
    REQUIRE(e200 / e400 >= 3.2);
    REQUIRE(e200 / e400 <= 4.8);
  }
}

TEST_CASE("flow is symplectic", "[integrator]") {
  StrandLayout lay = make_layout(3);
  Schedule smooth = build_schedule(parse_word("s1", 3), lay, 8);

  SECTION("period-map determinant via factored differences") {
    // Includes the points where one whole-period central difference fails
    // by orders of magnitude (composed third derivatives near the bump
    // transition), which the factored product handles.
    std::mt19937 gen(17);
    std::vector<MapPoint> pts = {{0.845, 0.413}, {0.62, -0.21}};
    for (int i = 0; i < 20; ++i)
      pts.push_back({uniform(gen, 0, 1), uniform(gen, -0.5, 0.5)});
    for (const MapPoint& z : pts) {
      const double det = factored_period_det(smooth, z, 1e-6);
      REQUIRE_THAT(det, Catch::Matchers::WithinAbs(1.0, 1e-6));
    }
  }

  SECTION("direct differences work where the orbit stays tame") {
    for (MapPoint z : {MapPoint{0.187, 0.0}, MapPoint{0.467, 0.1}}) {
      const double h = 1e-5;
      MapPoint xp = integrate_to(smooth, {z.x_lift + h, z.y}, 0, 1);
      MapPoint xm = integrate_to(smooth, {z.x_lift - h, z.y}, 0, 1);
      MapPoint yp = integrate_to(smooth, {z.x_lift, z.y + h}, 0, 1);
      MapPoint ym = integrate_to(smooth, {z.x_lift, z.y - h}, 0, 1);
      const double det = ((xp.x_lift - xm.x_lift) * (yp.y - ym.y) -
                          (yp.x_lift - ym.x_lift) * (xp.y - xm.y)) /
                         (4 * h * h);
      REQUIRE_THAT(det, Catch::Matchers::WithinAbs(1.0, 1e-9));
    }
  }
}

TEST_CASE("discrete isotopy sampling", "[integrator]") {
  StrandLayout lay = make_layout(3);
  Schedule smooth = build_schedule(parse_word("s1", 3), lay, 8);
  const double c1 = lay.centers[0];
  const double delta = lay.delta;

  SECTION("sub-step endpoints are the discrete maps") {
    const MapPoint z0{0.45, 0.2};
    Trajectory traj = isotopy_sample(smooth, z0, 8);
    REQUIRE(traj.points.size() == 16 * 8 + 1);
    MapPoint z = z0;
    const GeneratorShape& shape = smooth.shapes[0];
    for (int k = 0; k <= 16; ++k) {
      const MapPoint& at = traj.points[static_cast<std::size_t>(k) * 8];
      REQUIRE(at.x_lift == z.x_lift);
      REQUIRE(at.y == z.y);
      z = map_forward_unchecked(shape, z);
    }
  }

  SECTION("interior samples are chords") {
    const MapPoint z0{c1 - delta, 0.0};
    Trajectory traj = isotopy_sample(smooth, z0, 4);
    const MapPoint& a = traj.points[0];
    const MapPoint& b = traj.points[4];
    for (int j = 1; j < 4; ++j) {
      const double u = j / 4.0;
      REQUIRE_THAT(traj.points[static_cast<std::size_t>(j)].x_lift,
                   Catch::Matchers::WithinAbs(
                       a.x_lift + u * (b.x_lift - a.x_lift), 1e-15));
      REQUIRE_THAT(traj.points[static_cast<std::size_t>(j)].y,
                   Catch::Matchers::WithinAbs(a.y + u * (b.y - a.y), 1e-15));
    }
  }

  SECTION("rotation-zone strand stays near the center") {
    // The exchanged strand rides a circle of radius delta about the center;
    // chord interpolation can only shrink the radius.
    Trajectory traj = isotopy_sample(smooth, {c1 - delta, 0.0}, 64);
    for (const MapPoint& p : traj.points) {
      REQUIRE(std::hypot(p.x_lift - c1, p.y) <= 1.01 * delta);
    }
  }

  SECTION("spectator strand is constant") {
    Trajectory traj = isotopy_sample(smooth, {lay.positions[2], 0.0}, 16);
    for (const MapPoint& p : traj.points) {
      REQUIRE(p.x_lift == lay.positions[2]);
      REQUIRE(p.y == 0.0);
    }
  }

  SECTION("sub-step displacements respect the certified bound") {
    const GeneratorShape& shape = smooth.shapes[0];
    const double bound = substep_displacement_bound(shape, lay.annulus);
    std::mt19937 gen(23);
    for (int i = 0; i < 500; ++i) {
      MapPoint z{uniform(gen, 0, 1), uniform(gen, -0.5, 0.5)};
      MapPoint w = map_forward_unchecked(shape, z);
      REQUIRE(std::hypot(w.x_lift - z.x_lift, w.y - z.y) <= bound);
    }
  }
}

TEST_CASE("strand tracing", "[integrator]") {
  StrandLayout lay = make_layout(3);
  Schedule sched = build_schedule(parse_word("s1 s2^-1", 3), lay, 8);

  SECTION("isotopy and ODE traces agree at sub-step endpoints") {
    StrandSet iso = trace_strands(sched, 64, TraceMethod::isotopy);
    StrandSet ode = trace_strands(sched, 64, TraceMethod::ode);
    REQUIRE(iso.times.size() == 32 * 64 + 1);
    REQUIRE(iso.times.size() == ode.times.size());
    double worst = 0;
    for (int i = 0; i < 3; ++i) {
      for (std::size_t k = 0; k < iso.times.size(); k += 64) {
        const MapPoint& a = iso.samples[static_cast<std::size_t>(i)][k];
        const MapPoint& b = ode.samples[static_cast<std::size_t>(i)][k];
        worst = std::max(worst, std::hypot(a.x_lift - b.x_lift, a.y - b.y));
      }
    }
    REQUIRE(worst <= 1e-6);   // cross-method contract
    REQUIRE(worst <= 1e-10);  // measured headroom at default resolution
    REQUIRE_THAT(iso.min_separation,
                 Catch::Matchers::WithinAbs(ode.min_separation, 1e-6));
  }

  SECTION("separation stays far above the floor") {
    StrandSet set = trace_strands(sched, 64, TraceMethod::isotopy);
    REQUIRE(set.min_separation >= 0.33);
    REQUIRE(set.min_separation <= 0.34);
  }

  SECTION("endpoints realize the word permutation") {
    StrandSet set = trace_strands(sched, 64, TraceMethod::isotopy);
    Permutation perm = endpoint_permutation(sched.word);
    for (int i = 1; i <= 3; ++i) {
      const MapPoint& z = set.samples[static_cast<std::size_t>(i - 1)].back();
      const double frac = z.x_lift - std::floor(z.x_lift);
      const double want = lay.positions[static_cast<std::size_t>(perm(i) - 1)];
      REQUIRE_THAT(circle_dist(frac, want),
                   Catch::Matchers::WithinAbs(0.0, 1e-9));
      REQUIRE_THAT(z.y, Catch::Matchers::WithinAbs(0.0, 1e-9));
    }
  }

  SECTION("single generator swaps its pair and fixes the spectator") {
    Schedule s1 = build_schedule(parse_word("s1", 3), lay, 8);
    StrandSet set = trace_strands(s1, 64, TraceMethod::isotopy);
    REQUIRE_THAT(set.samples[0].back().x_lift,
                 Catch::Matchers::WithinAbs(lay.positions[1], 1e-9));
    REQUIRE_THAT(set.samples[1].back().x_lift,
                 Catch::Matchers::WithinAbs(lay.positions[0], 1e-9));
    for (const MapPoint& p : set.samples[2]) {
      REQUIRE(p.x_lift == lay.positions[2]);
      REQUIRE(p.y == 0.0);
    }
  }

  SECTION("a letter followed by its inverse returns every strand") {
    Schedule cancel = build_schedule(parse_word("s1 s1^-1", 3), lay, 8);
    StrandSet iso = trace_strands(cancel, 64, TraceMethod::isotopy);
    StrandSet ode = trace_strands(cancel, 64, TraceMethod::ode);
    for (int i = 0; i < 3; ++i) {
      const MapPoint& zi = iso.samples[static_cast<std::size_t>(i)].back();
      const MapPoint& zo = ode.samples[static_cast<std::size_t>(i)].back();
      REQUIRE_THAT(zi.x_lift,
                   Catch::Matchers::WithinAbs(lay.positions[static_cast<std::size_t>(i)], 1e-8));
      REQUIRE_THAT(zi.y, Catch::Matchers::WithinAbs(0.0, 1e-8));
      REQUIRE_THAT(zo.x_lift,
                   Catch::Matchers::WithinAbs(lay.positions[static_cast<std::size_t>(i)], 1e-6));
      REQUIRE_THAT(zo.y, Catch::Matchers::WithinAbs(0.0, 1e-6));
    }
  }

  SECTION("empty word gives constant strands") {
    Schedule triv = build_schedule(BraidWord{3, {}}, lay, 8);
    for (TraceMethod method : {TraceMethod::isotopy, TraceMethod::ode}) {
      StrandSet set = trace_strands(triv, 16, method);
      REQUIRE(set.times.size() == 17);
      for (int i = 0; i < 3; ++i)
        for (const MapPoint& p : set.samples[static_cast<std::size_t>(i)]) {
          REQUIRE(p.x_lift == lay.positions[static_cast<std::size_t>(i)]);
          REQUIRE(p.y == 0.0);
        }
      REQUIRE_THAT(set.min_separation,
                   Catch::Matchers::WithinAbs(1.0 / 3, 1e-12));
    }
  }

  SECTION("lift moves smoothly within each strand") {
    StrandSet set = trace_strands(sched, 64, TraceMethod::isotopy);
    for (const auto& strand : set.samples)
      for (std::size_t k = 1; k < strand.size(); ++k)
        REQUIRE(std::abs(strand[k].x_lift - strand[k - 1].x_lift) <= 0.01);
  }

  SECTION("tracing is deterministic across thread counts") {
    StrandSet one = trace_strands(sched, 32, TraceMethod::isotopy, {}, 1);
    StrandSet four = trace_strands(sched, 32, TraceMethod::isotopy, {}, 4);
    for (int i = 0; i < 3; ++i)
      for (std::size_t k = 0; k < one.times.size(); ++k) {
        REQUIRE(one.samples[static_cast<std::size_t>(i)][k].x_lift ==
                four.samples[static_cast<std::size_t>(i)][k].x_lift);
        REQUIRE(one.samples[static_cast<std::size_t>(i)][k].y ==
                four.samples[static_cast<std::size_t>(i)][k].y);
      }
  }
}
