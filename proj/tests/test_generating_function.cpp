#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "braidflow/certificates.hpp"
#include "braidflow/generating_function.hpp"
#include "braidflow/mollifier.hpp"

using namespace braidflow;

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937& gen, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(gen()) / 4294967296.0);
}

GeneratorShape default_shape() { return GeneratorShape::make(8, 0.0667, 0.0); }

}  // namespace

TEST_CASE("mollifier benchmark values", "[generating_function]") {
  MollifierValue b = mollifier_b(0.5);
  REQUIRE_THAT(b.value, Catch::Matchers::WithinAbs(0.5, 1e-14));
  REQUIRE_THAT(b.d1, Catch::Matchers::WithinAbs(2.0, 1e-12));
  REQUIRE_THAT(b.d2, Catch::Matchers::WithinAbs(0.0, 1e-10));

  MollifierValue flat = mollifier_c(0.1, 0.05);
  REQUIRE(flat.value == 1.0);
  REQUIRE(flat.d1 == 0.0);
  REQUIRE(flat.d2 == 0.0);

  MollifierValue mid = mollifier_c(0.1, 0.15);
  REQUIRE_THAT(mid.value, Catch::Matchers::WithinAbs(0.5, 1e-14));
  REQUIRE_THAT(mid.d1, Catch::Matchers::WithinAbs(-20.0, 1e-10));

  // Same values through the kind-dispatched entry point.
  REQUIRE(mollifier_eval(MollifierKind::b, 0, 0.5).value == b.value);
  REQUIRE(mollifier_eval(MollifierKind::c_eps, 0.1, 0.15).value == mid.value);
  REQUIRE(mollifier_eval(MollifierKind::a, 0, -1.0).value == 0.0);
}

TEST_CASE("mollifier partition of unity", "[generating_function]") {
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    const double sum = mollifier_b(t).value + mollifier_b(1 - t).value;
    REQUIRE_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("cutoff is flat at both junctions", "[generating_function]") {
  const double eps = 0.07;
  MollifierValue at_eps = mollifier_c(eps, eps);
  REQUIRE_THAT(at_eps.value, Catch::Matchers::WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(at_eps.d1, Catch::Matchers::WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(at_eps.d2, Catch::Matchers::WithinAbs(0.0, 1e-12));
  MollifierValue at_2eps = mollifier_c(eps, 2 * eps);
  REQUIRE_THAT(at_2eps.value, Catch::Matchers::WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(at_2eps.d1, Catch::Matchers::WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(at_2eps.d2, Catch::Matchers::WithinAbs(0.0, 1e-12));
  // Slightly inside the window the cutoff is strictly between 0 and 1.
  const double inside = mollifier_c(eps, 1.5 * eps).value;
  REQUIRE(inside > 0.0);
  REQUIRE(inside < 1.0);
}

TEST_CASE("mollifier derivatives match finite differences",
          "[generating_function]") {
  // Differences are normalized by each derivative's sup over the window:
  // near the tails the fourth derivative dwarfs the second, so pointwise
  // relative comparison at this step size would measure truncation error,
  // not correctness. Against the sup scale, truncation sits near 1e-6
  // while a wrong formula would miss by order one.
  std::mt19937 gen(2024);
  const double h = 1e-5;
  auto check = [&](auto f, double t, double scale1, double scale2) {
    const MollifierValue v = f(t);
    const double fd1 = (f(t + h).value - f(t - h).value) / (2 * h);
    const double fd2 = (f(t + h).d1 - f(t - h).d1) / (2 * h);
    REQUIRE_THAT(fd1, Catch::Matchers::WithinAbs(v.d1, 1e-5 * scale1));
    REQUIRE_THAT(fd2, Catch::Matchers::WithinAbs(v.d2, 1e-5 * scale2));
  };
  const double eps = 0.08;
  const double sup_b1 = 2.0, sup_b2 = 9.85;
  for (int i = 0; i < 400; ++i) {
    check([](double t) { return mollifier_b(t); }, uniform(gen, 0.02, 0.98),
          sup_b1, sup_b2);
    check([eps](double t) { return mollifier_c(eps, t); },
          uniform(gen, 0.01, 3 * eps), sup_b1 / eps, sup_b2 / (eps * eps));
  }
}

TEST_CASE("shape parameters are internally consistent", "[generating_function]") {
  for (int q : {3, 4, 6, 8, 12, 16}) {
    GeneratorShape s = GeneratorShape::make(q, 0.05, 0.25);
    REQUIRE_THAT(s.theta, Catch::Matchers::WithinAbs(kPi / (2 * q), 1e-15));
    const double xi_alt = (1 - std::cos(s.theta)) / std::sin(s.theta);
    REQUIRE_THAT(s.xi, Catch::Matchers::WithinAbs(xi_alt, 1e-14));
    REQUIRE_THAT(s.xi, Catch::Matchers::WithinAbs(std::tan(s.theta / 2), 1e-14));
    REQUIRE(s.m_iters == 2 * q);
  }
  GeneratorShape neg = GeneratorShape::make(8, 0.05, 0.0, -1);
  REQUIRE(neg.theta < 0);
  REQUIRE(neg.xi < 0);

  REQUIRE_THROWS_AS(GeneratorShape::make(2, 0.05, 0.0), InputError);
  REQUIRE_THROWS_AS(GeneratorShape::make(8, -0.1, 0.0), InputError);
  REQUIRE_THROWS_AS(GeneratorShape::make(8, 0.3, 0.0), InputError);
  REQUIRE_THROWS_AS(GeneratorShape::make(8, 0.05, 1.5), InputError);
}

TEST_CASE("rho benchmark values", "[generating_function]") {
  GeneratorShape s = default_shape();
  MollifierValue inside = rho_eval(s, 0.5 * s.eps);
  REQUIRE(inside.value == s.xi);
  REQUIRE(inside.d1 == 0.0);
  REQUIRE(inside.d2 == 0.0);
  MollifierValue outside = rho_eval(s, 2 * s.eps);
  REQUIRE(outside.value == 0.0);
  REQUIRE(outside.d1 == 0.0);
  MollifierValue mid = rho_eval(s, 1.5 * s.eps);
  REQUIRE_THAT(mid.value,
               Catch::Matchers::WithinAbs(0.5 * std::tan(kPi / 32), 1e-12));
  REQUIRE_THAT(mid.d1,
               Catch::Matchers::WithinAbs(-2 * std::tan(kPi / 32) / s.eps, 1e-9));
}

TEST_CASE("g closed forms in the flat zones", "[generating_function]") {
  GeneratorShape s = default_shape();
  const double sn = std::sin(s.theta);

  // Rotation zone: quadratic with the xi correction, exactly.
  for (auto [x, X] : {std::pair{0.02, -0.01}, {0.1, 0.12}, {-0.15, 0.1}}) {
    REQUIRE(pair_radius_sq(x, X) <= s.eps);
    const GDerivs d = g_eval(s, x, X);
    const double expect =
        (x - X) * (x - X) / (2 * sn) - s.xi * (x * x + X * X) / 2;
    REQUIRE_THAT(d.g, Catch::Matchers::WithinAbs(expect, 1e-15));
    REQUIRE_THAT(d.gxX, Catch::Matchers::WithinAbs(-1 / sn, 1e-12));
  }

  // Shear zone: pure quadratic; the benchmark pair from the twist report.
  const GDerivs sh = g_eval(s, 0.4, 0.41);
  REQUIRE_THAT(sh.g, Catch::Matchers::WithinAbs(0.01 * 0.01 / (2 * sn), 1e-15));
  REQUIRE_THAT(-sh.gxX, Catch::Matchers::WithinRel(5.125830895483018, 1e-10));
  REQUIRE(g_eval(s, 0.4, 0.41).gXX == 1 / sn);
}

TEST_CASE("g is periodic under the diagonal translation", "[generating_function]") {
  GeneratorShape s = default_shape();
  std::mt19937 gen(7);
  for (int i = 0; i < 1000; ++i) {
    const double x = uniform(gen, -1.5, 1.5);
    const double X = uniform(gen, x - 0.4, x + 0.4);
    const GDerivs d0 = g_eval(s, x, X);
    const GDerivs d1 = g_eval(s, x + 1, X + 1);
    REQUIRE_THAT(d1.g, Catch::Matchers::WithinAbs(d0.g, 1e-12));
    REQUIRE_THAT(d1.gx, Catch::Matchers::WithinAbs(d0.gx, 1e-12));
    REQUIRE_THAT(d1.gxX, Catch::Matchers::WithinAbs(d0.gxX, 1e-11));
  }
}

TEST_CASE("g is symmetric in the flat zones", "[generating_function]") {
  GeneratorShape s = default_shape();
  std::mt19937 gen(8);
  for (int i = 0; i < 300; ++i) {
    const double x = uniform(gen, -0.6, 0.6);
    const double X = uniform(gen, -0.6, 0.6);
    if (region_of(s, x, X) == Region::blend) continue;
    REQUIRE_THAT(g_eval(s, X, x).g, Catch::Matchers::WithinAbs(g_eval(s, x, X).g, 1e-13));
  }
}

TEST_CASE("g partials match finite differences", "[generating_function]") {
  GeneratorShape s = default_shape();
  std::mt19937 gen(99);
  const double h = 1e-5;
  int blend_hits = 0;
  for (int i = 0; i < 1000; ++i) {
    const double x = uniform(gen, -0.7, 0.7);
    const double X = uniform(gen, x - 0.45, x + 0.45);
    if (region_of(s, x, X) == Region::blend) ++blend_hits;
    const GDerivs d = g_eval(s, x, X);
    auto close = [](double got, double want, double scale) {
      return std::abs(got - want) <= 1e-5 * std::max(1.0, std::abs(scale));
    };
    const double fdx = (g_eval(s, x + h, X).g - g_eval(s, x - h, X).g) / (2 * h);
    const double fdX = (g_eval(s, x, X + h).g - g_eval(s, x, X - h).g) / (2 * h);
    const double fdxx =
        (g_eval(s, x + h, X).gx - g_eval(s, x - h, X).gx) / (2 * h);
    const double fdxX =
        (g_eval(s, x, X + h).gx - g_eval(s, x, X - h).gx) / (2 * h);
    const double fdXX =
        (g_eval(s, x, X + h).gX - g_eval(s, x, X - h).gX) / (2 * h);
    REQUIRE(close(fdx, d.gx, d.gx));
    REQUIRE(close(fdX, d.gX, d.gX));
    REQUIRE(close(fdxx, d.gxx, d.gxx));
    REQUIRE(close(fdxX, d.gxX, d.gxX));
    REQUIRE(close(fdXX, d.gXX, d.gXX));
  }
  // The sample must actually exercise the transition ring.
  REQUIRE(blend_hits > 50);
}

TEST_CASE("translate sum is local", "[generating_function]") {
  GeneratorShape s = default_shape();
  std::mt19937 gen(13);
  for (int i = 0; i < 500; ++i) {
    const double x = uniform(gen, -2.2, 2.2);
    const double X = uniform(gen, x - 0.45, x + 0.45);
    // Full truncated sum over |k - round| <= 2 versus the single-translate
    // evaluation inside g_eval.
    const double k0 = std::round(0.5 * (x + X));
    double bump = 0;
    int contributing = 0;
    for (int dk = -2; dk <= 2; ++dk) {
      const double k = k0 + dk;
      const double t = (x - k) * (x - k) + (X - k) * (X - k);
      if (t < 2 * s.eps) {
        bump -= 0.5 * rho_eval(s, t).value * t;
        ++contributing;
      }
    }
    REQUIRE(contributing <= 1);
    const double sn = std::sin(s.theta);
    const double expect = (x - X) * (x - X) / (2 * sn) + bump;
    REQUIRE_THAT(g_eval(s, x, X).g, Catch::Matchers::WithinAbs(expect, 1e-13));
  }
}

TEST_CASE("region classifier thresholds", "[generating_function]") {
  GeneratorShape s = default_shape();
  auto at_radius = [&](double t) {
    const double r = std::sqrt(t / 2);
    return region_of(s, r, r);
  };
  REQUIRE(at_radius(0.5 * s.eps) == Region::rotation);
  REQUIRE(at_radius(1.5 * s.eps) == Region::blend);
  REQUIRE(at_radius(3.0 * s.eps) == Region::shear);
}

TEST_CASE("rho certificate benchmark outcomes", "[generating_function]") {
  // Frozen reference sups computed from the one-variable reduction
  // 2t |rho'' t/2 + rho'| sin(theta): the bound is scale-free in eps and
  // proportional to |xi| sin(theta).
  CertReport r8 = certify_rho(GeneratorShape::make(8, 0.0667, 0.0));
  REQUIRE(r8.pass);
  REQUIRE_THAT(r8.extremum, Catch::Matchers::WithinAbs(0.5566, 5e-3));

  CertReport r16 = certify_rho(GeneratorShape::make(16, 0.05, 0.0));
  REQUIRE(r16.pass);
  REQUIRE_THAT(r16.extremum, Catch::Matchers::WithinAbs(0.1395, 2e-3));

  // Degenerate bump: nothing to certify.
  CertReport r0 = certify_rho(GeneratorShape::make(8, 0.0667, 0.0, +1, 0.0));
  REQUIRE(r0.pass);
  REQUIRE(r0.extremum == 0.0);

  // Coarse subdivisions genuinely fail, as does the inflated-xi test hook.
  REQUIRE_FALSE(certify_rho(GeneratorShape::make(3, 0.0667, 0.0)).pass);
  CertReport hook = certify_rho(GeneratorShape::make(3, 0.0667, 0.0, +1, 10.0));
  REQUIRE_FALSE(hook.pass);
  REQUIRE(hook.extremum > 10.0);

  // Independence from eps at fixed q.
  CertReport a = certify_rho(GeneratorShape::make(8, 0.02, 0.0));
  CertReport b = certify_rho(GeneratorShape::make(8, 0.12, 0.0));
  REQUIRE_THAT(a.extremum, Catch::Matchers::WithinAbs(b.extremum, 1e-6));

  REQUIRE_THROWS_AS(certify_rho(default_shape(), 50), InputError);
}

TEST_CASE("twist certificate on the realized graph", "[generating_function]") {
  TwistReport rep = certify_twist(default_shape());
  REQUIRE(rep.pass);
  REQUIRE_THAT(rep.threshold, Catch::Matchers::WithinRel(0.5 / std::sin(kPi / 16), 1e-12));
  // Frozen reference: the minimum sits in the transition ring, well above
  // the threshold but below the unperturbed shear value 5.1258.
  REQUIRE_THAT(rep.extremum, Catch::Matchers::WithinAbs(3.4395, 2e-2));
  REQUIRE(rep.margin > 0.8);

  // Pure shear: the minimum is exactly 1/sin(theta).
  TwistReport flat = certify_twist(GeneratorShape::make(8, 0.0667, 0.0, +1, 0.0));
  REQUIRE(flat.pass);
  REQUIRE_THAT(flat.extremum,
               Catch::Matchers::WithinAbs(5.125830895483018, 1e-9));

  // q = 6 fails on the graph margin even though its rho certificate passes.
  GeneratorShape s6 = GeneratorShape::make(6, 0.0667, 0.0);
  REQUIRE(certify_rho(s6).pass);
  TwistReport rep6 = certify_twist(s6);
  REQUIRE_FALSE(rep6.pass);
  REQUIRE_THAT(rep6.extremum, Catch::Matchers::WithinAbs(1.61, 3e-2));

  REQUIRE_THROWS_AS(certify_twist(default_shape(), GridSpec{100, 100}), InputError);
}

TEST_CASE("twist certificate is deterministic across worker counts",
          "[generating_function]") {
  TwistReport one = certify_twist(default_shape(), GridSpec{210, 210}, Annulus{}, 1);
  TwistReport four = certify_twist(default_shape(), GridSpec{210, 210}, Annulus{}, 4);
  REQUIRE(one.extremum == four.extremum);
  REQUIRE(one.arg_x == four.arg_x);
  REQUIRE(one.arg_y == four.arg_y);
}
