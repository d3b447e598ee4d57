#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "hfgate/errors.hpp"
#include "hfgate/keyed_rng.hpp"
#include "hfgate/zz_budget.hpp"

using namespace hfgate;

namespace {

constexpr double kPi = std::numbers::pi;

// Envelope density with the dot centered at (cx, cy) and the valley phase it sees there.
double model(const DotShape& shape, const ValleyField& valley, const LatticeSite& site, double cx,
             double cy) {
  return envelope_density(shape.with_center(cx, cy).with_theta(valley.value(cx, cy)), site.position);
}

const LatticeSite site_a = make_site({3, -2, 1}, 5);

}  // namespace

TEST_CASE("coefficients match finite differences of the envelope model") {
  const DotShape shape = DotShape{15e-9, 8e-9}.with_center(1.2e-9, -0.7e-9);
  const ValleyField valleys[] = {ValleyField::constant(0.4), ValleyField::linear(0.3, 4e7, -2e7),
                                 ValleyField::two_component(0.2, 1.5, 60e-9)};
  for (const auto& valley : valleys) {
    const auto c = perturbation_coeffs(shape, site_a, valley);
    const double cx = shape.center_x;
    const double cy = shape.center_y;
    const double a0 = model(shape, valley, site_a, cx, cy);
    const double hstep = 1e-11;
    const double ax_p = model(shape, valley, site_a, cx + hstep, cy);
    const double ax_m = model(shape, valley, site_a, cx - hstep, cy);
    const double ay_p = model(shape, valley, site_a, cx, cy + hstep);
    const double ay_m = model(shape, valley, site_a, cx, cy - hstep);
    const double d0 = (ax_p - ax_m) / (2 * hstep * a0);
    const double d1 = (ay_p - ay_m) / (2 * hstep * a0);
    const double d00 = 0.5 * (ax_p - 2 * a0 + ax_m) / (hstep * hstep * a0);
    const double d11 = 0.5 * (ay_p - 2 * a0 + ay_m) / (hstep * hstep * a0);
    CHECK(c.c0 == doctest::Approx(d0).epsilon(1e-5));
    CHECK(c.c1 == doctest::Approx(d1).epsilon(1e-5));
    CHECK(c.c00 == doctest::Approx(d00).epsilon(1e-3));
    CHECK(c.c11 == doctest::Approx(d11).epsilon(1e-3));
  }
}

TEST_CASE("coefficient preconditions") {
  const DotShape shape;
  CHECK_THROWS_AS(perturbation_coeffs(shape, make_site({0, 0, 0}, 0), ValleyField::constant(kPi)),
                  DegenerateSiteError);
  const auto outside = make_site({0, 0, 20}, 0);
  CHECK_THROWS_AS(perturbation_coeffs(shape, outside, ValleyField::constant(0.0)), InputError);
}

TEST_CASE("constant valley phase puts the sweet spot above the site") {
  const auto spot = find_sweet_spot(DotShape{}, site_a, ValleyField::constant(0.9));
  CHECK(spot.x0 == site_a.position.x);
  CHECK(spot.y0 == site_a.position.y);
  CHECK(spot.iterations == 1);
}

TEST_CASE("linear valley phase sweet spot satisfies the stationarity conditions") {
  const DotShape shape;
  const auto valley = ValleyField::linear(0.5, 3e7, -1e7);
  const auto spot = find_sweet_spot(shape, site_a, valley);
  const auto c = perturbation_coeffs(shape.with_center(spot.x0, spot.y0), site_a, valley);
  // The two terms of c_i cancel; below 1e-8 or at their rounding level.
  const double floor0 = 1e-14 * std::abs(c.tan_theta * valley.slope_x);
  const double floor1 = 1e-14 * std::abs(c.tan_theta * valley.slope_y);
  CHECK(std::abs(c.c0) <= std::max(1e-8, floor0));
  CHECK(std::abs(c.c1) <= std::max(1e-8, floor1));
  CHECK(spot.residual <= std::max({1e-8, floor0, floor1}));
  // Closed-form relation for a linear phase: x0 - x = (r0^2 / 2) tan(theta) slope.
  const double r2 = shape.r0 * shape.r0;
  CHECK(spot.x0 - site_a.position.x ==
        doctest::Approx(0.5 * r2 * c.tan_theta * valley.slope_x).epsilon(1e-6));
  CHECK(spot.y0 - site_a.position.y ==
        doctest::Approx(0.5 * r2 * c.tan_theta * valley.slope_y).epsilon(1e-6));
  CHECK(spot.selected == (c.tan_theta * c.tan_theta <= 1.0));
}

TEST_CASE("strong valley gradients defeat the fixed point") {
  const auto valley = ValleyField::two_component(-1.0, 2.0, 50e-9);
  CHECK_THROWS_AS(find_sweet_spot(DotShape{}, make_site({0, 0, 0}, 0), valley), ConvergenceError);
}

TEST_CASE("Gaussian quartic moment") {
  const double var = 2.5;
  const int n = 400000;
  double s4 = 0.0;
  double s8 = 0.0;
  KeyedRng rng(77, StreamTag::gaussian_check, 0);
  std::normal_distribution<double> g(0.0, std::sqrt(var));
  for (int i = 0; i < n; ++i) {
    const double x = g(rng);
    s4 += std::pow(x, 4);
    s8 += std::pow(x, 8);
  }
  const double mean = s4 / n;
  const double se = std::sqrt((s8 / n - mean * mean) / n);
  CHECK(std::abs(mean - gaussian_quartic(var)) < 3.0 * se);
  CHECK(gaussian_quartic(var) == 3.0 * var * var);
}

TEST_CASE("exact ZZ error approaches the lowest order for small shifts") {
  const std::vector<double> d = {1e-4, -2e-4, 3e-4, -1e-4};
  const auto e = zz_error_exact(d);
  CHECK(e.exact == doctest::Approx(e.lowest_order).epsilon(1e-6));
  const std::vector<double> one = {1.0};
  CHECK(zz_error_exact(one).exact == doctest::Approx(1.0));
  CHECK_THROWS_AS(zz_error_exact(std::vector<double>{}), InputError);
}

TEST_CASE("headline bound matches the oracle") {
  const auto h = headline_zz_bound(1e-5, 0.34, 1);
  CHECK(h.single_axis == doctest::Approx(2.561316021e-8).epsilon(1e-9));
  CHECK(h.split_axes == doctest::Approx(1.280658011e-8).epsilon(1e-9));
  const auto one = headline_zz_bound(1e-5, 1.0, 1);
  CHECK(one.single_axis == doctest::Approx(2.96088132e-9).epsilon(1e-8));
  CHECK(one.split_axes == doctest::Approx(1.48044066e-9).epsilon(1e-8));
}

TEST_CASE("ratio bound and ZZ bound invert each other") {
  for (const int m : {1, 2, 4}) {
    const ValleyNoise s{3e-4, 0.0};
    const double ratio = t2ratio_bound(s, m, 0.34);
    CHECK(ratio == doctest::Approx(0.34 * cpmg_prefactor(m) * s.total()));
    const auto h = headline_zz_bound(ratio, 0.34, m);
    CHECK(h.s_total == doctest::Approx(s.total()).epsilon(1e-14));
    CHECK(h.single_axis == doctest::Approx(zz_bound_sweetspot(s)).epsilon(1e-14));
  }
  CHECK(cpmg_prefactor(1) == 0.5);
}

TEST_CASE("bound curves have the expected log-log slopes") {
  Fig5Config cfg;
  cfg.s_grid = log_grid(1e-7, 1e-1, 61);
  const auto pts = fig5_curves(cfg);
  std::map<std::string, std::vector<Fig5Point>> curves;
  for (const auto& p : pts) curves[p.curve].push_back(p);
  REQUIRE(curves.count("sweetspot_pessimistic"));
  REQUIRE(curves.count("sweetspot_optimistic"));
  REQUIRE(curves.size() == 5);
  for (const auto& [name, c] : curves) {
    const double want = name.rfind("sweetspot", 0) == 0 ? 2.0 : 1.0;
    for (std::size_t i = 10; i < c.size(); i += 10) {
      const double slope = std::log(c[i].y / c[i - 10].y) / std::log(c[i].x / c[i - 10].x);
      CHECK(slope == doctest::Approx(want).epsilon(1e-3));
    }
  }
  // Optimistic never exceeds pessimistic at the same ratio bound.
  const auto& pes = curves["sweetspot_pessimistic"];
  const auto& opt = curves["sweetspot_optimistic"];
  REQUIRE(pes.size() == opt.size());
  for (std::size_t i = 0; i < pes.size(); ++i) {
    CHECK(pes[i].x == opt[i].x);
    CHECK(opt[i].y <= pes[i].y);
  }
}

TEST_CASE("a ratio of a single site is tan^2") {
  const DotShape shape = DotShape{}.with_theta(0.8);
  const std::vector<LatticeSite> one = {site_a};
  const double t = std::tan(valley_argument(site_a.position.z, shape.theta_v));
  CHECK(a_ratio(shape, one) == doctest::Approx(t * t).epsilon(1e-12));
  CHECK(std::isnan(a_ratio(shape, std::vector<LatticeSite>{})));
}

TEST_CASE("a coefficient is reproducible across worker counts") {
  ACoefficientConfig cfg;
  cfg.shapes = {DotShape{6e-9, 4e-9}};
  cfg.ppms = {2e4};
  cfg.samples = 40;
  cfg.seed = 3;
  cfg.cutoff_factor = 4.0;
  cfg.workers = 1;
  const auto a = compute_a(cfg);
  cfg.workers = 3;
  const auto b = compute_a(cfg);
  REQUIRE(a.cases.size() == 1);
  CHECK(a.cases[0].mean == b.cases[0].mean);
  CHECK(a.cases[0].std_error == b.cases[0].std_error);
  CHECK(a.lo <= a.cases[0].mean);
  CHECK(a.hi >= a.cases[0].mean);
}

TEST_CASE("a coefficient approaches one third for large baths") {
  ACoefficientConfig cfg;
  cfg.shapes = {DotShape{10e-9, 5e-9}};
  cfg.ppms = {46900.0};
  cfg.samples = 400;
  cfg.seed = 17;
  const auto r = compute_a(cfg);
  CHECK(std::abs(r.cases[0].mean - 1.0 / 3.0) <= 3.0 * r.cases[0].std_error);
}

TEST_CASE("empty a-coefficient runs are refused") {
  ACoefficientConfig cfg;
  cfg.shapes = {DotShape{3e-9, 3e-9}};
  cfg.ppms = {0.0};
  cfg.samples = 5;
  CHECK_THROWS(compute_a(cfg));
  cfg.ppms = {500.0};
  cfg.samples = 0;
  CHECK_THROWS_AS(compute_a(cfg), InputError);
}

TEST_CASE("Monte Carlo ZZ error stays under the sweet-spot bound") {
  // Strong valley gradient (kappa well above 1), noise on one axis.
  const DotShape shape{20e-9, 10e-9};
  int checked = 0;
  for (const double amplitude : {2.0, 3.0}) {
    for (const double sigma : {0.02e-9, 0.1e-9}) {
      const auto valley = ValleyField::two_component(-1.7, amplitude, 125e-9 * amplitude / 2.0);
      const NoiseStats noise{sigma * sigma, 0.0};
      const auto r = sweetspot_noise_check(shape, make_site({0, 0, 0}, 0), valley, noise, 20000, 5);
      REQUIRE(r.sweet_spot.selected);
      CHECK(r.error.exact <= r.bound + 3.0 * r.error.exact_stderr);
      ++checked;
    }
  }
  CHECK(checked == 4);
}
