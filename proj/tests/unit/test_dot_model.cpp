#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hfgate/constants.hpp"
#include "hfgate/dot_model.hpp"
#include "hfgate/errors.hpp"

using namespace hfgate;

namespace {

const IsotopeRegistry& registry() {
  static const auto reg = IsotopeRegistry::builtin();
  return reg;
}

const LatticeSite origin = make_site({0, 0, 0}, 0);

}  // namespace

TEST_CASE("peak site hyperfine matches the mpmath oracle") {
  const DotShape shape;  // r0 = 20 nm, z0 = 10 nm
  const auto sn = site_hyperfine(shape, origin, registry().lookup("119Sn"));
  const auto si = site_hyperfine(shape, origin, registry().lookup("29Si"));
  CHECK(sn.a_freq == doctest::Approx(78943.74889651753).epsilon(1e-12));
  CHECK(si.a_freq == doctest::Approx(7461.776311961219).epsilon(1e-12));
  CHECK(sn.a_energy == doctest::Approx(constants::planck_h * sn.a_freq).epsilon(1e-14));
}

TEST_CASE("Sn to Si enhancement at any site is the eta times gyro ratio") {
  const DotShape shape = DotShape{}.with_theta(0.7);
  const double expected = 996.4 / 178.0 * 1.89;
  for (int b = 0; b < 8; ++b) {
    const auto site = make_site({3, -2, 1}, b);
    const auto sn = site_hyperfine(shape, site, registry().lookup("119Sn"));
    const auto si = site_hyperfine(shape, site, registry().lookup("29Si"));
    if (si.a_freq == 0.0) continue;
    CHECK(sn.a_freq / si.a_freq == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("valley phase pi empties the z = 0 plane") {
  const auto shape = DotShape{}.with_theta(std::numbers::pi);
  CHECK(envelope_density(shape, origin.position) == doctest::Approx(0.0).scale(1e10));
}

TEST_CASE("density vanishes outside the well") {
  const DotShape shape;
  CHECK(envelope_density(shape, {0.0, 0.0, 0.5 * shape.z0}) == 0.0);
  CHECK(envelope_density(shape, {0.0, 0.0, -0.6 * shape.z0}) == 0.0);
}

TEST_CASE("envelope integrates to one") {
  // Lateral Gaussian integrates to pi r0^2 exactly; integrate z numerically.
  for (const double theta : {0.0, 1.3, std::numbers::pi}) {
    const auto shape = DotShape{10e-9, 5e-9}.with_theta(theta);
    const int n = 200000;
    const double dz = shape.z0 / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = -0.5 * shape.z0 + (i + 0.5) * dz;
      sum += envelope_density(shape, {0.0, 0.0, z}) * dz;
    }
    const double total = sum * std::numbers::pi * shape.r0 * shape.r0;
    // The fast valley factor averages to 1/2 up to O(1 / (k0 z0)).
    CHECK(total == doctest::Approx(1.0).epsilon(0.03));
  }
}

TEST_CASE("lateral profile is Gaussian about the center") {
  const auto shape = DotShape{}.with_center(3e-9, -2e-9);
  const double at_center = envelope_density(shape, {3e-9, -2e-9, 0.0});
  const double off = envelope_density(shape, {3e-9 + shape.r0, -2e-9, 0.0});
  CHECK(off / at_center == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("missing eta is reported") {
  CHECK_THROWS_AS(site_hyperfine(DotShape{}, origin, registry().lookup("13C")), MissingEtaError);
}

TEST_CASE("gate time pairs") {
  CHECK(min_gate_time(100e3) == 5e-6);
  CHECK(min_gate_time(200e3) == 2.5e-6);
  CHECK(min_gate_time(400e3) == 1.25e-6);
  CHECK_THROWS_AS(min_gate_time(0.0), InputError);
}

TEST_CASE("shape validation") {
  CHECK_THROWS_AS((DotShape{-1e-9, 5e-9}.validate()), InputError);
  CHECK_THROWS_AS((DotShape{1e-9, 0.0}.validate()), InputError);
  CHECK(wrap_phase(-0.5) == doctest::Approx(2 * std::numbers::pi - 0.5));
  CHECK(DotShape{}.with_theta(3 * std::numbers::pi).theta_v == doctest::Approx(std::numbers::pi));
}

TEST_CASE("log grid endpoints are exact") {
  const auto g = log_grid(1e3, 1e6, 31);
  REQUIRE(g.size() == 31);
  CHECK(g.front() == 1e3);
  CHECK(g.back() == 1e6);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(std::pow(10.0, 0.1)));
}

TEST_CASE("survey agrees with brute force on a small dot") {
  const DotShape shape = DotShape{2e-9, 2e-9}.with_theta(0.4);
  const auto& sn = registry().lookup("119Sn");
  const auto thresholds = log_grid(1e4, 1e7, 13);
  const auto curve = hf_survey(shape, sn, thresholds, 3.0, 1);
  const auto sites = enumerate_sites(shape.support(3.0));
  double peak = 0.0;
  std::vector<std::uint64_t> want(thresholds.size(), 0);
  for (const auto& s : sites) {
    const double a = site_hyperfine(shape, s, sn).a_freq;
    peak = std::max(peak, a);
    for (std::size_t t = 0; t < thresholds.size(); ++t) want[t] += a >= thresholds[t];
  }
  CHECK(curve.counts == want);
  CHECK(curve.peak_freq_hz == peak);
  CHECK(std::is_sorted(curve.counts.rbegin(), curve.counts.rend()));
  const auto parallel = hf_survey(shape, sn, thresholds, 3.0, 4);
  CHECK(parallel.counts == curve.counts);
  CHECK(parallel.peak_freq_hz == curve.peak_freq_hz);
}

TEST_CASE("survey thresholds must ascend") {
  const std::vector<double> bad = {1e4, 1e3};
  CHECK_THROWS_AS(hf_survey(DotShape{2e-9, 2e-9}, registry().lookup("119Sn"), bad), InputError);
}
