#include <doctest.h>

#include <cmath>
#include <vector>

#include "hfgate/constants.hpp"
#include "hfgate/dephasing.hpp"
#include "hfgate/errors.hpp"

using namespace hfgate;

namespace {

constexpr double h = constants::planck_h;

T2StarSampling small_config(double ppm, std::size_t samples) {
  static const auto reg = IsotopeRegistry::builtin();
  T2StarSampling cfg;
  cfg.shape = DotShape{6e-9, 4e-9};
  cfg.isotope = reg.lookup("29Si");
  cfg.ppm = ppm;
  cfg.samples = samples;
  cfg.seed = 2024;
  cfg.cutoff_factor = 4.0;
  return cfg;
}

}  // namespace

TEST_CASE("single-nucleus T2* matches the oracle") {
  const auto t = t2_star(std::vector<double>{h * 1000.0});
  REQUIRE(t);
  CHECK(*t == doctest::Approx(4.5015815807855303e-4).epsilon(1e-13));
  CHECK(!t2_star(0.0));
  CHECK(!t2_star(std::vector<double>{}));
}

TEST_CASE("echo bound over T2* is sqrt(2) for a single Hahn pulse") {
  const double s = h * h * 1e6;
  CHECK(*t2_bound(s, 1) / *t2_star(s) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(!t2_bound(0.0, 1));
  CHECK_THROWS_AS(t2_bound(s, 0), InputError);
}

TEST_CASE("phase variance reaches 2 at T2* and at the echo bound") {
  const std::vector<double> a = {h * 800.0, h * 300.0, h * 50.0};
  const std::vector<double> da = {h * 40.0, h * 10.0};
  const auto stats = overhauser_stats(a, da);
  REQUIRE(stats.t2_star);
  CHECK(phase_variance(stats, {0, *stats.t2_star}) == doctest::Approx(2.0).epsilon(1e-13));
  for (const int m : {1, 2, 5}) {
    const double t2 = *t2_bound(stats.sum_da_sq, m);
    CHECK(phase_variance(stats, {m, t2 / (2.0 * m)}) == doctest::Approx(2.0).epsilon(1e-13));
  }
}

TEST_CASE("Z error is the Gaussian dephasing of the accumulated phase") {
  const auto stats = overhauser_stats(std::vector<double>{h * 2e3}, {});
  for (const double t : {1e-6, 5e-5, 2e-4}) {
    const double var = phase_variance(stats, {0, t});
    CHECK(overhauser_z_error(t, stats.t2_star) ==
          doctest::Approx(0.5 * (1.0 - std::exp(-0.5 * var))).epsilon(1e-13));
  }
  CHECK(overhauser_z_error(1e-6, std::nullopt) == 0.0);
}

TEST_CASE("Z error table against the oracle") {
  const std::vector<double> t2s = {1e-6, 10e-6, 100e-6};
  const std::vector<double> ts = {5e-6, 2.5e-6, 1.25e-6};
  // Closed form; agrees with the mpmath oracle to the digits it prints.
  const double want[3][3] = {{0.49999999999305605, 0.49903477293188614, 0.3951943064244512},
                             {0.11059960846429756, 0.030293468593262107, 0.007751781497295797},
                             {0.0012484388012699381, 0.0003124023640918736, 7.811889680225404e-05}};
  const auto cells = z_error_table(t2s, ts);
  REQUIRE(cells.size() == 9);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const auto& c = cells[3 * i + j];
      CHECK(c.t2_star == t2s[i]);
      CHECK(c.gate_time == ts[j]);
      CHECK(c.probability == doctest::Approx(want[i][j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("sampled T2* is independent of the worker count") {
  auto cfg = small_config(2e4, 24);
  cfg.workers = 1;
  const auto a = t2star_cdf(cfg);
  cfg.workers = 4;
  const auto b = t2star_cdf(cfg);
  CHECK(a.per_sample == b.per_sample);
  CHECK(a.finite_sorted == b.finite_sorted);
}

TEST_CASE("sampled T2* equals a direct sum over the same bath") {
  const auto cfg = small_config(2e4, 3);
  const auto dist = t2star_cdf(cfg);
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    const auto shape = cfg.shape.with_theta(sampled_valley_phase(cfg.seed, s));
    const auto bath =
        sample_occupancy(cfg.shape.support(cfg.cutoff_factor), cfg.isotope, cfg.ppm, sample_seed(cfg.seed, s));
    std::vector<double> a;
    for (const auto& b : bath.sites) a.push_back(site_hyperfine(shape, b.site, cfg.isotope).a_energy);
    const auto direct = t2_star(a);
    REQUIRE(direct);
    REQUIRE(dist.per_sample[s]);
    CHECK(*dist.per_sample[s] == doctest::Approx(*direct).epsilon(1e-12));
  }
}

TEST_CASE("empty baths are infinite and ranked last") {
  const auto dist = t2star_cdf(small_config(1.0, 40));
  CHECK(dist.infinite_count + dist.finite_sorted.size() == 40);
  CHECK(dist.infinite_count > 20);
  CHECK(!dist.median());
}

TEST_CASE("cumulative distribution is a proper empirical CDF") {
  const auto dist = t2star_cdf(small_config(5e3, 60));
  CHECK(std::is_sorted(dist.finite_sorted.begin(), dist.finite_sorted.end()));
  REQUIRE(dist.cumulative.size() == dist.finite_sorted.size());
  for (std::size_t i = 0; i < dist.cumulative.size(); ++i) {
    CHECK(dist.cumulative[i] == doctest::Approx((i + 1) / 60.0));
  }
}

TEST_CASE("median T2* scales as one over the root concentration") {
  const auto hi = t2star_cdf(small_config(4e4, 200));
  const auto lo = t2star_cdf(small_config(4e3, 200));
  REQUIRE(hi.median());
  REQUIRE(lo.median());
  CHECK(*lo.median() / *hi.median() == doctest::Approx(std::sqrt(10.0)).epsilon(0.15));
}

TEST_CASE("sampling input validation") {
  CHECK_THROWS_AS(t2star_cdf(small_config(1e3, 0)), InputError);
  CHECK_THROWS_AS(t2star_cdf(small_config(-1.0, 4)), InputError);
  CHECK_THROWS_AS((PulseSequence{-1, 1e-6}.validate()), InputError);
}
