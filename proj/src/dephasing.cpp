#include "hfgate/dephasing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hfgate/constants.hpp"
#include "hfgate/errors.hpp"
#include "hfgate/keyed_rng.hpp"
#include "hfgate/parallel.hpp"

namespace hfgate {

namespace {

constexpr double kHbar = constants::hbar;

double sum_squares(std::span<const double> values) {
  double s = 0.0;
  for (const double v : values) s += v * v;
  return s;
}

}  // namespace

void PulseSequence::validate() const {
  if (m < 0) throw InputError("pulse count must be non-negative");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InputError("segment time must be non-negative");
}

OverhauserStats overhauser_stats(std::span<const double> a_energy,
                                 std::span<const double> da_rms_energy) {
  OverhauserStats s;
  s.sum_a_sq = sum_squares(a_energy);
  s.sum_da_sq = sum_squares(da_rms_energy);
  s.t2_star = t2_star(s.sum_a_sq);
  return s;
}

double phase_variance(const OverhauserStats& stats, const PulseSequence& sequence) {
  sequence.validate();
  if (sequence.m == 0) {
    const double t = sequence.total_time();
    return stats.sum_a_sq * t * t / (4.0 * kHbar * kHbar);
  }
  const double tau_over_hbar = sequence.tau / kHbar;
  return 0.5 * (2.0 * sequence.m - 1.0) * stats.sum_da_sq * tau_over_hbar * tau_over_hbar;
}

std::optional<double> t2_star(double sum_a_sq) {
  if (!(sum_a_sq >= 0.0)) throw InputError("sum of squared couplings must be non-negative");
  if (sum_a_sq == 0.0) return std::nullopt;
  return std::sqrt(8.0) * kHbar / std::sqrt(sum_a_sq);
}

std::optional<double> t2_star(std::span<const double> a_energy) {
  return t2_star(sum_squares(a_energy));
}

std::optional<double> t2_bound(double sum_da_sq, int m) {
  if (m < 1) throw InputError("echo bound needs at least one refocusing pulse");
  if (!(sum_da_sq >= 0.0)) throw InputError("sum of squared shifts must be non-negative");
  if (sum_da_sq == 0.0) return std::nullopt;
  const double md = static_cast<double>(m);
  return std::sqrt(16.0 * md * md * kHbar * kHbar / ((2.0 * md - 1.0) * sum_da_sq));
}

double overhauser_z_error(double gate_time, std::optional<double> t2) {
  if (!(gate_time >= 0.0)) throw InputError("gate time must be non-negative");
  if (!t2) return 0.0;
  if (!(*t2 > 0.0)) throw InputError("T2* must be positive");
  const double r = gate_time / *t2;
  return -0.5 * std::expm1(-r * r);
}

std::vector<ZErrorCell> z_error_table(std::span<const double> t2_stars,
                                      std::span<const double> gate_times) {
  std::vector<ZErrorCell> out;
  for (const double t2 : t2_stars) {
    for (const double t : gate_times) out.push_back({t2, t, overhauser_z_error(t, t2)});
  }
  return out;
}

std::optional<double> T2StarDistribution::median() const {
  const std::size_t n = per_sample.size();
  if (n == 0) return std::nullopt;
  // Sample median with the infinite mass ranked last.
  const std::size_t rank = (n - 1) / 2;
  if (rank >= finite_sorted.size()) return std::nullopt;
  if (n % 2 == 1) return finite_sorted[rank];
  if (rank + 1 >= finite_sorted.size()) return std::nullopt;
  return 0.5 * (finite_sorted[rank] + finite_sorted[rank + 1]);
}

double sampled_valley_phase(std::uint64_t seed, std::size_t sample) {
  KeyedRng rng(seed, StreamTag::valley_phase, sample);
  return 2.0 * std::numbers::pi * rng.uniform();
}

std::uint64_t sample_seed(std::uint64_t seed, std::size_t sample) {
  return combine_keys(seed, static_cast<std::uint64_t>(sample));
}

T2StarDistribution t2star_cdf(const T2StarSampling& config) {
  if (config.samples == 0) throw InputError("T2* sampling needs at least one sample");
  config.shape.validate();
  validate_ppm(config.ppm);
  const double scale = site_hyperfine_scale_hz(config.isotope);
  const SiteTable table(config.shape.support(config.cutoff_factor));

  T2StarDistribution dist;
  dist.per_sample.resize(config.samples);
  parallel_for(config.samples, config.workers, [&](std::size_t s) {
    const DotShape shape = config.random_valley_phase
                               ? config.shape.with_theta(sampled_valley_phase(config.seed, s))
                               : config.shape;
    double sum_f_sq = 0.0;
    for_each_occupied(table, config.ppm, sample_seed(config.seed, s),
                      [&](std::uint64_t, const LatticeSite& site) {
                        const double f = scale * envelope_density(shape, site.position);
                        sum_f_sq += f * f;
                      });
    const double h = constants::planck_h;
    dist.per_sample[s] = t2_star(h * h * sum_f_sq);
  });

  for (const auto& v : dist.per_sample) {
    if (v) {
      dist.finite_sorted.push_back(*v);
    } else {
      ++dist.infinite_count;
    }
  }
  std::sort(dist.finite_sorted.begin(), dist.finite_sorted.end());
  const double n = static_cast<double>(config.samples);
  for (std::size_t i = 0; i < dist.finite_sorted.size(); ++i) {
    dist.cumulative.push_back(static_cast<double>(i + 1) / n);
  }
  return dist;
}

}  // namespace hfgate
