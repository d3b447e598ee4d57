#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hfgate/dot_model.hpp"
#include "hfgate/isotope.hpp"

namespace hfgate {

// m refocusing pulses separated by 2 tau; m = 0 is free induction over tau.
struct PulseSequence {
  int m = 0;
  double tau = 0.0;  // s

  void validate() const;
  double total_time() const { return m == 0 ? tau : 2.0 * m * tau; }
};

// Bath sums in J^2. t2_star is empty for a bath with no hyperfine coupling.
struct OverhauserStats {
  double sum_a_sq = 0.0;
  double sum_da_sq = 0.0;
  std::optional<double> t2_star;
};

// a_energy: static couplings A_n (J); da_rms_energy: rms shifts <(dA_n)^2>^(1/2)
// between segments (J). Either may be empty.
OverhauserStats overhauser_stats(std::span<const double> a_energy,
                                 std::span<const double> da_rms_energy);

// Accumulated phase variance. m >= 1: (2m - 1)/2 sum <(dA tau / hbar)^2>;
// m = 0: sum A^2 t^2 / (4 hbar^2).
double phase_variance(const OverhauserStats& stats, const PulseSequence& sequence);

// sqrt(8) hbar / sqrt(sum A^2); empty when sum A^2 = 0.
std::optional<double> t2_star(double sum_a_sq);
std::optional<double> t2_star(std::span<const double> a_energy);

// Echo decay bound: t2^2 = 16 m^2 hbar^2 / ((2m - 1) sum <dA^2>); empty when
// the shifts vanish. Requires m >= 1.
std::optional<double> t2_bound(double sum_da_sq, int m);

// Overhauser Z-error after gate_time: (1 - exp(-(T / T2*)^2)) / 2. An empty
// t2_star means no bath.
double overhauser_z_error(double gate_time, std::optional<double> t2_star);

struct ZErrorCell {
  double t2_star;
  double gate_time;
  double probability;
};

// Every (T2*, gate time) pair, T2* outer.
std::vector<ZErrorCell> z_error_table(std::span<const double> t2_stars,
                                      std::span<const double> gate_times);

struct T2StarSampling {
  DotShape shape;
  IsotopeSpec isotope;
  double ppm = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  // Draw theta_v uniformly from [0, 2 pi) per realization; otherwise use shape.theta_v.
  bool random_valley_phase = true;
  double cutoff_factor = 5.0;
  unsigned workers = 1;
};

struct T2StarDistribution {
  std::vector<std::optional<double>> per_sample;  // by sample index
  std::vector<double> finite_sorted;              // ascending
  std::vector<double> cumulative;                 // P(T2* <= finite_sorted[i])
  std::size_t infinite_count = 0;                 // realizations without bath spins

  std::size_t samples() const { return per_sample.size(); }
  // Empty when the median falls in the infinite mass.
  std::optional<double> median() const;
};

// Valley phase used for a realization.
double sampled_valley_phase(std::uint64_t seed, std::size_t sample);
// Occupancy seed for a realization.
std::uint64_t sample_seed(std::uint64_t seed, std::size_t sample);

// Empirical T2* distribution over independent bath realizations of one isotope.
T2StarDistribution t2star_cdf(const T2StarSampling& config);

}  // namespace hfgate
