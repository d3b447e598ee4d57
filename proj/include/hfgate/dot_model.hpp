#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hfgate/isotope.hpp"
#include "hfgate/lattice.hpp"

namespace hfgate {

// Envelope of a dot electron: infinite well of thickness z0, parabolic lateral
// confinement of radius r0 about `center`, and a valley oscillation of phase
// theta_v.
struct DotShape {
  double r0 = 20e-9;  // m
  double z0 = 10e-9;  // m
  double center_x = 0.0;
  double center_y = 0.0;
  double theta_v = 0.0;  // rad

  void validate() const;
  DotShape with_theta(double theta) const;
  DotShape with_center(double x, double y) const;

  // Closed-form normalization 4 / (pi r0^2 z0): lateral Gaussian -> pi r0^2,
  // cos^2(pi z / z0) -> z0 / 2, fast valley factor averaged to 1/2.
  double normalization() const;
  SupportRegion support(double cutoff_factor = 5.0) const {
    return SupportRegion::for_dot(r0, z0, cutoff_factor);
  }
};

// Reduces an angle into [0, 2 pi).
double wrap_phase(double theta);

// Valley phase argument theta(z) = k0 z - theta_v / 2.
double valley_argument(double z, double theta_v);

// Normalized envelope probability density (1/m^3), without bunching:
//   C exp(-((x-x0)^2 + (y-y0)^2) / r0^2) cos^2(pi z / z0) cos^2(k0 z - theta_v / 2)
// for |z| < z0 / 2 and 0 otherwise.
double envelope_density(const DotShape& shape, const Vec3& position);

struct SiteHyperfine {
  LatticeSite site;
  double a_energy = 0.0;  // J
  double a_freq = 0.0;    // Hz
};

// Contact hyperfine for `isotope` sitting at `site`; the bunching factor acts as
// a pure multiplier on the envelope density at that site.
SiteHyperfine site_hyperfine(const DotShape& shape, const LatticeSite& site,
                             const IsotopeSpec& isotope);

// Hz per unit envelope density for the isotope, including eta.
double site_hyperfine_scale_hz(const IsotopeSpec& isotope);

// Minimum e-n-CPhase time with instantaneous switching, 1 / (2 A/h).
double min_gate_time(double a_freq_hz);

struct SurveyCurve {
  DotShape shape;
  std::vector<double> thresholds_hz;
  std::vector<std::uint64_t> counts;  // sites with a_freq >= threshold
  double peak_freq_hz = 0.0;
};

// Counts lattice sites whose hyperfine with `isotope` reaches each threshold.
// Thresholds must be positive and ascending.
SurveyCurve hf_survey(const DotShape& shape, const IsotopeSpec& isotope,
                      std::span<const double> thresholds_hz, double cutoff_factor = 5.0,
                      unsigned workers = 1);

// Log-spaced threshold grid [lo, hi] with `points` entries.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

}  // namespace hfgate
