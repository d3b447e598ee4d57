#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hfgate/dot_model.hpp"
#include "hfgate/isotope.hpp"
#include "hfgate/lattice.hpp"

namespace hfgate {

struct ValleyComponent {
  double amplitude = 0.0;  // rad
  double kx = 0.0;         // 1/m
  double ky = 0.0;         // 1/m
  double phase = 0.0;      // rad
};

// Valley phase as a function of the dot center:
//   base + slope_x x0 + slope_y y0 + sum_k amplitude_k sin(kx_k x0 + ky_k y0 + phase_k).
struct ValleyField {
  double base = 0.0;
  double slope_x = 0.0;  // rad/m
  double slope_y = 0.0;  // rad/m
  std::vector<ValleyComponent> components;

  struct Gradient {
    double x, y;
  };
  struct Hessian {
    double xx, xy, yy;
  };

  static ValleyField constant(double theta) { return {theta, 0.0, 0.0, {}}; }
  static ValleyField linear(double theta0, double slope_x, double slope_y) {
    return {theta0, slope_x, slope_y, {}};
  }
  // One sinusoid along x and one along y, each with the given amplitude and
  // wavelength; the mean-square gradient per axis is (amplitude k)^2 / 2.
  static ValleyField two_component(double base, double amplitude, double wavelength);

  void validate() const;
  double value(double x0, double y0) const;
  Gradient gradient(double x0, double y0) const;
  Hessian hessian(double x0, double y0) const;
  // Position averages of the squared gradient; wavevectors must be distinct
  // for the cross terms to average out.
  double mean_square_gradient_x() const;
  double mean_square_gradient_y() const;
};

// Variances of the lateral position noise per axis (m^2).
struct NoiseStats {
  double var_xi0 = 0.0;
  double var_xi1 = 0.0;

  void validate() const;
};

// Expansion dA/A = sum_i c_i d_i + sum_i c_ii d_i^2 in the dot-center
// displacement d, with the valley phase following the center.
struct PerturbationCoeffs {
  double c0 = 0.0;   // 1/m
  double c1 = 0.0;   // 1/m
  double c00 = 0.0;  // 1/m^2
  double c11 = 0.0;  // 1/m^2
  double tan_theta = 0.0;
};

inline constexpr double kDegenerateCos = 1e-8;

// Coefficients for `site` with the dot centered at (shape.center_x,
// shape.center_y); theta_v is taken from `valley` at that center. Throws
// DegenerateSiteError when |cos theta(z)| < 1e-8.
PerturbationCoeffs perturbation_coeffs(const DotShape& shape, const LatticeSite& site,
                                       const ValleyField& valley);

struct SweetSpotOptions {
  double damping = 0.5;          // weight of the new iterate
  double tolerance = 1e-8;       // 1/m
  int max_iterations = 100000;
};

struct SweetSpot {
  double x0 = 0.0;
  double y0 = 0.0;
  PerturbationCoeffs coeffs;
  int iterations = 0;
  double residual = 0.0;  // max(|c0|, |c1|)
  bool selected = false;  // tan^2 theta(z) <= 1
};

// Damped fixed point of x0 = x + r0^2 tan(theta) dtheta_v/dx0 / 2 and its y
// analogue, starting above the site. Convergence is declared when |c_i| is
// below the tolerance or its floating-point rounding floor. Throws
// ConvergenceError after max_iterations.
SweetSpot find_sweet_spot(const DotShape& shape, const LatticeSite& site,
                          const ValleyField& valley, const SweetSpotOptions& options = {});

struct ZZErrorEstimate {
  double exact = 0.0;          // mean sin^2(pi d / 2)
  double exact_stderr = 0.0;
  double lowest_order = 0.0;   // (pi / 2)^2 <d^2>
};

// d are samples of dA/A.
ZZErrorEstimate zz_error_exact(std::span<const double> relative_shifts);

// <x^4> of a zero-mean Gaussian with variance var.
double gaussian_quartic(double var);

// S_i = <(dtheta_v / dxi_i)^2> <dxi_i^2>.
struct ValleyNoise {
  double s0 = 0.0;
  double s1 = 0.0;

  static ValleyNoise from(const ValleyField& valley, const NoiseStats& noise);
  double total() const { return s0 + s1; }
};

// Worst case at a sweet spot: 3 (pi/2)^2 (S_0^2 + S_1^2).
double zz_bound_sweetspot(const ValleyNoise& s);
// Lower bound on <(T2*/T2^(m))^2>: a (2m - 1) / (2 m^2) (S_0 + S_1).
double t2ratio_bound(const ValleyNoise& s, int m, double a);
double cpmg_prefactor(int m);  // (2m - 1) / (2 m^2)

struct HeadlineBound {
  double ratio_bound = 0.0;
  double a = 0.0;
  int m = 1;
  double s_total = 0.0;
  double single_axis = 0.0;  // all of S on one axis
  double split_axes = 0.0;   // S shared equally between the axes
};

// ZZ bound implied by a measured <(T2*/T2^(m))^2> at a sweet spot.
HeadlineBound headline_zz_bound(double ratio_bound, double a, int m);

struct ACoefficientCase {
  DotShape shape;
  double ppm = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t used = 0;
  std::size_t empty = 0;  // realizations without bath spins, skipped
};

struct ACoefficientResult {
  std::vector<ACoefficientCase> cases;
  double lo = 0.0;  // min over cases of mean - stderr
  double hi = 0.0;  // max over cases of mean + stderr

  double center() const { return 0.5 * (lo + hi); }
  double half_width() const { return 0.5 * (hi - lo); }
};

struct ACoefficientConfig {
  std::vector<DotShape> shapes;
  std::vector<double> ppms = {500.0, 1000.0};
  std::size_t samples = 400;
  std::uint64_t seed = 0;
  double cutoff_factor = 5.0;
  unsigned workers = 1;

  static std::vector<DotShape> default_shapes();
};

// Per-realization ratio sum tan^2(theta_n) A_n^2 / sum A_n^2 for the occupied
// sites, with theta_v drawn uniformly per realization. Evaluated through the
// envelope without its valley factor, as E^2 sin^2 cos^2 / E^2 cos^4, so no
// tangent is formed. The ratio does not depend on the isotope.
ACoefficientResult compute_a(const ACoefficientConfig& config);

// Ratio for explicit site positions and valley phase; empty sites or zero
// total coupling yield nan.
double a_ratio(const DotShape& shape, std::span<const LatticeSite> sites);

struct Fig5Config {
  std::vector<double> s_grid;  // S, dimensionless
  double a = 0.34;
  int m = 1;
  // Ratio of mean-square valley gradient to lateral curvature, <theta_v'^2> r0^2.
  double kappa = 4.0;
  std::vector<double> first_order_c_r0 = {1e-1, 1e-2, 1e-3};
};

struct Fig5Point {
  std::string curve;
  double x = 0.0;  // ratio bound
  double y = 0.0;  // ZZ bound
};

// Pessimistic and optimistic sweet-spot curves and off-sweet-spot curves, all
// with the noise on one axis.
std::vector<Fig5Point> fig5_curves(const Fig5Config& config);

struct NoiseCheckResult {
  SweetSpot sweet_spot;
  ZZErrorEstimate error;
  double bound = 0.0;
  std::size_t samples = 0;
};

// Monte Carlo of the ZZ error at a sweet spot: Gaussian center displacements,
// the valley phase re-evaluated at each displaced center, and the exact
// envelope ratio A'/A - 1 per draw.
NoiseCheckResult sweetspot_noise_check(const DotShape& shape, const LatticeSite& site,
                                       const ValleyField& valley, const NoiseStats& noise,
                                       std::size_t samples, std::uint64_t seed);

}  // namespace hfgate
