#include "hfgate/zz_budget.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "hfgate/constants.hpp"
#include "hfgate/csv.hpp"
#include "hfgate/dephasing.hpp"
#include "hfgate/errors.hpp"
#include "hfgate/keyed_rng.hpp"
#include "hfgate/parallel.hpp"

namespace hfgate {

namespace {

constexpr double kHalfPiSq = std::numbers::pi * std::numbers::pi / 4.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

bool finite(double v) { return std::isfinite(v); }

double checked_tan(double theta) {
  const double c = std::cos(theta);
  if (std::abs(c) < kDegenerateCos) {
    throw DegenerateSiteError("valley factor vanishes at this site (|cos theta| < 1e-8)");
  }
  return std::sin(theta) / c;
}

// Coefficients from the site offset (x, y) relative to the dot center.
PerturbationCoeffs coeffs_from(double x, double y, double z, double r0,
                               const ValleyField& valley, double cx, double cy) {
  const double theta = valley_argument(z, valley.value(cx, cy));
  const double t = checked_tan(theta);
  const auto g = valley.gradient(cx, cy);
  const auto h = valley.hessian(cx, cy);
  const double r2 = r0 * r0;
  const double r4 = r2 * r2;
  PerturbationCoeffs c;
  c.tan_theta = t;
  c.c0 = 2.0 * x / r2 + t * g.x;
  c.c1 = 2.0 * y / r2 + t * g.y;
  c.c00 = 2.0 * x * x / r4 - 1.0 / r2 + 0.5 * t * (h.xx + 4.0 * x * g.x / r2) +
          0.25 * (t * t - 1.0) * g.x * g.x;
  c.c11 = 2.0 * y * y / r4 - 1.0 / r2 + 0.5 * t * (h.yy + 4.0 * y * g.y / r2) +
          0.25 * (t * t - 1.0) * g.y * g.y;
  return c;
}

void check_in_support(const DotShape& shape, const LatticeSite& site) {
  if (!(std::abs(site.position.z) < 0.5 * shape.z0)) {
    throw InputError("site lies outside the well (|z| >= z0 / 2)");
  }
}

}  // namespace

ValleyField ValleyField::two_component(double base, double amplitude, double wavelength) {
  if (!(wavelength > 0.0)) throw InputError("valley wavelength must be positive");
  const double k = 2.0 * std::numbers::pi / wavelength;
  return {base, 0.0, 0.0, {{amplitude, k, 0.0, 0.0}, {amplitude, 0.0, k, std::numbers::pi / 3.0}}};
}

void ValleyField::validate() const {
  bool ok = finite(base) && finite(slope_x) && finite(slope_y);
  for (const auto& c : components) {
    ok = ok && finite(c.amplitude) && finite(c.kx) && finite(c.ky) && finite(c.phase);
  }
  if (!ok) throw InputError("valley field parameters must be finite");
}

double ValleyField::value(double x0, double y0) const {
  double v = base + slope_x * x0 + slope_y * y0;
  for (const auto& c : components) v += c.amplitude * std::sin(c.kx * x0 + c.ky * y0 + c.phase);
  return v;
}

ValleyField::Gradient ValleyField::gradient(double x0, double y0) const {
  Gradient g{slope_x, slope_y};
  for (const auto& c : components) {
    const double d = c.amplitude * std::cos(c.kx * x0 + c.ky * y0 + c.phase);
    g.x += d * c.kx;
    g.y += d * c.ky;
  }
  return g;
}

ValleyField::Hessian ValleyField::hessian(double x0, double y0) const {
  Hessian h{0.0, 0.0, 0.0};
  for (const auto& c : components) {
    const double s = -c.amplitude * std::sin(c.kx * x0 + c.ky * y0 + c.phase);
    h.xx += s * c.kx * c.kx;
    h.xy += s * c.kx * c.ky;
    h.yy += s * c.ky * c.ky;
  }
  return h;
}

double ValleyField::mean_square_gradient_x() const {
  double v = slope_x * slope_x;
  for (const auto& c : components) v += 0.5 * c.amplitude * c.amplitude * c.kx * c.kx;
  return v;
}

double ValleyField::mean_square_gradient_y() const {
  double v = slope_y * slope_y;
  for (const auto& c : components) v += 0.5 * c.amplitude * c.amplitude * c.ky * c.ky;
  return v;
}

void NoiseStats::validate() const {
  if (!(var_xi0 >= 0.0) || !(var_xi1 >= 0.0) || !finite(var_xi0) || !finite(var_xi1)) {
    throw InputError("noise variances must be finite and non-negative");
  }
}

PerturbationCoeffs perturbation_coeffs(const DotShape& shape, const LatticeSite& site,
                                       const ValleyField& valley) {
  shape.validate();
  check_in_support(shape, site);
  return coeffs_from(site.position.x - shape.center_x, site.position.y - shape.center_y,
                     site.position.z, shape.r0, valley, shape.center_x, shape.center_y);
}

SweetSpot find_sweet_spot(const DotShape& shape, const LatticeSite& site,
                          const ValleyField& valley, const SweetSpotOptions& options) {
  shape.validate();
  valley.validate();
  check_in_support(shape, site);
  if (!(options.damping > 0.0 && options.damping <= 1.0)) {
    throw InputError("sweet-spot damping must lie in (0, 1]");
  }
  const double r2 = shape.r0 * shape.r0;
  const double xs = site.position.x;
  const double ys = site.position.y;
  const double z = site.position.z;
  // Iterate on the center offset from the site to keep the residual well scaled.
  double u = 0.0;
  double w = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const double theta = valley_argument(z, valley.value(xs + u, ys + w));
    const double t = checked_tan(theta);
    const auto g = valley.gradient(xs + u, ys + w);
    const double c0 = -2.0 * u / r2 + t * g.x;
    const double c1 = -2.0 * w / r2 + t * g.y;
    const double floor0 = 8.0 * kEps * (std::abs(2.0 * u / r2) + std::abs(t * g.x));
    const double floor1 = 8.0 * kEps * (std::abs(2.0 * w / r2) + std::abs(t * g.y));
    if (std::abs(c0) <= std::max(options.tolerance, floor0) &&
        std::abs(c1) <= std::max(options.tolerance, floor1)) {
      SweetSpot spot;
      spot.x0 = xs + u;
      spot.y0 = ys + w;
      spot.coeffs = coeffs_from(-u, -w, z, shape.r0, valley, spot.x0, spot.y0);
      spot.iterations = it;
      spot.residual = std::max(std::abs(spot.coeffs.c0), std::abs(spot.coeffs.c1));
      spot.selected = spot.coeffs.tan_theta * spot.coeffs.tan_theta <= 1.0;
      return spot;
    }
    const double lambda = options.damping;
    u = (1.0 - lambda) * u + lambda * 0.5 * r2 * t * g.x;
    w = (1.0 - lambda) * w + lambda * 0.5 * r2 * t * g.y;
  }
  std::ostringstream msg;
  msg << "sweet-spot iteration did not converge in " << options.max_iterations
      << " iterations; the qubit is rejected";
  throw ConvergenceError(msg.str());
}

ZZErrorEstimate zz_error_exact(std::span<const double> shifts) {
  if (shifts.empty()) throw InputError("ZZ error needs at least one sample");
  const double n = static_cast<double>(shifts.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  double sum_d2 = 0.0;
  for (const double d : shifts) {
    const double s = std::sin(0.5 * std::numbers::pi * d);
    sum += s * s;
    sum_sq += s * s * s * s;
    sum_d2 += d * d;
  }
  ZZErrorEstimate e;
  e.exact = sum / n;
  e.lowest_order = kHalfPiSq * sum_d2 / n;
  if (shifts.size() > 1) {
    const double var = std::max(0.0, (sum_sq - n * e.exact * e.exact) / (n - 1.0));
    e.exact_stderr = std::sqrt(var / n);
  }
  return e;
}

double gaussian_quartic(double var) {
  if (!(var >= 0.0)) throw InputError("variance must be non-negative");
  return 3.0 * var * var;
}

ValleyNoise ValleyNoise::from(const ValleyField& valley, const NoiseStats& noise) {
  noise.validate();
  return {valley.mean_square_gradient_x() * noise.var_xi0,
          valley.mean_square_gradient_y() * noise.var_xi1};
}

double zz_bound_sweetspot(const ValleyNoise& s) {
  return 3.0 * kHalfPiSq * (s.s0 * s.s0 + s.s1 * s.s1);
}

double cpmg_prefactor(int m) {
  if (m < 1) throw InputError("pulse count must be at least 1");
  const double md = static_cast<double>(m);
  return (2.0 * md - 1.0) / (2.0 * md * md);
}

double t2ratio_bound(const ValleyNoise& s, int m, double a) {
  return a * cpmg_prefactor(m) * s.total();
}

HeadlineBound headline_zz_bound(double ratio_bound, double a, int m) {
  if (!(ratio_bound >= 0.0) || !(a > 0.0)) {
    throw InputError("headline bound needs a non-negative ratio and positive a");
  }
  HeadlineBound h;
  h.ratio_bound = ratio_bound;
  h.a = a;
  h.m = m;
  h.s_total = ratio_bound / (a * cpmg_prefactor(m));
  h.single_axis = zz_bound_sweetspot({h.s_total, 0.0});
  h.split_axes = zz_bound_sweetspot({0.5 * h.s_total, 0.5 * h.s_total});
  return h;
}

std::vector<DotShape> ACoefficientConfig::default_shapes() {
  std::vector<DotShape> shapes;
  for (const double r0 : {10e-9, 20e-9}) {
    for (const double z0 : {5e-9, 10e-9}) {
      DotShape s;
      s.r0 = r0;
      s.z0 = z0;
      shapes.push_back(s);
    }
  }
  return shapes;
}

namespace {

struct RatioSums {
  double num = 0.0;
  double den = 0.0;
};

void accumulate_ratio(const DotShape& shape, const Vec3& p, RatioSums& sums) {
  if (std::abs(p.z) >= 0.5 * shape.z0) return;
  const double dx = p.x - shape.center_x;
  const double dy = p.y - shape.center_y;
  const double well = std::cos(std::numbers::pi * p.z / shape.z0);
  const double e = std::exp(-(dx * dx + dy * dy) / (shape.r0 * shape.r0)) * well * well;
  const double theta = valley_argument(p.z, shape.theta_v);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double e2c2 = e * e * c * c;
  sums.num += e2c2 * s * s;
  sums.den += e2c2 * c * c;
}

}  // namespace

double a_ratio(const DotShape& shape, std::span<const LatticeSite> sites) {
  RatioSums sums;
  for (const auto& s : sites) accumulate_ratio(shape, s.position, sums);
  if (sums.den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sums.num / sums.den;
}

ACoefficientResult compute_a(const ACoefficientConfig& config) {
  if (config.samples == 0) throw InputError("a-coefficient needs at least one sample");
  if (config.shapes.empty() || config.ppms.empty()) {
    throw InputError("a-coefficient needs at least one shape and one occupancy");
  }
  ACoefficientResult result;
  result.lo = std::numeric_limits<double>::infinity();
  result.hi = -std::numeric_limits<double>::infinity();
  std::uint64_t case_index = 0;
  for (const auto& base_shape : config.shapes) {
    base_shape.validate();
    const SiteTable table(base_shape.support(config.cutoff_factor));
    for (const double ppm : config.ppms) {
      validate_ppm(ppm);
      const std::uint64_t case_seed = combine_keys(config.seed, case_index++);
      std::vector<double> ratios(config.samples, std::numeric_limits<double>::quiet_NaN());
      parallel_for(config.samples, config.workers, [&](std::size_t s) {
        const DotShape shape = base_shape.with_theta(sampled_valley_phase(case_seed, s));
        RatioSums sums;
        for_each_occupied(table, ppm, sample_seed(case_seed, s),
                          [&](std::uint64_t, const LatticeSite& site) {
                            accumulate_ratio(shape, site.position, sums);
                          });
        if (sums.den > 0.0) ratios[s] = sums.num / sums.den;
      });

      ACoefficientCase c;
      c.shape = base_shape;
      c.ppm = ppm;
      double sum = 0.0;
      double sum_sq = 0.0;
      for (const double r : ratios) {
        if (std::isnan(r)) {
          ++c.empty;
          continue;
        }
        ++c.used;
        sum += r;
        sum_sq += r * r;
      }
      if (c.used == 0) {
        throw InputError("every a-coefficient realization was empty; raise the occupancy");
      }
      const double n = static_cast<double>(c.used);
      c.mean = sum / n;
      if (c.used > 1) {
        const double var = std::max(0.0, (sum_sq - n * c.mean * c.mean) / (n - 1.0));
        c.std_error = std::sqrt(var / n);
      }
      result.lo = std::min(result.lo, c.mean - c.std_error);
      result.hi = std::max(result.hi, c.mean + c.std_error);
      result.cases.push_back(c);
    }
  }
  return result;
}

std::vector<Fig5Point> fig5_curves(const Fig5Config& config) {
  if (!(config.kappa >= 1.0)) throw InputError("kappa must be at least 1");
  if (!(config.a > 0.0)) throw InputError("a must be positive");
  for (const double s : config.s_grid) {
    if (!(s > 0.0)) throw InputError("S grid values must be positive");
  }
  const double pre = cpmg_prefactor(config.m) * config.a;
  std::vector<Fig5Point> out;
  for (const double s : config.s_grid) {
    out.push_back({"sweetspot_pessimistic", pre * s, 3.0 * kHalfPiSq * s * s});
  }
  for (const double s : config.s_grid) {
    // Valley terms dropped: c00 = -1/r0^2 and var / r0^2 = S / kappa.
    const double v = s / config.kappa;
    out.push_back({"sweetspot_optimistic", pre * s, 3.0 * kHalfPiSq * v * v});
  }
  for (const double c_r0 : config.first_order_c_r0) {
    const std::string id = "off_sweetspot_c_r0=" + format_double(c_r0);
    for (const double s : config.s_grid) {
      out.push_back({id, pre * s, kHalfPiSq * c_r0 * c_r0 * s / config.kappa});
    }
  }
  return out;
}

NoiseCheckResult sweetspot_noise_check(const DotShape& shape, const LatticeSite& site,
                                       const ValleyField& valley, const NoiseStats& noise,
                                       std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw InputError("noise check needs at least one sample");
  noise.validate();
  NoiseCheckResult result;
  result.sweet_spot = find_sweet_spot(shape, site, valley);
  result.samples = samples;
  const double cx = result.sweet_spot.x0;
  const double cy = result.sweet_spot.y0;
  const double x = site.position.x - cx;
  const double y = site.position.y - cy;
  const double z = site.position.z;
  const double r2 = shape.r0 * shape.r0;
  const double cos0 = std::cos(valley_argument(z, valley.value(cx, cy)));
  const double sd0 = std::sqrt(noise.var_xi0);
  const double sd1 = std::sqrt(noise.var_xi1);

  std::vector<double> shifts(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    KeyedRng rng(seed, StreamTag::noise, s);
    std::normal_distribution<double> gauss;
    const double dx = sd0 * gauss(rng);
    const double dy = sd1 * gauss(rng);
    const double cos1 = std::cos(valley_argument(z, valley.value(cx + dx, cy + dy)));
    const double lateral =
        std::exp(-((x - dx) * (x - dx) + (y - dy) * (y - dy) - x * x - y * y) / r2);
    const double ratio = cos1 / cos0;
    shifts[s] = lateral * ratio * ratio - 1.0;
  }
  result.error = zz_error_exact(shifts);
  result.bound = zz_bound_sweetspot(ValleyNoise::from(valley, noise));
  return result;
}

}  // namespace hfgate
