#include "hfgate/dot_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hfgate/constants.hpp"
#include "hfgate/errors.hpp"
#include "hfgate/parallel.hpp"

namespace hfgate {

void DotShape::validate() const {
  if (!(r0 > 0.0) || !(z0 > 0.0) || !std::isfinite(r0) || !std::isfinite(z0)) {
    throw InputError("dot shape requires finite r0 > 0 and z0 > 0");
  }
  if (!std::isfinite(center_x) || !std::isfinite(center_y) || !std::isfinite(theta_v)) {
    throw InputError("dot center and valley phase must be finite");
  }
}

DotShape DotShape::with_theta(double theta) const {
  DotShape out = *this;
  out.theta_v = wrap_phase(theta);
  return out;
}

DotShape DotShape::with_center(double x, double y) const {
  DotShape out = *this;
  out.center_x = x;
  out.center_y = y;
  return out;
}

double DotShape::normalization() const { return 4.0 / (std::numbers::pi * r0 * r0 * z0); }

double wrap_phase(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t < 0.0) t += two_pi;
  if (t >= two_pi) t = 0.0;
  return t;
}

double valley_argument(double z, double theta_v) {
  return constants::valley_wavenumber_k0 * z - 0.5 * theta_v;
}

double envelope_density(const DotShape& shape, const Vec3& p) {
  if (std::abs(p.z) >= 0.5 * shape.z0) return 0.0;
  const double dx = p.x - shape.center_x;
  const double dy = p.y - shape.center_y;
  const double lateral = std::exp(-(dx * dx + dy * dy) / (shape.r0 * shape.r0));
  const double well = std::cos(std::numbers::pi * p.z / shape.z0);
  const double valley = std::cos(valley_argument(p.z, shape.theta_v));
  return shape.normalization() * lateral * well * well * valley * valley;
}

double site_hyperfine_scale_hz(const IsotopeSpec& isotope) {
  if (!isotope.eta) {
    throw MissingEtaError("isotope " + isotope.symbol +
                          " has no bunching factor (eta); supply one via a registry override");
  }
  return contact_prefactor_hz(isotope) * *isotope.eta;
}

SiteHyperfine site_hyperfine(const DotShape& shape, const LatticeSite& site,
                             const IsotopeSpec& isotope) {
  const double scale = site_hyperfine_scale_hz(isotope);
  SiteHyperfine out;
  out.site = site;
  out.a_freq = scale * envelope_density(shape, site.position);
  out.a_energy = constants::planck_h * out.a_freq;
  return out;
}

double min_gate_time(double a_freq_hz) {
  if (!(a_freq_hz > 0.0)) throw InputError("hyperfine frequency must be positive");
  return 1.0 / (2.0 * a_freq_hz);
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi >= lo) || points == 0) {
    throw InputError("log grid requires 0 < lo <= hi and at least one point");
  }
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = lo;
    return out;
  }
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

SurveyCurve hf_survey(const DotShape& shape, const IsotopeSpec& isotope,
                      std::span<const double> thresholds_hz, double cutoff_factor,
                      unsigned workers) {
  shape.validate();
  if (thresholds_hz.empty()) throw InputError("survey needs at least one threshold");
  for (std::size_t t = 0; t < thresholds_hz.size(); ++t) {
    if (!(thresholds_hz[t] > 0.0)) throw InputError("survey thresholds must be positive");
    if (t > 0 && thresholds_hz[t] < thresholds_hz[t - 1]) {
      throw InputError("survey thresholds must be sorted ascending");
    }
  }
  const double scale = site_hyperfine_scale_hz(isotope);
  const SiteTable table(shape.support(cutoff_factor));
  const double floor_hz = thresholds_hz.front();

  // Each chunk keeps the values above the lowest threshold and its own peak.
  const std::size_t chunks = std::max<std::size_t>(1, 4 * resolve_workers(workers));
  const std::uint64_t per_chunk = (table.size() + chunks - 1) / chunks;
  std::vector<std::vector<double>> kept(chunks);
  std::vector<double> peaks(chunks, 0.0);
  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::uint64_t begin = c * per_chunk;
    table.for_each_range(begin, begin + per_chunk, [&](std::uint64_t, const LatticeSite& s) {
      const double a = scale * envelope_density(shape, s.position);
      peaks[c] = std::max(peaks[c], a);
      if (a >= floor_hz) kept[c].push_back(a);
    });
  });

  std::vector<double> values;
  for (auto& k : kept) values.insert(values.end(), k.begin(), k.end());
  std::sort(values.begin(), values.end());

  SurveyCurve curve;
  curve.shape = shape;
  curve.thresholds_hz.assign(thresholds_hz.begin(), thresholds_hz.end());
  curve.peak_freq_hz = *std::max_element(peaks.begin(), peaks.end());
  for (const double t : thresholds_hz) {
    const auto it = std::lower_bound(values.begin(), values.end(), t);
    curve.counts.push_back(static_cast<std::uint64_t>(std::distance(it, values.end())));
  }
  return curve;
}

}  // namespace hfgate
