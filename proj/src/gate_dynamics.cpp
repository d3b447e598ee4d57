#include "hfgate/gate_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hfgate/dot_model.hpp"
#include "hfgate/errors.hpp"
#include "hfgate/parallel.hpp"

namespace hfgate {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMinStepsPerCycle = 50.0;
using cd = std::complex<double>;

// Returns k such that x - 2 pi k lies in (-pi, pi].
long wrap_count(double x) {
  long k = static_cast<long>(std::floor((x + kPi) / kTwoPi));
  if (x - kTwoPi * static_cast<double>(k) <= -kPi) --k;
  if (x - kTwoPi * static_cast<double>(k) > kPi) ++k;
  return k;
}

double wrap_pm_pi(double x) { return x - kTwoPi * static_cast<double>(wrap_count(x)); }

// Diagonal entries and flip-flop coupling of H / h.
struct BlockForm {
  double d0, d1, d2, d3, coupling;
};

BlockForm block_form(const SpinPairParams& p, double a_scale) {
  const double a = a_scale * p.a_freq;
  const double ze = 0.5 * p.b_field * p.electron_gyro;
  const double zn = 0.5 * p.b_field * p.nuclear_gyro;
  return {0.25 * a + ze - zn, -0.25 * a + ze + zn, -0.25 * a - ze - zn, 0.25 * a - ze + zn,
          0.5 * a};
}

Matrix4c propagate(const SpinPairParams& params, const RampProfile& ramp, std::size_t steps,
                   bool reversed) {
  params.validate();
  ramp.validate();
  if (steps == 0) throw InputError("step count must be at least 1");
  const double total = ramp.total_time();
  Matrix4c u = Matrix4c::Identity();
  if (total == 0.0) return u;
  const double dt = total / static_cast<double>(steps);
  const double f_max = params.max_frequency_hz();
  if (f_max > 0.0 && dt > 1.0 / (kMinStepsPerCycle * f_max)) {
    std::ostringstream msg;
    msg << "step of " << dt << " s does not resolve " << f_max << " Hz; use at least "
        << required_steps(params, total, kMinStepsPerCycle) << " steps";
    throw ResolutionError(msg.str());
  }
  const double sign = reversed ? -1.0 : 1.0;
  double cached_scale = -1.0;
  Matrix4c step;
  for (std::size_t n = 0; n < steps; ++n) {
    const double mid = (static_cast<double>(n) + 0.5) * dt;
    const double scale = ramp.scale_at(reversed ? total - mid : mid);
    // The step exponential is reused while the coupling is unchanged.
    if (scale != cached_scale) {
      step = step_unitary(params, scale, sign * dt);
      cached_scale = scale;
    }
    u = step * u;
  }
  return u;
}

}  // namespace

SpinPairParams SpinPairParams::for_isotope(double a_freq, double b_field,
                                           const IsotopeSpec& isotope) {
  SpinPairParams p{a_freq, b_field, constants::electron_gyro, isotope.nuclear_gyro()};
  p.validate();
  return p;
}

void SpinPairParams::validate() const {
  if (!(a_freq >= 0.0) || !(b_field >= 0.0) || !std::isfinite(a_freq) ||
      !std::isfinite(b_field)) {
    throw InputError("hyperfine and field must be finite and non-negative");
  }
  if (!(electron_gyro > 0.0) || !(nuclear_gyro >= 0.0) || !std::isfinite(electron_gyro) ||
      !std::isfinite(nuclear_gyro)) {
    throw InputError("gyromagnetic ratios must be finite magnitudes");
  }
}

double SpinPairParams::detuning_hz() const { return b_field * (electron_gyro + nuclear_gyro); }

double SpinPairParams::rabi_hz() const { return std::hypot(a_freq, detuning_hz()); }

double SpinPairParams::larmor_hz() const { return electron_gyro * b_field; }

double SpinPairParams::max_frequency_hz() const { return std::max(rabi_hz(), larmor_hz()); }

void RampProfile::validate() const {
  if (!(ramp_time >= 0.0) || !(hold_time >= 0.0) || !std::isfinite(ramp_time) ||
      !std::isfinite(hold_time)) {
    throw InputError("ramp and hold times must be finite and non-negative");
  }
  if (shape == RampShape::instantaneous && ramp_time != 0.0) {
    throw InputError("instantaneous switching takes ramp_time = 0");
  }
}

double RampProfile::scale_at(double t) const {
  if (t < 0.0 || t > total_time()) return 0.0;
  if (shape == RampShape::instantaneous || ramp_time == 0.0) return 1.0;
  if (t < ramp_time) return 0.5 * (1.0 - std::cos(kPi * t / ramp_time));
  const double off_start = ramp_time + hold_time;
  if (t <= off_start) return 1.0;
  return 0.5 * (1.0 + std::cos(kPi * (t - off_start) / ramp_time));
}

Matrix4c hamiltonian_hz(const SpinPairParams& params, double a_scale) {
  const BlockForm f = block_form(params, a_scale);
  Matrix4c h = Matrix4c::Zero();
  h(0, 0) = f.d0;
  h(1, 1) = f.d1;
  h(2, 2) = f.d2;
  h(3, 3) = f.d3;
  h(basis::up_down, basis::down_up) = f.coupling;
  h(basis::down_up, basis::up_down) = f.coupling;
  return h;
}

Matrix4c hamiltonian(const SpinPairParams& params, double a_scale) {
  return constants::planck_h * hamiltonian_hz(params, a_scale);
}

Matrix4c expm_hermitian(const Matrix4c& h_hz, double t) {
  const Eigen::SelfAdjointEigenSolver<Matrix4c> eig(h_hz);
  Eigen::Vector4cd phases;
  for (int k = 0; k < 4; ++k) phases(k) = std::polar(1.0, -kTwoPi * eig.eigenvalues()(k) * t);
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

Matrix4c step_unitary(const SpinPairParams& params, double a_scale, double dt) {
  const BlockForm f = block_form(params, a_scale);
  Matrix4c u = Matrix4c::Zero();
  u(0, 0) = std::polar(1.0, -kTwoPi * f.d0 * dt);
  u(3, 3) = std::polar(1.0, -kTwoPi * f.d3 * dt);
  // Flip-flop block m + h sigma_z + c sigma_x with splitting w = |(h, c)|.
  const double m = 0.5 * (f.d1 + f.d2);
  const double h = 0.5 * (f.d1 - f.d2);
  const double c = f.coupling;
  const double w = std::hypot(h, c);
  const double x = kTwoPi * w * dt;
  const double cos_x = std::cos(x);
  const double sin_over_w = w > 0.0 ? std::sin(x) / w : kTwoPi * dt;
  const cd global = std::polar(1.0, -kTwoPi * m * dt);
  const cd minus_i(0.0, -1.0);
  u(1, 1) = global * (cos_x + minus_i * sin_over_w * h);
  u(2, 2) = global * (cos_x - minus_i * sin_over_w * h);
  u(1, 2) = global * minus_i * sin_over_w * c;
  u(2, 1) = u(1, 2);
  return u;
}

double sudden_flipflop_max(const SpinPairParams& params) {
  params.validate();
  const double a2 = params.a_freq * params.a_freq;
  if (a2 == 0.0) return 0.0;
  const double d = params.detuning_hz();
  return a2 / (a2 + d * d);
}

double sudden_flipflop_probability(const SpinPairParams& params, double hold_time) {
  if (!(hold_time >= 0.0)) throw InputError("hold time must be non-negative");
  const double s = std::sin(kPi * params.rabi_hz() * hold_time);
  return sudden_flipflop_max(params) * s * s;
}

Matrix4c evolve(const SpinPairParams& params, const RampProfile& ramp, std::size_t step_count) {
  return propagate(params, ramp, step_count, false);
}

Matrix4c evolve_reverse(const SpinPairParams& params, const RampProfile& ramp,
                        std::size_t step_count) {
  return propagate(params, ramp, step_count, true);
}

std::size_t required_steps(const SpinPairParams& params, double duration,
                           double steps_per_cycle) {
  if (!(duration >= 0.0)) throw InputError("duration must be non-negative");
  const double per_cycle = std::max(steps_per_cycle, kMinStepsPerCycle);
  const double n = std::ceil(duration * per_cycle * params.max_frequency_hz());
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

double flipflop_probability(const Matrix4c& u) {
  return std::norm(u(basis::down_up, basis::up_down));
}

TwoSpinState apply(const Matrix4c& u, const TwoSpinState& state) { return u * state; }

double unitarity_error(const Matrix4c& u) {
  return (u.adjoint() * u - Matrix4c::Identity()).cwiseAbs().maxCoeff();
}

double worst_case_flipflop(const SpinPairParams& params, const RampProfile& ramp,
                           double steps_per_cycle) {
  params.validate();
  ramp.validate();
  Matrix4c u_on = Matrix4c::Identity();
  Matrix4c u_off = Matrix4c::Identity();
  if (ramp.shape == RampShape::sinusoid && ramp.ramp_time > 0.0) {
    const std::size_t steps = required_steps(params, ramp.ramp_time, steps_per_cycle);
    // A zero-hold profile: [0, ramp) is the switch-on, [ramp, 2 ramp) the switch-off.
    const RampProfile on{ramp.ramp_time, 0.0, RampShape::sinusoid};
    const double dt = ramp.ramp_time / static_cast<double>(steps);
    for (std::size_t n = 0; n < steps; ++n) {
      const double mid = (static_cast<double>(n) + 0.5) * dt;
      u_on = step_unitary(params, on.scale_at(mid), dt) * u_on;
      u_off = step_unitary(params, on.scale_at(ramp.ramp_time + mid), dt) * u_off;
    }
  }
  const BlockForm f = block_form(params, 1.0);
  const double h = 0.5 * (f.d1 - f.d2);
  const double c = f.coupling;
  const double w = std::hypot(h, c);
  if (w == 0.0) return flipflop_probability(u_off * u_on);
  double total = 0.0;
  for (const double sign : {1.0, -1.0}) {
    // Projector (1 + sign (h sigma_z + c sigma_x) / w) / 2 on the flip-flop pair.
    Matrix4c proj = Matrix4c::Zero();
    proj(1, 1) = 0.5 * (1.0 + sign * h / w);
    proj(2, 2) = 0.5 * (1.0 - sign * h / w);
    proj(1, 2) = 0.5 * sign * c / w;
    proj(2, 1) = proj(1, 2);
    const Matrix4c path = u_off * proj * u_on;
    total += std::abs(path(basis::down_up, basis::up_down));
  }
  return std::min(1.0, total * total);
}

std::vector<FieldSweepPoint> flipflop_field_sweep(const FlipFlopConfig& config) {
  const std::size_t nb = config.b_grid_t.size();
  std::vector<FieldSweepPoint> out(config.a_freqs_hz.size() * nb);
  parallel_for(out.size(), config.workers, [&](std::size_t idx) {
    const double a = config.a_freqs_hz[idx / nb];
    const double b = config.b_grid_t[idx % nb];
    const SpinPairParams p{a, b, config.electron_gyro, config.nuclear_gyro};
    out[idx] = {a, b, worst_case_flipflop(p, RampProfile{}, config.steps_per_cycle)};
  });
  return out;
}

std::vector<RampSweepPoint> flipflop_ramp_sweep(const FlipFlopConfig& config) {
  const std::size_t nr = config.ramp_grid_s.size();
  std::vector<RampSweepPoint> out(config.a_freqs_hz.size() * nr);
  parallel_for(out.size(), config.workers, [&](std::size_t idx) {
    const double a = config.a_freqs_hz[idx / nr];
    const double ramp = config.ramp_grid_s[idx % nr];
    const SpinPairParams p{a, config.b0_t, config.electron_gyro, config.nuclear_gyro};
    const RampProfile profile{ramp, cphase_hold_time(a), RampShape::sinusoid};
    out[idx] = {a, ramp, worst_case_flipflop(p, profile, config.steps_per_cycle)};
  });
  return out;
}

Matrix4c DiagonalGate::reconstruct() const {
  Matrix4c u = Matrix4c::Zero();
  const int signs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (int k = 0; k < 4; ++k) {
    const double se = signs[k][0];
    const double sn = signs[k][1];
    u(k, k) = std::polar(1.0, global_phase + 0.5 * z_electron * se + 0.5 * z_nuclear * sn +
                                  0.25 * zz_angle * se * sn);
  }
  return u;
}

double max_off_diagonal(const Matrix4c& u) {
  double worst = 0.0;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (r != c) worst = std::max(worst, std::abs(u(r, c)));
    }
  }
  return worst;
}

Matrix4c project_diagonal(const Matrix4c& u) {
  Matrix4c d = Matrix4c::Zero();
  for (int k = 0; k < 4; ++k) {
    if (std::abs(u(k, k)) == 0.0) throw InputError("diagonal entry vanishes; no phase to keep");
    d(k, k) = u(k, k) / std::abs(u(k, k));
  }
  return d;
}

DiagonalGate decompose_diagonal(const Matrix4c& u, double off_diagonal_tol) {
  const double off = max_off_diagonal(u);
  if (off > off_diagonal_tol) {
    std::ostringstream msg;
    msg << "matrix is not diagonal: off-diagonal magnitude " << off << " exceeds "
        << off_diagonal_tol;
    throw InputError(msg.str());
  }
  double phi[4];
  for (int k = 0; k < 4; ++k) {
    if (std::abs(std::abs(u(k, k)) - 1.0) > std::max(off_diagonal_tol, 1e-12)) {
      throw InputError("diagonal entries must have unit magnitude");
    }
    phi[k] = std::arg(u(k, k));
  }
  DiagonalGate g;
  g.global_phase = 0.25 * (phi[0] + phi[1] + phi[2] + phi[3]);
  g.z_electron = 0.5 * (phi[0] + phi[1] - phi[2] - phi[3]);
  g.z_nuclear = 0.5 * (phi[0] - phi[1] + phi[2] - phi[3]);
  g.zz_angle = phi[0] - phi[1] - phi[2] + phi[3];

  // zz -> zz - 2 pi is absorbed by z_e, z_n += pi and global -= pi / 2.
  const long kzz = wrap_count(g.zz_angle);
  g.zz_angle -= kTwoPi * static_cast<double>(kzz);
  g.z_electron += kPi * static_cast<double>(kzz);
  g.z_nuclear += kPi * static_cast<double>(kzz);
  g.global_phase -= 0.5 * kPi * static_cast<double>(kzz);
  // A local angle shifted by 2 pi flips the sign of every entry.
  for (double* local : {&g.z_electron, &g.z_nuclear}) {
    const long k = wrap_count(*local);
    *local -= kTwoPi * static_cast<double>(k);
    g.global_phase += kPi * static_cast<double>(k);
  }
  g.global_phase = wrap_pm_pi(g.global_phase);
  return g;
}

double cphase_hold_time(double a_freq_hz) { return min_gate_time(a_freq_hz); }

}  // namespace hfgate
