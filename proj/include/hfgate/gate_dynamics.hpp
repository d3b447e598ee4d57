#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "hfgate/constants.hpp"
#include "hfgate/isotope.hpp"

namespace hfgate {

using Matrix4c = Eigen::Matrix4cd;
// Amplitudes in the basis |up_e up_n>, |up_e dn_n>, |dn_e up_n>, |dn_e dn_n>.
using TwoSpinState = Eigen::Vector4cd;

namespace basis {
inline constexpr int up_up = 0;
inline constexpr int up_down = 1;
inline constexpr int down_up = 2;
inline constexpr int down_down = 3;
}  // namespace basis

// Gyromagnetic ratios are magnitudes (Hz/T). Sign convention, used everywhere:
//   H / h = a_scale A (I.S) + B (electron_gyro S_z - nuclear_gyro I_z)
// so the electron Zeeman term raises |up_e> and the nuclear term lowers |up_n>.
struct SpinPairParams {
  double a_freq = 0.0;   // peak hyperfine, Hz
  double b_field = 0.0;  // T
  double electron_gyro = 0.0;
  double nuclear_gyro = 0.0;

  static SpinPairParams for_isotope(double a_freq, double b_field, const IsotopeSpec& isotope);
  void validate() const;

  // Flip-flop detuning B (electron_gyro + nuclear_gyro). The -A/4 diagonal
  // hyperfine shift is common to |up_down> and |down_up> and cancels here.
  double detuning_hz() const;
  double rabi_hz() const;    // sqrt(A^2 + detuning^2)
  double larmor_hz() const;  // electron_gyro B
  // Largest frequency the propagator must resolve.
  double max_frequency_hz() const;
};

enum class RampShape { instantaneous, sinusoid };

// Switch-on ramp, hold at peak coupling, switch-off ramp. Instantaneous
// switching requires ramp_time = 0. Sinusoid ramps follow the half-cosine
// (1 - cos(pi t / ramp_time)) / 2 and its mirror image.
struct RampProfile {
  double ramp_time = 0.0;  // s, each of on and off
  double hold_time = 0.0;  // s
  RampShape shape = RampShape::instantaneous;

  void validate() const;
  double total_time() const { return 2.0 * ramp_time + hold_time; }
  double scale_at(double t) const;  // coupling fraction in [0, 1]
};

// Hamiltonian in joules.
Matrix4c hamiltonian(const SpinPairParams& params, double a_scale);
// Same operator divided by h (Hz).
Matrix4c hamiltonian_hz(const SpinPairParams& params, double a_scale);

// exp(-i 2 pi H_hz t) for a Hermitian H_hz, by eigendecomposition.
Matrix4c expm_hermitian(const Matrix4c& h_hz, double t);

// Closed-form exp(-i 2 pi H_hz(a_scale) dt) using the block structure of H.
Matrix4c step_unitary(const SpinPairParams& params, double a_scale, double dt);

// Two-level Rabi amplitude A^2 / (A^2 + detuning^2).
double sudden_flipflop_max(const SpinPairParams& params);
// P_max sin^2(pi rabi t) after a sudden switch-on held for `hold_time`.
double sudden_flipflop_probability(const SpinPairParams& params, double hold_time);

// Midpoint step-exponential propagation over the whole profile. Throws
// ResolutionError when a step exceeds 1 / (50 max(rabi, larmor)).
Matrix4c evolve(const SpinPairParams& params, const RampProfile& ramp, std::size_t step_count);
// Time-reversed profile under -H; evolve_reverse(...) * evolve(...) = 1.
Matrix4c evolve_reverse(const SpinPairParams& params, const RampProfile& ramp,
                        std::size_t step_count);

// Smallest step count satisfying the resolution limit with `steps_per_cycle`
// steps per period of the fastest frequency (at least 50).
std::size_t required_steps(const SpinPairParams& params, double duration,
                           double steps_per_cycle = 200.0);

double flipflop_probability(const Matrix4c& u);  // |<down_up|U|up_down>|^2
TwoSpinState apply(const Matrix4c& u, const TwoSpinState& state);
double unitarity_error(const Matrix4c& u);  // max |U^dagger U - 1|

// Flip-flop probability maximized over the hold duration at peak coupling.
// With U = U_off (sum_k e^{-i phi_k} P_k) U_on over the two flip-flop
// eigenprojectors P_k, the worst case is (|alpha_+| + |alpha_-|)^2 where
// alpha_k = <down_up|U_off P_k U_on|up_down>.
double worst_case_flipflop(const SpinPairParams& params, const RampProfile& ramp,
                           double steps_per_cycle = 200.0);

struct FlipFlopConfig {
  std::vector<double> a_freqs_hz = {100e3, 200e3, 400e3};
  std::vector<double> b_grid_t;
  std::vector<double> ramp_grid_s;
  double b0_t = 1.1e-3;
  double electron_gyro = constants::electron_gyro;
  double nuclear_gyro = 0.0;
  double steps_per_cycle = 200.0;
  unsigned workers = 1;
};

struct FieldSweepPoint {
  double a_hz;
  double b_t;
  double probability;
};

struct RampSweepPoint {
  double a_hz;
  double ramp_s;
  double probability;
};

// Worst-case-over-hold flip-flop probabilities: instantaneous switching over
// the B grid, and sinusoid ramps at b0 over the ramp grid.
std::vector<FieldSweepPoint> flipflop_field_sweep(const FlipFlopConfig& config);
std::vector<RampSweepPoint> flipflop_ramp_sweep(const FlipFlopConfig& config);

// U = e^{i global} exp(i z_e Z_e / 2) exp(i z_n Z_n / 2) exp(i zz Z_e Z_n / 4).
// With this gauge the conditional phase diag(1, 1, 1, -1) has zz = pi, while
// Z_e Z_n = diag(1, -1, -1, 1) is purely local (zz = 0, z_e = z_n = pi).
// Every angle is canonicalized into (-pi, pi].
struct DiagonalGate {
  double global_phase = 0.0;
  double z_electron = 0.0;
  double z_nuclear = 0.0;
  double zz_angle = 0.0;

  Matrix4c reconstruct() const;
};

// Requires every off-diagonal magnitude <= off_diagonal_tol and every
// diagonal magnitude within off_diagonal_tol of 1.
DiagonalGate decompose_diagonal(const Matrix4c& u, double off_diagonal_tol = 1e-6);
// Nearest diagonal unitary: keeps the phases of the diagonal entries.
Matrix4c project_diagonal(const Matrix4c& u);
double max_off_diagonal(const Matrix4c& u);

// Hold time for a pi conditional rotation with instantaneous switching.
double cphase_hold_time(double a_freq_hz);

}  // namespace hfgate
