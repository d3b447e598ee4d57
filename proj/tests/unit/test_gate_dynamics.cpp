#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hfgate/constants.hpp"
#include "hfgate/errors.hpp"
#include "hfgate/gate_dynamics.hpp"

using namespace hfgate;

namespace {

constexpr double kPi = std::numbers::pi;

const IsotopeSpec& sn119() {
  static const auto reg = IsotopeRegistry::builtin();
  return reg.lookup("119Sn");
}

double max_abs(const Matrix4c& m) { return m.cwiseAbs().maxCoeff(); }

// Angular distance between two angles.
double angle_gap(double a, double b) { return std::abs(std::remainder(a - b, 2 * kPi)); }

}  // namespace

TEST_CASE("sudden worst case at 400 kHz and 15 mT matches the oracle") {
  const auto p = SpinPairParams::for_isotope(400e3, 15e-3, sn119());
  CHECK(sudden_flipflop_max(p) == doctest::Approx(9.0438132956554785e-7).epsilon(1e-10));
}

TEST_CASE("sudden worst case stays below 1e-6 from 15 mT up") {
  for (const double a : {100e3, 200e3, 400e3}) {
    for (const double b : {15e-3, 20e-3, 50e-3, 0.1}) {
      const auto p = SpinPairParams::for_isotope(a, b, sn119());
      CHECK(worst_case_flipflop(p, RampProfile{}) < 1e-6);
    }
  }
}

TEST_CASE("hamiltonian is Hermitian with the expected diagonal") {
  const auto p = SpinPairParams::for_isotope(250e3, 3e-3, sn119());
  const Matrix4c h = hamiltonian_hz(p, 1.0);
  CHECK(max_abs(h - h.adjoint()) == 0.0);
  const double ze = 0.5 * p.b_field * p.electron_gyro;
  const double zn = 0.5 * p.b_field * p.nuclear_gyro;
  const double q = 0.25 * p.a_freq;
  CHECK(h(0, 0).real() == doctest::Approx(q + ze - zn));
  CHECK(h(1, 1).real() == doctest::Approx(-q + ze + zn));
  CHECK(h(2, 2).real() == doctest::Approx(-q - ze - zn));
  CHECK(h(3, 3).real() == doctest::Approx(q - ze + zn));
  CHECK(h(1, 2).real() == doctest::Approx(0.5 * p.a_freq));
  const Matrix4c hj = hamiltonian(p, 1.0);
  CHECK(max_abs(hj - constants::planck_h * h) <= 1e-12 * max_abs(hj));
}

TEST_CASE("closed-form step equals the eigen exponential") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    SpinPairParams p{1e4 + 1e6 * u(rng), 1e-4 + 0.05 * u(rng), constants::electron_gyro,
                     1e7 * u(rng)};
    const double scale = u(rng);
    const double dt = 1e-9 * u(rng);
    const Matrix4c a = step_unitary(p, scale, dt);
    const Matrix4c b = expm_hermitian(hamiltonian_hz(p, scale), dt);
    CHECK(max_abs(a - b) < 1e-12);
  }
}

TEST_CASE("propagation preserves unitarity and the aligned populations") {
  const auto p = SpinPairParams::for_isotope(400e3, 1.1e-3, sn119());
  const RampProfile ramp{50e-9, cphase_hold_time(400e3), RampShape::sinusoid};
  const auto steps = required_steps(p, ramp.total_time());
  const Matrix4c u = evolve(p, ramp, steps);
  CHECK(unitarity_error(u) <= 1e-10);
  CHECK(std::abs(std::norm(u(basis::up_up, basis::up_up)) - 1.0) <= 1e-12);
  CHECK(std::abs(std::norm(u(basis::down_down, basis::down_down)) - 1.0) <= 1e-12);
}

TEST_CASE("reverse evolution undoes forward evolution") {
  const auto p = SpinPairParams::for_isotope(200e3, 2e-3, sn119());
  const RampProfile ramp{80e-9, 1e-6, RampShape::sinusoid};
  const auto steps = required_steps(p, ramp.total_time());
  const Matrix4c id = evolve_reverse(p, ramp, steps) * evolve(p, ramp, steps);
  CHECK(max_abs(id - Matrix4c::Identity()) <= 1e-9);
}

TEST_CASE("propagator matches the two-level Rabi formula") {
  int points = 0;
  for (const double a : {100e3, 200e3, 400e3, 800e3}) {
    for (const double b : {1e-4, 5e-4, 1.1e-3, 5e-3, 15e-3}) {
      const auto p = SpinPairParams::for_isotope(a, b, sn119());
      const double hold = 0.37 / p.rabi_hz() + cphase_hold_time(a);
      const RampProfile ramp{0.0, hold, RampShape::instantaneous};
      const double numeric = flipflop_probability(evolve(p, ramp, required_steps(p, hold)));
      CHECK(std::abs(numeric - sudden_flipflop_probability(p, hold)) <= 1e-9);
      ++points;
    }
  }
  CHECK(points == 20);
}

TEST_CASE("instantaneous worst case equals the Rabi maximum") {
  const auto p = SpinPairParams::for_isotope(100e3, 1e-3, sn119());
  CHECK(worst_case_flipflop(p, RampProfile{}) == doctest::Approx(sudden_flipflop_max(p)).epsilon(1e-12));
}

TEST_CASE("slow ramps suppress flip-flops") {
  const auto p = SpinPairParams::for_isotope(400e3, 1.1e-3, sn119());
  const double sudden = worst_case_flipflop(p, RampProfile{});
  const double fast = worst_case_flipflop(p, RampProfile{1e-9, 0.0, RampShape::sinusoid});
  const double slow = worst_case_flipflop(p, RampProfile{1e-6, 0.0, RampShape::sinusoid});
  CHECK(fast == doctest::Approx(sudden).epsilon(0.05));
  CHECK(slow < 1e-3 * sudden);
}

TEST_CASE("midpoint propagation converges at second order") {
  const auto p = SpinPairParams::for_isotope(400e3, 1.1e-3, sn119());
  const RampProfile ramp{100e-9, 0.0, RampShape::sinusoid};
  const std::size_t n = required_steps(p, ramp.total_time());
  const Matrix4c ref = evolve(p, ramp, 16 * n);
  const double e1 = max_abs(evolve(p, ramp, n) - ref);
  const double e2 = max_abs(evolve(p, ramp, 2 * n) - ref);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("coarse steps are refused") {
  const auto p = SpinPairParams::for_isotope(400e3, 0.1, sn119());
  const RampProfile ramp{0.0, 1e-6, RampShape::instantaneous};
  CHECK_THROWS_AS(evolve(p, ramp, 10), ResolutionError);
  CHECK_THROWS_AS((RampProfile{1e-9, 1e-6, RampShape::instantaneous}.validate()), InputError);
}

TEST_CASE("diagonal gate conventions") {
  Matrix4c cz = Matrix4c::Identity();
  cz(3, 3) = -1.0;
  const auto g = decompose_diagonal(cz);
  CHECK(angle_gap(g.zz_angle, kPi) < 1e-12);
  CHECK(max_abs(g.reconstruct() - cz) < 1e-12);

  Matrix4c zz = Matrix4c::Identity();
  zz(1, 1) = zz(2, 2) = -1.0;
  const auto l = decompose_diagonal(zz);
  CHECK(angle_gap(l.zz_angle, 0.0) < 1e-12);
  CHECK(angle_gap(l.z_electron, kPi) < 1e-12);
  CHECK(angle_gap(l.z_nuclear, kPi) < 1e-12);
  CHECK(max_abs(l.reconstruct() - zz) < 1e-12);

  Matrix4c off = Matrix4c::Identity();
  off(1, 2) = 1e-3;
  CHECK_THROWS_AS(decompose_diagonal(off), InputError);
}

TEST_CASE("decomposition round-trips arbitrary angles") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const DiagonalGate g{u(rng), u(rng), u(rng), u(rng)};
    const Matrix4c m = g.reconstruct();
    CHECK(unitarity_error(m) < 1e-13);
    const auto back = decompose_diagonal(m);
    CHECK(max_abs(back.reconstruct() - m) < 1e-12);
    CHECK(back.zz_angle > -kPi);
    CHECK(back.zz_angle <= kPi);
  }
}

TEST_CASE("holding for 1/(2A) yields a conditional pi phase") {
  const auto p = SpinPairParams::for_isotope(400e3, 0.5, sn119());
  const double hold = cphase_hold_time(400e3);
  const RampProfile ramp{0.0, hold, RampShape::instantaneous};
  const Matrix4c u = evolve(p, ramp, required_steps(p, hold));
  // Residual flip-flop amplitude is of order A / detuning.
  CHECK(max_off_diagonal(u) < 1e-4);
  const auto g = decompose_diagonal(u, 1e-4);
  CHECK(angle_gap(std::abs(g.zz_angle), kPi) < 1e-4);
  // At low field the flip-flop admixture exceeds the strict tolerance; the
  // projected gate still carries the conditional phase.
  const auto low = SpinPairParams::for_isotope(400e3, 50e-3, sn119());
  const Matrix4c ul = evolve(low, ramp, required_steps(low, hold));
  CHECK(max_off_diagonal(ul) > 1e-4);
  const auto gl = decompose_diagonal(project_diagonal(ul));
  CHECK(angle_gap(std::abs(gl.zz_angle), kPi) < 1e-3);
}
