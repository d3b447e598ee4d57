#pragma once

#include <numbers>

namespace hfgate {

// CODATA 2018 values, SI units.
struct PhysicalConstants {
  static constexpr double mu0 = 1.25663706212e-6;             // N/A^2
  static constexpr double bohr_magneton = 9.2740100783e-24;   // J/T
  static constexpr double nuclear_magneton = 5.0507837461e-27;  // J/T
  static constexpr double planck_h = 6.62607015e-34;          // J s
  static constexpr double hbar = planck_h / (2.0 * std::numbers::pi);
  static constexpr double fine_structure_alpha = 7.2973525693e-3;
  static constexpr double electron_g = 2.00231930436256;

  // Free-electron gyromagnetic ratio as a frequency per field (Hz/T).
  static constexpr double electron_gyro = electron_g * bohr_magneton / planck_h;

  // |mu(29Si)| = 0.55529 nuclear magnetons with I = 1/2, as Hz/T.
  static constexpr double si_29_moment_nm = 0.55529;
  static constexpr double si_29_gyro = si_29_moment_nm * nuclear_magneton / (0.5 * planck_h);

  static constexpr double si_lattice_const_a0 = 0.543e-9;  // m
  static constexpr double valley_wavenumber_k0 =
      0.85 * 2.0 * std::numbers::pi / si_lattice_const_a0;  // 1/m
};

using constants = PhysicalConstants;

}  // namespace hfgate
