#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hfgate {

// Leading-order relativistic enhancement of the contact density for an s
// electron of principal quantum number n: 1 + (n^2 + 9n - 11) / (6 n^2) (alpha Z)^2.
// Throws InputError for n < 1, Z < 1 or alpha Z >= 1.
double iu_correction(int n, int z);

// Free-atom scaling Z^2 / A^(1/3) of nuclide 1 relative to nuclide 2.
double otten_ratio(double z1, double mass1, double z2, double mass2);

struct GroupIVElement {
  std::string symbol;
  int z = 0;
  double atomic_weight = 0.0;
  int valence_n = 0;
  double eta_ratio = 0.0;     // contact density relative to Si, without correction
  bool extrapolated = false;  // not a computed value; see default_group_iv
};

// C, Si, Ge, Sn, Pb. Si, Ge and Sn carry the computed bunching ratios
// (178, 570, 996.4 over 178); C and Pb are filled from the quadratic in Z
// through those three points and marked extrapolated.
std::vector<GroupIVElement> default_group_iv();

struct ContactRatioRow {
  std::string symbol;
  int z = 0;
  double eta_dft = 0.0;
  double eta_iu = 0.0;
  double otten = 0.0;
  bool extrapolated = false;
};

// Ratios relative to the Si entry (Z = 14), which must be present.
std::vector<ContactRatioRow> ratio_table(std::span<const GroupIVElement> elements);

enum class RatioColumn { dft, iu, otten };

struct QuadraticFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  std::optional<double> r2;  // empty when every ordinate is equal
};

// Least-squares y = c0 + c1 x + c2 x^2; needs at least 3 points.
QuadraticFit quad_fit(std::span<const double> x, std::span<const double> y);
// Fit of one table column against Z.
QuadraticFit quad_fit(std::span<const ContactRatioRow> rows, RatioColumn column);

}  // namespace hfgate
