#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hfgate {

struct NuclearSpin {
  int numerator = 1;
  int denominator = 2;

  double value() const { return static_cast<double>(numerator) / denominator; }
  std::string str() const;
  static NuclearSpin parse(std::string_view text);

  friend bool operator==(const NuclearSpin&, const NuclearSpin&) = default;
};

struct IsotopeSpec {
  std::string symbol;  // e.g. "119Sn"
  NuclearSpin nuclear_spin;
  double abundance_pct = 0.0;
  double gyro_ratio_rel_si = 1.0;  // |gamma_X / gamma_29Si|
  double atomic_radius_rel_si = 1.0;
  std::optional<double> solubility_k;
  int atomic_number_Z = 0;
  int mass_number_A = 0;
  int valence_n = 0;
  std::optional<double> eta;  // bunching factor

  // Nuclear gyromagnetic ratio in Hz/T.
  double nuclear_gyro() const;
  void validate() const;

  friend bool operator==(const IsotopeSpec&, const IsotopeSpec&) = default;
};

// Bunching-factor reference values.
namespace eta_reference {
inline constexpr double si_wilson = 178.0;
inline constexpr double si_assali = 159.4;
inline constexpr double ge_kerckhoff = 570.0;
inline constexpr double sn_dft = 996.4;
}  // namespace eta_reference

// Relativistically corrected figures quoted alongside the raw bunching
// factors. Stored as published; they are not derivable from the leading-order
// correction (see relativistic.hpp) and are not reconciled with it.
namespace quoted_relativistic {
inline constexpr double sn_absolute_hfi = 2400.0;
inline constexpr double sn_enhancement = 13.5;
inline constexpr double pb_absolute_hfi = 2920.0;
inline constexpr double pb_eta_ratio_iu = 15.3;
inline constexpr double pb_enhancement = 16.4;
}  // namespace quoted_relativistic

// Immutable-after-load table of nuclides, keyed by symbol. Lookups are safe
// from any number of threads once construction and overrides are done.
class IsotopeRegistry {
 public:
  // The seven stable finite-spin group-IV nuclides with default eta values.
  static IsotopeRegistry builtin();

  // Parses a registry file (one [section] per nuclide, key = value fields).
  static IsotopeRegistry parse(std::istream& in);
  static IsotopeRegistry load(const std::string& path);

  const IsotopeSpec& lookup(std::string_view symbol) const;
  bool contains(std::string_view symbol) const;
  std::vector<std::string> symbols() const;
  std::size_t size() const { return entries_.size(); }

  // Inserts or replaces a nuclide.
  void upsert(IsotopeSpec spec);

  // Applies an override file on top of this registry. Sections naming an
  // existing nuclide may set a subset of fields; new sections must be complete.
  void apply_overrides(std::istream& in);
  void apply_overrides_file(const std::string& path);

  // Writes the registry in the same format `parse` reads; doubles use the
  // shortest representation that round-trips exactly.
  void serialize(std::ostream& out) const;

 private:
  std::map<std::string, IsotopeSpec, std::less<>> entries_;
};

struct HyperfineStrength {
  double energy_j = 0.0;
  double freq_hz = 0.0;
};

// Fermi contact coupling A = (2 mu0 / 3) (h gamma_e) (h gamma_I) |psi(0)|^2 for
// a probability density at the nucleus in 1/m^3. Magnitudes only; A >= 0.
HyperfineStrength contact_density_to_hyperfine(double density, const IsotopeSpec& isotope);

// A/h per unit density (Hz m^3) for the isotope.
double contact_prefactor_hz(const IsotopeSpec& isotope);

}  // namespace hfgate
