#include "hfgate/isotope.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "hfgate/constants.hpp"
#include "hfgate/csv.hpp"
#include "hfgate/errors.hpp"

namespace hfgate {

namespace {

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw InputError("registry: field '" + std::string(what) + "' is not an integer: '" +
                     std::string(text) + "'");
  }
  return value;
}

std::optional<double> parse_optional(const std::string& text) {
  if (text == "none" || text == "-") return std::nullopt;
  return parse_double(text);
}

std::string format_optional(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string("none");
}

const std::set<std::string, std::less<>> kFields = {
    "nuclear_spin", "abundance_pct", "gyro_ratio_rel_si", "atomic_radius_rel_si", "solubility_k",
    "atomic_number_Z", "mass_number_A", "valence_n", "eta"};

// Applies the keys of one section to `spec`; returns the set of keys seen.
std::set<std::string> apply_section(const std::string& symbol,
                                    const boost::property_tree::ptree& section,
                                    IsotopeSpec& spec) {
  std::set<std::string> seen;
  for (const auto& [key, node] : section) {
    if (!kFields.contains(key)) {
      throw InputError("registry: unknown key '" + key + "' in section [" + symbol + "]");
    }
    if (!seen.insert(key).second) {
      throw InputError("registry: duplicate key '" + key + "' in section [" + symbol + "]");
    }
    const std::string value = node.get_value<std::string>();
    if (key == "nuclear_spin") {
      spec.nuclear_spin = NuclearSpin::parse(value);
    } else if (key == "abundance_pct") {
      spec.abundance_pct = parse_double(value);
    } else if (key == "gyro_ratio_rel_si") {
      spec.gyro_ratio_rel_si = parse_double(value);
    } else if (key == "atomic_radius_rel_si") {
      spec.atomic_radius_rel_si = parse_double(value);
    } else if (key == "solubility_k") {
      spec.solubility_k = parse_optional(value);
    } else if (key == "atomic_number_Z") {
      spec.atomic_number_Z = parse_int(value, key);
    } else if (key == "mass_number_A") {
      spec.mass_number_A = parse_int(value, key);
    } else if (key == "valence_n") {
      spec.valence_n = parse_int(value, key);
    } else if (key == "eta") {
      spec.eta = parse_optional(value);
    }
  }
  return seen;
}

boost::property_tree::ptree read_ini(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InputError(std::string("registry: ") + e.what());
  }
  return tree;
}

}  // namespace

std::string NuclearSpin::str() const {
  if (denominator == 1) return std::to_string(numerator);
  return std::to_string(numerator) + "/" + std::to_string(denominator);
}

NuclearSpin NuclearSpin::parse(std::string_view text) {
  const auto slash = text.find('/');
  NuclearSpin spin;
  if (slash == std::string_view::npos) {
    spin.numerator = parse_int(text, "nuclear_spin");
    spin.denominator = 1;
  } else {
    spin.numerator = parse_int(text.substr(0, slash), "nuclear_spin");
    spin.denominator = parse_int(text.substr(slash + 1), "nuclear_spin");
  }
  if (spin.numerator <= 0 || spin.denominator <= 0) {
    throw InputError("nuclear spin must be positive: '" + std::string(text) + "'");
  }
  return spin;
}

double IsotopeSpec::nuclear_gyro() const { return gyro_ratio_rel_si * constants::si_29_gyro; }

void IsotopeSpec::validate() const {
  if (symbol.empty()) throw InputError("isotope symbol must not be empty");
  if (nuclear_spin.value() <= 0.0) throw InputError(symbol + ": nuclear spin must be > 0");
  if (!(abundance_pct > 0.0 && abundance_pct <= 100.0)) {
    throw InputError(symbol + ": abundance_pct must be in (0, 100]");
  }
  if (!(gyro_ratio_rel_si > 0.0)) throw InputError(symbol + ": gyro_ratio_rel_si must be > 0");
  if (eta && !(*eta > 0.0)) throw InputError(symbol + ": eta must be > 0");
}

IsotopeRegistry IsotopeRegistry::builtin() {
  using namespace eta_reference;
  IsotopeRegistry reg;
  // symbol, I, abundance %, |gamma/gamma_Si|, r/r_Si, k, Z, A, n, eta
  reg.upsert({"13C", {1, 2}, 1.07, 1.26, 0.64, 5.7, 6, 13, 2, std::nullopt});
  reg.upsert({"29Si", {1, 2}, 4.69, 1.00, 1.00, 1.0, 14, 29, 3, si_wilson});
  reg.upsert({"73Ge", {9, 2}, 7.75, 1.49, 1.14, 0.33, 32, 73, 4, ge_kerckhoff});
  reg.upsert({"115Sn", {1, 2}, 0.34, 1.65, 1.32, 0.016, 50, 115, 5, sn_dft});
  reg.upsert({"117Sn", {1, 2}, 7.68, 1.81, 1.32, 0.016, 50, 117, 5, sn_dft});
  reg.upsert({"119Sn", {1, 2}, 8.59, 1.89, 1.32, 0.016, 50, 119, 5, sn_dft});
  reg.upsert({"207Pb", {1, 2}, 22.1, 1.07, 1.64, std::nullopt, 82, 207, 6, std::nullopt});
  return reg;
}

IsotopeRegistry IsotopeRegistry::parse(std::istream& in) {
  IsotopeRegistry reg;
  reg.apply_overrides(in);
  return reg;
}

IsotopeRegistry IsotopeRegistry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open registry file: " + path);
  return parse(in);
}

const IsotopeSpec& IsotopeRegistry::lookup(std::string_view symbol) const {
  const auto it = entries_.find(symbol);
  if (it == entries_.end()) {
    std::string available;
    for (const auto& [name, spec] : entries_) {
      if (!available.empty()) available += ", ";
      available += name;
    }
    throw UnknownIsotopeError("unknown isotope '" + std::string(symbol) +
                              "'; available: " + available);
  }
  return it->second;
}

bool IsotopeRegistry::contains(std::string_view symbol) const {
  return entries_.find(symbol) != entries_.end();
}

std::vector<std::string> IsotopeRegistry::symbols() const {
  std::vector<std::string> out;
  for (const auto& [name, spec] : entries_) out.push_back(name);
  return out;
}

void IsotopeRegistry::upsert(IsotopeSpec spec) {
  spec.validate();
  auto key = spec.symbol;
  entries_.insert_or_assign(std::move(key), std::move(spec));
}

void IsotopeRegistry::apply_overrides(std::istream& in) {
  const auto tree = read_ini(in);
  for (const auto& [symbol, section] : tree) {
    if (!section.data().empty()) {
      throw InputError("registry: key '" + symbol + "' outside of a [nuclide] section");
    }
    const auto existing = entries_.find(symbol);
    IsotopeSpec spec;
    spec.symbol = symbol;
    if (existing != entries_.end()) spec = existing->second;
    const auto seen = apply_section(symbol, section, spec);
    if (existing == entries_.end()) {
      for (const auto& field : kFields) {
        if (!seen.contains(field)) {
          throw InputError("registry: new nuclide [" + symbol + "] is missing '" + field + "'");
        }
      }
    }
    upsert(std::move(spec));
  }
}

void IsotopeRegistry::apply_overrides_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open registry override file: " + path);
  apply_overrides(in);
}

void IsotopeRegistry::serialize(std::ostream& out) const {
  out << "; Nuclide registry. One [section] per nuclide.\n"
         "; nuclear_spin         I, rational (e.g. 1/2, 9/2)\n"
         "; abundance_pct        natural isotopic abundance, percent\n"
         "; gyro_ratio_rel_si    |gamma_X / gamma_29Si|, dimensionless\n"
         "; atomic_radius_rel_si r(X) / r(Si), dimensionless\n"
         "; solubility_k         melting-point distribution coefficient, or none\n"
         "; atomic_number_Z      integer\n"
         "; mass_number_A        integer\n"
         "; valence_n            principal quantum number of the valence s shell\n"
         "; eta                  bunching factor |psi(R)|^2 / <|psi|^2>_cell, or none\n";
  for (const auto& [symbol, spec] : entries_) {
    out << "\n[" << symbol << "]\n"
        << "nuclear_spin = " << spec.nuclear_spin.str() << '\n'
        << "abundance_pct = " << format_double(spec.abundance_pct) << '\n'
        << "gyro_ratio_rel_si = " << format_double(spec.gyro_ratio_rel_si) << '\n'
        << "atomic_radius_rel_si = " << format_double(spec.atomic_radius_rel_si) << '\n'
        << "solubility_k = " << format_optional(spec.solubility_k) << '\n'
        << "atomic_number_Z = " << spec.atomic_number_Z << '\n'
        << "mass_number_A = " << spec.mass_number_A << '\n'
        << "valence_n = " << spec.valence_n << '\n'
        << "eta = " << format_optional(spec.eta) << '\n';
  }
}

double contact_prefactor_hz(const IsotopeSpec& isotope) {
  return 2.0 * constants::mu0 / 3.0 * constants::planck_h * constants::electron_gyro *
         isotope.nuclear_gyro();
}

HyperfineStrength contact_density_to_hyperfine(double density, const IsotopeSpec& isotope) {
  if (!(density >= 0.0)) {
    throw InputError("contact density must be non-negative");
  }
  HyperfineStrength out;
  out.freq_hz = contact_prefactor_hz(isotope) * density;
  out.energy_j = constants::planck_h * out.freq_hz;
  return out;
}

}  // namespace hfgate
