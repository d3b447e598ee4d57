#include <doctest.h>

#include <sstream>

#include "hfgate/constants.hpp"
#include "hfgate/errors.hpp"
#include "hfgate/isotope.hpp"

using namespace hfgate;

TEST_CASE("builtin registry holds the seven finite-spin group-IV nuclides") {
  const auto reg = IsotopeRegistry::builtin();
  CHECK(reg.size() == 7);
  for (const char* s : {"13C", "29Si", "73Ge", "115Sn", "117Sn", "119Sn", "207Pb"}) {
    CHECK(reg.contains(s));
  }
  CHECK_THROWS_AS(reg.lookup("31P"), UnknownIsotopeError);
}

TEST_CASE("119Sn entry") {
  const auto& sn = IsotopeRegistry::builtin().lookup("119Sn");
  CHECK(sn.nuclear_spin == NuclearSpin{1, 2});
  CHECK(sn.gyro_ratio_rel_si == doctest::Approx(1.89));
  REQUIRE(sn.eta);
  CHECK(*sn.eta == doctest::Approx(eta_reference::sn_dft));
  CHECK(sn.nuclear_gyro() == doctest::Approx(1.89 * constants::si_29_gyro).epsilon(1e-12));
}

TEST_CASE("29Si gyromagnetic ratio matches the oracle") {
  // mpmath: |mu| = 0.55529 nuclear magnetons, spin 1/2.
  CHECK(constants::si_29_gyro == doctest::Approx(8465499.5883853388).epsilon(1e-12));
  CHECK(constants::electron_gyro == doctest::Approx(28024951424.085099).epsilon(1e-12));
}

TEST_CASE("serialize and parse round-trip exactly") {
  const auto reg = IsotopeRegistry::builtin();
  std::stringstream buf;
  reg.serialize(buf);
  const auto back = IsotopeRegistry::parse(buf);
  REQUIRE(back.symbols() == reg.symbols());
  for (const auto& s : reg.symbols()) CHECK(back.lookup(s) == reg.lookup(s));
}

TEST_CASE("overrides replace a subset of fields") {
  auto reg = IsotopeRegistry::builtin();
  std::istringstream in("[119Sn]\neta = 1200\n");
  reg.apply_overrides(in);
  CHECK(*reg.lookup("119Sn").eta == doctest::Approx(1200.0));
  CHECK(reg.lookup("119Sn").gyro_ratio_rel_si == doctest::Approx(1.89));
}

TEST_CASE("incomplete new nuclide is rejected") {
  auto reg = IsotopeRegistry::builtin();
  std::istringstream in("[31P]\neta = 10\n");
  CHECK_THROWS_AS(reg.apply_overrides(in), InputError);
}

TEST_CASE("contact density conversion is linear and scales with the nuclear gyro ratio") {
  const auto reg = IsotopeRegistry::builtin();
  const auto& si = reg.lookup("29Si");
  const auto& sn = reg.lookup("119Sn");
  const double rho = 1e27;
  const auto a1 = contact_density_to_hyperfine(rho, si);
  const auto a2 = contact_density_to_hyperfine(2 * rho, si);
  CHECK(a2.freq_hz == doctest::Approx(2 * a1.freq_hz).epsilon(1e-14));
  CHECK(a1.energy_j == doctest::Approx(constants::planck_h * a1.freq_hz).epsilon(1e-14));
  CHECK(contact_prefactor_hz(sn) / contact_prefactor_hz(si) == doctest::Approx(1.89).epsilon(1e-14));
}

TEST_CASE("nuclear spin text") {
  CHECK(NuclearSpin::parse("9/2") == NuclearSpin{9, 2});
  CHECK(NuclearSpin{9, 2}.str() == "9/2");
  CHECK_THROWS_AS(NuclearSpin::parse("x"), InputError);
}
