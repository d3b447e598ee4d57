#include "hfgate/relativistic.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "hfgate/constants.hpp"
#include "hfgate/errors.hpp"
#include "hfgate/isotope.hpp"

namespace hfgate {

double iu_correction(int n, int z) {
  if (n < 1 || z < 1) throw InputError("principal quantum number and Z must be at least 1");
  const double az = constants::fine_structure_alpha * z;
  if (az >= 1.0) throw InputError("alpha Z >= 1: the series expansion does not apply");
  const double nd = static_cast<double>(n);
  return 1.0 + (nd * nd + 9.0 * nd - 11.0) / (6.0 * nd * nd) * az * az;
}

double otten_ratio(double z1, double mass1, double z2, double mass2) {
  if (!(z1 > 0.0) || !(mass1 > 0.0) || !(z2 > 0.0) || !(mass2 > 0.0)) {
    throw InputError("Z and atomic mass must be positive");
  }
  return (z1 * z1 / std::cbrt(mass1)) / (z2 * z2 / std::cbrt(mass2));
}

std::vector<GroupIVElement> default_group_iv() {
  const double si = eta_reference::si_wilson;
  std::vector<GroupIVElement> rows = {
      {"C", 6, 12.011, 2, 0.0, true},
      {"Si", 14, 28.085, 3, 1.0, false},
      {"Ge", 32, 72.630, 4, eta_reference::ge_kerckhoff / si, false},
      {"Sn", 50, 118.71, 5, eta_reference::sn_dft / si, false},
      {"Pb", 82, 207.2, 6, 0.0, true},
  };
  // Lagrange quadratic through the Si, Ge and Sn points.
  const auto& a = rows[1];
  const auto& b = rows[2];
  const auto& c = rows[3];
  auto lagrange = [&](double x) {
    const double xa = a.z, xb = b.z, xc = c.z;
    return a.eta_ratio * (x - xb) * (x - xc) / ((xa - xb) * (xa - xc)) +
           b.eta_ratio * (x - xa) * (x - xc) / ((xb - xa) * (xb - xc)) +
           c.eta_ratio * (x - xa) * (x - xb) / ((xc - xa) * (xc - xb));
  };
  rows[0].eta_ratio = lagrange(rows[0].z);
  rows[4].eta_ratio = lagrange(rows[4].z);
  return rows;
}

std::vector<ContactRatioRow> ratio_table(std::span<const GroupIVElement> elements) {
  const GroupIVElement* ref = nullptr;
  for (const auto& e : elements) {
    if (e.z == 14) ref = &e;
  }
  if (!ref) throw InputError("ratio table needs the Si reference (Z = 14)");
  const double ref_b = iu_correction(ref->valence_n, ref->z);
  std::vector<ContactRatioRow> rows;
  for (const auto& e : elements) {
    if (!(e.eta_ratio > 0.0)) throw InputError("bunching ratio for " + e.symbol + " must be positive");
    ContactRatioRow r;
    r.symbol = e.symbol;
    r.z = e.z;
    r.eta_dft = e.eta_ratio / ref->eta_ratio;
    r.eta_iu = r.eta_dft * iu_correction(e.valence_n, e.z) / ref_b;
    r.otten = otten_ratio(e.z, e.atomic_weight, ref->z, ref->atomic_weight);
    r.extrapolated = e.extrapolated;
    rows.push_back(r);
  }
  return rows;
}

QuadraticFit quad_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("fit abscissae and ordinates differ in length");
  if (x.size() < 3) throw InputError("quadratic fit needs at least 3 points");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    design(i, 0) = 1.0;
    design(i, 1) = xi;
    design(i, 2) = xi * xi;
    rhs(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);
  QuadraticFit fit{coef(0), coef(1), coef(2), std::nullopt};
  const double mean = rhs.mean();
  const double ss_tot = (rhs.array() - mean).square().sum();
  if (ss_tot == 0.0) return fit;
  const double ss_res = (rhs - design * coef).squaredNorm();
  fit.r2 = 1.0 - ss_res / ss_tot;
  return fit;
}

QuadraticFit quad_fit(std::span<const ContactRatioRow> rows, RatioColumn column) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& r : rows) {
    x.push_back(r.z);
    switch (column) {
      case RatioColumn::dft:
        y.push_back(r.eta_dft);
        break;
      case RatioColumn::iu:
        y.push_back(r.eta_iu);
        break;
      case RatioColumn::otten:
        y.push_back(r.otten);
        break;
    }
  }
  return quad_fit(x, y);
}

}  // namespace hfgate
