#include "hfgate/lattice.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hfgate/constants.hpp"
#include "hfgate/csv.hpp"
#include "hfgate/errors.hpp"

namespace hfgate {

namespace {

constexpr double kA0 = constants::si_lattice_const_a0;

// Basis offsets in quarter-cell units, for snapping positions back to sites.
constexpr std::array<std::array<int, 3>, 8> kBasisQuarters = {{
    {0, 0, 0}, {0, 2, 2}, {2, 0, 2}, {2, 2, 0}, {1, 1, 1}, {1, 3, 3}, {3, 1, 3}, {3, 3, 1},
}};

}  // namespace

Vec3 site_position(const CellIndex& cell, int basis) {
  const Vec3& off = kDiamondBasis[static_cast<std::size_t>(basis)];
  return {kA0 * cell.i + kA0 * off.x, kA0 * cell.j + kA0 * off.y, kA0 * cell.k + kA0 * off.z};
}

LatticeSite make_site(const CellIndex& cell, int basis) {
  return {cell, basis, site_position(cell, basis)};
}

void SupportRegion::validate() const {
  if (!(lateral_cutoff >= 0.0) || !(z_halfwidth >= 0.0) || !std::isfinite(lateral_cutoff) ||
      !std::isfinite(z_halfwidth)) {
    throw InputError("support region cutoffs must be finite and non-negative");
  }
}

SupportRegion SupportRegion::for_dot(double r0, double z0, double cutoff_factor) {
  if (!(r0 > 0.0) || !(z0 > 0.0) || !(cutoff_factor > 0.0)) {
    throw InputError("dot support requires r0 > 0, z0 > 0 and a positive cutoff factor");
  }
  return {cutoff_factor * r0, 0.5 * z0};
}

double estimate_site_count(const SupportRegion& region) {
  const double volume = std::numbers::pi * region.lateral_cutoff * region.lateral_cutoff * 2.0 *
                        region.z_halfwidth;
  return volume * 8.0 / (kA0 * kA0 * kA0);
}

SiteTable::SiteTable(const SupportRegion& region, std::uint64_t site_limit) : region_(region) {
  region_.validate();
  const double estimate = estimate_site_count(region_);
  if (estimate > static_cast<double>(site_limit)) {
    std::ostringstream msg;
    msg << "lattice region holds ~" << estimate << " sites, above the limit of " << site_limit
        << "; reduce the dot size or lateral cutoff, or raise the site limit";
    throw SizingError(msg.str());
  }

  const double zh = region_.z_halfwidth;
  k_min_ = static_cast<int>(std::floor(-zh / kA0)) - 1;
  const int k_max = static_cast<int>(std::ceil(zh / kA0));
  for (int k = k_min_; k <= k_max; ++k) {
    std::uint8_t mask = 0;
    for (int b = 0; b < 8; ++b) {
      if (std::abs(site_position({0, 0, k}, b).z) < zh) mask |= static_cast<std::uint8_t>(1u << b);
    }
    z_masks_.push_back(mask);
  }

  const double cutoff_sq = region_.lateral_cutoff * region_.lateral_cutoff;
  const int i_min = static_cast<int>(std::floor(-region_.lateral_cutoff / kA0)) - 1;
  const int i_max = static_cast<int>(std::ceil(region_.lateral_cutoff / kA0));
  for (int i = i_min; i <= i_max; ++i) {
    for (int j = i_min; j <= i_max; ++j) {
      std::uint8_t mask = 0;
      for (int b = 0; b < 8; ++b) {
        const Vec3 p = site_position({i, j, 0}, b);
        if (p.x * p.x + p.y * p.y <= cutoff_sq) mask |= static_cast<std::uint8_t>(1u << b);
      }
      if (mask == 0) continue;
      if (prefix_[mask].empty()) {
        auto& pre = prefix_[mask];
        pre.reserve(z_masks_.size() + 1);
        pre.push_back(0);
        for (const auto zm : z_masks_) {
          pre.push_back(pre.back() + static_cast<std::uint32_t>(std::popcount(
                                         static_cast<unsigned>(zm & mask))));
        }
      }
      const std::uint64_t count = column_count(mask);
      if (count == 0) continue;
      columns_.push_back({i, j, mask, total_});
      total_ += count;
    }
  }
  if (total_ > site_limit) {
    throw SizingError("lattice region holds " + std::to_string(total_) +
                      " sites, above the limit of " + std::to_string(site_limit));
  }
}

std::size_t SiteTable::column_of(std::uint64_t index, std::size_t hint) const {
  if (hint < columns_.size() && columns_[hint].offset <= index) {
    // Short forward walk before falling back to bisection.
    for (std::size_t c = hint, steps = 0; c < columns_.size() && steps < 8; ++c, ++steps) {
      const std::uint64_t end = c + 1 < columns_.size() ? columns_[c + 1].offset : total_;
      if (index < end) return c;
    }
  }
  const auto it = std::upper_bound(
      columns_.begin(), columns_.end(), index,
      [](std::uint64_t value, const Column& col) { return value < col.offset; });
  return static_cast<std::size_t>(std::distance(columns_.begin(), it)) - 1;
}

LatticeSite SiteTable::site_in_column(const Column& col, std::uint64_t rank) const {
  const auto& pre = prefix_[col.mask];
  // First layer whose cumulative count exceeds rank.
  const auto it = std::upper_bound(pre.begin(), pre.end(), static_cast<std::uint32_t>(rank));
  const auto dk = static_cast<std::size_t>(std::distance(pre.begin(), it)) - 1;
  std::uint64_t within = rank - pre[dk];
  const unsigned m = z_masks_[dk] & col.mask;
  int b = 0;
  for (; b < 8; ++b) {
    if (m & (1u << b)) {
      if (within == 0) break;
      --within;
    }
  }
  return make_site({col.i, col.j, k_min_ + static_cast<int>(dk)}, b);
}

LatticeSite SiteTable::at(std::uint64_t index) const {
  std::size_t hint = 0;
  return locate(index, hint);
}

LatticeSite SiteTable::locate(std::uint64_t index, std::size_t& column_hint) const {
  if (index >= total_) {
    throw std::out_of_range("site index " + std::to_string(index) + " out of range");
  }
  column_hint = column_of(index, column_hint);
  const Column& col = columns_[column_hint];
  return site_in_column(col, index - col.offset);
}

std::vector<LatticeSite> enumerate_sites(const SupportRegion& region, std::uint64_t site_limit) {
  const SiteTable table(region, site_limit);
  std::vector<LatticeSite> sites;
  sites.reserve(table.size());
  table.for_each([&](std::uint64_t, const LatticeSite& s) { sites.push_back(s); });
  return sites;
}

void validate_ppm(double ppm) {
  if (!(ppm >= 0.0 && ppm <= 1e6)) {
    throw InputError("occupancy must be within [0, 1e6] ppm");
  }
}

void occupied_in_block(std::uint64_t total_sites, double ppm, std::uint64_t seed,
                       std::uint64_t block, std::vector<std::uint64_t>& out) {
  const std::uint64_t begin = block * kOccupancyBlock;
  if (begin >= total_sites || ppm <= 0.0) return;
  const std::uint64_t end = std::min(total_sites, begin + kOccupancyBlock);
  if (ppm >= 1e6) {
    for (std::uint64_t idx = begin; idx < end; ++idx) out.push_back(idx);
    return;
  }
  const double log_q = std::log1p(-ppm * 1e-6);
  KeyedRng rng(seed, StreamTag::occupancy, block);
  std::uint64_t idx = begin;
  while (true) {
    // Failures before the next success ~ Geometric(p).
    const double gap = std::floor(std::log(rng.uniform_open_low()) / log_q);
    if (gap >= static_cast<double>(end - idx)) break;
    idx += static_cast<std::uint64_t>(gap);
    out.push_back(idx);
    ++idx;
    if (idx >= end) break;
  }
}

std::vector<std::uint64_t> occupied_indices(std::uint64_t total_sites, double ppm,
                                            std::uint64_t seed) {
  validate_ppm(ppm);
  std::vector<std::uint64_t> out;
  const std::uint64_t blocks = (total_sites + kOccupancyBlock - 1) / kOccupancyBlock;
  for (std::uint64_t b = 0; b < blocks; ++b) occupied_in_block(total_sites, ppm, seed, b, out);
  return out;
}

BathRealization sample_occupancy(const SiteTable& table, const IsotopeSpec& isotope, double ppm,
                                 std::uint64_t seed) {
  BathRealization bath;
  bath.species.push_back(isotope);
  bath.seed = seed;
  bath.ppm = ppm;
  for_each_occupied(table, ppm, seed,
                    [&](std::uint64_t, const LatticeSite& s) { bath.sites.push_back({s, 0}); });
  return bath;
}

BathRealization sample_occupancy(const SupportRegion& region, const IsotopeSpec& isotope,
                                 double ppm, std::uint64_t seed) {
  validate_ppm(ppm);
  return sample_occupancy(SiteTable(region), isotope, ppm, seed);
}

LatticeSite site_from_position(const Vec3& position) {
  const std::array<double, 3> coords = {position.x / kA0, position.y / kA0, position.z / kA0};
  CellIndex cell;
  std::array<int, 3> quarters{};
  std::array<int*, 3> cell_ref = {&cell.i, &cell.j, &cell.k};
  for (std::size_t a = 0; a < 3; ++a) {
    const double q = std::round(4.0 * coords[a]);
    if (std::abs(4.0 * coords[a] - q) > 4e-6) {
      throw InputError("position is not on the diamond lattice");
    }
    const auto qi = static_cast<long long>(q);
    const long long c = qi >= 0 ? qi / 4 : -((-qi + 3) / 4);
    *cell_ref[a] = static_cast<int>(c);
    quarters[a] = static_cast<int>(qi - 4 * c);
  }
  for (int b = 0; b < 8; ++b) {
    if (kBasisQuarters[static_cast<std::size_t>(b)] == quarters) return make_site(cell, b);
  }
  throw InputError("position is on the fcc sublattice grid but not a diamond-cubic site");
}

void write_bath_csv(std::ostream& out, const BathRealization& bath) {
  CsvWriter csv(out, {"x_nm", "y_nm", "z_nm", "isotope"});
  for (const auto& s : bath.sites) {
    csv.cell(s.site.position.x * 1e9)
        .cell(s.site.position.y * 1e9)
        .cell(s.site.position.z * 1e9)
        .cell(bath.isotope_of(s).symbol);
    csv.end_row();
  }
}

BathRealization read_bath_csv(std::istream& in, const IsotopeRegistry& registry) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("bath CSV is empty");
  const auto header = split_csv_line(line);
  if (header != std::vector<std::string>{"x_nm", "y_nm", "z_nm", "isotope"}) {
    throw InputError("bath CSV header must be x_nm,y_nm,z_nm,isotope");
  }
  BathRealization bath;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 4) {
      throw InputError("bath CSV row " + std::to_string(row) + " must have 4 columns");
    }
    const Vec3 p{parse_double(cells[0]) * 1e-9, parse_double(cells[1]) * 1e-9,
                 parse_double(cells[2]) * 1e-9};
    const auto& iso = registry.lookup(cells[3]);
    std::size_t species = bath.species.size();
    for (std::size_t s = 0; s < bath.species.size(); ++s) {
      if (bath.species[s].symbol == iso.symbol) species = s;
    }
    if (species == bath.species.size()) bath.species.push_back(iso);
    bath.sites.push_back({site_from_position(p), species});
  }
  return bath;
}

}  // namespace hfgate
