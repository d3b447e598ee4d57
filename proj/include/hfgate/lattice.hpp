#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hfgate/isotope.hpp"
#include "hfgate/keyed_rng.hpp"

namespace hfgate {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

struct CellIndex {
  int i = 0;
  int j = 0;
  int k = 0;

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

// Diamond-cubic basis in units of the conventional cell edge a0.
inline constexpr std::array<Vec3, 8> kDiamondBasis = {{
    {0.00, 0.00, 0.00},
    {0.00, 0.50, 0.50},
    {0.50, 0.00, 0.50},
    {0.50, 0.50, 0.00},
    {0.25, 0.25, 0.25},
    {0.25, 0.75, 0.75},
    {0.75, 0.25, 0.75},
    {0.75, 0.75, 0.25},
}};

struct LatticeSite {
  CellIndex cell;
  int basis = 0;
  Vec3 position;  // m, dot-centered frame

  friend bool operator==(const LatticeSite&, const LatticeSite&) = default;
};

// position = a0 * cell + a0 * basis_offset.
Vec3 site_position(const CellIndex& cell, int basis);
LatticeSite make_site(const CellIndex& cell, int basis);

// Cylinder |z| < z_halfwidth, x^2 + y^2 <= lateral_cutoff^2 about the dot axis.
struct SupportRegion {
  double lateral_cutoff = 0.0;  // m
  double z_halfwidth = 0.0;     // m

  void validate() const;
  bool contains(const Vec3& p) const {
    return std::abs(p.z) < z_halfwidth && p.x * p.x + p.y * p.y <= lateral_cutoff * lateral_cutoff;
  }

  // Region covering a dot of radius r0 and thickness z0: lateral cutoff
  // cutoff_factor * r0, half-width z0 / 2.
  static SupportRegion for_dot(double r0, double z0, double cutoff_factor = 5.0);
};

inline constexpr std::uint64_t kDefaultSiteLimit = 100'000'000;

// Expected number of sites from the region volume and the 8 / a0^3 density.
double estimate_site_count(const SupportRegion& region);

// Compact index of every lattice site in a region, in enumeration order:
// lexicographic by cell (i, j, k), then by basis index. Maps a site index to
// its site in O(log columns) without materializing the full list.
class SiteTable {
 public:
  explicit SiteTable(const SupportRegion& region, std::uint64_t site_limit = kDefaultSiteLimit);

  const SupportRegion& region() const { return region_; }
  std::uint64_t size() const { return total_; }

  LatticeSite at(std::uint64_t index) const;

  // Same as at(), reusing a column hint; efficient for increasing indices.
  LatticeSite locate(std::uint64_t index, std::size_t& column_hint) const;

  // Calls fn(index, site) for every site in enumeration order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for_each_range(0, total_, std::forward<Fn>(fn));
  }

  // Calls fn(index, site) for indices in [begin, end), in order.
  template <class Fn>
  void for_each_range(std::uint64_t begin, std::uint64_t end, Fn&& fn) const;

 private:
  struct Column {
    int i;
    int j;
    std::uint8_t mask;  // basis indices inside the lateral cutoff
    std::uint64_t offset;
  };

  std::size_t column_of(std::uint64_t index, std::size_t hint) const;
  LatticeSite site_in_column(const Column& col, std::uint64_t rank) const;
  std::uint64_t column_count(std::uint8_t mask) const { return prefix_[mask].back(); }

  SupportRegion region_;
  int k_min_ = 0;
  std::vector<std::uint8_t> z_masks_;  // per k layer: basis indices inside |z| < z_half
  std::vector<Column> columns_;
  std::array<std::vector<std::uint32_t>, 256> prefix_;  // per lateral mask: cumulative count by k
  std::uint64_t total_ = 0;
};

// Materialized enumeration, for small regions and tests.
std::vector<LatticeSite> enumerate_sites(const SupportRegion& region,
                                         std::uint64_t site_limit = kDefaultSiteLimit);

// Occupancy sampling. The site index space is cut into fixed blocks; each
// block draws geometric gaps from a KeyedRng keyed by (seed, block), so which
// sites are occupied depends only on (seed, ppm, site index) and not on the
// order in which blocks are visited or on the worker count.
inline constexpr std::uint64_t kOccupancyBlock = 1ULL << 16;

void validate_ppm(double ppm);

// Appends occupied site indices in [block * kOccupancyBlock, ...) to `out`.
void occupied_in_block(std::uint64_t total_sites, double ppm, std::uint64_t seed,
                       std::uint64_t block, std::vector<std::uint64_t>& out);

// All occupied site indices, ascending.
std::vector<std::uint64_t> occupied_indices(std::uint64_t total_sites, double ppm,
                                            std::uint64_t seed);

// Calls fn(index, site) for every occupied site in ascending index order.
template <class Fn>
void for_each_occupied(const SiteTable& table, double ppm, std::uint64_t seed, Fn&& fn);

struct BathSite {
  LatticeSite site;
  std::size_t species = 0;  // index into BathRealization::species
};

struct BathRealization {
  std::vector<IsotopeSpec> species;
  std::vector<BathSite> sites;
  std::uint64_t seed = 0;
  double ppm = 0.0;

  const IsotopeSpec& isotope_of(const BathSite& s) const { return species.at(s.species); }
};

BathRealization sample_occupancy(const SiteTable& table, const IsotopeSpec& isotope, double ppm,
                                 std::uint64_t seed);
BathRealization sample_occupancy(const SupportRegion& region, const IsotopeSpec& isotope,
                                 double ppm, std::uint64_t seed);

// CSV with header x_nm,y_nm,z_nm,isotope. Reading snaps coordinates back onto
// the diamond lattice and resolves symbols through the registry.
void write_bath_csv(std::ostream& out, const BathRealization& bath);
BathRealization read_bath_csv(std::istream& in, const IsotopeRegistry& registry);

// Recovers the lattice site from a position; throws InputError when the
// position is not within 1e-6 a0 of a diamond-cubic site.
LatticeSite site_from_position(const Vec3& position);

template <class Fn>
void SiteTable::for_each_range(std::uint64_t begin, std::uint64_t end, Fn&& fn) const {
  end = std::min(end, total_);
  if (begin >= end) return;
  const int nk = static_cast<int>(z_masks_.size());
  std::size_t c = column_of(begin, 0);
  std::uint64_t index = columns_[c].offset;
  for (; c < columns_.size() && index < end; ++c) {
    const Column& col = columns_[c];
    if (index + column_count(col.mask) <= begin) {
      index += column_count(col.mask);
      continue;
    }
    for (int dk = 0; dk < nk && index < end; ++dk) {
      const unsigned m = z_masks_[static_cast<std::size_t>(dk)] & col.mask;
      if (m == 0) continue;
      const CellIndex cell{col.i, col.j, k_min_ + dk};
      for (int b = 0; b < 8 && index < end; ++b) {
        if (!(m & (1u << b))) continue;
        if (index >= begin) fn(index, make_site(cell, b));
        ++index;
      }
    }
  }
}

template <class Fn>
void for_each_occupied(const SiteTable& table, double ppm, std::uint64_t seed, Fn&& fn) {
  validate_ppm(ppm);
  const std::uint64_t n = table.size();
  const std::uint64_t blocks = (n + kOccupancyBlock - 1) / kOccupancyBlock;
  std::vector<std::uint64_t> indices;
  std::size_t hint = 0;
  for (std::uint64_t block = 0; block < blocks; ++block) {
    indices.clear();
    occupied_in_block(n, ppm, seed, block, indices);
    for (const auto idx : indices) fn(idx, table.locate(idx, hint));
  }
}

}  // namespace hfgate
