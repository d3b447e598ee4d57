#pragma once

#include <cstdint>
#include <limits>

namespace hfgate {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t combine_keys(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL));
}

// Stream tags separating independent uses of one user seed.
enum class StreamTag : std::uint64_t {
  occupancy = 1,
  valley_phase = 2,
  noise = 3,
  gaussian_check = 4,
};

// Counter-based generator: the n-th output is a pure function of
// (key, n), so streams keyed by (seed, tag, index) can be evaluated in any
// order and on any worker. Satisfies UniformRandomBitGenerator.
class KeyedRng {
 public:
  using result_type = std::uint64_t;

  explicit KeyedRng(std::uint64_t key) : key_(mix64(key)) {}
  KeyedRng(std::uint64_t seed, StreamTag tag, std::uint64_t index)
      : KeyedRng(combine_keys(combine_keys(seed, static_cast<std::uint64_t>(tag)), index)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  // Uniform in (0, 1].
  double uniform_open_low() { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace hfgate
