#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace disxy {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Derives a stream key from a root seed and a list of integer coordinates
// (replica, epoch, site, ...). Different coordinate tuples give unrelated keys.
constexpr std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t k = mix64(seed + kGolden);
  for (std::uint64_t p : parts) k = mix64(k ^ mix64(p + kGolden));
  return k;
}

constexpr double to_unit(std::uint64_t x) noexcept {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Counter-based generator: the n-th output is a pure function of (key, n),
// so streams can be created per site or per replica in any order.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  constexpr explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept { return mix64(key_ + kGolden * ++counter_); }

  // Uniform on [0, 1).
  constexpr double uniform() noexcept { return to_unit((*this)()); }

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace disxy
