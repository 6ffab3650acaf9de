#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace erc::rng {

// Counter-based generator built on the splitmix64 finalizer.  Every draw is a
// pure function of (key, counter), so matrix entries and per-trial noise can be
// regenerated out of order, from any thread, with no stored state.

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

constexpr std::uint64_t mix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Child key for an independent stream. Distinct tags give uncorrelated streams.
constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t tag) {
  return mix64(key ^ mix64(tag ^ 0x632be59bd9b4e019ull));
}

inline std::uint64_t at(std::uint64_t key, std::uint64_t counter) {
  return mix64(key + counter * kGolden);
}

// Uniform on (0, 1]; the open lower end keeps log(u) finite in Box-Muller.
inline double uniform_at(std::uint64_t key, std::uint64_t counter) {
  return static_cast<double>((at(key, counter) >> 11) + 1) * 0x1.0p-53;
}

// Standard normal draw i consumes counters 2i and 2i+1 (cosine branch only, so
// the i-th draw never depends on its neighbours).
inline double gaussian_at(std::uint64_t key, std::uint64_t index) {
  const double u1 = uniform_at(key, 2 * index);
  const double u2 = uniform_at(key, 2 * index + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return r * std::cos(6.283185307179586476925286766559 * u2);
}

class Stream {
 public:
  explicit Stream(std::uint64_t key, std::uint64_t counter = 0)
      : key_(key), counter_(counter) {}

  std::uint64_t next_u64() { return at(key_, counter_++); }

  double next_double() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double next_gaussian() {
    const double g = gaussian_at(key_, counter_ / 2);
    counter_ += 2;
    return g;
  }

  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    for (;;) {
      const std::uint64_t v = next_u64();
      if (v < limit) return v % bound;
    }
  }

  bool next_bit() { return (next_u64() >> 63) != 0; }

  std::vector<std::uint8_t> next_bits(std::size_t count) {
    std::vector<std::uint8_t> out(count);
    std::uint64_t word = 0;
    int avail = 0;
    for (std::size_t i = 0; i < count; ++i) {
      if (avail == 0) {
        word = next_u64();
        avail = 64;
      }
      out[i] = static_cast<std::uint8_t>(word & 1u);
      word >>= 1;
      --avail;
    }
    return out;
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

inline std::vector<int> random_permutation(int n, Stream& s) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(s.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

}  // namespace erc::rng
