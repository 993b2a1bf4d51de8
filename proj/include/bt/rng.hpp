#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace bt::rng {

// SplitMix64. Used for every random decision in the toolkit so that outputs
// are byte-identical across platforms and standard-library versions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform-ish value in [0, n); n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Derives an independent stream for a named stage from a master seed.
inline std::uint64_t substream(std::uint64_t seed, std::string_view stage) {
  SplitMix64 g(seed ^ fnv1a64(stage));
  return g.next();
}

// Fisher-Yates with our own generator; std::shuffle is implementation-defined.
template <class T>
void shuffle(std::vector<T>& v, SplitMix64& g) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(g.below(i));
    using std::swap;
    swap(v[i - 1], v[j]);
  }
}

}  // namespace bt::rng
