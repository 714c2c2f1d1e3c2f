#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

namespace randinv {

// Counter-based 64-bit generator (SplitMix-style state advance).
// Substreams are derived by hashing (master_seed, stream_index), so
// (seed, stream, draw number) fully determines every output on every
// platform. Distinct stream indices give independent-quality streams.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_index = 0)
      : state_(mix(mix(master_seed + kGamma) ^ mix(stream_index * kGamma + kGamma))) {}

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform double in [0, 1) using the top 53 bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("RngStream::next_below: n must be positive");
    return next_u64() % n;
  }

  // Categorical draw: index i with probability probs[i]. The cumulative
  // walk plus a final clamp makes the draw total even if the probabilities
  // sum to slightly less than 1.
  std::size_t next_index(std::span<const double> probs) {
    if (probs.empty()) throw std::invalid_argument("RngStream::next_index: empty distribution");
    const double u = next_unit();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return probs.size() - 1;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace randinv
