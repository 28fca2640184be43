#pragma once

#include <cstdint>

namespace walkdiv {

// SplitMix64 run in counter mode: output i of a stream is a pure function of
// (key, i), so any bit of any walk can be produced independently of order or
// thread count. Per-walk stream keys are derived from (master seed, walk
// index) through the same finalizer.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t walk_index) {
    return mix(master_seed ^ mix(walk_index * 0xD1B54A32D192ED03ull + 1));
  }

  std::uint64_t word(std::uint64_t i) const { return mix(key_ + i * 0x9E3779B97F4A7C15ull); }

  // n-th Bernoulli bit (0-indexed), 64 bits per word.
  bool bit(std::uint64_t n) const { return (word(n >> 6) >> (n & 63)) & 1; }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

}  // namespace walkdiv
