#pragma once

#include <cstdint>
#include <vector>

namespace bht {

// h(k) = ((alpha * k + beta) mod p) mod range with p = 4294967291, the
// largest 32-bit prime. alpha, beta < p and k < 2^32, so the widened
// product never overflows 64 bits.
struct hash_params {
  static constexpr std::uint64_t prime = 4294967291ull;

  std::uint64_t alpha = 1;  // in [1, p-1]
  std::uint64_t beta = 0;   // in [0, p-1]
  std::uint64_t range = 1;  // L = number of buckets

  friend bool operator==(const hash_params&, const hash_params&) = default;
};

inline std::uint64_t bucket_index(const hash_params& hp, std::uint32_t key) {
  return ((hp.alpha * key + hp.beta) % hash_params::prime) % hp.range;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Derives independent seed streams from (seed, stream id).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x9E3779B97F4A7C15ull));
}

// Marsaglia xorshift64 (shifts 13, 7, 17), period 2^64 - 1. The seed is
// run through splitmix64; a zero state is remapped to a fixed constant.
class xorshift_rng {
 public:
  explicit xorshift_rng(std::uint64_t seed) : state_(splitmix64(seed)) {
    if (state_ == 0) state_ = 0xD1B54A32D192ED03ull;
  }

  std::uint64_t next() {
    std::uint64_t x = state_;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    state_ = x;
    return x;
  }

  // Uniform draw from [0, bound) via fixed-point multiply on the high
  // 32 bits; bias is below 2^-32 per draw.
  std::uint32_t next_below(std::uint32_t bound) {
    return static_cast<std::uint32_t>(((next() >> 32) * bound) >> 32);
  }

 private:
  std::uint64_t state_;
};

// `count` fresh (alpha, beta) pairs with alpha uniform in [1, p-1] and
// beta uniform in [0, p-1], deterministic under the rng state.
std::vector<hash_params> draw_hash_params(xorshift_rng& rng, unsigned count, std::uint64_t range);

}  // namespace bht
