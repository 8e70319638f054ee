#include "bht/keygen.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "bht/hash.hpp"

namespace bht {

std::vector<hash_params> draw_hash_params(xorshift_rng& rng, unsigned count, std::uint64_t range) {
  std::vector<hash_params> out;
  out.reserve(count);
  constexpr auto p = static_cast<std::uint32_t>(hash_params::prime);
  for (unsigned i = 0; i < count; ++i) {
    hash_params hp;
    hp.alpha = 1 + rng.next_below(p - 1);
    hp.beta = rng.next_below(p);
    hp.range = range;
    out.push_back(hp);
  }
  return out;
}

namespace {

// Bounded uniform draw from a fully specified engine, by rejection, so the
// streams are identical on every platform (std::uniform_int_distribution
// is implementation-defined).
std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = eng();
  } while (x >= limit);
  return x % bound;
}

template <typename T>
void shuffle_deterministic(std::vector<T>& v, std::mt19937_64& eng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[uniform_below(eng, i)]);
}

}  // namespace

key_set generate_keys(std::uint64_t seed, std::size_t n) {
  key_set out;
  out.seed = seed;
  out.keys.reserve(n);
  std::mt19937_64 eng(seed);
  std::unordered_set<key_type> seen;
  seen.reserve(n * 2);
  while (out.keys.size() < n) {
    auto k = static_cast<key_type>(eng() >> 32);
    if (k == empty_key) continue;
    if (!seen.insert(k).second) continue;
    out.keys.push_back(k);
  }
  return out;
}

std::vector<query> generate_queries(const key_set& keys,
                                    double positive_ratio,
                                    std::size_t q,
                                    std::uint64_t seed) {
  if (positive_ratio < 0.0 || positive_ratio > 1.0)
    throw std::invalid_argument("generate_queries: positive_ratio must be in [0, 1]");
  const auto n_pos = static_cast<std::size_t>(std::llround(positive_ratio * static_cast<double>(q)));
  if (n_pos > keys.size())
    throw std::invalid_argument("generate_queries: not enough keys for the requested positive ratio");

  std::mt19937_64 eng(mix_seed(seed, 0x71756572ull));
  std::vector<query> out;
  out.reserve(q);

  // Positives: partial Fisher-Yates over a copy of the key list.
  std::vector<key_type> pool(keys.keys);
  for (std::size_t i = 0; i < n_pos; ++i) {
    std::size_t j = i + uniform_below(eng, pool.size() - i);
    std::swap(pool[i], pool[j]);
    out.push_back({pool[i], value_for_key(pool[i]), true});
  }

  // Negatives: rejection against the inserted set.
  std::unordered_set<key_type> member(keys.keys.begin(), keys.keys.end());
  while (out.size() < q) {
    auto k = static_cast<key_type>(eng() >> 32);
    if (k == empty_key || member.count(k)) continue;
    out.push_back({k, 0, false});
  }

  shuffle_deterministic(out, eng);
  return out;
}

void save_keys(const std::string& path, const key_set& keys) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_keys: cannot open " + path);
  for (key_type k : keys.keys) {
    unsigned char bytes[4] = {static_cast<unsigned char>(k & 0xFF),
                              static_cast<unsigned char>((k >> 8) & 0xFF),
                              static_cast<unsigned char>((k >> 16) & 0xFF),
                              static_cast<unsigned char>((k >> 24) & 0xFF)};
    f.write(reinterpret_cast<const char*>(bytes), 4);
  }
  if (!f) throw std::runtime_error("save_keys: write failed for " + path);
}

key_set load_keys(const std::string& path, std::uint64_t seed) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_keys: cannot open " + path);
  key_set out;
  out.seed = seed;
  unsigned char bytes[4];
  while (f.read(reinterpret_cast<char*>(bytes), 4)) {
    key_type k = static_cast<key_type>(bytes[0]) | (static_cast<key_type>(bytes[1]) << 8) |
                 (static_cast<key_type>(bytes[2]) << 16) | (static_cast<key_type>(bytes[3]) << 24);
    out.keys.push_back(k);
  }
  return out;
}

}  // namespace bht
