#include "bht/oracle.hpp"

#include <algorithm>
#include <random>

namespace bht {

reference_map::reference_map(const key_set& keys) {
  entries.reserve(keys.size() * 2);
  for (key_type k : keys.keys) entries.emplace(k, value_for_key(k));
}

membership_report check_membership(const hash_table& table,
                                   const key_set& keys,
                                   std::uint64_t n_negative,
                                   std::uint64_t seed) {
  reference_map ref(keys);
  membership_report report;
  probe_stats scratch{op_kind::find};

  for (key_type k : keys.keys) {
    auto found = find_key(table, k, scratch);
    if (!found)
      ++report.false_negatives;
    else if (*found != ref.entries.at(k))
      ++report.wrong_values;
  }

  std::mt19937_64 eng(mix_seed(seed, 0x6e656761ull));
  for (std::uint64_t i = 0; i < n_negative; ++i) {
    key_type k;
    do {
      k = static_cast<key_type>(eng() >> 32);
    } while (k == empty_key || ref.contains(k));
    if (find_key(table, k, scratch)) ++report.false_positives;
  }
  return report;
}

std::uint64_t check_admissibility(const hash_table& table) {
  const table_config& cfg = table.config();
  const unsigned h = hash_count(cfg.kind);
  std::uint64_t violations = 0;
  for (std::uint64_t slot = 0; slot < cfg.capacity; ++slot) {
    kv_pair p = unpack_slot(table.slot_at(slot));
    if (p.key == empty_key) continue;
    const std::uint64_t bucket_id = slot / cfg.bucket_size;
    bool admissible = false;
    for (unsigned i = 0; i < h && !admissible; ++i)
      admissible = table.bucket_of(i, p.key) == bucket_id;
    if (!admissible) ++violations;
  }
  return violations;
}

std::optional<value_type> bcht_find_no_early_exit(const hash_table& table, key_type key) {
  const unsigned h = hash_count(table.config().kind);
  for (unsigned i = 0; i < h; ++i) {
    bucket_ref bucket = table.bucket(table.bucket_of(i, key));
    if (auto v = bucket.find_key_value(key)) return v;
  }
  return std::nullopt;
}

double brute_force_peak_load(table_kind kind,
                             std::uint32_t bucket_size,
                             std::optional<std::uint32_t> threshold,
                             std::uint64_t num_buckets,
                             unsigned trials,
                             std::uint64_t seed) {
  const std::uint64_t capacity = num_buckets * bucket_size;

  auto succeeds_at = [&](std::uint64_t n) {
    if (n == 0) return true;
    unsigned ok = 0;
    for (unsigned t = 0; t < trials; ++t) {
      // make_config may round the bucket count up; pin it back so the
      // instance stays at the requested m
      table_config cfg = make_config(kind, n, static_cast<double>(n) / static_cast<double>(capacity),
                                     bucket_size, threshold, mix_seed(seed, t * 7919 + n));
      cfg.num_buckets = num_buckets;
      cfg.capacity = capacity;
      for (auto& hp : cfg.hashes) hp.range = num_buckets;
      key_set keys = generate_keys(mix_seed(seed, 0x6b657921ull + t), n);
      auto [table, outcome] = build(keys, cfg);
      ok += outcome.success;
    }
    return static_cast<double>(ok) / trials >= 0.99;
  };

  std::uint64_t lo = 0, hi = capacity + 1;  // lo always succeeds, hi fails
  if (succeeds_at(capacity)) return 1.0;
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    (succeeds_at(mid) ? lo : hi) = mid;
  }
  return static_cast<double>(lo) / static_cast<double>(capacity);
}

}  // namespace bht
