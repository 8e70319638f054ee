#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "bht/bucket.hpp"
#include "bht/core.hpp"
#include "bht/hash.hpp"
#include "bht/keygen.hpp"
#include "bht/probe_stats.hpp"

namespace bht {

namespace detail {
struct aligned_slot_deleter {
  std::size_t alignment = alignof(std::atomic<slot_type>);
  void operator()(std::atomic<slot_type>* p) const {
    ::operator delete[](p, std::align_val_t{alignment});
  }
};
}  // namespace detail

// Static table of m * b slots, all mutation through 64-bit slot atomics.
// Safe for fully concurrent insert and find; no locks anywhere.
class hash_table {
 public:
  explicit hash_table(table_config cfg);

  const table_config& config() const { return cfg_; }
  std::uint64_t num_buckets() const { return cfg_.num_buckets; }
  std::uint32_t bucket_size() const { return cfg_.bucket_size; }
  std::uint64_t capacity() const { return cfg_.capacity; }

  std::uint64_t inserted() const { return inserted_.load(std::memory_order_relaxed); }
  void count_insert() { inserted_.fetch_add(1, std::memory_order_relaxed); }

  load_factor realized_load() const { return {inserted(), capacity()}; }

  bucket_ref bucket(std::uint64_t bucket_id) {
    return bucket_ref(store_.get() + bucket_id * cfg_.bucket_size, cfg_.bucket_size);
  }
  bucket_ref bucket(std::uint64_t bucket_id) const {
    return bucket_ref(store_.get() + bucket_id * cfg_.bucket_size, cfg_.bucket_size);
  }

  std::uint64_t bucket_of(unsigned hash_index, key_type key) const {
    return bucket_index(cfg_.hashes[hash_index], key);
  }

  slot_type slot_at(std::uint64_t index) const { return store_[index].load(std::memory_order_acquire); }
  void poke_slot(std::uint64_t index, slot_type value) {  // fault injection in tests
    store_[index].store(value, std::memory_order_release);
  }

  std::uint64_t occupied_slots() const;

  // Raw little-endian dump of all m*b slots, for diffing builds.
  void dump_store(const std::string& path) const;

  hash_table(hash_table&& other) noexcept
      : cfg_(std::move(other.cfg_)),
        store_(std::move(other.store_)),
        inserted_(other.inserted_.load(std::memory_order_relaxed)) {}
  hash_table& operator=(hash_table&& other) noexcept {
    cfg_ = std::move(other.cfg_);
    store_ = std::move(other.store_);
    inserted_.store(other.inserted_.load(std::memory_order_relaxed), std::memory_order_relaxed);
    return *this;
  }
  hash_table(const hash_table&) = delete;
  hash_table& operator=(const hash_table&) = delete;

 private:
  table_config cfg_;
  std::unique_ptr<std::atomic<slot_type>[], detail::aligned_slot_deleter> store_;
  std::atomic<std::uint64_t> inserted_{0};
};

// Cuckoo insertion (bcht, one_cht): try the first bucket; while it is
// full, exchange with a random resident and move that resident along the
// rotation order of its hash functions. Fails after max_chain evictions.
bool bcht_insert(hash_table& table, kv_pair pair, xorshift_rng& rng, probe_stats& stats);

// Serial probe of the h candidate buckets with early exit on any non-full
// bucket that misses (sound because full buckets never drain).
std::optional<value_type> bcht_find(const hash_table& table, key_type key, probe_stats& stats);

// Two-choice insertion: snapshot both buckets and claim a slot in the less
// loaded one, ties to the first. Placed pairs never move.
bool bp2ht_insert(hash_table& table, kv_pair pair, probe_stats& stats);
std::optional<value_type> bp2ht_find(const hash_table& table, key_type key, probe_stats& stats);

// Iceberg insertion: primary bucket while its load is below the threshold;
// at or past it, the less loaded non-full secondary, falling back to the
// primary when both secondaries are full. `prose_fallback` removes that
// fallback: both secondaries full then means failure.
bool iht_insert(hash_table& table, kv_pair pair, probe_stats& stats, bool prose_fallback = false);
std::optional<value_type> iht_find(const hash_table& table, key_type key, probe_stats& stats);

bool insert_pair(hash_table& table, kv_pair pair, xorshift_rng& rng, probe_stats& stats,
                 bool iht_prose_fallback = false);
std::optional<value_type> find_key(const hash_table& table, key_type key, probe_stats& stats);

enum class build_mode { sequential, parallel };

struct build_options {
  build_mode mode = build_mode::sequential;
  unsigned workers = 0;  // 0 = hardware concurrency
  bool iht_prose_fallback = false;
};

struct build_outcome {
  bool success = false;
  std::uint64_t inserted = 0;
  std::optional<key_type> failed_key;
  probe_stats probes{op_kind::insert};
};

// Inserts every key of the set. Sequential mode is bit-reproducible under
// a fixed config seed; parallel mode partitions keys across workers and
// stops at the first failure.
std::pair<hash_table, build_outcome> build(const key_set& keys,
                                           const table_config& cfg,
                                           build_options opts = {});

}  // namespace bht
