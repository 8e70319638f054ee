#include "bht/table.hpp"

#include <algorithm>
#include <fstream>
#include <new>
#include <stdexcept>
#include <thread>

namespace bht {

namespace {

constexpr std::uint64_t eviction_stream(unsigned worker) { return 0x65766963ull + worker; }

void require_kind(const hash_table& table, bool ok, const char* op) {
  if (!ok) throw std::logic_error(std::string(op) + ": wrong table kind " + to_string(table.config().kind));
}

}  // namespace

hash_table::hash_table(table_config cfg) : cfg_(std::move(cfg)) {
  if (cfg_.hashes.size() != hash_count(cfg_.kind))
    throw std::invalid_argument("hash_table: config carries wrong number of hash functions");
  const std::size_t alignment =
      std::max<std::size_t>(alignof(std::atomic<slot_type>), std::size_t{cfg_.bucket_size} * sizeof(slot_type));
  auto* raw = static_cast<std::atomic<slot_type>*>(
      ::operator new[](cfg_.capacity * sizeof(std::atomic<slot_type>), std::align_val_t{alignment}));
  store_ = std::unique_ptr<std::atomic<slot_type>[], detail::aligned_slot_deleter>(
      raw, detail::aligned_slot_deleter{alignment});
  for (std::uint64_t i = 0; i < cfg_.capacity; ++i)
    new (&raw[i]) std::atomic<slot_type>(empty_slot);
}

std::uint64_t hash_table::occupied_slots() const {
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < cfg_.capacity; ++i)
    count += (store_[i].load(std::memory_order_relaxed) & 0xFFFFFFFFu) != empty_key;
  return count;
}

void hash_table::dump_store(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("dump_store: cannot open " + path);
  for (std::uint64_t i = 0; i < cfg_.capacity; ++i) {
    slot_type s = store_[i].load(std::memory_order_acquire);
    unsigned char bytes[8];
    for (int byte = 0; byte < 8; ++byte) bytes[byte] = static_cast<unsigned char>((s >> (8 * byte)) & 0xFF);
    f.write(reinterpret_cast<const char*>(bytes), 8);
  }
  if (!f) throw std::runtime_error("dump_store: write failed for " + path);
}

bool bcht_insert(hash_table& table, kv_pair pair, xorshift_rng& rng, probe_stats& stats) {
  const table_config& cfg = table.config();
  require_kind(table, cfg.kind == table_kind::bcht || cfg.kind == table_kind::one_cht, "bcht_insert");
  const unsigned h = hash_count(cfg.kind);
  const std::uint32_t b = cfg.bucket_size;

  stats.begin_op();
  std::uint64_t bucket_id = table.bucket_of(0, pair.key);
  std::uint32_t chain = 0;
  for (;;) {
    bucket_ref bucket = table.bucket(bucket_id);
    record_probe(stats);
    const std::uint32_t load = bucket.compute_load();
    if (load == b) {
      if (chain == cfg.max_chain) return false;
      // Cuckoo a random resident out and continue with it, starting from
      // the hash function after the one that stored it here (lowest index
      // on ties).
      kv_pair victim = unpack_slot(bucket.exch_at_slot(pair, rng.next_below(b)));
      std::uint64_t candidates[4];
      for (unsigned i = 0; i < h; ++i) candidates[i] = table.bucket_of(i, victim.key);
      std::uint64_t next = candidates[0];
      for (unsigned i = 0; i < h; ++i) {
        if (candidates[i] == bucket_id) {
          next = candidates[(i + 1) % h];
          break;
        }
      }
      pair = victim;
      bucket_id = next;
      ++chain;
    } else {
      if (bucket.cas_at_slot(pair, load) == empty_slot) {
        table.count_insert();
        return true;
      }
      // lost the slot to a concurrent insert; re-snapshot the same bucket
    }
  }
}

std::optional<value_type> bcht_find(const hash_table& table, key_type key, probe_stats& stats) {
  const table_config& cfg = table.config();
  require_kind(table, cfg.kind == table_kind::bcht || cfg.kind == table_kind::one_cht, "bcht_find");
  const unsigned h = hash_count(cfg.kind);

  stats.begin_op();
  for (unsigned i = 0; i < h; ++i) {
    bucket_ref bucket = table.bucket(table.bucket_of(i, key));
    record_probe(stats);
    if (auto v = bucket.find_key_value(key)) return v;
    if (!bucket.full()) return std::nullopt;  // a bucket that ever evicted stays full
  }
  return std::nullopt;
}

bool bp2ht_insert(hash_table& table, kv_pair pair, probe_stats& stats) {
  require_kind(table, table.config().kind == table_kind::bp2ht, "bp2ht_insert");
  const std::uint32_t b = table.bucket_size();

  stats.begin_op();
  const std::uint64_t id0 = table.bucket_of(0, pair.key);
  const std::uint64_t id1 = table.bucket_of(1, pair.key);
  for (;;) {
    bucket_ref bucket0 = table.bucket(id0);
    record_probe(stats);
    bucket_ref bucket1 = table.bucket(id1);
    record_probe(stats);
    const std::uint32_t load0 = bucket0.compute_load();
    const std::uint32_t load1 = bucket1.compute_load();
    if (load0 == b && load1 == b) return false;
    bucket_ref& choice = load0 <= load1 ? bucket0 : bucket1;
    if (choice.cas_at_slot(pair, std::min(load0, load1)) == empty_slot) {
      table.count_insert();
      return true;
    }
  }
}

std::optional<value_type> bp2ht_find(const hash_table& table, key_type key, probe_stats& stats) {
  require_kind(table, table.config().kind == table_kind::bp2ht, "bp2ht_find");

  stats.begin_op();
  bucket_ref bucket0 = table.bucket(table.bucket_of(0, key));
  record_probe(stats);
  if (auto v = bucket0.find_key_value(key)) return v;
  bucket_ref bucket1 = table.bucket(table.bucket_of(1, key));
  record_probe(stats);
  return bucket1.find_key_value(key);
}

bool iht_insert(hash_table& table, kv_pair pair, probe_stats& stats, bool prose_fallback) {
  const table_config& cfg = table.config();
  require_kind(table, cfg.kind == table_kind::iht, "iht_insert");
  const std::uint32_t b = cfg.bucket_size;

  stats.begin_op();
  const std::uint64_t primary_id = table.bucket_of(0, pair.key);
  for (;;) {
    bucket_ref primary = table.bucket(primary_id);
    record_probe(stats);
    const std::uint32_t primary_load = primary.compute_load();
    bucket_ref* choice = &primary;
    std::uint32_t choice_load = primary_load;

    std::optional<bucket_ref> s0, s1;
    if (primary_load >= cfg.threshold) {
      s0.emplace(table.bucket(table.bucket_of(1, pair.key)));
      record_probe(stats);
      s1.emplace(table.bucket(table.bucket_of(2, pair.key)));
      record_probe(stats);
      const std::uint32_t load0 = s0->compute_load();
      const std::uint32_t load1 = s1->compute_load();
      // A full secondary is never picked over a non-full one; with both
      // full, fall back to the primary (which may still have space past
      // the threshold) unless prose_fallback demands a hard failure.
      if (prose_fallback || load0 != b || load1 != b) {
        if (load0 <= load1) {
          choice = &*s0;
          choice_load = load0;
        } else {
          choice = &*s1;
          choice_load = load1;
        }
      }
    }

    if (choice_load == b) return false;
    if (choice->cas_at_slot(pair, choice_load) == empty_slot) {
      table.count_insert();
      return true;
    }
  }
}

std::optional<value_type> iht_find(const hash_table& table, key_type key, probe_stats& stats) {
  require_kind(table, table.config().kind == table_kind::iht, "iht_find");

  stats.begin_op();
  bucket_ref primary = table.bucket(table.bucket_of(0, key));
  record_probe(stats);
  if (auto v = primary.find_key_value(key)) return v;
  bucket_ref s0 = table.bucket(table.bucket_of(1, key));
  record_probe(stats);
  if (auto v = s0.find_key_value(key)) return v;
  bucket_ref s1 = table.bucket(table.bucket_of(2, key));
  record_probe(stats);
  return s1.find_key_value(key);
}

bool insert_pair(hash_table& table, kv_pair pair, xorshift_rng& rng, probe_stats& stats,
                 bool iht_prose_fallback) {
  switch (table.config().kind) {
    case table_kind::one_cht:
    case table_kind::bcht: return bcht_insert(table, pair, rng, stats);
    case table_kind::bp2ht: return bp2ht_insert(table, pair, stats);
    case table_kind::iht: return iht_insert(table, pair, stats, iht_prose_fallback);
  }
  return false;
}

std::optional<value_type> find_key(const hash_table& table, key_type key, probe_stats& stats) {
  switch (table.config().kind) {
    case table_kind::one_cht:
    case table_kind::bcht: return bcht_find(table, key, stats);
    case table_kind::bp2ht: return bp2ht_find(table, key, stats);
    case table_kind::iht: return iht_find(table, key, stats);
  }
  return std::nullopt;
}

std::pair<hash_table, build_outcome> build(const key_set& keys, const table_config& cfg, build_options opts) {
  if (keys.size() > cfg.capacity) throw std::invalid_argument("build: key set exceeds table capacity");

  hash_table table(cfg);
  build_outcome outcome;
  outcome.probes = probe_stats{op_kind::insert};

  if (opts.mode == build_mode::sequential) {
    xorshift_rng rng(mix_seed(cfg.seed, eviction_stream(0)));
    for (key_type k : keys.keys) {
      if (!insert_pair(table, {k, value_for_key(k)}, rng, outcome.probes, opts.iht_prose_fallback)) {
        outcome.failed_key = k;
        break;
      }
    }
  } else {
    unsigned workers = opts.workers != 0 ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(keys.size(), 1)));
    std::vector<probe_stats> worker_probes(workers, probe_stats{op_kind::insert});
    std::atomic<bool> failed{false};
    std::atomic<std::uint64_t> first_failed{empty_slot};  // key of the first observed failure

    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (keys.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        xorshift_rng rng(mix_seed(cfg.seed, eviction_stream(w)));
        const std::size_t begin = std::min<std::size_t>(w * chunk, keys.size());
        const std::size_t end = std::min<std::size_t>(begin + chunk, keys.size());
        for (std::size_t i = begin; i < end; ++i) {
          if (failed.load(std::memory_order_relaxed)) return;
          key_type k = keys.keys[i];
          if (!insert_pair(table, {k, value_for_key(k)}, rng, worker_probes[w], opts.iht_prose_fallback)) {
            if (!failed.exchange(true, std::memory_order_acq_rel))
              first_failed.store(k, std::memory_order_release);
            return;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& ps : worker_probes) outcome.probes.merge(ps);
    if (failed.load(std::memory_order_acquire)) {
      std::uint64_t k = first_failed.load(std::memory_order_acquire);
      if (k != empty_slot) outcome.failed_key = static_cast<key_type>(k);
    }
  }

  outcome.inserted = table.inserted();
  outcome.success = outcome.inserted == keys.size();
  return {std::move(table), std::move(outcome)};
}

}  // namespace bht
