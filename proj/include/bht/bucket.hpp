#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <optional>

#include "bht/core.hpp"

namespace bht {

// One bucket of b contiguous 64-bit slots. Constructing a bucket_ref takes
// a snapshot of all slots (per-slot atomic loads); this snapshot read is
// the unit the probe counters measure. load and find work on the snapshot,
// cas/exch write through to the shared store.
class bucket_ref {
 public:
  bucket_ref(std::atomic<slot_type>* base, std::uint32_t size) : base_(base), size_(size) {
    for (std::uint32_t i = 0; i < size_; ++i)
      snap_[i] = base_[i].load(std::memory_order_acquire);
  }

  std::uint32_t size() const { return size_; }

  // Number of occupied slots in the snapshot.
  std::uint32_t compute_load() const {
    std::uint32_t load = 0;
    for (std::uint32_t i = 0; i < size_; ++i)
      load += (snap_[i] & 0xFFFFFFFFu) != empty_key;
    return load;
  }

  bool full() const { return compute_load() == size_; }

  // Value stored for `key` in the snapshot, lowest slot first.
  std::optional<value_type> find_key_value(key_type key) const {
    for (std::uint32_t i = 0; i < size_; ++i)
      if (static_cast<key_type>(snap_[i] & 0xFFFFFFFFu) == key)
        return static_cast<value_type>(snap_[i] >> 32);
    return std::nullopt;
  }

  // Atomically installs `pair` if the slot is empty. Returns the slot's
  // prior contents; empty_slot signals success.
  slot_type cas_at_slot(kv_pair pair, std::uint32_t slot) {
    slot_type expected = empty_slot;
    base_[slot].compare_exchange_strong(expected, pack_pair(pair), std::memory_order_acq_rel,
                                        std::memory_order_acquire);
    return expected;
  }

  // Atomically swaps `pair` into the slot; returns the prior contents.
  slot_type exch_at_slot(kv_pair pair, std::uint32_t slot) {
    return base_[slot].exchange(pack_pair(pair), std::memory_order_acq_rel);
  }

  slot_type snapshot_slot(std::uint32_t i) const { return snap_[i]; }

 private:
  std::atomic<slot_type>* base_;
  std::uint32_t size_;
  std::array<slot_type, max_bucket_size> snap_;
};

}  // namespace bht
