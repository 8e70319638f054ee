#pragma once

#include <cstdint>

namespace bht {

enum class op_kind { insert, find };

// Bucket-read counters for one worker. A probe is one snapshot read of an
// entire bucket, regardless of bucket size. Instances are single-owner;
// workers merge their local stats when they finish.
struct probe_stats {
  op_kind op = op_kind::insert;
  std::uint64_t total_probes = 0;
  std::uint64_t total_ops = 0;

  double mean_probes() const {
    return total_ops == 0 ? 0.0 : static_cast<double>(total_probes) / static_cast<double>(total_ops);
  }

  void begin_op() { ++total_ops; }

  void merge(const probe_stats& other) {
    total_probes += other.total_probes;
    total_ops += other.total_ops;
  }
};

inline void record_probe(probe_stats& stats, std::uint64_t count = 1) {
  stats.total_probes += count;
}

}  // namespace bht
