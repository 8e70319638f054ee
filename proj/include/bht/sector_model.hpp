#pragma once

#include <cstdint>

#include "bht/core.hpp"
#include "bht/probe_stats.hpp"

namespace bht {

// Analytic DRAM-traffic floor in 32-byte sectors (a quarter of a 128-byte
// cache line). Reading a b-pair bucket costs ceil(8b/32) sectors; an
// insertion adds one sector for the atomic writeback. Not a measurement.
struct sector_model {
  static constexpr std::uint32_t sector_bytes = 32;
  static constexpr std::uint32_t pair_bytes = 8;
  static constexpr std::uint32_t write_extra = 1;

  static constexpr std::uint32_t bucket_sectors(std::uint32_t bucket_size) {
    return (bucket_size * pair_bytes + sector_bytes - 1) / sector_bytes;
  }
};

// Expected sectors per key. Single-slot tables pay two sectors per probe:
// DRAM-to-L2 access granularity is 64 bytes, so an 8-byte read still moves
// two sectors.
inline double predict_sectors(table_kind kind, std::uint32_t bucket_size, double mean_probes, op_kind op) {
  double read_cost = kind == table_kind::one_cht ? 2.0 : sector_model::bucket_sectors(bucket_size);
  double sectors = mean_probes * read_cost;
  if (op == op_kind::insert) sectors += sector_model::write_extra;
  return sectors;
}

}  // namespace bht
