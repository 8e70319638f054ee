#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bht/core.hpp"
#include "bht/keygen.hpp"
#include "bht/probe_stats.hpp"
#include "bht/table.hpp"

namespace bht {

enum class scenario {
  load_factor_sweep,
  key_count_sweep,
  positive_ratio_sweep,
  success_rate,
  probe_analysis,
};

const char* to_string(scenario s);
std::optional<scenario> parse_scenario(const std::string& name);

struct kind_params {
  table_kind kind = table_kind::bcht;
  std::uint32_t bucket_size = 16;
  std::uint32_t threshold_pct = 80;  // iht only

  std::optional<std::uint32_t> threshold_slots() const {
    if (kind != table_kind::iht) return std::nullopt;
    return bucket_size * threshold_pct / 100;
  }
};

struct experiment_spec {
  scenario scen = scenario::probe_analysis;
  std::vector<kind_params> kinds;
  std::vector<std::uint64_t> n_grid;
  std::vector<double> lf_grid;
  std::vector<double> positive_ratios;  // subset of {1.0, 0.5, 0.0}
  unsigned trials = 10;           // successful builds averaged per cell
  unsigned max_failures = 50;     // per-cell failure budget
  unsigned success_trials = 200;  // builds per cell in success-rate runs
  std::uint64_t seed = 0;
  build_options build_opts;
  std::optional<std::uint32_t> max_chain;
};

std::string spec_to_json(const experiment_spec& spec);
experiment_spec spec_from_json(const std::string& text);

// One record per (cell, op, positive ratio). `op` is "insert", "find" or
// "build"; positive_ratio is empty except for find rows. ops_per_sec is
// informational only and never asserted against anything.
struct result_record {
  table_kind kind = table_kind::bcht;
  std::uint32_t b = 0;
  std::optional<std::uint32_t> threshold_pct;
  std::uint64_t n = 0;
  double realized_lf = 0.0;
  std::string op;
  std::optional<double> positive_ratio;
  double mean_probes = 0.0;
  double ops_per_sec = 0.0;
  unsigned successes = 0;
  unsigned failures = 0;
  std::uint64_t seed = 0;
  bool budget_exhausted = false;
};

struct experiment_result {
  std::vector<result_record> records;
  double wall_seconds = 0.0;

  bool any_budget_exhausted() const;
};

inline constexpr const char* result_csv_header =
    "kind,b,threshold_pct,n,realized_lf,op,positive_ratio,mean_probes,ops_per_sec,successes,failures,seed";

void write_csv(std::ostream& out, const experiment_result& result);
void write_json(std::ostream& out, const experiment_result& result);

// Aggregated outcome of one grid cell under the trials/max-failures
// protocol.
struct trial_outcome {
  unsigned successes = 0;
  unsigned failures = 0;
  bool budget_exhausted = false;
  double realized_lf = 0.0;
  double insert_mean_probes = 0.0;
  double insert_ops_per_sec = 0.0;
  std::vector<double> find_mean_probes;   // parallel to requested ratios
  std::vector<double> find_ops_per_sec;
};

struct trial_cell {
  kind_params params;
  std::uint64_t n = 0;
  double lf = 0.0;
  std::vector<double> positive_ratios;
  unsigned trials = 10;
  unsigned max_failures = 50;
  std::uint64_t seed = 0;
  build_options build_opts;
  std::optional<std::uint32_t> max_chain;
  const key_set* preloaded_keys = nullptr;  // reuse across cells when set
};

// Draws fresh hash constants per attempt and builds until `trials`
// successes or the failure budget runs out; on each success runs one query
// workload of q = n keys per requested ratio.
trial_outcome run_trial(const trial_cell& cell);

struct success_rate_point {
  double lf = 0.0;
  double realized_lf = 0.0;
  unsigned successes = 0;
  unsigned trials = 0;

  double fraction() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / trials; }
};

struct success_rate_result {
  std::vector<success_rate_point> points;
  // Highest grid load factor reaching at least 99% successes; unset when
  // no grid point qualifies.
  std::optional<double> max_load_factor;
};

success_rate_result run_success_rate(const kind_params& params,
                                     std::uint64_t n,
                                     const std::vector<double>& lf_grid,
                                     unsigned success_trials,
                                     std::uint64_t seed,
                                     std::optional<std::uint32_t> max_chain = std::nullopt,
                                     build_options opts = {});

experiment_result run_experiment(const experiment_spec& spec);

}  // namespace bht
