#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "bht/experiments.hpp"

using namespace bht;

namespace {

experiment_spec tiny_spec() {
  experiment_spec spec;
  spec.scen = scenario::probe_analysis;
  spec.kinds = {{table_kind::bcht, 16, 80}};
  spec.n_grid = {20000};
  spec.lf_grid = {0.6, 0.8};
  spec.positive_ratios = {1.0, 0.0};
  spec.trials = 2;
  spec.seed = 77;
  return spec;
}

std::string strip_ops_per_sec(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    int commas = 0;
    std::string kept;
    for (char c : line) {
      if (c == ',') ++commas;
      if (commas == 8 && c != ',') continue;  // ops_per_sec column
      kept += c;
    }
    out += kept + '\n';
  }
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("experiments");

TEST_CASE("records are deterministic apart from throughput") {
  experiment_spec spec = tiny_spec();
  experiment_result r1 = run_experiment(spec);
  experiment_result r2 = run_experiment(spec);
  REQUIRE(r1.records.size() == r2.records.size());
  for (std::size_t i = 0; i < r1.records.size(); ++i) {
    CHECK(r1.records[i].mean_probes == r2.records[i].mean_probes);
    CHECK(r1.records[i].successes == r2.records[i].successes);
    CHECK(r1.records[i].failures == r2.records[i].failures);
    CHECK(r1.records[i].realized_lf == r2.records[i].realized_lf);
  }

  std::ostringstream c1, c2;
  write_csv(c1, r1);
  write_csv(c2, r2);
  CHECK(strip_ops_per_sec(c1.str()) == strip_ops_per_sec(c2.str()));
}

TEST_CASE("every grid cell yields one record per op and ratio") {
  experiment_spec spec = tiny_spec();
  experiment_result r = run_experiment(spec);
  // 2 lf cells x (1 insert + 2 find ratios)
  CHECK(r.records.size() == 6);
  int inserts = 0, finds = 0;
  for (const auto& rec : r.records) {
    if (rec.op == "insert") {
      ++inserts;
      CHECK(!rec.positive_ratio);
    } else {
      ++finds;
      REQUIRE(rec.positive_ratio);
    }
    CHECK(rec.successes == 2);
    CHECK(rec.mean_probes >= 1.0);
    if (rec.op == "find") CHECK(rec.mean_probes <= 3.0);  // h for bcht
  }
  CHECK(inserts == 2);
  CHECK(finds == 4);
}

TEST_CASE("csv header is pinned") {
  CHECK(std::string(result_csv_header) ==
        "kind,b,threshold_pct,n,realized_lf,op,positive_ratio,mean_probes,ops_per_sec,successes,failures,seed");
  experiment_result r = run_experiment(tiny_spec());
  std::ostringstream out;
  write_csv(out, r);
  std::string first_line = out.str().substr(0, out.str().find('\n'));
  CHECK(first_line == result_csv_header);
}

TEST_CASE("probe means ignore query order") {
  key_set keys = generate_keys(81, 20000);
  table_config cfg = make_config(table_kind::bcht, 20000, 0.9, 16, std::nullopt, 81);
  auto [table, outcome] = build(keys, cfg);
  REQUIRE(outcome.success);
  auto queries = generate_queries(keys, 0.5, 20000, 82);

  probe_stats ordered{op_kind::find};
  for (const query& q : queries) find_key(table, q.key, ordered);

  std::mt19937_64 eng(83);
  std::shuffle(queries.begin(), queries.end(), eng);
  probe_stats shuffled{op_kind::find};
  for (const query& q : queries) find_key(table, q.key, shuffled);

  CHECK(ordered.total_probes == shuffled.total_probes);
}

TEST_CASE("low load factors succeed on the first attempt") {
  trial_cell cell;
  cell.params = {table_kind::bcht, 16, 80};
  cell.n = 10000;
  cell.lf = 0.1;
  cell.trials = 3;
  cell.seed = 7;
  trial_outcome out = run_trial(cell);
  CHECK(out.successes == 3);
  CHECK(out.failures == 0);
  CHECK(!out.budget_exhausted);
}

TEST_CASE("an unreachable load factor exhausts the failure budget") {
  trial_cell cell;
  cell.params = {table_kind::bp2ht, 8, 80};
  cell.n = 10000;
  cell.lf = 1.0;
  cell.trials = 1;
  cell.max_failures = 5;
  cell.seed = 7;
  trial_outcome out = run_trial(cell);
  CHECK(out.budget_exhausted);
  CHECK(out.successes == 0);
  CHECK(out.failures == 5);

  experiment_spec spec;
  spec.scen = scenario::load_factor_sweep;
  spec.kinds = {{table_kind::bp2ht, 8, 80}};
  spec.n_grid = {10000};
  spec.lf_grid = {1.0};
  spec.positive_ratios = {};
  spec.trials = 1;
  spec.max_failures = 3;
  spec.seed = 7;
  CHECK(run_experiment(spec).any_budget_exhausted());
}

TEST_CASE("insertion probes respond to load as each variant predicts") {
  // nondecreasing in lf for the cuckoo variants and iht (slack 0.02),
  // exactly 2 for bp2ht
  std::vector<double> grid{0.5, 0.6, 0.7, 0.8};
  for (table_kind kind : {table_kind::one_cht, table_kind::bcht, table_kind::bp2ht, table_kind::iht}) {
    double prev = 0.0;
    for (double lf : grid) {
      trial_cell cell;
      cell.params = {kind, kind == table_kind::one_cht ? 1u : 16u, 80};
      cell.n = 50000;
      cell.lf = lf;
      cell.trials = 2;
      cell.seed = 90;
      trial_outcome out = run_trial(cell);
      REQUIRE(!out.budget_exhausted);
      if (kind == table_kind::bp2ht)
        CHECK(out.insert_mean_probes == 2.0);
      else
        CHECK(out.insert_mean_probes >= prev - 0.02);
      prev = out.insert_mean_probes;
    }
  }
}

TEST_CASE("probe means are insensitive to the key count once n >> b") {
  double means[2];
  std::uint64_t ns[] = {100000, 1000000};
  for (int i = 0; i < 2; ++i) {
    trial_cell cell;
    cell.params = {table_kind::bcht, 16, 80};
    cell.n = ns[i];
    cell.lf = 0.9;
    cell.trials = 3;
    cell.seed = 95;
    trial_outcome out = run_trial(cell);
    REQUIRE(!out.budget_exhausted);
    means[i] = out.insert_mean_probes;
  }
  CHECK(std::abs(means[0] - means[1]) / means[1] < 0.02);
}

TEST_CASE("success rate is 1.0 far below the threshold") {
  auto r = run_success_rate({table_kind::bcht, 16, 80}, 5000, {0.01, 0.5}, 20, 7);
  REQUIRE(r.points.size() == 2);
  CHECK(r.points[0].fraction() == 1.0);
  CHECK(r.points[1].fraction() == 1.0);
  CHECK(r.max_load_factor == 0.5);
}

TEST_CASE("experiment spec JSON round-trips") {
  experiment_spec spec;
  spec.scen = scenario::success_rate;
  spec.kinds = {{table_kind::iht, 32, 60}, {table_kind::one_cht, 1, 80}};
  spec.n_grid = {1000, 2000};
  spec.lf_grid = {0.5, 0.9};
  spec.positive_ratios = {1.0, 0.5};
  spec.trials = 4;
  spec.max_failures = 9;
  spec.success_trials = 33;
  spec.seed = 123456789;
  spec.build_opts.mode = build_mode::parallel;
  spec.build_opts.workers = 3;
  spec.build_opts.iht_prose_fallback = true;
  spec.max_chain = 99;

  experiment_spec back = spec_from_json(spec_to_json(spec));
  CHECK(back.scen == spec.scen);
  REQUIRE(back.kinds.size() == 2);
  CHECK(back.kinds[0].kind == table_kind::iht);
  CHECK(back.kinds[0].bucket_size == 32);
  CHECK(back.kinds[0].threshold_pct == 60);
  CHECK(back.n_grid == spec.n_grid);
  CHECK(back.lf_grid == spec.lf_grid);
  CHECK(back.positive_ratios == spec.positive_ratios);
  CHECK(back.trials == spec.trials);
  CHECK(back.max_failures == spec.max_failures);
  CHECK(back.success_trials == spec.success_trials);
  CHECK(back.seed == spec.seed);
  CHECK(back.build_opts.mode == build_mode::parallel);
  CHECK(back.build_opts.workers == 3);
  CHECK(back.build_opts.iht_prose_fallback == true);
  CHECK(back.max_chain == 99u);
}

TEST_SUITE_END();
