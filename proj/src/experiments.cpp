#include "bht/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bht {

namespace {

using clock = std::chrono::steady_clock;

double seconds_since(clock::time_point start) {
  return std::chrono::duration<double>(clock::now() - start).count();
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::uint64_t cell_seed(std::uint64_t base, std::uint64_t cell_index) {
  return mix_seed(base, 0x63656c6cull + cell_index);
}

}  // namespace

const char* to_string(scenario s) {
  switch (s) {
    case scenario::load_factor_sweep: return "load_factor_sweep";
    case scenario::key_count_sweep: return "key_count_sweep";
    case scenario::positive_ratio_sweep: return "positive_ratio_sweep";
    case scenario::success_rate: return "success_rate";
    case scenario::probe_analysis: return "probe_analysis";
  }
  return "?";
}

std::optional<scenario> parse_scenario(const std::string& name) {
  for (scenario s : {scenario::load_factor_sweep, scenario::key_count_sweep, scenario::positive_ratio_sweep,
                     scenario::success_rate, scenario::probe_analysis})
    if (name == to_string(s)) return s;
  return std::nullopt;
}

trial_outcome run_trial(const trial_cell& cell) {
  trial_outcome out;
  out.find_mean_probes.assign(cell.positive_ratios.size(), 0.0);
  out.find_ops_per_sec.assign(cell.positive_ratios.size(), 0.0);

  key_set local_keys;
  const key_set* keys = cell.preloaded_keys;
  if (keys == nullptr || keys->size() != cell.n) {
    local_keys = generate_keys(mix_seed(cell.seed, 0x6b657973ull), cell.n);
    keys = &local_keys;
  }

  probe_stats insert_acc{op_kind::insert};
  std::vector<probe_stats> find_acc(cell.positive_ratios.size(), probe_stats{op_kind::find});
  std::vector<double> find_seconds(cell.positive_ratios.size(), 0.0);
  double insert_seconds = 0.0;

  unsigned attempt = 0;
  while (out.successes < cell.trials && out.failures < cell.max_failures) {
    table_config cfg = make_config(cell.params.kind, cell.n, cell.lf, cell.params.bucket_size,
                                   cell.params.threshold_slots(), mix_seed(cell.seed, 0x100 + attempt),
                                   cell.max_chain);
    ++attempt;
    out.realized_lf = static_cast<double>(cell.n) / static_cast<double>(cfg.capacity);

    auto start = clock::now();
    auto [table, built] = build(*keys, cfg, cell.build_opts);
    double elapsed = seconds_since(start);
    if (!built.success) {
      ++out.failures;
      continue;
    }
    ++out.successes;
    insert_acc.merge(built.probes);
    insert_seconds += elapsed;

    for (std::size_t r = 0; r < cell.positive_ratios.size(); ++r) {
      auto queries = generate_queries(*keys, cell.positive_ratios[r], cell.n,
                                      mix_seed(cell.seed, 0x200 + r));
      probe_stats fs{op_kind::find};
      auto qstart = clock::now();
      for (const query& qu : queries) find_key(table, qu.key, fs);
      find_seconds[r] += seconds_since(qstart);
      find_acc[r].merge(fs);
    }
  }

  out.budget_exhausted = out.successes < cell.trials;
  out.insert_mean_probes = insert_acc.mean_probes();
  if (insert_seconds > 0.0)
    out.insert_ops_per_sec = static_cast<double>(insert_acc.total_ops) / insert_seconds;
  for (std::size_t r = 0; r < cell.positive_ratios.size(); ++r) {
    out.find_mean_probes[r] = find_acc[r].mean_probes();
    if (find_seconds[r] > 0.0)
      out.find_ops_per_sec[r] = static_cast<double>(find_acc[r].total_ops) / find_seconds[r];
  }
  return out;
}

success_rate_result run_success_rate(const kind_params& params,
                                     std::uint64_t n,
                                     const std::vector<double>& lf_grid,
                                     unsigned success_trials,
                                     std::uint64_t seed,
                                     std::optional<std::uint32_t> max_chain,
                                     build_options opts) {
  success_rate_result result;
  key_set keys = generate_keys(mix_seed(seed, 0x6b657973ull), n);

  for (std::size_t cell = 0; cell < lf_grid.size(); ++cell) {
    const double lf = lf_grid[cell];
    success_rate_point point;
    point.lf = lf;
    point.trials = success_trials;
    for (unsigned t = 0; t < success_trials; ++t) {
      table_config cfg = make_config(params.kind, n, lf, params.bucket_size, params.threshold_slots(),
                                     mix_seed(cell_seed(seed, cell), t), max_chain);
      point.realized_lf = static_cast<double>(n) / static_cast<double>(cfg.capacity);
      auto [table, built] = build(keys, cfg, opts);
      point.successes += built.success;
    }
    result.points.push_back(point);
  }

  for (const auto& point : result.points)
    if (point.fraction() >= 0.99 &&
        (!result.max_load_factor || point.lf > *result.max_load_factor))
      result.max_load_factor = point.lf;
  return result;
}

bool experiment_result::any_budget_exhausted() const {
  return std::any_of(records.begin(), records.end(),
                     [](const result_record& r) { return r.budget_exhausted; });
}

experiment_result run_experiment(const experiment_spec& spec) {
  if (spec.kinds.empty()) throw std::invalid_argument("run_experiment: no table kinds requested");
  if (spec.n_grid.empty()) throw std::invalid_argument("run_experiment: empty key-count grid");
  if (spec.lf_grid.empty()) throw std::invalid_argument("run_experiment: empty load-factor grid");
  if (spec.trials < 1) throw std::invalid_argument("run_experiment: trials must be at least 1");

  experiment_result result;
  auto start = clock::now();
  std::uint64_t cell_index = 0;

  for (const kind_params& params : spec.kinds) {
    for (std::uint64_t n : spec.n_grid) {
      if (spec.scen == scenario::success_rate) {
        auto sr = run_success_rate(params, n, spec.lf_grid, spec.success_trials,
                                   mix_seed(spec.seed, cell_index), spec.max_chain, spec.build_opts);
        ++cell_index;
        for (const auto& point : sr.points) {
          result_record rec;
          rec.kind = params.kind;
          rec.b = params.bucket_size;
          if (params.kind == table_kind::iht) rec.threshold_pct = params.threshold_pct;
          rec.n = n;
          rec.realized_lf = point.realized_lf;
          rec.op = "build";
          rec.mean_probes = 0.0;
          rec.ops_per_sec = 0.0;
          rec.successes = point.successes;
          rec.failures = point.trials - point.successes;
          rec.seed = spec.seed;
          result.records.push_back(rec);
        }
        continue;
      }

      for (double lf : spec.lf_grid) {
        trial_cell cell;
        cell.params = params;
        cell.n = n;
        cell.lf = lf;
        cell.positive_ratios = spec.positive_ratios;
        cell.trials = spec.trials;
        cell.max_failures = spec.max_failures;
        cell.seed = cell_seed(spec.seed, cell_index);
        cell.build_opts = spec.build_opts;
        cell.max_chain = spec.max_chain;
        ++cell_index;

        trial_outcome out = run_trial(cell);

        result_record insert_rec;
        insert_rec.kind = params.kind;
        insert_rec.b = params.bucket_size;
        if (params.kind == table_kind::iht) insert_rec.threshold_pct = params.threshold_pct;
        insert_rec.n = n;
        insert_rec.realized_lf = out.realized_lf;
        insert_rec.op = "insert";
        insert_rec.mean_probes = out.insert_mean_probes;
        insert_rec.ops_per_sec = out.insert_ops_per_sec;
        insert_rec.successes = out.successes;
        insert_rec.failures = out.failures;
        insert_rec.seed = spec.seed;
        insert_rec.budget_exhausted = out.budget_exhausted;
        result.records.push_back(insert_rec);

        for (std::size_t r = 0; r < spec.positive_ratios.size(); ++r) {
          result_record find_rec = insert_rec;
          find_rec.op = "find";
          find_rec.positive_ratio = spec.positive_ratios[r];
          find_rec.mean_probes = out.find_mean_probes[r];
          find_rec.ops_per_sec = out.find_ops_per_sec[r];
          result.records.push_back(find_rec);
        }
      }
    }
  }

  result.wall_seconds = seconds_since(start);
  return result;
}

void write_csv(std::ostream& out, const experiment_result& result) {
  out << result_csv_header << '\n';
  for (const result_record& r : result.records) {
    out << to_string(r.kind) << ',' << r.b << ',';
    if (r.threshold_pct) out << *r.threshold_pct;
    out << ',' << r.n << ',' << format_double(r.realized_lf) << ',' << r.op << ',';
    if (r.positive_ratio) out << format_double(*r.positive_ratio);
    out << ',' << format_double(r.mean_probes) << ',' << format_double(r.ops_per_sec) << ','
        << r.successes << ',' << r.failures << ',' << r.seed << '\n';
  }
}

void write_json(std::ostream& out, const experiment_result& result) {
  nlohmann::json records = nlohmann::json::array();
  for (const result_record& r : result.records) {
    nlohmann::json j;
    j["kind"] = to_string(r.kind);
    j["b"] = r.b;
    if (r.threshold_pct)
      j["threshold_pct"] = *r.threshold_pct;
    else
      j["threshold_pct"] = nullptr;
    j["n"] = r.n;
    j["realized_lf"] = r.realized_lf;
    j["op"] = r.op;
    if (r.positive_ratio)
      j["positive_ratio"] = *r.positive_ratio;
    else
      j["positive_ratio"] = nullptr;
    j["mean_probes"] = r.mean_probes;
    j["ops_per_sec"] = r.ops_per_sec;
    j["successes"] = r.successes;
    j["failures"] = r.failures;
    j["seed"] = r.seed;
    j["budget_exhausted"] = r.budget_exhausted;
    records.push_back(j);
  }
  nlohmann::json doc;
  doc["records"] = records;
  doc["wall_seconds"] = result.wall_seconds;
  out << doc.dump(2) << '\n';
}

std::string spec_to_json(const experiment_spec& spec) {
  nlohmann::json j;
  j["scenario"] = to_string(spec.scen);
  nlohmann::json kinds = nlohmann::json::array();
  for (const kind_params& k : spec.kinds)
    kinds.push_back({{"kind", to_string(k.kind)},
                     {"bucket_size", k.bucket_size},
                     {"threshold_pct", k.threshold_pct}});
  j["kinds"] = kinds;
  j["n_grid"] = spec.n_grid;
  j["lf_grid"] = spec.lf_grid;
  j["positive_ratios"] = spec.positive_ratios;
  j["trials"] = spec.trials;
  j["max_failures"] = spec.max_failures;
  j["success_trials"] = spec.success_trials;
  j["seed"] = spec.seed;
  j["mode"] = spec.build_opts.mode == build_mode::sequential ? "seq" : "par";
  j["workers"] = spec.build_opts.workers;
  j["iht_prose_fallback"] = spec.build_opts.iht_prose_fallback;
  if (spec.max_chain)
    j["max_chain"] = *spec.max_chain;
  else
    j["max_chain"] = nullptr;
  return j.dump(2);
}

experiment_spec spec_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  experiment_spec spec;
  auto scen = parse_scenario(j.at("scenario").get<std::string>());
  if (!scen) throw std::invalid_argument("spec_from_json: unknown scenario");
  spec.scen = *scen;
  for (const auto& k : j.at("kinds")) {
    kind_params params;
    auto kind = parse_table_kind(k.at("kind").get<std::string>());
    if (!kind) throw std::invalid_argument("spec_from_json: unknown table kind");
    params.kind = *kind;
    params.bucket_size = k.at("bucket_size").get<std::uint32_t>();
    if (k.contains("threshold_pct")) params.threshold_pct = k.at("threshold_pct").get<std::uint32_t>();
    spec.kinds.push_back(params);
  }
  spec.n_grid = j.at("n_grid").get<std::vector<std::uint64_t>>();
  spec.lf_grid = j.at("lf_grid").get<std::vector<double>>();
  if (j.contains("positive_ratios"))
    spec.positive_ratios = j.at("positive_ratios").get<std::vector<double>>();
  if (j.contains("trials")) spec.trials = j.at("trials").get<unsigned>();
  if (j.contains("max_failures")) spec.max_failures = j.at("max_failures").get<unsigned>();
  if (j.contains("success_trials")) spec.success_trials = j.at("success_trials").get<unsigned>();
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("mode"))
    spec.build_opts.mode =
        j.at("mode").get<std::string>() == "par" ? build_mode::parallel : build_mode::sequential;
  if (j.contains("workers")) spec.build_opts.workers = j.at("workers").get<unsigned>();
  if (j.contains("iht_prose_fallback"))
    spec.build_opts.iht_prose_fallback = j.at("iht_prose_fallback").get<bool>();
  if (j.contains("max_chain") && !j.at("max_chain").is_null())
    spec.max_chain = j.at("max_chain").get<std::uint32_t>();
  return spec;
}

}  // namespace bht
