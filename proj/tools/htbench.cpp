#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bht/experiments.hpp"
#include "bht/oracle.hpp"
#include "bht/sector_model.hpp"

namespace {

struct common_flags {
  std::vector<std::string> tables{"bcht"};
  std::uint32_t bucket_size = 16;
  std::uint32_t threshold_pct = 80;
  std::vector<std::uint64_t> num_keys{1000000};
  std::vector<std::string> load_factors{"0.8"};
  std::vector<unsigned> positive_ratios{100, 50, 0};
  std::uint64_t seed = 1;
  unsigned trials = 10;
  unsigned max_failures = 50;
  unsigned success_trials = 200;
  std::string mode = "seq";
  unsigned workers = 0;
  std::string format = "csv";
  std::string out;
  std::optional<std::uint32_t> max_chain;
  bool iht_prose_fallback = false;
  std::string load_keys_path;
  std::string save_keys_path;
};

void add_common(CLI::App* cmd, common_flags& f) {
  cmd->add_option("--table", f.tables, "table kind (repeatable)")
      ->check(CLI::IsMember({"1cht", "bcht", "bp2ht", "iht"}));
  cmd->add_option("--bucket-size", f.bucket_size, "slots per bucket");
  cmd->add_option("--threshold-pct", f.threshold_pct, "iceberg threshold as % of bucket size");
  cmd->add_option("--num-keys", f.num_keys, "keys to insert (repeatable)");
  cmd->add_option("--load-factor", f.load_factors, "load factor, repeatable or range a:b:step");
  cmd->add_option("--positive-ratio", f.positive_ratios, "percent of positive queries (repeatable)")
      ->check(CLI::IsMember({100, 50, 0}));
  cmd->add_option("--seed", f.seed, "base seed");
  cmd->add_option("--trials", f.trials, "successful builds per cell");
  cmd->add_option("--max-failures", f.max_failures, "per-cell failure budget");
  cmd->add_option("--success-trials", f.success_trials, "builds per success-rate cell");
  cmd->add_option("--mode", f.mode, "build mode")->check(CLI::IsMember({"seq", "par"}));
  cmd->add_option("--workers", f.workers, "parallel build workers (0 = hardware)");
  cmd->add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", f.out, "output path (default stdout)");
  cmd->add_option("--max-chain", f.max_chain, "cuckoo chain limit override");
  cmd->add_flag("--iht-prose-fallback", f.iht_prose_fallback,
                "iceberg: fail when both secondaries are full instead of retrying the primary");
  cmd->add_option("--load-keys", f.load_keys_path, "read the key set from a binary file");
  cmd->add_option("--save-keys", f.save_keys_path, "write the generated key set to a binary file");
}

std::vector<double> parse_lf_grid(const std::vector<std::string>& specs) {
  std::vector<double> grid;
  for (const std::string& s : specs) {
    auto colon = s.find(':');
    if (colon == std::string::npos) {
      grid.push_back(std::stod(s));
      continue;
    }
    auto second = s.find(':', colon + 1);
    if (second == std::string::npos)
      throw std::invalid_argument("--load-factor range must be a:b:step");
    double lo = std::stod(s.substr(0, colon));
    double hi = std::stod(s.substr(colon + 1, second - colon - 1));
    double step = std::stod(s.substr(second + 1));
    if (step <= 0.0) throw std::invalid_argument("--load-factor step must be positive");
    for (double v = lo; v <= hi + step * 1e-6; v += step) grid.push_back(v);
  }
  if (grid.empty()) throw std::invalid_argument("--load-factor grid is empty");
  return grid;
}

bht::experiment_spec spec_from_flags(const common_flags& f, bht::scenario scen) {
  bht::experiment_spec spec;
  spec.scen = scen;
  for (const std::string& name : f.tables) {
    bht::kind_params params;
    params.kind = *bht::parse_table_kind(name);
    params.bucket_size = params.kind == bht::table_kind::one_cht ? 1 : f.bucket_size;
    params.threshold_pct = f.threshold_pct;
    spec.kinds.push_back(params);
  }
  spec.n_grid = f.num_keys;
  spec.lf_grid = parse_lf_grid(f.load_factors);
  for (unsigned pct : f.positive_ratios) spec.positive_ratios.push_back(pct / 100.0);
  spec.trials = f.trials;
  spec.max_failures = f.max_failures;
  spec.success_trials = f.success_trials;
  spec.seed = f.seed;
  spec.build_opts.mode = f.mode == "par" ? bht::build_mode::parallel : bht::build_mode::sequential;
  spec.build_opts.workers = f.workers;
  spec.build_opts.iht_prose_fallback = f.iht_prose_fallback;
  spec.max_chain = f.max_chain;
  return spec;
}

int emit(const common_flags& f, const bht::experiment_result& result) {
  std::ostringstream body;
  if (f.format == "json")
    bht::write_json(body, result);
  else
    bht::write_csv(body, result);
  if (f.out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream file(f.out);
    if (!file) {
      std::cerr << "cannot open " << f.out << "\n";
      return 1;
    }
    file << body.str();
  }
  return result.any_budget_exhausted() ? 1 : 0;
}

int run_spec(const common_flags& f, bht::scenario scen, const std::string& spec_path) {
  bht::experiment_spec spec;
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) {
      std::cerr << "cannot open " << spec_path << "\n";
      return 2;
    }
    std::ostringstream text;
    text << in.rdbuf();
    spec = bht::spec_from_json(text.str());
  } else {
    spec = spec_from_flags(f, scen);
  }
  return emit(f, bht::run_experiment(spec));
}

int run_sectors(const common_flags& f) {
  bht::experiment_spec spec = spec_from_flags(f, bht::scenario::probe_analysis);
  bht::experiment_result result = bht::run_experiment(spec);

  std::ostringstream body;
  body << "kind,b,threshold_pct,n,realized_lf,op,positive_ratio,mean_probes,predicted_sectors,seed\n";
  char buf[64];
  for (const bht::result_record& r : result.records) {
    bht::op_kind op = r.op == "insert" ? bht::op_kind::insert : bht::op_kind::find;
    double sectors = bht::predict_sectors(r.kind, r.b, r.mean_probes, op);
    body << bht::to_string(r.kind) << ',' << r.b << ',';
    if (r.threshold_pct) body << *r.threshold_pct;
    body << ',' << r.n << ',';
    std::snprintf(buf, sizeof(buf), "%.6g", r.realized_lf);
    body << buf << ',' << r.op << ',';
    if (r.positive_ratio) {
      std::snprintf(buf, sizeof(buf), "%.6g", *r.positive_ratio);
      body << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.6g", r.mean_probes);
    body << ',' << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.6g", sectors);
    body << buf << ',' << r.seed << '\n';
  }
  if (f.out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream file(f.out);
    if (!file) {
      std::cerr << "cannot open " << f.out << "\n";
      return 1;
    }
    file << body.str();
  }
  return result.any_budget_exhausted() ? 1 : 0;
}

int run_validate(const common_flags& f, const std::string& dump_path) {
  const std::string& name = f.tables.front();
  bht::kind_params params;
  params.kind = *bht::parse_table_kind(name);
  params.bucket_size = params.kind == bht::table_kind::one_cht ? 1 : f.bucket_size;
  params.threshold_pct = f.threshold_pct;
  const std::uint64_t n = f.num_keys.front();
  const double lf = parse_lf_grid(f.load_factors).front();

  bht::key_set keys;
  if (!f.load_keys_path.empty()) {
    keys = bht::load_keys(f.load_keys_path, f.seed);
    if (keys.size() < n) {
      std::cerr << "key file holds fewer than " << n << " keys\n";
      return 2;
    }
    keys.keys.resize(n);
  } else {
    keys = bht::generate_keys(bht::mix_seed(f.seed, 0x6b657973ull), n);
  }
  if (!f.save_keys_path.empty()) bht::save_keys(f.save_keys_path, keys);

  bht::build_options opts;
  opts.mode = f.mode == "par" ? bht::build_mode::parallel : bht::build_mode::sequential;
  opts.workers = f.workers;
  opts.iht_prose_fallback = f.iht_prose_fallback;

  unsigned failures = 0;
  while (true) {
    bht::table_config cfg = bht::make_config(params.kind, n, lf, params.bucket_size,
                                             params.threshold_slots(),
                                             bht::mix_seed(f.seed, 0x100 + failures), f.max_chain);
    auto [table, outcome] = bht::build(keys, cfg, opts);
    if (!outcome.success) {
      if (++failures >= f.max_failures) {
        std::cerr << "build failed " << failures << " times; giving up\n";
        return 1;
      }
      continue;
    }
    auto report = bht::check_membership(table, keys, n, f.seed);
    auto admissibility = bht::check_admissibility(table);
    std::printf("false_negatives=%llu\n", static_cast<unsigned long long>(report.false_negatives));
    std::printf("wrong_values=%llu\n", static_cast<unsigned long long>(report.wrong_values));
    std::printf("false_positives=%llu\n", static_cast<unsigned long long>(report.false_positives));
    std::printf("admissibility_violations=%llu\n", static_cast<unsigned long long>(admissibility));
    if (!dump_path.empty()) table.dump_store(dump_path);
    return report.clean() && admissibility == 0 ? 0 : 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"static bucketed hash table benchmarks"};
  app.require_subcommand(1);

  common_flags flags;
  std::string spec_path;
  std::string dump_path;

  CLI::App* bench = app.add_subcommand("bench", "load-factor / key-count sweeps with throughput");
  add_common(bench, flags);
  bench->add_option("--spec", spec_path, "experiment spec JSON file (overrides flags)");

  CLI::App* probes = app.add_subcommand("probes", "probe-count analysis over a load-factor grid");
  add_common(probes, flags);

  CLI::App* success = app.add_subcommand("success-rate", "build success fractions over a grid");
  add_common(success, flags);

  CLI::App* sectors = app.add_subcommand("sectors", "probe analysis plus predicted DRAM sectors per key");
  add_common(sectors, flags);

  CLI::App* validate = app.add_subcommand("validate", "build one table and run the oracle checks");
  add_common(validate, flags);
  validate->add_option("--dump-store", dump_path, "write the raw slot array to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (bench->parsed()) {
      bht::experiment_spec probe_spec = spec_from_flags(flags, bht::scenario::load_factor_sweep);
      bht::scenario scen = probe_spec.n_grid.size() > 1 ? bht::scenario::key_count_sweep
                                                        : bht::scenario::load_factor_sweep;
      return run_spec(flags, scen, spec_path);
    }
    if (probes->parsed()) return run_spec(flags, bht::scenario::probe_analysis, "");
    if (success->parsed()) return run_spec(flags, bht::scenario::success_rate, "");
    if (sectors->parsed()) return run_sectors(flags);
    if (validate->parsed()) return run_validate(flags, dump_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
