#include "bht/core.hpp"

#include <bit>
#include <cmath>

#include <nlohmann/json.hpp>

namespace bht {

const char* to_string(table_kind kind) {
  switch (kind) {
    case table_kind::one_cht: return "1cht";
    case table_kind::bcht: return "bcht";
    case table_kind::bp2ht: return "bp2ht";
    case table_kind::iht: return "iht";
  }
  return "?";
}

std::optional<table_kind> parse_table_kind(const std::string& name) {
  if (name == "1cht") return table_kind::one_cht;
  if (name == "bcht") return table_kind::bcht;
  if (name == "bp2ht") return table_kind::bp2ht;
  if (name == "iht") return table_kind::iht;
  return std::nullopt;
}

std::uint32_t default_max_chain(std::uint64_t n_keys) {
  std::uint32_t log2n = n_keys <= 1 ? 1 : std::bit_width(n_keys - 1);  // ceil(log2(n))
  return std::max<std::uint32_t>(7 * log2n, 128);
}

table_config make_config(table_kind kind,
                         std::uint64_t n_keys,
                         double lf,
                         std::uint32_t bucket_size,
                         std::optional<std::uint32_t> threshold,
                         std::uint64_t seed,
                         std::optional<std::uint32_t> max_chain) {
  if (n_keys == 0) throw std::invalid_argument("make_config: n_keys must be positive");
  if (!(lf > 0.0) || lf > 1.0) throw std::invalid_argument("make_config: load factor must be in (0, 1]");
  if (bucket_size == 0 || bucket_size > max_bucket_size || !std::has_single_bit(bucket_size))
    throw std::invalid_argument("make_config: bucket_size must be a power of two in [1, 64]");
  if (kind == table_kind::one_cht && bucket_size != 1)
    throw std::invalid_argument("make_config: 1cht requires bucket_size 1");

  table_config cfg;
  cfg.kind = kind;
  cfg.bucket_size = bucket_size;
  cfg.num_buckets = static_cast<std::uint64_t>(
      std::ceil(static_cast<double>(n_keys) / (lf * static_cast<double>(bucket_size))));
  cfg.capacity = cfg.num_buckets * bucket_size;
  cfg.seed = seed;

  if (kind == table_kind::iht) {
    cfg.threshold = threshold.value_or(bucket_size * 80 / 100);
    if (cfg.threshold > bucket_size)
      throw std::invalid_argument("make_config: threshold exceeds bucket_size");
    if (cfg.threshold == 0)
      throw std::invalid_argument("make_config: iht threshold must be positive");
  }
  if (kind == table_kind::one_cht || kind == table_kind::bcht)
    cfg.max_chain = max_chain.value_or(default_max_chain(n_keys));

  xorshift_rng rng(mix_seed(seed, 0x68617368ull));  // hash-constant stream
  cfg.hashes = draw_hash_params(rng, hash_count(kind), cfg.num_buckets);
  return cfg;
}

std::string config_to_json(const table_config& cfg) {
  nlohmann::json j;
  j["kind"] = to_string(cfg.kind);
  j["num_buckets"] = cfg.num_buckets;
  j["bucket_size"] = cfg.bucket_size;
  j["capacity"] = cfg.capacity;
  nlohmann::json params = nlohmann::json::array();
  for (const auto& hp : cfg.hashes)
    params.push_back({{"alpha", hp.alpha}, {"beta", hp.beta}, {"prime", hash_params::prime}, {"range", hp.range}});
  j["hash_params"] = params;
  j["threshold"] = cfg.threshold;
  j["max_chain"] = cfg.max_chain;
  j["seed"] = cfg.seed;
  return j.dump(2);
}

table_config config_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  table_config cfg;
  auto kind = parse_table_kind(j.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("config_from_json: unknown table kind");
  cfg.kind = *kind;
  cfg.num_buckets = j.at("num_buckets").get<std::uint64_t>();
  cfg.bucket_size = j.at("bucket_size").get<std::uint32_t>();
  cfg.capacity = j.at("capacity").get<std::uint64_t>();
  for (const auto& p : j.at("hash_params")) {
    if (p.at("prime").get<std::uint64_t>() != hash_params::prime)
      throw std::invalid_argument("config_from_json: unexpected prime");
    cfg.hashes.push_back({p.at("alpha").get<std::uint64_t>(), p.at("beta").get<std::uint64_t>(),
                          p.at("range").get<std::uint64_t>()});
  }
  if (cfg.hashes.size() != hash_count(cfg.kind))
    throw std::invalid_argument("config_from_json: wrong hash_params count for kind");
  cfg.threshold = j.at("threshold").get<std::uint32_t>();
  cfg.max_chain = j.at("max_chain").get<std::uint32_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  if (cfg.capacity != cfg.num_buckets * cfg.bucket_size)
    throw std::invalid_argument("config_from_json: capacity mismatch");
  return cfg;
}

}  // namespace bht
