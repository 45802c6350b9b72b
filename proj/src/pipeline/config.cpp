#include "tracelab/pipeline/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <map>
#include <set>
#include <stdexcept>
#include <type_traits>

namespace tracelab::pipeline {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"quantizer", {"small_max", "large_min", "long_len"}},
      {"interpreter", {"step_budget", "sentinel_int", "sentinel_float", "max_call_depth"}},
      {"dataset", {"cap", "mlm_rate", "seed", "split", "max_input", "max_code", "workers"}},
      {"corpus", {"seed", "problems", "variants"}},
  };
  return keys;
}

template <typename T>
void read(const pt::ptree& tree, const char* key, T& target) {
  auto raw = tree.get_optional<std::string>(key);
  if (!raw) return;
  // Stream extraction would wrap "-1" into a huge unsigned value.
  if (std::is_unsigned_v<T> && raw->find('-') != std::string::npos) {
    throw std::runtime_error(std::string("config: ") + key + " must be non-negative");
  }
  target = tree.get<T>(key);
}

}  // namespace

ToolConfig load_config(const std::filesystem::path& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    auto it = known_keys().find(section);
    if (it == known_keys().end()) throw std::runtime_error("config: unknown section [" + section + "]");
    for (const auto& [key, unused] : body) {
      if (!it->second.count(key)) throw std::runtime_error("config: unknown key " + section + "." + key);
    }
  }

  ToolConfig cfg;
  auto& d = cfg.dataset;
  try {
    read(tree, "quantizer.small_max", d.thresholds.small_max);
    read(tree, "quantizer.large_min", d.thresholds.large_min);
    read(tree, "quantizer.long_len", d.thresholds.long_len);
    read(tree, "interpreter.step_budget", d.exec.step_budget);
    read(tree, "interpreter.sentinel_int", d.exec.uninit_sentinel_int);
    read(tree, "interpreter.sentinel_float", d.exec.uninit_sentinel_float);
    read(tree, "interpreter.max_call_depth", d.exec.max_call_depth);
    read(tree, "dataset.cap", d.cap_per_problem);
    read(tree, "dataset.mlm_rate", d.mlm_rate);
    read(tree, "dataset.seed", d.seed);
    read(tree, "dataset.split", cfg.train_fraction);
    read(tree, "dataset.max_input", d.assemble.max_input);
    read(tree, "dataset.max_code", d.assemble.max_code);
    read(tree, "dataset.workers", d.workers);
    read(tree, "corpus.seed", cfg.corpus.seed);
    read(tree, "corpus.problems", cfg.corpus.problems);
    read(tree, "corpus.variants", cfg.corpus.variants);
  } catch (const pt::ptree_bad_data& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  d.thresholds.validate();
  return cfg;
}

}  // namespace tracelab::pipeline
