#include "tracelab/pipeline/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tracelab/common/hash.hpp"
#include "tracelab/common/rng.hpp"
#include "tracelab/labels/labels.hpp"
#include "tracelab/minic/parser.hpp"
#include "workers.hpp"

namespace tracelab::pipeline {

using nlohmann::json;

SplitSpec make_split(std::vector<std::string> problem_ids, double train_fraction, std::uint64_t seed) {
  std::sort(problem_ids.begin(), problem_ids.end());
  problem_ids.erase(std::unique(problem_ids.begin(), problem_ids.end()), problem_ids.end());
  if (problem_ids.size() < 2) throw std::invalid_argument("a split needs at least 2 problems");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train fraction must lie strictly between 0 and 1");
  }
  Rng rng(seed);
  rng.shuffle(problem_ids);
  auto n = static_cast<double>(problem_ids.size());
  auto n_train = static_cast<std::size_t>(std::clamp(std::round(train_fraction * n), 1.0, n - 1.0));
  SplitSpec split;
  split.seed = seed;
  split.train_problem_ids.assign(problem_ids.begin(), problem_ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.heldout_problem_ids.assign(problem_ids.begin() + static_cast<std::ptrdiff_t>(n_train), problem_ids.end());
  std::sort(split.train_problem_ids.begin(), split.train_problem_ids.end());
  std::sort(split.heldout_problem_ids.begin(), split.heldout_problem_ids.end());
  return split;
}

void validate_split(const SplitSpec& split, const std::vector<CorpusProblem>& corpus) {
  std::set<std::string> train(split.train_problem_ids.begin(), split.train_problem_ids.end());
  std::set<std::string> all = train;
  for (const auto& id : split.heldout_problem_ids) {
    if (train.count(id)) throw std::invalid_argument("problem " + id + " is in both train and heldout");
    all.insert(id);
  }
  std::set<std::string> ids;
  for (const auto& p : corpus) {
    if (!ids.insert(p.problem_id).second) throw std::invalid_argument("duplicate problem id " + p.problem_id);
  }
  if (all != ids) throw std::invalid_argument("split does not cover exactly the corpus problems");
}

json split_to_json(const SplitSpec& split) {
  return {{"seed", split.seed}, {"train", split.train_problem_ids}, {"heldout", split.heldout_problem_ids}};
}

SplitSpec split_from_json(const json& doc) {
  SplitSpec split;
  split.seed = doc.at("seed").get<std::uint64_t>();
  split.train_problem_ids = doc.at("train").get<std::vector<std::string>>();
  split.heldout_problem_ids = doc.at("heldout").get<std::vector<std::string>>();
  return split;
}

namespace {

struct WorkItem {
  const CorpusProblem* problem;
  std::size_t variant;
  std::size_t input;
  bool train;
  std::string sample_id;
};

struct Labeled {
  std::optional<labels::LabeledSample> sample;
  SkippedSample skip;
};

std::vector<std::pair<std::size_t, std::size_t>> sampled_pairs(const CorpusProblem& p, std::size_t cap,
                                                               std::uint64_t seed) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t v = 0; v < p.programs.size(); ++v) {
    for (std::size_t k = 0; k < p.inputs.size(); ++k) pairs.emplace_back(v, k);
  }
  if (pairs.size() > cap) {
    Rng rng(mix_seed(seed, fnv1a64(p.problem_id)));
    rng.shuffle(pairs);
    pairs.resize(cap);
    std::sort(pairs.begin(), pairs.end());
  }
  return pairs;
}

Labeled label_one(const WorkItem& item, const DatasetConfig& cfg) {
  const auto& problem = *item.problem;
  auto skip = [&](std::string reason, std::string message) {
    return Labeled{std::nullopt, {item.sample_id, std::move(reason), std::move(message)}};
  };
  minic::SourceProgram source;
  minic::Program program;
  try {
    source = minic::SourceProgram(minic::normalize_source(problem.programs[item.variant].text()), problem.problem_id);
    program = minic::parse(source);
  } catch (const minic::ParseError& e) {
    return skip("ParseError", e.what());
  }
  const auto& input = problem.inputs[item.input];
  auto result = minic::execute(program, input, cfg.exec);
  if (result.error) return skip(std::string(minic::to_string(result.error->kind)), result.error->message);
  try {
    return {labels::make_sample(program, source, input.to_text(), result.trace, cfg.thresholds), {}};
  } catch (const labels::MissingVariable& e) {
    return skip("MissingVariable", e.what());
  } catch (const std::exception& e) {
    return skip("LabelError", e.what());
  }
}

json record_json(const WorkItem& item, const labels::LabeledSample& sample, const tokens::AssembledSequence& seq,
                 const DatasetConfig& cfg) {
  std::uint64_t mlm_seed = mix_seed(cfg.seed, fnv1a64(item.sample_id));
  std::vector<int> regions;
  for (auto r : seq.regions) regions.push_back(static_cast<int>(r));
  json occurrences = json::array();
  for (const auto& a : seq.alignment) {
    const auto& occ = sample.occurrences[a.occurrence];
    occurrences.push_back({
        {"name", occ.occurrence.name},
        {"line", occ.occurrence.line},
        {"decl_id", occ.occurrence.decl_id},
        {"role", labels::to_string(occ.occurrence.role)},
        {"first", a.first},
        {"last", a.last},
        {"covered", occ.label.coverage == labels::Coverage::Yes},
        {"data_type", static_cast<int>(occ.label.state.data_type)},
        {"value_type", static_cast<int>(occ.label.state.value_type)},
        {"bin", static_cast<int>(occ.label.state.bin)},
    });
  }
  return {
      {"sample_id", item.sample_id},
      {"problem_id", item.problem->problem_id},
      {"variant", item.variant},
      {"input_index", item.input},
      {"input", sample.input_text},
      {"code", sample.code},
      {"token_ids", seq.token_ids},
      {"region_tags", regions},
      {"labels", {{"dtype", seq.dtype}, {"vtype", seq.vtype}, {"bin", seq.bin}, {"cov", seq.cov}}},
      {"occurrences", occurrences},
      {"branch_mask_positions", seq.branch_mask_positions},
      {"branch_taken", seq.branch_taken},
      {"mlm_seed", mlm_seed},
      {"mlm_positions", tokens::mlm_positions(seq, cfg.mlm_rate, mlm_seed)},
  };
}

}  // namespace

BuiltDataset build_dataset(const std::vector<CorpusProblem>& corpus, const SplitSpec& split,
                           const DatasetConfig& cfg) {
  validate_split(split, corpus);
  cfg.thresholds.validate();
  if (cfg.cap_per_problem == 0) throw std::invalid_argument("cap per problem must be positive");
  if (!(cfg.mlm_rate >= 0.0 && cfg.mlm_rate <= 1.0)) throw std::invalid_argument("mlm rate must lie in [0, 1]");

  std::set<std::string> train_ids(split.train_problem_ids.begin(), split.train_problem_ids.end());
  std::vector<WorkItem> items;
  for (const auto& problem : corpus) {
    for (auto [v, k] : sampled_pairs(problem, cfg.cap_per_problem, cfg.seed)) {
      items.push_back({&problem, v, k, train_ids.count(problem.problem_id) > 0,
                       problem.problem_id + "/v" + std::to_string(v) + "/in" + std::to_string(k)});
    }
  }

  std::vector<Labeled> labeled(items.size());
  parallel_for(items.size(), cfg.workers, [&](std::size_t i) { labeled[i] = label_one(items[i], cfg); });

  BuiltDataset out;
  std::vector<std::string> train_texts;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!labeled[i].sample) {
      out.skipped.push_back(labeled[i].skip);
    } else if (items[i].train) {
      train_texts.push_back(labeled[i].sample->input_text);
      train_texts.push_back(labeled[i].sample->annotated_code);
    }
  }
  out.vocab = tokens::Vocabulary::build(train_texts);

  std::vector<json> records(items.size());
  parallel_for(items.size(), cfg.workers, [&](std::size_t i) {
    if (!labeled[i].sample) return;
    auto seq = tokens::assemble(*labeled[i].sample, out.vocab, cfg.assemble);
    records[i] = record_json(items[i], *labeled[i].sample, seq, cfg);
  });

  std::map<std::string, std::size_t> by_reason;
  for (const auto& s : out.skipped) ++by_reason[s.reason];
  std::map<std::string, std::size_t> per_problem;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!labeled[i].sample) continue;
    ++per_problem[items[i].problem->problem_id];
    (items[i].train ? out.train : out.heldout).push_back(std::move(records[i]));
  }

  json skipped = json::array();
  for (const auto& s : out.skipped) {
    skipped.push_back({{"sample_id", s.sample_id}, {"reason", s.reason}, {"message", s.message}});
  }
  const auto& thr = cfg.thresholds;
  out.manifest = {
      {"seed", cfg.seed},
      {"split", split_to_json(split)},
      {"thresholds", {{"small_max", thr.small_max}, {"large_min", thr.large_min}, {"long_len", thr.long_len}}},
      {"taxonomy_hash", quant::taxonomy_hash()},
      {"interpreter",
       {{"step_budget", cfg.exec.step_budget},
        {"sentinel_int", cfg.exec.uninit_sentinel_int},
        {"sentinel_float", cfg.exec.uninit_sentinel_float},
        {"max_call_depth", cfg.exec.max_call_depth}}},
      {"cap_per_problem", cfg.cap_per_problem},
      {"mlm_rate", cfg.mlm_rate},
      {"budgets", {{"max_input", cfg.assemble.max_input}, {"max_code", cfg.assemble.max_code}}},
      {"pad_to", cfg.assemble.pad_to},
      {"truncation", "head"},
      {"averaging", "micro"},
      {"subtoken_aggregation", "first"},
      {"region_tags", {{"cls", 0}, {"input", 1}, {"sep", 2}, {"code", 3}, {"pad", 4}}},
      {"null_label", tokens::kNullLabel},
      {"vocab_size", out.vocab.size()},
      {"counts",
       {{"train", out.train.size()},
        {"heldout", out.heldout.size()},
        {"sampled", items.size()},
        {"skipped", out.skipped.size()}}},
      {"skipped_by_reason", by_reason},
      {"skipped", skipped},
      {"records_per_problem", per_problem},
  };
  return out;
}

std::string jsonl_line(const json& row) { return row.dump(-1, ' ', false, json::error_handler_t::replace) + "\n"; }

void write_dataset(const std::filesystem::path& out_dir, const BuiltDataset& data) {
  std::filesystem::create_directories(out_dir);
  auto write_rows = [&](const char* name, const std::vector<json>& rows) {
    std::string text;
    for (const auto& r : rows) text += jsonl_line(r);
    write_file(out_dir / name, text);
  };
  write_rows("train.jsonl", data.train);
  write_rows("heldout.jsonl", data.heldout);
  write_file(out_dir / "manifest.json", data.manifest.dump(2) + "\n");
  write_file(out_dir / "vocab.json", data.vocab.to_json());
  write_file(out_dir / "taxonomy.json", quant::taxonomy_json());
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<json> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace tracelab::pipeline
