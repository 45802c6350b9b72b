#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "tracelab/minic/interpreter.hpp"
#include "tracelab/pipeline/corpus.hpp"
#include "tracelab/quant/quantizer.hpp"
#include "tracelab/tokens/tokens.hpp"

namespace tracelab::pipeline {

struct SplitSpec {
  std::vector<std::string> train_problem_ids;
  std::vector<std::string> heldout_problem_ids;
  std::uint64_t seed = 0;
};

/// Shuffles the sorted ids with `seed` and puts round(fraction * n) of them,
/// clamped to [1, n-1], in train. Needs at least two distinct ids.
SplitSpec make_split(std::vector<std::string> problem_ids, double train_fraction, std::uint64_t seed);
/// Throws std::invalid_argument unless the two sets are disjoint and cover exactly the corpus ids.
void validate_split(const SplitSpec& split, const std::vector<CorpusProblem>& corpus);

nlohmann::json split_to_json(const SplitSpec& split);
SplitSpec split_from_json(const nlohmann::json& doc);

struct DatasetConfig {
  quant::QuantizationThresholds thresholds;
  minic::ExecConfig exec;
  tokens::AssembleConfig assemble;
  std::size_t cap_per_problem = 200;
  double mlm_rate = 0.15;
  std::uint64_t seed = 0;
  std::size_t workers = 0;  // 0: one per hardware thread
};

struct SkippedSample {
  std::string sample_id;
  std::string reason;  // ParseError, an ExecErrorKind name, MissingVariable or LabelError
  std::string message;
};

struct BuiltDataset {
  std::vector<nlohmann::json> train;
  std::vector<nlohmann::json> heldout;
  std::vector<SkippedSample> skipped;
  tokens::Vocabulary vocab;
  nlohmann::json manifest;
};

/// Traces, labels and assembles every sampled (program, input) pair. At most
/// `cap_per_problem` pairs per problem are drawn, without replacement and in
/// a seed-determined way. Sources are normalized before tracing. Samples that
/// fail anywhere are skipped and listed in the manifest. The vocabulary comes
/// from the train samples only. Output order never depends on `workers`.
BuiltDataset build_dataset(const std::vector<CorpusProblem>& corpus, const SplitSpec& split,
                           const DatasetConfig& cfg = {});

/// Writes train.jsonl, heldout.jsonl, manifest.json, vocab.json and taxonomy.json.
void write_dataset(const std::filesystem::path& out_dir, const BuiltDataset& data);

/// Compact single-line JSON with sorted keys.
std::string jsonl_line(const nlohmann::json& row);
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

}  // namespace tracelab::pipeline
