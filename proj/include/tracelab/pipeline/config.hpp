#pragma once

#include <cstdint>
#include <filesystem>

#include "tracelab/pipeline/dataset.hpp"

namespace tracelab::pipeline {

struct CorpusConfig {
  std::uint64_t seed = 0;
  std::size_t problems = 20;
  std::size_t variants = 3;
};

struct ToolConfig {
  DatasetConfig dataset;
  CorpusConfig corpus;
  double train_fraction = 0.9;
};

/// INI file with optional sections:
///   [quantizer]   small_max, large_min, long_len
///   [interpreter] step_budget, sentinel_int, sentinel_float, max_call_depth
///   [dataset]     cap, mlm_rate, seed, split, max_input, max_code, workers
///   [corpus]      seed, problems, variants
/// Missing keys keep their defaults; unknown keys are an error.
ToolConfig load_config(const std::filesystem::path& path);

}  // namespace tracelab::pipeline
