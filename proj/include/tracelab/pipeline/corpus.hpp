#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tracelab/minic/interpreter.hpp"
#include "tracelab/minic/parser.hpp"

namespace tracelab::pipeline {

/// One programming problem: equivalent solution variants plus the inputs
/// every variant is run on.
struct CorpusProblem {
  std::string problem_id;
  std::vector<minic::SourceProgram> programs;
  std::vector<minic::ExecInput> inputs;
};

/// Template-generated problems (threshold classification, accumulator loops,
/// digit loops, array scans, string scans, floating point, switch dispatch,
/// struct updates through pointers). Programs are in canonical form and each
/// problem gets 2-5 inputs chosen around its thresholds. Deterministic in seed.
std::vector<CorpusProblem> gen_corpus(std::uint64_t seed, std::size_t n_problems, std::size_t variants_per_problem);

/// Layout: <dir>/<problem_id>/v<j>.mc and <dir>/<problem_id>/in<k>.in.
void write_corpus(const std::filesystem::path& dir, const std::vector<CorpusProblem>& corpus);
/// Reads every problem directory in name order; sources are kept verbatim.
std::vector<CorpusProblem> read_corpus(const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace tracelab::pipeline
