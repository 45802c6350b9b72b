#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace tracelab::pipeline {

/// Ground truth pulled from one dataset record.
struct TruthRow {
  std::string sample_id;
  std::string problem_id;
  std::vector<bool> branch_taken;
  std::vector<std::int32_t> occurrence_bins;  // per aligned occurrence, lexical order
};

/// One row of a predictions file, aligned with the truth file by position.
struct PredictionRow {
  std::string problem_id;
  std::optional<std::string> sample_id;
  std::vector<bool> branch_pred;
  std::vector<std::int32_t> value_pred;
};

class AlignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

TruthRow truth_from_record(const nlohmann::json& record);
PredictionRow prediction_from_json(const nlohmann::json& row);
nlohmann::json prediction_to_json(const PredictionRow& row);

/// Predictions that reproduce the truth exactly.
std::vector<PredictionRow> oracle_predictions(const std::vector<TruthRow>& truth);

struct RankingInput {
  std::vector<std::vector<bool>> rankings;
  std::size_t r = 0;
};

/// {full_path_acc, branch:{acc,p,r,f1}, value_acc, full_exec_acc, map_at_r?}.
/// A metric with nothing to average over (no branch sites, no occurrences) is null.
/// Throws AlignmentError when row counts, problem ids, sample ids or vector lengths disagree.
nlohmann::json evaluate(const std::vector<TruthRow>& truth, const std::vector<PredictionRow>& preds,
                        const std::optional<RankingInput>& ranking = std::nullopt);

}  // namespace tracelab::pipeline
