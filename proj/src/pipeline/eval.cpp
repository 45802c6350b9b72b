#include "tracelab/pipeline/eval.hpp"

#include "tracelab/metrics/metrics.hpp"

namespace tracelab::pipeline {

using nlohmann::json;

TruthRow truth_from_record(const json& record) {
  TruthRow row;
  row.sample_id = record.at("sample_id").get<std::string>();
  row.problem_id = record.at("problem_id").get<std::string>();
  row.branch_taken = record.at("branch_taken").get<std::vector<bool>>();
  for (const auto& occ : record.at("occurrences")) row.occurrence_bins.push_back(occ.at("bin").get<std::int32_t>());
  return row;
}

PredictionRow prediction_from_json(const json& row) {
  PredictionRow p;
  p.problem_id = row.at("problem_id").get<std::string>();
  if (row.contains("sample_id")) p.sample_id = row.at("sample_id").get<std::string>();
  p.branch_pred = row.at("branch_pred").get<std::vector<bool>>();
  p.value_pred = row.at("value_pred").get<std::vector<std::int32_t>>();
  return p;
}

json prediction_to_json(const PredictionRow& row) {
  json out = {{"problem_id", row.problem_id}, {"branch_pred", row.branch_pred}, {"value_pred", row.value_pred}};
  if (row.sample_id) out["sample_id"] = *row.sample_id;
  return out;
}

std::vector<PredictionRow> oracle_predictions(const std::vector<TruthRow>& truth) {
  std::vector<PredictionRow> out;
  for (const auto& t : truth) out.push_back({t.problem_id, t.sample_id, t.branch_taken, t.occurrence_bins});
  return out;
}

namespace {

// Runs a corpus metric, mapping "nothing to average" to null.
template <typename Fn>
json or_null(Fn fn) {
  try {
    return fn();
  } catch (const metrics::MetricError& e) {
    if (e.kind() == metrics::MetricErrorKind::EmptyCorpus) return nullptr;
    throw;
  }
}

}  // namespace

json evaluate(const std::vector<TruthRow>& truth, const std::vector<PredictionRow>& preds,
              const std::optional<RankingInput>& ranking) {
  if (truth.size() != preds.size()) {
    throw AlignmentError("truth has " + std::to_string(truth.size()) + " rows but predictions have " +
                         std::to_string(preds.size()));
  }
  std::vector<metrics::BranchEval> branches;
  std::vector<metrics::ValueEval> values;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto& t = truth[i];
    const auto& p = preds[i];
    std::string where = "row " + std::to_string(i + 1) + " (" + t.sample_id + "): ";
    if (p.problem_id != t.problem_id) throw AlignmentError(where + "problem_id " + p.problem_id + " does not match");
    if (p.sample_id && *p.sample_id != t.sample_id) throw AlignmentError(where + "sample_id " + *p.sample_id + " does not match");
    if (p.branch_pred.size() != t.branch_taken.size()) throw AlignmentError(where + "branch_pred length differs");
    if (p.value_pred.size() != t.occurrence_bins.size()) throw AlignmentError(where + "value_pred length differs");
    branches.push_back({t.branch_taken, p.branch_pred});
    values.push_back({t.occurrence_bins, p.value_pred});
  }

  json report;
  report["full_path_acc"] = or_null([&] { return json(metrics::full_path_accuracy(branches)); });
  report["full_exec_acc"] = or_null([&] { return json(metrics::full_exec_accuracy(values)); });
  report["value_acc"] = or_null([&] { return json(metrics::value_accuracy(values)); });
  report["branch"] = or_null([&] {
    auto s = metrics::branch_prf(branches);
    return json{{"acc", s.accuracy}, {"p", s.precision}, {"r", s.recall}, {"f1", s.f1}};
  });
  if (ranking) report["map_at_r"] = metrics::map_at_r(ranking->rankings, ranking->r);
  return report;
}

}  // namespace tracelab::pipeline
