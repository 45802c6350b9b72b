#include "tracelab/metrics/metrics.hpp"

namespace tracelab::metrics {

std::string_view to_string(MetricErrorKind kind) {
  switch (kind) {
    case MetricErrorKind::LengthMismatch: return "LengthMismatch";
    case MetricErrorKind::EmptyCorpus: return "EmptyCorpus";
    case MetricErrorKind::TooFewCandidates: return "TooFewCandidates";
    case MetricErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

MetricError::MetricError(MetricErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

namespace {

template <typename Eval>
void check_lengths(const Eval& e) {
  if (e.truth.size() != e.pred.size()) {
    throw MetricError(MetricErrorKind::LengthMismatch, "truth has " + std::to_string(e.truth.size()) +
                                                           " entries, prediction has " + std::to_string(e.pred.size()));
  }
}

template <typename Eval>
void check_nonempty(const std::vector<Eval>& corpus) {
  if (corpus.empty()) throw MetricError(MetricErrorKind::EmptyCorpus, "no samples to evaluate");
}

double ratio(std::size_t num, std::size_t den) { return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0; }

}  // namespace

bool full_path_match(const BranchEval& e) {
  check_lengths(e);
  return e.truth == e.pred;
}

double full_path_accuracy(const std::vector<BranchEval>& corpus) {
  check_nonempty(corpus);
  std::size_t hits = 0;
  for (const auto& e : corpus) hits += full_path_match(e);
  return ratio(hits, corpus.size());
}

BranchScores branch_prf(const std::vector<BranchEval>& corpus) {
  check_nonempty(corpus);
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (const auto& e : corpus) {
    check_lengths(e);
    for (std::size_t i = 0; i < e.truth.size(); ++i) {
      if (e.truth[i]) {
        (e.pred[i] ? tp : fn)++;
      } else {
        (e.pred[i] ? fp : tn)++;
      }
    }
  }
  std::size_t total = tp + fp + fn + tn;
  if (total == 0) throw MetricError(MetricErrorKind::EmptyCorpus, "corpus has no branch positions");
  BranchScores s;
  s.accuracy = ratio(tp + tn, total);
  s.precision = ratio(tp, tp + fp);
  s.recall = ratio(tp, tp + fn);
  s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

bool full_exec_match(const ValueEval& e) {
  check_lengths(e);
  return e.truth == e.pred;
}

double full_exec_accuracy(const std::vector<ValueEval>& corpus) {
  check_nonempty(corpus);
  std::size_t hits = 0;
  for (const auto& e : corpus) hits += full_exec_match(e);
  return ratio(hits, corpus.size());
}

double value_accuracy(const std::vector<ValueEval>& corpus) {
  check_nonempty(corpus);
  std::size_t hits = 0, total = 0;
  for (const auto& e : corpus) {
    check_lengths(e);
    for (std::size_t i = 0; i < e.truth.size(); ++i) hits += e.truth[i] == e.pred[i];
    total += e.truth.size();
  }
  if (total == 0) throw MetricError(MetricErrorKind::EmptyCorpus, "corpus has no value positions");
  return ratio(hits, total);
}

double map_at_r(const std::vector<std::vector<bool>>& rankings, std::size_t r) {
  if (r == 0) throw MetricError(MetricErrorKind::InvalidArgument, "R must be positive");
  check_nonempty(rankings);
  double sum = 0;
  for (std::size_t q = 0; q < rankings.size(); ++q) {
    const auto& ranking = rankings[q];
    if (ranking.size() < r) {
      throw MetricError(MetricErrorKind::TooFewCandidates, "query " + std::to_string(q) + " has " +
                                                               std::to_string(ranking.size()) + " candidates, R is " +
                                                               std::to_string(r));
    }
    std::size_t relevant = 0;
    double ap = 0;
    for (std::size_t k = 1; k <= r; ++k) {
      if (!ranking[k - 1]) continue;
      ++relevant;
      ap += static_cast<double>(relevant) / static_cast<double>(k);
    }
    sum += ap / static_cast<double>(r);
  }
  return sum / static_cast<double>(rankings.size());
}

}  // namespace tracelab::metrics
