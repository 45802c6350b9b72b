#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tracelab::metrics {

enum class MetricErrorKind { LengthMismatch, EmptyCorpus, TooFewCandidates, InvalidArgument };

std::string_view to_string(MetricErrorKind kind);

class MetricError : public std::runtime_error {
 public:
  MetricError(MetricErrorKind kind, const std::string& message);
  MetricErrorKind kind() const { return kind_; }

 private:
  MetricErrorKind kind_;
};

/// Ground-truth and predicted taken flags of one sample's branch sites, in lexical order.
struct BranchEval {
  std::vector<bool> truth;
  std::vector<bool> pred;
};

/// Ground-truth and predicted quantized bins of one sample's occurrences.
struct ValueEval {
  std::vector<std::int32_t> truth;
  std::vector<std::int32_t> pred;
};

struct BranchScores {
  double accuracy = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

/// Exact match of all branch flags; vacuously true without branches.
bool full_path_match(const BranchEval& e);
double full_path_accuracy(const std::vector<BranchEval>& corpus);

/// Micro-averaged over every branch position; "taken" is the positive class.
/// Zero-denominator precision/recall/F1 are 0.
BranchScores branch_prf(const std::vector<BranchEval>& corpus);

bool full_exec_match(const ValueEval& e);
double full_exec_accuracy(const std::vector<ValueEval>& corpus);
/// Matched positions over all positions in the corpus.
double value_accuracy(const std::vector<ValueEval>& corpus);

/// Mean over queries of (1/R) * sum_{k<=R} P(k) * rel(k). Each ranking lists
/// candidate relevance in rank order and must hold at least R candidates.
double map_at_r(const std::vector<std::vector<bool>>& rankings, std::size_t r);

}  // namespace tracelab::metrics
