#include <algorithm>
#include <random>

#include "doctest.h"
#include "tracelab/metrics/metrics.hpp"

using namespace tracelab::metrics;

namespace {

MetricErrorKind error_of(auto&& fn) {
  try {
    fn();
  } catch (const MetricError& e) {
    return e.kind();
  }
  FAIL("no MetricError thrown");
  return MetricErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("full path match") {
  CHECK(full_path_match({{true, false}, {true, false}}));
  CHECK_FALSE(full_path_match({{true, false}, {true, true}}));
  CHECK(full_path_match({{}, {}}));
  CHECK(error_of([] { full_path_match({{true}, {}}); }) == MetricErrorKind::LengthMismatch);
}

TEST_CASE("branch precision, recall and F1 by hand") {
  auto s = branch_prf({{{true, false}, {true, true}}});
  CHECK(s.accuracy == doctest::Approx(0.5));
  CHECK(s.precision == doctest::Approx(0.5));
  CHECK(s.recall == doctest::Approx(1.0));
  CHECK(s.f1 == doctest::Approx(2.0 / 3.0));

  s = branch_prf({{{true, false, true}, {true, false, true}}});
  CHECK(s.accuracy == 1.0);
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 1.0);
  CHECK(s.f1 == 1.0);

  s = branch_prf({{{false, false}, {false, false}}});
  CHECK(s.accuracy == 1.0);
  CHECK(s.precision == 0.0);
  CHECK(s.recall == 0.0);
  CHECK(s.f1 == 0.0);

  CHECK(error_of([] { branch_prf({}); }) == MetricErrorKind::EmptyCorpus);
  CHECK(error_of([] { branch_prf({{{}, {}}}); }) == MetricErrorKind::EmptyCorpus);
  CHECK(error_of([] { branch_prf({{{true}, {true, false}}}); }) == MetricErrorKind::LengthMismatch);
}

TEST_CASE("value accuracy and full execution match") {
  ValueEval e{{1, 2, 3, 4}, {1, 2, 3, 5}};
  CHECK(value_accuracy({e}) == 0.75);
  CHECK_FALSE(full_exec_match(e));
  ValueEval same{{7, 8}, {7, 8}};
  CHECK(value_accuracy({same}) == 1.0);
  CHECK(full_exec_match(same));
  CHECK(full_exec_match({{}, {}}));
  CHECK(error_of([] { value_accuracy({ValueEval{{}, {}}}); }) == MetricErrorKind::EmptyCorpus);
  CHECK(error_of([] { value_accuracy({}); }) == MetricErrorKind::EmptyCorpus);
  CHECK(error_of([] { full_exec_match({{1}, {}}); }) == MetricErrorKind::LengthMismatch);
  CHECK(full_exec_accuracy({e, same}) == 0.5);
}

TEST_CASE("MAP@R") {
  CHECK(map_at_r({{true, false}}, 2) == 0.5);
  CHECK(map_at_r({{true, true, false}}, 2) == 1.0);
  CHECK(map_at_r({{false, false, true}}, 2) == 0.0);
  // (1/3) * (1/1 + 2/3) for [rel, irrel, rel]; averaged with a perfect query.
  CHECK(map_at_r({{true, false, true}, {true, true, true}}, 3) == doctest::Approx((5.0 / 9.0 + 1.0) / 2).epsilon(1e-15));
  CHECK(error_of([] { map_at_r({{true}}, 2); }) == MetricErrorKind::TooFewCandidates);
  CHECK(error_of([] { map_at_r({}, 2); }) == MetricErrorKind::EmptyCorpus);
  CHECK(error_of([] { map_at_r({{true}}, 0); }) == MetricErrorKind::InvalidArgument);
}

TEST_CASE("MAP@R stays in [0,1] and rises when a relevant item moves up") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    std::size_t n = 1 + rng() % 12;
    std::size_t r = 1 + rng() % n;
    std::vector<bool> ranking(n);
    for (std::size_t k = 0; k < n; ++k) ranking[k] = rng() % 2;
    double before = map_at_r({ranking}, r);
    CHECK(before >= 0.0);
    CHECK(before <= 1.0);
    for (std::size_t k = 1; k < n; ++k) {
      if (ranking[k] && !ranking[k - 1]) {
        auto swapped = ranking;
        swapped[k - 1] = true;
        swapped[k] = false;
        CHECK(map_at_r({swapped}, r) >= before);
        break;
      }
    }
  }
}

TEST_CASE("corpus metrics are invariant under sample reordering") {
  std::mt19937_64 rng(8);
  std::vector<BranchEval> corpus;
  for (int i = 0; i < 50; ++i) {
    BranchEval e;
    for (std::size_t k = rng() % 6; k > 0; --k) {
      e.truth.push_back(rng() % 2);
      e.pred.push_back(rng() % 2);
    }
    corpus.push_back(e);
  }
  auto a = branch_prf(corpus);
  auto fp = full_path_accuracy(corpus);
  std::shuffle(corpus.begin(), corpus.end(), rng);
  auto b = branch_prf(corpus);
  CHECK(a.accuracy == b.accuracy);
  CHECK(a.f1 == b.f1);
  CHECK(fp == full_path_accuracy(corpus));
}
