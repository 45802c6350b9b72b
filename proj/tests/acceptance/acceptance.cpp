// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "fixture.hpp"
#include "random_values.hpp"
#include "temp_dir.hpp"
#include "tracelab/labels/labels.hpp"
#include "tracelab/metrics/metrics.hpp"
#include "tracelab/pipeline/corpus.hpp"
#include "tracelab/pipeline/dataset.hpp"
#include "tracelab/quant/quantizer.hpp"
#include "tracelab/tokens/tokens.hpp"
#include "tracelab/trace/trace.hpp"

using namespace tracelab;
using minic::RuntimeValue;
using minic::Type;
using quant::QuantizedBin;

namespace {

// First failed expectation inside a check, if any.
struct Check {
  std::string failure;
  std::size_t count = 0;

  bool expect(bool ok, const std::string& what) {
    ++count;
    if (!ok && failure.empty()) failure = what;
    return ok;
  }
};

int failures = 0;

void criterion(const std::string& name, double limit_seconds, const std::function<std::string(Check&)>& body) {
  Check c;
  std::string detail;
  auto start = std::chrono::steady_clock::now();
  try {
    detail = body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs >= limit_seconds) {
    c.expect(false, "took " + std::to_string(secs) + "s, limit " + std::to_string(limit_seconds) + "s");
  }
  bool pass = c.failure.empty();
  failures += !pass;
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.3fs", secs);
  std::cout << (pass ? "PASS " : "FAIL ") << name << " [" << timing << ", " << c.count << " checks] "
            << (pass ? detail : c.failure) << std::endl;
}

std::vector<pipeline::CorpusProblem> default_corpus() { return pipeline::gen_corpus(0, 20, 3); }

// ---------------------------------------------------------------------------

std::string quantizer_anchors(Check& c) {
  using quant::DataTypeLabel;
  using quant::ValueTypeLabel;
  auto i = Type::int_type();
  auto q = [&](std::int64_t v) { return quant::quantize(i, RuntimeValue::integer(i, v)); };
  c.expect(q(32767) == quant::QuantizedTuple{DataTypeLabel::Basic, ValueTypeLabel::Integer, QuantizedBin::IntPosLarge},
           "(int, 32767) is not (Basic, Integer, PosLarge)");
  c.expect(q(-32767) == quant::QuantizedTuple{DataTypeLabel::Basic, ValueTypeLabel::Integer, QuantizedBin::IntNegLarge},
           "(int, -32767) is not (Basic, Integer, NegLarge)");

  // Written out by hand for small_max = 10, large_min = 10000.
  const std::vector<std::pair<std::int64_t, QuantizedBin>> suite = {
      {-10000, QuantizedBin::IntNegLarge},  {-9999, QuantizedBin::IntNegRegular}, {-11, QuantizedBin::IntNegRegular},
      {-10, QuantizedBin::IntNegSmall},     {-1, QuantizedBin::IntNegSmall},      {0, QuantizedBin::IntZero},
      {1, QuantizedBin::IntPosSmall},       {10, QuantizedBin::IntPosSmall},      {11, QuantizedBin::IntPosRegular},
      {9999, QuantizedBin::IntPosRegular},  {10000, QuantizedBin::IntPosLarge},
  };
  for (const auto& [v, bin] : suite) {
    c.expect(q(v).bin == bin, "boundary " + std::to_string(v) + " gave " + std::string(quant::to_string(q(v).bin)));
  }
  return "32767 -> PosLarge, -32767 -> NegLarge, 11 boundary points exact";
}

// ---------------------------------------------------------------------------

std::string interpreter_oracle(Check& c) {
  auto names = fixture::names();
  c.expect(names.size() >= 10, "fewer than 10 fixtures");
  for (const auto& name : names) {
    auto expected = fixture::load_expected(fixture::dir() / (name + ".trace"));
    auto d = fixture::diff(fixture::run(name), expected);
    c.expect(d.empty(), name + ": " + d);
  }
  // factorial(5) = 120 and the declaration-line sentinels.
  auto fact = fixture::run("factorial");
  c.expect(fact.ok() && fact.exit_code == 120, "factorial(5) did not return 120");
  bool sentinel_seen = false;
  for (const auto& ev : fact.trace.events) {
    if (ev.kind == trace::EventKind::Line && ev.function == "main" && ev.line == 3) {
      sentinel_seen = minic::render_value(ev.vars.at("x")) == "32767" && minic::render_value(ev.vars.at("y")) == "32767";
      break;
    }
  }
  c.expect(sentinel_seen, "uninitialized x, y do not hold 32767 in the declaration-line snapshot");
  return std::to_string(names.size()) + " fixtures event-for-event, factorial(5) = 120, sentinel on declaration line";
}

// ---------------------------------------------------------------------------

std::string last_occurrence_law(Check& c) {
  std::mt19937_64 rng(20240601);
  std::size_t events = 0;
  for (int round = 0; round < 1000; ++round) {
    auto raw = gen::trace(rng);
    events += raw.events.size();
    auto got = trace::finalize(raw);

    // Brute force: for every line, scan all events for the largest step.
    std::set<std::uint32_t> lines;
    for (const auto& ev : raw.events) lines.insert(ev.line);
    trace::FinalizedStates want;
    want.covered = lines;
    for (auto line : lines) {
      const trace::TraceEvent* best = nullptr;
      for (const auto& ev : raw.events) {
        if (ev.line == line && (!best || ev.step > best->step)) best = &ev;
      }
      want.states[line] = best->vars;
    }
    if (!c.expect(got == want, "trace " + std::to_string(round) + " differs from the max-step scan")) break;
  }
  return "1000 random traces (" + std::to_string(events) + " events) equal the brute-force scan";
}

// ---------------------------------------------------------------------------

std::string label_coherence(Check& c) {
  std::size_t occurrences = 0, samples = 0;
  auto check_sample = [&](const labels::LabeledSample& s) {
    ++samples;
    for (const auto& o : s.occurrences) {
      ++occurrences;
      bool no = o.label.coverage == labels::Coverage::No;
      bool unknown = o.label.state.bin == QuantizedBin::Unknown;
      c.expect(no == unknown, s.problem_id + ": " + o.occurrence.name + "@" + std::to_string(o.occurrence.line) +
                                  " breaks coverage=No <=> bin=Unknown");
    }
  };
  for (const auto& problem : default_corpus()) {
    for (const auto& src : problem.programs) {
      auto program = minic::parse(src);
      for (const auto& in : problem.inputs) {
        auto r = minic::execute(program, in);
        if (!c.expect(r.ok(), problem.problem_id + " failed to run")) continue;
        check_sample(labels::make_sample(program, src, in.to_text(), r.trace));
      }
    }
  }

  // The if/else fixture: y on the untaken line 6 versus y on line 9 after factorial(5).
  minic::SourceProgram src(fixture::slurp(fixture::dir() / "factorial.mc"), "factorial");
  auto program = minic::parse(src);
  auto input = minic::ExecInput::from_text(fixture::slurp(fixture::dir() / "factorial.in"));
  auto r = minic::execute(program, input);
  auto sample = labels::make_sample(program, src, input.to_text(), r.trace);
  check_sample(sample);
  std::optional<labels::OccurrenceLabel> y6, y9;
  for (const auto& o : sample.occurrences) {
    if (o.occurrence.name == "y" && o.occurrence.line == 6) y6 = o.label;
    if (o.occurrence.name == "y" && o.occurrence.line == 9) y9 = o.label;
  }
  c.expect(y6 && y6->coverage == labels::Coverage::No && y6->state.bin == QuantizedBin::Unknown,
           "y@6 is not (No, Unknown)");
  c.expect(y9 && y9->coverage == labels::Coverage::Yes && y9->state.bin == QuantizedBin::IntPosRegular,
           "y@9 is not (Yes, PosRegular)");
  return std::to_string(occurrences) + " occurrence labels over " + std::to_string(samples) +
         " samples coherent; y@6 (No, Unknown), y@9 (Yes, PosRegular)";
}

// ---------------------------------------------------------------------------

// Recounts written independently of the metrics module.
struct Naive {
  static double full_path(const std::vector<metrics::BranchEval>& corpus) {
    double hits = 0;
    for (const auto& e : corpus) {
      bool same = true;
      for (std::size_t i = 0; i < e.truth.size(); ++i) same = same && e.truth[i] == e.pred[i];
      hits += same ? 1 : 0;
    }
    return hits / static_cast<double>(corpus.size());
  }
  static metrics::BranchScores prf(const std::vector<metrics::BranchEval>& corpus) {
    std::map<std::pair<bool, bool>, double> confusion;
    for (const auto& e : corpus) {
      for (std::size_t i = 0; i < e.truth.size(); ++i) confusion[{e.truth[i], e.pred[i]}] += 1;
    }
    double tp = confusion[{true, true}], fp = confusion[{false, true}], fn = confusion[{true, false}];
    double total = tp + fp + fn + confusion[{false, false}];
    metrics::BranchScores s;
    s.accuracy = 1.0 - (fp + fn) / total;
    s.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    s.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    s.f1 = 2 * tp + fp + fn > 0 ? 2 * tp / (2 * tp + fp + fn) : 0.0;
    return s;
  }
  static double value_acc(const std::vector<metrics::ValueEval>& corpus) {
    double wrong = 0, total = 0;
    for (const auto& e : corpus) {
      for (std::size_t i = 0; i < e.truth.size(); ++i) wrong += e.truth[i] != e.pred[i];
      total += static_cast<double>(e.truth.size());
    }
    return 1.0 - wrong / total;
  }
  static double full_exec(const std::vector<metrics::ValueEval>& corpus) {
    double hits = 0;
    for (const auto& e : corpus) hits += e.truth == e.pred ? 1 : 0;
    return hits / static_cast<double>(corpus.size());
  }
};

bool close(double a, double b) { return std::fabs(a - b) <= 1e-12; }

std::string metrics_oracle(Check& c) {
  std::mt19937_64 rng(77);
  auto below = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  std::size_t instances = 0, corpora = 0;
  while (instances < 10000) {
    std::vector<metrics::BranchEval> branches;
    std::vector<metrics::ValueEval> values;
    int size = 1 + below(12);
    int flip = below(4);  // 0: exact copies, higher: noisier
    for (int s = 0; s < size; ++s) {
      metrics::BranchEval b;
      metrics::ValueEval v;
      int nb = below(7), nv = below(9);
      for (int i = 0; i < nb; ++i) {
        bool t = below(2);
        b.truth.push_back(t);
        b.pred.push_back(below(4) < flip ? !t : t);
      }
      for (int i = 0; i < nv; ++i) {
        int t = below(30);
        v.truth.push_back(t);
        v.pred.push_back(below(4) < flip ? below(30) : t);
      }
      // Implication: a full-path match contributes only correct positions.
      if (metrics::full_path_match(b)) {
        for (std::size_t i = 0; i < b.truth.size(); ++i) c.expect(b.truth[i] == b.pred[i], "implication law broken");
      }
      branches.push_back(std::move(b));
      values.push_back(std::move(v));
      ++instances;
    }
    ++corpora;
    c.expect(close(metrics::full_path_accuracy(branches), Naive::full_path(branches)), "full path accuracy");
    c.expect(close(metrics::full_exec_accuracy(values), Naive::full_exec(values)), "full exec accuracy");
    std::size_t positions = 0, value_positions = 0;
    for (const auto& b : branches) positions += b.truth.size();
    for (const auto& v : values) value_positions += v.truth.size();
    if (positions > 0) {
      auto got = metrics::branch_prf(branches);
      auto want = Naive::prf(branches);
      c.expect(close(got.accuracy, want.accuracy) && close(got.precision, want.precision) &&
                   close(got.recall, want.recall) && close(got.f1, want.f1),
               "branch P/R/F1 differ from the recount");
      if (metrics::full_path_accuracy(branches) == 1.0) c.expect(got.accuracy == 1.0, "implication law at corpus level");
    }
    if (value_positions > 0) c.expect(close(metrics::value_accuracy(values), Naive::value_acc(values)), "value accuracy");
  }

  // One query, R = 2, ranking [relevant, irrelevant]: (1/2) * (1 * 1) = 0.5.
  c.expect(metrics::map_at_r({{true, false}}, 2) == 0.5, "MAP@R of [rel, irrel] at R=2 is not 0.5");
  c.expect(metrics::map_at_r({{true, true, false}}, 2) == 1.0, "all top-R relevant is not 1.0");
  c.expect(metrics::map_at_r({{false, false, true}}, 2) == 0.0, "no relevant in top-R is not 0.0");
  return std::to_string(instances) + " instances in " + std::to_string(corpora) +
         " corpora match the recount to 1e-12; MAP@R example 0.5; implication law holds";
}

// ---------------------------------------------------------------------------

std::string long_program(std::size_t statements) {
  std::string s = "int main()\n{\n    int total = 0;\n    int longishidentifiername = read_int();\n";
  for (std::size_t i = 0; i < statements; ++i) {
    s += "    if (longishidentifiername > " + std::to_string(i) + ") {\n        total = total + " +
         std::to_string(i) + ";\n    }\n";
  }
  return s + "    return total;\n}\n";
}

std::string random_input(std::mt19937_64& rng) {
  static const std::vector<std::string> atoms = {"[MASK]", "12", "-7", "abc", "x", "[MASK][MASK]", "3.5", "[CLS]"};
  std::string out;
  auto n = rng() % 120;
  for (std::size_t i = 0; i < n; ++i) out += atoms[rng() % atoms.size()] + " ";
  return out;
}

std::string assembly_laws(Check& c) {
  std::mt19937_64 rng(4242);
  std::vector<labels::LabeledSample> samples;
  for (const auto& problem : pipeline::gen_corpus(3, 16, 1)) {
    auto program = minic::parse(problem.programs[0]);
    auto r = minic::execute(program, problem.inputs[0]);
    samples.push_back(labels::make_sample(program, problem.programs[0], problem.inputs[0].to_text(), r.trace));
  }
  for (std::size_t n : {10u, 200u, 600u}) {
    minic::SourceProgram src(long_program(n), "long");
    auto program = minic::parse(src);
    auto in = minic::ExecInput::from_text(std::to_string(n / 2));
    samples.push_back(labels::make_sample(program, src, in.to_text(), minic::execute(program, in).trace));
  }
  std::vector<std::string> texts;
  for (const auto& s : samples) texts.push_back(s.annotated_code);
  auto vocab = tokens::Vocabulary::build(texts);

  std::size_t sequences = 0, truncated = 0;
  for (int round = 0; round < 400; ++round) {
    auto sample = samples[rng() % samples.size()];
    sample.input_text = random_input(rng);
    auto seq = tokens::assemble(sample, vocab);
    ++sequences;
    truncated += seq.code_tokens == 960;

    std::size_t e = 0, code = 0;
    for (std::size_t i = 0; i < seq.token_ids.size(); ++i) {
      if (seq.regions[i] == tokens::Region::Input) {
        ++e;
        c.expect(seq.token_ids[i] != tokens::Vocabulary::kMask, "MASK inside the E region");
      }
      code += seq.regions[i] == tokens::Region::Code;
    }
    c.expect(e <= 64 && code <= 960, "region budget exceeded");
    c.expect(seq.token_ids.size() <= 1 + 64 + 2 + 960 + 1, "sequence longer than the layout allows");

    // Label sharing: every sub-token of an occurrence carries its labels, nothing else does.
    std::vector<bool> owned(seq.token_ids.size(), false);
    for (const auto& a : seq.alignment) {
      const auto& label = sample.occurrences[a.occurrence].label;
      for (std::size_t p = a.first; p < a.last; ++p) {
        owned[p] = true;
        c.expect(seq.bin[p] == static_cast<int>(label.state.bin) &&
                     seq.dtype[p] == static_cast<int>(label.state.data_type) &&
                     seq.vtype[p] == static_cast<int>(label.state.value_type) &&
                     seq.cov[p] == (label.coverage == labels::Coverage::Yes ? 1 : 0),
                 "sub-token labels differ from the occurrence label");
      }
    }
    for (std::size_t p = 0; p < owned.size(); ++p) {
      if (!owned[p]) c.expect(seq.bin[p] == tokens::kNullLabel, "label outside any occurrence");
    }

    // Integer form of floor(0.15 * |C|).
    auto masked = tokens::mlm_positions(seq, 0.15, static_cast<std::uint64_t>(round));
    c.expect(masked.size() == code * 15 / 100, "MLM count is not floor(0.15 |C|)");
    for (auto p : masked) c.expect(seq.regions[p] == tokens::Region::Code, "MLM position outside C");
  }
  c.expect(truncated > 0, "fuzz never reached the C budget");
  return std::to_string(sequences) + " fuzzed sequences (" + std::to_string(truncated) +
         " at the C cap): no MASK in E, budgets kept, labels shared, MLM count exact";
}

// ---------------------------------------------------------------------------

std::string pipeline_hygiene(Check& c) {
  auto corpus = pipeline::gen_corpus(5, 12, 1);
  std::vector<std::string> ids;
  for (const auto& p : corpus) ids.push_back(p.problem_id);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    pipeline::DatasetConfig cfg;
    cfg.seed = seed;
    cfg.cap_per_problem = 2;
    auto data = pipeline::build_dataset(corpus, pipeline::make_split(ids, 0.9, seed), cfg);
    std::set<std::string> train;
    for (const auto& r : data.train) train.insert(r["problem_id"].get<std::string>());
    for (const auto& r : data.heldout) {
      c.expect(!train.count(r["problem_id"].get<std::string>()), "seed " + std::to_string(seed) + ": shared problem id");
    }
    c.expect(!data.train.empty() && !data.heldout.empty(), "seed " + std::to_string(seed) + ": an empty side");
  }

  // Two identical CLI runs, compared byte for byte.
  TempDir tmp("acceptance");
  auto run = [&](const std::string& tag) {
    std::string cli = TRACELAB_CLI;
    auto dir = tmp / tag;
    std::string cmd = "\"" + cli + "\" gen-corpus --seed 7 --problems 10 --variants 3 -o \"" + (dir / "corpus").string() +
                      "\" && \"" + cli + "\" build-dataset --corpus \"" + (dir / "corpus").string() +
                      "\" --split 0.9 --seed 1 -o \"" + (dir / "data").string() + "\"";
    return std::system(cmd.c_str());
  };
  c.expect(run("a") == 0 && run("b") == 0, "CLI run failed");
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(tmp / "a")) {
    if (!entry.is_regular_file()) continue;
    ++files;
    auto rel = std::filesystem::relative(entry.path(), tmp / "a");
    auto other = tmp / "b" / rel.string();
    c.expect(std::filesystem::exists(other) && pipeline::read_file(entry.path()) == pipeline::read_file(other),
             rel.string() + " differs between identical runs");
  }
  c.expect(files > 30, "CLI runs produced too few files");
  return "100 seeds with disjoint problem ids; two CLI runs byte-identical over " + std::to_string(files) + " files";
}

}  // namespace

int main() {
  criterion("quantizer-anchors", 1.0, quantizer_anchors);
  criterion("interpreter-oracle", 5.0, interpreter_oracle);
  criterion("last-occurrence-law", 10.0, last_occurrence_law);
  criterion("label-coherence", 0, label_coherence);
  criterion("metrics-oracle", 0, metrics_oracle);
  criterion("assembly-laws", 0, assembly_laws);
  criterion("pipeline-hygiene", 0, pipeline_hygiene);
  return failures;
}
