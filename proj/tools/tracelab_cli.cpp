#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "tracelab/labels/labels.hpp"
#include "tracelab/minic/interpreter.hpp"
#include "tracelab/minic/parser.hpp"
#include "tracelab/pipeline/config.hpp"
#include "tracelab/pipeline/corpus.hpp"
#include "tracelab/pipeline/dataset.hpp"
#include "tracelab/pipeline/eval.hpp"
#include "tracelab/quant/quantizer.hpp"
#include "tracelab/trace/trace.hpp"

namespace fs = std::filesystem;
namespace pl = tracelab::pipeline;
using nlohmann::json;

namespace {

// Failure with a machine-readable kind; printed as JSON on stderr.
struct CliError {
  std::string kind;
  std::string message;
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    pl::write_file(out_path, text);
  }
}

pl::ToolConfig base_config(const std::string& config_path) {
  return config_path.empty() ? pl::ToolConfig{} : pl::load_config(config_path);
}

tracelab::minic::ExecInput read_input(const std::string& path) {
  return path.empty() ? tracelab::minic::ExecInput{} : tracelab::minic::ExecInput::from_text(pl::read_file(path));
}

std::string exec_error_json(const tracelab::minic::ExecError& e) {
  return json{{"error", tracelab::minic::to_string(e.kind)}, {"line", e.line}, {"message", e.message}}.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Execution traces, quantized state labels, token datasets and metrics for MiniC programs"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "INI config with [quantizer] [interpreter] [dataset] [corpus] sections")
      ->check(CLI::ExistingFile);

  // trace
  auto* trace_cmd = app.add_subcommand("trace", "Run a program and write its trace as JSONL");
  std::string prog_path, input_path, out_path;
  std::optional<std::uint64_t> budget;
  bool normalize = false;
  trace_cmd->add_option("program", prog_path, "MiniC source")->required()->check(CLI::ExistingFile);
  trace_cmd->add_option("input", input_path, "input file, whitespace-separated atoms")->check(CLI::ExistingFile);
  trace_cmd->add_option("-o,--out", out_path, "trace JSONL (default: stdout)");
  trace_cmd->add_option("--budget", budget, "step budget in line events");
  trace_cmd->add_flag("--normalize", normalize, "trace the canonical one-statement-per-line form");
  trace_cmd->footer(
      "Each line: {\"step\":N,\"kind\":\"line\"|\"param\",\"line\":L,\"func\":F,"
      "\"vars\":{name:{\"type\":T,\"value\":V}}}");

  // quantize
  auto* quant_cmd = app.add_subcommand("quantize", "Quantize one typed value, or print the taxonomy");
  std::string q_type, q_value;
  bool q_taxonomy = false, q_unexecuted = false;
  quant_cmd->add_option("type", q_type, "type spelling, e.g. int, double, char*, int[3]");
  quant_cmd->add_option("value", q_value, "value in printed form, e.g. 42, 1.5, \"abc\", {1, 2, 3}");
  quant_cmd->add_flag("--taxonomy", q_taxonomy, "print the label taxonomy JSON");
  quant_cmd->add_flag("--unexecuted", q_unexecuted, "label for a variable on a line that never ran");

  // annotate
  auto* ann_cmd = app.add_subcommand("annotate", "Label one (program, input) pair and insert branch markers");
  ann_cmd->add_option("program", prog_path, "MiniC source")->required()->check(CLI::ExistingFile);
  ann_cmd->add_option("input", input_path, "input file")->check(CLI::ExistingFile);
  ann_cmd->add_option("-o,--out", out_path, "labeled sample JSON (default: stdout)");

  // gen-corpus
  auto* gen_cmd = app.add_subcommand("gen-corpus", "Generate a synthetic corpus directory");
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> problems, variants;
  std::string out_dir;
  gen_cmd->add_option("--seed", seed, "generator seed");
  gen_cmd->add_option("--problems", problems, "number of problems (>= 2)");
  gen_cmd->add_option("--variants", variants, "solution variants per problem");
  gen_cmd->add_option("-o,--out", out_dir, "corpus directory")->required();

  // split
  auto* split_cmd = app.add_subcommand("split", "Split a corpus by problem id");
  std::string corpus_dir;
  std::optional<double> fraction;
  split_cmd->add_option("--corpus", corpus_dir, "corpus directory")->required()->check(CLI::ExistingDirectory);
  split_cmd->add_option("--fraction", fraction, "share of problems in train");
  split_cmd->add_option("--seed", seed, "split seed");
  split_cmd->add_option("-o,--out", out_path, "split JSON (default: stdout)");

  // build-dataset
  auto* build_cmd = app.add_subcommand("build-dataset", "Trace, label and assemble a corpus into train/heldout JSONL");
  std::string split_arg;
  std::optional<std::size_t> cap, workers;
  std::optional<double> mlm_rate;
  build_cmd->add_option("--corpus", corpus_dir, "corpus directory")->required()->check(CLI::ExistingDirectory);
  build_cmd->add_option("--split", split_arg, "train fraction, or a split JSON file");
  build_cmd->add_option("--seed", seed, "split, sampling and MLM seed");
  build_cmd->add_option("--cap", cap, "max samples per problem");
  build_cmd->add_option("--mlm-rate", mlm_rate, "MLM masking rate");
  build_cmd->add_option("--workers", workers, "worker threads (0: all cores)");
  build_cmd->add_option("-o,--out", out_dir, "output directory")->default_val("dataset");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions against a dataset JSONL");
  std::string pred_path, truth_path, rankings_path;
  std::optional<std::size_t> r;
  eval_cmd->add_option("--pred", pred_path, "predictions JSONL")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--truth", truth_path, "dataset JSONL")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--rankings", rankings_path, "retrieval rankings JSONL for MAP@R")->check(CLI::ExistingFile);
  eval_cmd->add_option("--r", r, "R for MAP@R");
  eval_cmd->add_option("-o,--out", out_path, "report JSON (default: stdout)");
  eval_cmd->footer(
      "Prediction rows, aligned with truth rows: {\"problem_id\":P,\"sample_id\":S (optional),"
      "\"branch_pred\":[bool],\"value_pred\":[bin id]}\n"
      "Ranking rows: {\"relevance\":[bool, in rank order]}");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", "Usage"}, {"message", e.what()}}.dump() << "\n";
    auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << sub->help();
    return 2;
  }

  try {
    auto cfg = base_config(config_path);
    auto& dcfg = cfg.dataset;

    if (*trace_cmd) {
      if (budget) dcfg.exec.step_budget = *budget;
      std::string text = pl::read_file(prog_path);
      if (normalize) text = tracelab::minic::normalize_source(text);
      auto program = tracelab::minic::parse(text);
      auto result = tracelab::minic::execute(program, read_input(input_path), dcfg.exec);
      std::ostringstream ss;
      tracelab::trace::write_trace_jsonl(ss, result.trace);
      emit(ss.str(), out_path);
      if (result.error) {
        std::cerr << exec_error_json(*result.error) << "\n";
        return 3;
      }
      return 0;
    }

    if (*quant_cmd) {
      if (q_taxonomy) {
        std::cout << tracelab::quant::taxonomy_json();
        return 0;
      }
      if (q_type.empty() || (q_value.empty() && !q_unexecuted)) {
        throw CliError{"Usage", "quantize needs TYPE and VALUE (or --unexecuted / --taxonomy)"};
      }
      auto type = tracelab::minic::parse_type_spelling(q_type);
      auto tuple = q_unexecuted ? tracelab::quant::quantize_unexecuted(type)
                                : tracelab::quant::quantize(type, tracelab::minic::parse_value(type, q_value),
                                                            dcfg.thresholds);
      std::cout << json{{"data_type", tracelab::quant::to_string(tuple.data_type)},
                        {"value_type", tracelab::quant::to_string(tuple.value_type)},
                        {"bin", tracelab::quant::to_string(tuple.bin)},
                        {"bin_id", static_cast<int>(tuple.bin)}}
                       .dump()
                << "\n";
      return 0;
    }

    if (*ann_cmd) {
      tracelab::minic::SourceProgram source(tracelab::minic::normalize_source(pl::read_file(prog_path)),
                                            fs::path(prog_path).stem().string());
      auto program = tracelab::minic::parse(source);
      auto input = read_input(input_path);
      auto result = tracelab::minic::execute(program, input, dcfg.exec);
      if (result.error) throw CliError{std::string(tracelab::minic::to_string(result.error->kind)), result.error->message};
      auto sample = tracelab::labels::make_sample(program, source, input.to_text(), result.trace, dcfg.thresholds);
      emit(tracelab::labels::to_json_line(sample) + "\n", out_path);
      return 0;
    }

    if (*gen_cmd) {
      if (seed) cfg.corpus.seed = *seed;
      if (problems) cfg.corpus.problems = *problems;
      if (variants) cfg.corpus.variants = *variants;
      auto corpus = pl::gen_corpus(cfg.corpus.seed, cfg.corpus.problems, cfg.corpus.variants);
      pl::write_corpus(out_dir, corpus);
      return 0;
    }

    if (*split_cmd) {
      if (seed) dcfg.seed = *seed;
      if (fraction) cfg.train_fraction = *fraction;
      std::vector<std::string> ids;
      for (const auto& p : pl::read_corpus(corpus_dir)) ids.push_back(p.problem_id);
      emit(pl::split_to_json(pl::make_split(ids, cfg.train_fraction, dcfg.seed)).dump(2) + "\n", out_path);
      return 0;
    }

    if (*build_cmd) {
      if (seed) dcfg.seed = *seed;
      if (cap) dcfg.cap_per_problem = *cap;
      if (mlm_rate) dcfg.mlm_rate = *mlm_rate;
      if (workers) dcfg.workers = *workers;
      auto corpus = pl::read_corpus(corpus_dir);
      pl::SplitSpec split;
      if (!split_arg.empty() && fs::is_regular_file(split_arg)) {
        split = pl::split_from_json(json::parse(pl::read_file(split_arg)));
      } else {
        if (!split_arg.empty()) {
          try {
            std::size_t used = 0;
            cfg.train_fraction = std::stod(split_arg, &used);
            if (used != split_arg.size()) throw std::invalid_argument(split_arg);
          } catch (const std::logic_error&) {
            throw CliError{"Usage", "--split must be a fraction or an existing split file: " + split_arg};
          }
        }
        std::vector<std::string> ids;
        for (const auto& p : corpus) ids.push_back(p.problem_id);
        split = pl::make_split(ids, cfg.train_fraction, dcfg.seed);
      }
      auto data = pl::build_dataset(corpus, split, dcfg);
      pl::write_dataset(out_dir, data);
      for (const auto& s : data.skipped) {
        std::cerr << json{{"skipped", s.sample_id}, {"reason", s.reason}, {"message", s.message}}.dump() << "\n";
      }
      return 0;
    }

    if (*eval_cmd) {
      std::vector<pl::TruthRow> truth;
      for (const auto& row : pl::read_jsonl(truth_path)) truth.push_back(pl::truth_from_record(row));
      std::vector<pl::PredictionRow> preds;
      for (const auto& row : pl::read_jsonl(pred_path)) preds.push_back(pl::prediction_from_json(row));
      std::optional<pl::RankingInput> ranking;
      if (!rankings_path.empty()) {
        if (!r) throw CliError{"Usage", "--rankings needs --r"};
        ranking = pl::RankingInput{{}, *r};
        for (const auto& row : pl::read_jsonl(rankings_path)) {
          ranking->rankings.push_back(row.at("relevance").get<std::vector<bool>>());
        }
      }
      emit(pl::evaluate(truth, preds, ranking).dump(2) + "\n", out_path);
      return 0;
    }
  } catch (const CliError& e) {
    std::cerr << json{{"error", e.kind}, {"message", e.message}}.dump() << "\n";
    return e.kind == "Usage" ? 2 : 1;
  } catch (const tracelab::minic::ParseError& e) {
    std::cerr << json{{"error", "ParseError"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const pl::AlignmentError& e) {
    std::cerr << json{{"error", "AlignmentMismatch"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << json{{"error", "SchemaError"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "Failure"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
