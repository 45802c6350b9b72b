#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tracelab/minic/ast.hpp"
#include "tracelab/trace/event.hpp"

namespace tracelab::minic {

/// Whitespace-separated input atoms, consumed strictly left to right.
struct ExecInput {
  std::vector<std::string> tokens;

  static ExecInput from_text(std::string_view text);
  std::string to_text() const;
};

struct ExecConfig {
  std::uint64_t step_budget = 100000;
  std::int64_t uninit_sentinel_int = 32767;
  double uninit_sentinel_float = 32767.0;
  std::size_t max_call_depth = 256;
};

enum class ExecErrorKind {
  StepBudgetExceeded,
  InputExhausted,
  InputFormat,
  DivisionByZero,
  NullDereference,
  InvalidMemoryAccess,
  IndexOutOfBounds,
  StackOverflow,
};

std::string_view to_string(ExecErrorKind kind);

struct ExecError {
  ExecErrorKind kind;
  std::uint32_t line = 0;
  std::string message;
};

struct ExecResult {
  trace::RawTrace trace;
  std::optional<ExecError> error;  // set when the trace is partial
  std::int64_t exit_code = 0;
  std::string output;               // text written by print()

  // Instrumentation independent of event emission: how often each line's
  // statement or loop header ran, and how often each branch body was entered
  // (keyed by the body statement's NodeId, or the SwitchArm id).
  std::map<std::uint32_t, std::uint64_t> line_hits;
  std::map<NodeId, std::uint64_t> block_entries;

  bool ok() const { return !error.has_value(); }
};

/// Runs `program` on `input`, logging a Param event at every user-function
/// entry and a Line event after every executed line. Deterministic.
/// Runtime faults stop execution and return the partial trace with `error` set.
ExecResult execute(const Program& program, const ExecInput& input, const ExecConfig& cfg = {});

}  // namespace tracelab::minic
