#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "tracelab/trace/event.hpp"

namespace tracelab::trace {

using VarMap = std::map<std::string, RuntimeValue>;

/// Per-line program state: the variables after the last execution of each line.
struct FinalizedStates {
  std::map<std::uint32_t, VarMap> states;
  std::set<std::uint32_t> covered;

  friend bool operator==(const FinalizedStates&, const FinalizedStates&) = default;
};

class MalformedTrace : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& message, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Keeps the vars of the highest-step event at every touched line.
/// Throws MalformedTrace unless steps strictly increase.
FinalizedStates finalize(const RawTrace& trace);

std::set<std::uint32_t> covered_lines(const RawTrace& trace);

/// One JSON object per event: step, kind ("line"/"param"), line, func, and
/// vars as {name: {type, value}} with values in their printed form.
void write_trace_jsonl(std::ostream& out, const RawTrace& trace);
RawTrace read_trace_jsonl(std::istream& in);

void export_trace(const std::filesystem::path& path, const RawTrace& trace);
RawTrace ingest_trace(const std::filesystem::path& path);

}  // namespace tracelab::trace
