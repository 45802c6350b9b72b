#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tracelab/minic/ast.hpp"

namespace tracelab::minic {

/// MiniC source text plus a 1-based line index.
class SourceProgram {
 public:
  SourceProgram() = default;
  explicit SourceProgram(std::string text, std::string problem_id = {});

  const std::string& text() const { return text_; }
  const std::string& problem_id() const { return problem_id_; }

  std::size_t line_count() const { return line_starts_.size(); }
  /// Text of 1-based line `line`, without the newline.
  std::string_view line(std::uint32_t line) const;
  /// 1-based line containing byte `offset`.
  std::uint32_t line_of(std::size_t offset) const;

 private:
  std::string text_;
  std::string problem_id_;
  std::vector<std::size_t> line_starts_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::uint32_t line, std::uint32_t column);

  std::uint32_t line() const { return line_; }
  std::uint32_t column() const { return column_; }

 private:
  std::uint32_t line_;
  std::uint32_t column_;
};

class MissingMain : public ParseError {
 public:
  MissingMain() : ParseError("program has no 'main' function", 1, 1) {}
};

/// Parses and resolves a MiniC program: identifiers bind to declarations,
/// calls bind to functions or built-ins, expression types are computed.
Program parse(std::string_view source);
inline Program parse(const SourceProgram& source) { return parse(std::string_view(source.text())); }

/// Canonical pretty-printed source: one statement per line, every branch body
/// braced, four-space indentation. Idempotent under parse().
std::string print_program(const Program& program);

/// parse() followed by print_program().
std::string normalize_source(std::string_view source);

}  // namespace tracelab::minic
