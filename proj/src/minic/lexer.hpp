#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tracelab/minic/ast.hpp"

namespace tracelab::minic::detail {

enum class TokKind { Ident, Keyword, IntLit, FloatLit, CharLit, StringLit, Punct, End };

struct Tok {
  TokKind kind;
  std::string text;
  SourceLoc loc;
};

/// Splits MiniC source into tokens; comments are dropped. Throws ParseError.
std::vector<Tok> lex(std::string_view source);

}  // namespace tracelab::minic::detail
