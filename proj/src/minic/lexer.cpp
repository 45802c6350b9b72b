#include "lexer.hpp"

#include <array>
#include <cctype>

#include "tracelab/minic/parser.hpp"

namespace tracelab::minic::detail {

namespace {

constexpr std::array<std::string_view, 21> kKeywords = {
    "int",   "long",  "float",    "double", "char", "bool",  "void",
    "struct", "if",   "else",     "while",  "for",  "return", "break",
    "continue", "switch", "case", "default", "NULL", "true", "false"};

constexpr std::array<std::string_view, 16> kLongPuncts = {
    "->", "++", "--", "<=", ">=", "==", "!=", "&&",
    "||", "+=", "-=", "*=", "/=", "%=", "<<", ">>"};

constexpr std::string_view kSinglePuncts = "{}()[];,.=+-*/%<>!&:";

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Tok> run() {
    std::vector<Tok> out;
    while (true) {
      skip_space_and_comments();
      if (pos_ >= src_.size()) break;
      out.push_back(next());
    }
    out.push_back({TokKind::End, "", here()});
    return out;
  }

 private:
  SourceLoc here() const { return {line_, col_, pos_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        SourceLoc start = here();
        advance();
        advance();
        while (pos_ < src_.size() && !(src_[pos_] == '*' && peek(1) == '/')) advance();
        if (pos_ >= src_.size()) throw ParseError("unterminated comment", start.line, start.column);
        advance();
        advance();
      } else {
        break;
      }
    }
  }

  Tok next() {
    SourceLoc start = here();
    char c = src_[pos_];
    if (c == '#') throw ParseError("preprocessor directives are not supported", start.line, start.column);
    if (is_ident_start(c)) {
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
      std::string text(src_.substr(start.offset, pos_ - start.offset));
      bool kw = false;
      for (auto k : kKeywords) kw = kw || k == text;
      return {kw ? TokKind::Keyword : TokKind::Ident, std::move(text), start};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number(start);
    if (c == '\'' || c == '"') return quoted(start, c);
    for (auto p : kLongPuncts) {
      if (src_.substr(pos_, p.size()) == p) {
        for (std::size_t i = 0; i < p.size(); ++i) advance();
        return {TokKind::Punct, std::string(p), start};
      }
    }
    if (kSinglePuncts.find(c) != std::string_view::npos) {
      advance();
      return {TokKind::Punct, std::string(1, c), start};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start.line, start.column);
  }

  Tok number(SourceLoc start) {
    bool is_float = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      is_float = true;
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t ahead = (peek(1) == '+' || peek(1) == '-') ? 2 : 1;
      if (std::isdigit(static_cast<unsigned char>(peek(ahead)))) {
        is_float = true;
        for (std::size_t i = 0; i < ahead; ++i) advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      }
    }
    if (is_ident_char(peek())) {
      throw ParseError("malformed number", start.line, start.column);
    }
    return {is_float ? TokKind::FloatLit : TokKind::IntLit,
            std::string(src_.substr(start.offset, pos_ - start.offset)), start};
  }

  Tok quoted(SourceLoc start, char quote) {
    advance();
    while (pos_ < src_.size() && src_[pos_] != quote && src_[pos_] != '\n') {
      if (src_[pos_] == '\\') advance();
      if (pos_ < src_.size()) advance();
    }
    if (pos_ >= src_.size() || src_[pos_] != quote) {
      throw ParseError("unterminated literal", start.line, start.column);
    }
    advance();
    return {quote == '"' ? TokKind::StringLit : TokKind::CharLit,
            std::string(src_.substr(start.offset, pos_ - start.offset)), start};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
};

}  // namespace

std::vector<Tok> lex(std::string_view source) { return Lexer(source).run(); }

}  // namespace tracelab::minic::detail
