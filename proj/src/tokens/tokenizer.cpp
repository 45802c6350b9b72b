#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "tracelab/tokens/tokens.hpp"

namespace tracelab::tokens {

namespace {

constexpr std::array<std::string_view, 18> kOperators = {
    "<<=", ">>=", "->", "++", "--", "<=", ">=", "==", "!=", "&&", "||", "+=", "-=", "*=", "/=", "%=", "<<", ">>"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::size_t scan_quoted(std::string_view text, std::size_t i) {
  char quote = text[i++];
  while (i < text.size() && text[i] != quote && text[i] != '\n') {
    i += text[i] == '\\' && i + 1 < text.size() ? 2 : 1;
  }
  return i < text.size() && text[i] == quote ? i + 1 : i;
}

std::size_t scan_number(std::string_view text, std::size_t i) {
  while (i < text.size()) {
    char c = text[i];
    if (ident_char(c) || c == '.') {
      ++i;
    } else if ((c == '+' || c == '-') && (text[i - 1] == 'e' || text[i - 1] == 'E') &&
               !(text.size() > 1 && (text[i - 2] == 'x' || text[i - 2] == 'X'))) {
      ++i;
    } else {
      break;
    }
  }
  return i;
}

}  // namespace

std::vector<Token> SimpleTokenizer::tokenize(std::string_view text) const {
  std::vector<Token> out;
  std::size_t i = 0;
  auto emit = [&](std::size_t b, std::size_t e) { out.push_back({std::string(text.substr(b, e - b)), b, e}); };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (text.compare(i, labels::kMaskMarker.size(), labels::kMaskMarker) == 0) {
      emit(i, i + labels::kMaskMarker.size());
      i += labels::kMaskMarker.size();
    } else if (ident_start(c)) {
      std::size_t e = i;
      while (e < text.size() && ident_char(text[e])) ++e;
      for (std::size_t b = i; b < e; b += kPieceLength) emit(b, std::min(e, b + kPieceLength));
      i = e;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t e = scan_number(text, i + 1);
      emit(i, e);
      i = e;
    } else if (c == '"' || c == '\'') {
      std::size_t e = scan_quoted(text, i);
      emit(i, e);
      i = e;
    } else {
      std::size_t len = 1;
      for (auto op : kOperators) {
        if (text.compare(i, op.size(), op) == 0) {
          len = op.size();
          break;
        }
      }
      emit(i, i + len);
      i += len;
    }
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : SimpleTokenizer().tokenize(text)) out.push_back(std::move(t.text));
  return out;
}

Vocabulary::Vocabulary() {
  for (const char* s : {"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"}) add(s);
}

void Vocabulary::add(const std::string& token) {
  if (ids_.count(token)) return;
  ids_.emplace(token, static_cast<std::int32_t>(tokens_.size()));
  tokens_.push_back(token);
}

Vocabulary Vocabulary::build(const std::vector<std::string>& texts, const Tokenizer& tokenizer) {
  std::set<std::string> seen;
  for (const auto& text : texts) {
    for (auto& t : tokenizer.tokenize(text)) seen.insert(std::move(t.text));
  }
  Vocabulary v;
  for (const auto& t : seen) v.add(t);
  return v;
}

std::int32_t Vocabulary::id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnk : it->second;
}

std::string Vocabulary::to_json() const {
  return nlohmann::json{{"tokens", tokens_}}.dump(1) + "\n";
}

Vocabulary Vocabulary::from_json(std::string_view json) {
  std::vector<std::string> tokens;
  try {
    tokens = nlohmann::json::parse(json).at("tokens").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad vocabulary: ") + e.what());
  }
  Vocabulary v;
  if (tokens.size() < v.tokens_.size() || !std::equal(v.tokens_.begin(), v.tokens_.end(), tokens.begin())) {
    throw std::invalid_argument("bad vocabulary: special tokens missing or out of place");
  }
  for (const auto& t : tokens) v.add(t);
  if (v.size() != tokens.size()) throw std::invalid_argument("bad vocabulary: duplicate tokens");
  return v;
}

}  // namespace tracelab::tokens
