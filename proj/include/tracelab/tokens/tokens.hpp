#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tracelab/labels/labels.hpp"

namespace tracelab::tokens {

struct Token {
  std::string text;
  std::size_t begin = 0;  // byte span in the tokenized text
  std::size_t end = 0;
};

/// Splits code or input text into tokens with source spans.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<Token> tokenize(std::string_view text) const = 0;
};

/// Identifiers (cut into 8-byte pieces), numbers, string and char literals,
/// longest-match operators, single punctuation bytes, and "[MASK]" as one token.
class SimpleTokenizer : public Tokenizer {
 public:
  static constexpr std::size_t kPieceLength = 8;
  std::vector<Token> tokenize(std::string_view text) const override;
};

std::vector<std::string> tokenize(std::string_view text);

class Vocabulary {
 public:
  static constexpr std::int32_t kPad = 0;
  static constexpr std::int32_t kUnk = 1;
  static constexpr std::int32_t kCls = 2;
  static constexpr std::int32_t kSep = 3;
  static constexpr std::int32_t kMask = 4;

  /// Only the five specials.
  Vocabulary();

  /// Specials, then every distinct token of `texts` in byte order.
  static Vocabulary build(const std::vector<std::string>& texts, const Tokenizer& tokenizer = SimpleTokenizer());

  std::int32_t id(std::string_view token) const;
  const std::string& token(std::int32_t id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::string to_json() const;
  /// Throws std::invalid_argument on malformed input or misplaced specials.
  static Vocabulary from_json(std::string_view json);

 private:
  void add(const std::string& token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> ids_;
};

enum class Region : std::uint8_t { Cls, Input, Sep, Code, Pad };

inline constexpr std::int32_t kNullLabel = -1;

struct AssembleConfig {
  std::size_t max_input = 64;
  std::size_t max_code = 960;
  std::size_t pad_to = 0;  // 0: no padding
};

/// Sequence positions [first, last) that hold one occurrence's sub-tokens.
struct AlignedOccurrence {
  std::size_t occurrence = 0;  // index into the sample's occurrences
  std::size_t first = 0;
  std::size_t last = 0;
};

struct AssembledSequence {
  std::vector<std::int32_t> token_ids;
  std::vector<Region> regions;
  std::vector<std::int32_t> dtype, vtype, bin, cov;  // kNullLabel off variables
  std::vector<AlignedOccurrence> alignment;
  std::vector<std::size_t> branch_mask_positions;
  std::vector<bool> branch_taken;
  std::size_t input_tokens = 0;
  std::size_t code_tokens = 0;
  std::size_t code_start = 0;  // index of the first C-region position
};

/// [CLS] E [SEP] [SEP] C [SEP], E and C truncated separately (keeping the head).
/// C is the sample's annotated code, so branch markers become MASK tokens.
AssembledSequence assemble(const labels::LabeledSample& sample, const Vocabulary& vocab,
                           const AssembleConfig& cfg = {}, const Tokenizer& tokenizer = SimpleTokenizer());

struct MlmResult {
  AssembledSequence masked;
  std::vector<std::pair<std::size_t, std::int32_t>> targets;  // (position, original id), ascending
};

/// Number of positions masked for a C-region of `code_tokens` tokens.
std::size_t mlm_mask_count(std::size_t code_tokens, double rate);

/// Picks positions uniformly from the C-region tokens that are not already
/// MASK. Throws std::invalid_argument unless 0 < rate < 1.
std::vector<std::size_t> mlm_positions(const AssembledSequence& seq, double rate, std::uint64_t seed);
MlmResult mask_for_mlm(const AssembledSequence& seq, double rate, std::uint64_t seed);

}  // namespace tracelab::tokens
