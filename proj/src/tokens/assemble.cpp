#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tracelab/common/rng.hpp"
#include "tracelab/tokens/tokens.hpp"

namespace tracelab::tokens {

AssembledSequence assemble(const labels::LabeledSample& sample, const Vocabulary& vocab, const AssembleConfig& cfg,
                           const Tokenizer& tokenizer) {
  auto input = tokenizer.tokenize(sample.input_text);
  auto code = tokenizer.tokenize(sample.annotated_code);
  input.resize(std::min(input.size(), cfg.max_input));
  code.resize(std::min(code.size(), cfg.max_code));

  AssembledSequence seq;
  auto push = [&](std::int32_t id, Region r) {
    seq.token_ids.push_back(id);
    seq.regions.push_back(r);
  };
  push(Vocabulary::kCls, Region::Cls);
  // Input text is data: a literal "[MASK]" in it must not become the mask token.
  for (const auto& t : input) {
    std::int32_t id = vocab.id(t.text);
    push(id == Vocabulary::kMask ? Vocabulary::kUnk : id, Region::Input);
  }
  push(Vocabulary::kSep, Region::Sep);
  push(Vocabulary::kSep, Region::Sep);
  seq.code_start = seq.token_ids.size();
  for (const auto& t : code) push(vocab.id(t.text), Region::Code);
  push(Vocabulary::kSep, Region::Sep);
  seq.input_tokens = input.size();
  seq.code_tokens = code.size();
  while (seq.token_ids.size() < cfg.pad_to) push(Vocabulary::kPad, Region::Pad);

  std::size_t n = seq.token_ids.size();
  seq.dtype.assign(n, kNullLabel);
  seq.vtype.assign(n, kNullLabel);
  seq.bin.assign(n, kNullLabel);
  seq.cov.assign(n, kNullLabel);

  // Code tokens are sorted by offset; locate each occurrence's pieces by span.
  auto first_at_or_after = [&](std::size_t offset) {
    return static_cast<std::size_t>(
        std::lower_bound(code.begin(), code.end(), offset, [](const Token& t, std::size_t o) { return t.begin < o; }) -
        code.begin());
  };
  for (std::size_t k = 0; k < sample.occurrences.size(); ++k) {
    const auto& occ = sample.occurrences[k];
    std::size_t begin = occ.annotated_begin;
    std::size_t end = begin + (occ.occurrence.end - occ.occurrence.begin);
    std::size_t first = first_at_or_after(begin);
    if (first >= code.size() || code[first].begin != begin) continue;
    std::size_t last = first;
    while (last < code.size() && code[last].end <= end) ++last;
    AlignedOccurrence a{k, seq.code_start + first, seq.code_start + last};
    const auto& state = occ.label.state;
    for (std::size_t p = a.first; p < a.last; ++p) {
      seq.dtype[p] = static_cast<std::int32_t>(state.data_type);
      seq.vtype[p] = static_cast<std::int32_t>(state.value_type);
      seq.bin[p] = static_cast<std::int32_t>(state.bin);
      seq.cov[p] = occ.label.coverage == labels::Coverage::Yes ? 1 : 0;
    }
    seq.alignment.push_back(a);
  }

  // Marker i sits at its source insertion offset plus the i markers before it.
  for (std::size_t i = 0; i < sample.branches.size(); ++i) {
    std::size_t offset = sample.branches[i].insertion_offset + i * labels::kMaskMarker.size();
    std::size_t idx = first_at_or_after(offset);
    if (idx < code.size() && code[idx].begin == offset) {
      seq.branch_mask_positions.push_back(seq.code_start + idx);
      seq.branch_taken.push_back(sample.branches[i].taken);
    }
  }
  return seq;
}

std::size_t mlm_mask_count(std::size_t code_tokens, double rate) {
  // The epsilon keeps decimal rates such as 0.15 from flooring one short.
  return static_cast<std::size_t>(std::floor(rate * static_cast<double>(code_tokens) + 1e-9));
}

std::vector<std::size_t> mlm_positions(const AssembledSequence& seq, double rate, std::uint64_t seed) {
  if (!(rate > 0.0 && rate < 1.0)) throw std::invalid_argument("mlm rate must lie in (0, 1)");
  std::vector<std::size_t> candidates;
  for (std::size_t p = 0; p < seq.token_ids.size(); ++p) {
    if (seq.regions[p] == Region::Code && seq.token_ids[p] != Vocabulary::kMask) candidates.push_back(p);
  }
  std::size_t count = std::min(mlm_mask_count(seq.code_tokens, rate), candidates.size());
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(count);
  std::sort(candidates.begin(), candidates.end());
  return candidates;
}

MlmResult mask_for_mlm(const AssembledSequence& seq, double rate, std::uint64_t seed) {
  MlmResult out{seq, {}};
  for (std::size_t p : mlm_positions(seq, rate, seed)) {
    out.targets.emplace_back(p, seq.token_ids[p]);
    out.masked.token_ids[p] = Vocabulary::kMask;
  }
  return out;
}

}  // namespace tracelab::tokens
