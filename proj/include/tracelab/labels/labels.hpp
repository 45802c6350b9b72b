#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tracelab/minic/ast.hpp"
#include "tracelab/minic/parser.hpp"
#include "tracelab/quant/quantizer.hpp"
#include "tracelab/trace/trace.hpp"

namespace tracelab::labels {

enum class OccurrenceRole { Declaration, Parameter, Use };

/// One identifier token naming a local variable or parameter.
struct VariableOccurrence {
  std::string name;
  std::uint32_t line = 0;
  std::size_t begin = 0;  // byte span of the identifier in the source
  std::size_t end = 0;
  minic::Type type;
  std::uint32_t decl_id = 0;
  OccurrenceRole role = OccurrenceRole::Use;
};

enum class Coverage { No, Yes };

struct OccurrenceLabel {
  quant::QuantizedTuple state;
  Coverage coverage = Coverage::No;

  friend bool operator==(const OccurrenceLabel&, const OccurrenceLabel&) = default;
};

enum class BranchKind { IfThen, IfElse, WhileBody, ForBody, SwitchCase };

struct BranchSite {
  BranchKind kind;
  std::size_t insertion_offset = 0;  // just past the block's '{' (or the case label's ':')
  std::uint32_t line = 0;            // line of that '{' or ':'
  minic::NodeId block_id = 0;        // body statement id, or switch arm id
  std::vector<std::uint32_t> body_lines;
  bool taken = false;
};

struct Annotation {
  std::string code;  // source with "[MASK]" inserted at every site
  std::vector<BranchSite> sites;

  /// Position of source byte `offset` in the annotated code.
  std::size_t shift(std::size_t offset) const;
};

inline constexpr std::string_view kMaskMarker = "[MASK]";

class MissingVariable : public std::runtime_error {
 public:
  MissingVariable(const std::string& name, std::uint32_t line);
};

std::string_view to_string(BranchKind kind);
std::string_view to_string(OccurrenceRole role);

/// Declarations, parameters and uses of every local, ordered by position.
std::vector<VariableOccurrence> find_occurrences(const minic::Program& program);

std::vector<OccurrenceLabel> build_labels(const std::vector<VariableOccurrence>& occurrences,
                                          const trace::FinalizedStates& finalized,
                                          const quant::QuantizationThresholds& thr = {});

/// Inserts a marker after the opening brace of every then/else/loop body and
/// after every case label. Requires braced bodies (canonical source).
/// `taken` is true when any statement line of the block is covered.
Annotation annotate_branches(const minic::Program& program, const minic::SourceProgram& source,
                             const std::set<std::uint32_t>& covered);

struct LabeledOccurrence {
  VariableOccurrence occurrence;
  OccurrenceLabel label;
  std::size_t annotated_begin = 0;
};

struct LabeledSample {
  std::string problem_id;
  std::string input_text;
  std::string code;            // canonical source
  std::string annotated_code;  // code with branch markers
  std::vector<LabeledOccurrence> occurrences;
  std::vector<BranchSite> branches;
};

/// Labels one successful execution of `program` (parsed from `source`).
LabeledSample make_sample(const minic::Program& program, const minic::SourceProgram& source,
                          const std::string& input_text, const trace::RawTrace& trace,
                          const quant::QuantizationThresholds& thr = {});

std::string to_json_line(const LabeledSample& sample);

}  // namespace tracelab::labels
