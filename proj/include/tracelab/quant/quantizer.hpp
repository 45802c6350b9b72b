#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "tracelab/minic/value.hpp"

namespace tracelab::quant {

using minic::RuntimeValue;
using minic::Type;

enum class DataTypeLabel { Basic, Pointer, Array, Struct };
enum class ValueTypeLabel { Integer, Float, Char, String, Boolean, Composite, Void };

// Ids are the enumerator values and are part of the dataset format.
enum class QuantizedBin : std::uint8_t {
  IntNegLarge, IntNegRegular, IntNegSmall, IntZero, IntPosSmall, IntPosRegular, IntPosLarge,
  FloatNegLarge, FloatNegRegular, FloatNegSmall, FloatZero, FloatPosSmall, FloatPosRegular, FloatPosLarge,
  NulChar, PrintableChar, NonPrintableChar,
  EmptyString, RegularString, LargeString,
  NullPointer, ValidPointer,
  EmptyArray, RegularArray, LargeArray,
  BoolTrue, BoolFalse,
  StructValue,
  UnknownType,
  Unknown,
};

inline constexpr std::size_t kBinCount = 30;
inline constexpr std::size_t kDataTypeCount = 4;
inline constexpr std::size_t kValueTypeCount = 7;

struct QuantizationThresholds {
  std::int64_t small_max = 10;
  std::int64_t large_min = 10000;
  std::size_t long_len = 64;

  /// Throws std::invalid_argument unless 0 < small_max < large_min and long_len > 0.
  void validate() const;
  friend bool operator==(const QuantizationThresholds&, const QuantizationThresholds&) = default;
};

struct QuantizedTuple {
  DataTypeLabel data_type;
  ValueTypeLabel value_type;
  QuantizedBin bin;

  friend bool operator==(const QuantizedTuple&, const QuantizedTuple&) = default;
};

std::string_view to_string(DataTypeLabel label);
std::string_view to_string(ValueTypeLabel label);
std::string_view to_string(QuantizedBin bin);
std::optional<QuantizedBin> bin_from_string(std::string_view name);

DataTypeLabel data_type_of(const Type& type);
/// Pointers to non-char types take the value type of what they point to.
ValueTypeLabel value_type_of(const Type& type);

QuantizedTuple quantize(const Type& type, const RuntimeValue& value, const QuantizationThresholds& thr = {});
/// Label for an occurrence on a line that never ran: the bin is Unknown.
QuantizedTuple quantize_unexecuted(const Type& type);

/// Pluggable value abstraction: maps a runtime value to a label string.
class AbstractionStrategy {
 public:
  virtual ~AbstractionStrategy() = default;
  virtual std::string name() const = 0;
  virtual std::string label(const RuntimeValue& value) const = 0;
};

/// The 30-bin quantization; labels are bin names.
class BinStrategy : public AbstractionStrategy {
 public:
  explicit BinStrategy(QuantizationThresholds thr = {}) : thr_(thr) {}
  std::string name() const override { return "bins"; }
  std::string label(const RuntimeValue& value) const override;

 private:
  QuantizationThresholds thr_;
};

/// Identity abstraction: the printed value is the label.
class ConcreteStrategy : public AbstractionStrategy {
 public:
  std::string name() const override { return "concrete"; }
  std::string label(const RuntimeValue& value) const override;
};

std::unique_ptr<AbstractionStrategy> make_strategy(std::string_view name, const QuantizationThresholds& thr = {});

/// JSON table of every label with its integer id (bins, data types, value types).
std::string taxonomy_json();
/// 64-bit FNV-1a of taxonomy_json(), as 16 hex digits.
std::string taxonomy_hash();

}  // namespace tracelab::quant
