#include "tracelab/quant/quantizer.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

#include "tracelab/common/hash.hpp"

namespace tracelab::quant {

using minic::TypeKind;

namespace {

constexpr std::array<std::string_view, kBinCount> kBinNames = {
    "IntNegLarge", "IntNegRegular", "IntNegSmall", "IntZero", "IntPosSmall", "IntPosRegular", "IntPosLarge",
    "FloatNegLarge", "FloatNegRegular", "FloatNegSmall", "FloatZero", "FloatPosSmall", "FloatPosRegular",
    "FloatPosLarge", "NulChar", "PrintableChar", "NonPrintableChar", "EmptyString", "RegularString",
    "LargeString", "NullPointer", "ValidPointer", "EmptyArray", "RegularArray", "LargeArray", "BoolTrue",
    "BoolFalse", "StructValue", "UnknownType", "Unknown",
};

constexpr std::array<std::string_view, kDataTypeCount> kDataTypeNames = {"Basic", "Pointer", "Array", "Struct"};
constexpr std::array<std::string_view, kValueTypeCount> kValueTypeNames = {
    "Integer", "Float", "Char", "String", "Boolean", "Composite", "Void"};

// Offset from the NegLarge bin of a family: NegLarge=0 ... Zero=3 ... PosLarge=6.
int magnitude_offset(bool negative, int tier) { return negative ? 2 - tier : 4 + tier; }

// tier: 0 small, 1 regular, 2 large.
template <typename T>
int tier_of(T magnitude, const QuantizationThresholds& thr) {
  if (magnitude <= static_cast<T>(thr.small_max)) return 0;
  if (magnitude < static_cast<T>(thr.large_min)) return 1;
  return 2;
}

QuantizedBin integer_bin(std::int64_t v, const QuantizationThresholds& thr) {
  if (v == 0) return QuantizedBin::IntZero;
  std::uint64_t magnitude = v < 0 ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
  return static_cast<QuantizedBin>(magnitude_offset(v < 0, tier_of(magnitude, thr)));
}

QuantizedBin float_bin(double v, const QuantizationThresholds& thr) {
  if (std::isnan(v)) return QuantizedBin::UnknownType;
  if (v == 0.0) return QuantizedBin::FloatZero;
  int base = static_cast<int>(QuantizedBin::FloatNegLarge);
  return static_cast<QuantizedBin>(base + magnitude_offset(v < 0, tier_of(std::fabs(v), thr)));
}

QuantizedBin length_bin(std::size_t len, const QuantizationThresholds& thr, QuantizedBin empty) {
  int base = static_cast<int>(empty);
  if (len == 0) return empty;
  return static_cast<QuantizedBin>(base + (len >= thr.long_len ? 2 : 1));
}

}  // namespace

void QuantizationThresholds::validate() const {
  if (small_max <= 0 || small_max >= large_min) {
    throw std::invalid_argument("thresholds need 0 < small_max < large_min");
  }
  if (long_len == 0) throw std::invalid_argument("long_len must be positive");
}

std::string_view to_string(DataTypeLabel label) { return kDataTypeNames[static_cast<std::size_t>(label)]; }
std::string_view to_string(ValueTypeLabel label) { return kValueTypeNames[static_cast<std::size_t>(label)]; }
std::string_view to_string(QuantizedBin bin) { return kBinNames[static_cast<std::size_t>(bin)]; }

std::optional<QuantizedBin> bin_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kBinNames.size(); ++i) {
    if (kBinNames[i] == name) return static_cast<QuantizedBin>(i);
  }
  return std::nullopt;
}

DataTypeLabel data_type_of(const Type& type) {
  switch (type.kind()) {
    case TypeKind::String:
    case TypeKind::Pointer: return DataTypeLabel::Pointer;
    case TypeKind::Array: return DataTypeLabel::Array;
    case TypeKind::Record: return DataTypeLabel::Struct;
    default: return DataTypeLabel::Basic;
  }
}

ValueTypeLabel value_type_of(const Type& type) {
  switch (type.kind()) {
    case TypeKind::Bool: return ValueTypeLabel::Boolean;
    case TypeKind::Char: return ValueTypeLabel::Char;
    case TypeKind::Int:
    case TypeKind::Long: return ValueTypeLabel::Integer;
    case TypeKind::Float:
    case TypeKind::Double: return ValueTypeLabel::Float;
    case TypeKind::String: return ValueTypeLabel::String;
    case TypeKind::Pointer: return value_type_of(type.element());
    case TypeKind::Array:
    case TypeKind::Record: return ValueTypeLabel::Composite;
    case TypeKind::Void: return ValueTypeLabel::Void;
  }
  return ValueTypeLabel::Void;
}

QuantizedTuple quantize(const Type& type, const RuntimeValue& value, const QuantizationThresholds& thr) {
  QuantizedTuple out{data_type_of(type), value_type_of(type), QuantizedBin::UnknownType};
  if (!(value.type == type) || !value.well_formed()) return out;
  const auto& p = value.payload;
  switch (type.kind()) {
    case TypeKind::Bool:
      out.bin = std::get<std::int64_t>(p) ? QuantizedBin::BoolTrue : QuantizedBin::BoolFalse;
      break;
    case TypeKind::Char: {
      std::int64_t code = std::get<std::int64_t>(p);
      out.bin = code == 0 ? QuantizedBin::NulChar
                : (code >= 32 && code <= 126) ? QuantizedBin::PrintableChar
                                              : QuantizedBin::NonPrintableChar;
      break;
    }
    case TypeKind::Int:
    case TypeKind::Long:
      out.bin = integer_bin(std::get<std::int64_t>(p), thr);
      break;
    case TypeKind::Float:
    case TypeKind::Double:
      out.bin = float_bin(std::get<double>(p), thr);
      break;
    case TypeKind::String: {
      const auto& s = std::get<minic::StringValue>(p);
      out.bin = s ? length_bin(s->size(), thr, QuantizedBin::EmptyString) : QuantizedBin::NullPointer;
      break;
    }
    case TypeKind::Pointer:
      out.bin = std::get<minic::PointerValue>(p).cell ? QuantizedBin::ValidPointer : QuantizedBin::NullPointer;
      break;
    case TypeKind::Array:
      out.bin = length_bin(std::get<minic::ElementList>(p).size(), thr, QuantizedBin::EmptyArray);
      break;
    case TypeKind::Record:
      out.bin = QuantizedBin::StructValue;
      break;
    case TypeKind::Void:
      break;
  }
  return out;
}

QuantizedTuple quantize_unexecuted(const Type& type) {
  return {data_type_of(type), value_type_of(type), QuantizedBin::Unknown};
}

std::string BinStrategy::label(const RuntimeValue& value) const {
  return std::string(to_string(quantize(value.type, value, thr_).bin));
}

std::string ConcreteStrategy::label(const RuntimeValue& value) const { return minic::render_value(value); }

std::unique_ptr<AbstractionStrategy> make_strategy(std::string_view name, const QuantizationThresholds& thr) {
  if (name == "bins") return std::make_unique<BinStrategy>(thr);
  if (name == "concrete") return std::make_unique<ConcreteStrategy>();
  throw std::invalid_argument("unknown abstraction strategy '" + std::string(name) + "'");
}

std::string taxonomy_json() {
  auto table = [](const auto& names) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < names.size(); ++i) rows.push_back({{"id", i}, {"name", names[i]}});
    return rows;
  };
  nlohmann::json doc = {
      {"bins", table(kBinNames)},
      {"data_types", table(kDataTypeNames)},
      {"value_types", table(kValueTypeNames)},
      {"unknown_bin", static_cast<int>(QuantizedBin::Unknown)},
  };
  return doc.dump(2) + "\n";
}

std::string taxonomy_hash() {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(taxonomy_json())));
  return buf;
}

}  // namespace tracelab::quant
