#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tracelab/minic/types.hpp"

namespace tracelab::minic {

/// Abstract memory cell id; nullopt is the null pointer.
struct PointerValue {
  std::optional<std::uint64_t> cell;
};

/// char* payload; nullopt is a null string pointer.
using StringValue = std::optional<std::string>;

struct RuntimeValue;
using ElementList = std::vector<RuntimeValue>;

/// A concrete traced value together with its static type.
///
/// Payload by type: bool/char/int/long -> int64, float/double -> double,
/// char* -> StringValue, T* -> PointerValue, arrays and records -> ElementList
/// (record fields in declaration order).
struct RuntimeValue {
  Type type;
  std::variant<std::int64_t, double, StringValue, PointerValue, ElementList> payload;

  static RuntimeValue integer(const Type& t, std::int64_t v) { return {t, v}; }
  static RuntimeValue floating(const Type& t, double v) { return {t, v}; }

  /// True when the payload alternative agrees with the static type.
  bool well_formed() const;
};

/// Structural equality; all NaNs compare equal, -0.0 and 0.0 do not.
bool operator==(const RuntimeValue& a, const RuntimeValue& b);

/// Renders a value the way the debugger log prints it: numbers in decimal,
/// chars as `65 'A'`, strings quoted, pointers as hex or `null`, arrays as
/// `{1, 2}` and records as `{a = 1, b = 2}`.
std::string render_value(const RuntimeValue& value);

/// Parses render_value() output back into a value of `type`.
/// Throws std::invalid_argument on malformed text.
RuntimeValue parse_value(const Type& type, std::string_view text);

std::string format_address(std::uint64_t cell);
std::optional<std::uint64_t> parse_address(std::string_view text);

}  // namespace tracelab::minic
