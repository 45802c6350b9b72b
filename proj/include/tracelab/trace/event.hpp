#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tracelab/minic/value.hpp"

namespace tracelab::trace {

using minic::RuntimeValue;

enum class EventKind { Line, Param };

/// Snapshot of every in-scope variable, taken after one source line executed
/// (Line) or at the entry of a user-defined function (Param, parameters only).
struct TraceEvent {
  std::uint64_t step = 0;
  EventKind kind = EventKind::Line;
  std::uint32_t line = 0;
  std::string function;
  std::map<std::string, RuntimeValue> vars;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct RawTrace {
  std::vector<TraceEvent> events;

  friend bool operator==(const RawTrace&, const RawTrace&) = default;
};

}  // namespace tracelab::trace
