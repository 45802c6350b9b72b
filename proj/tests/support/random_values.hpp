#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <string>

#include "tracelab/minic/value.hpp"
#include "tracelab/trace/event.hpp"

namespace gen {

using tracelab::minic::ElementList;
using tracelab::minic::PointerValue;
using tracelab::minic::RecordDef;
using tracelab::minic::RuntimeValue;
using tracelab::minic::StringValue;
using tracelab::minic::Type;
using tracelab::minic::TypeKind;

inline std::int64_t pick(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline Type scalar_type(std::mt19937_64& rng) {
  switch (pick(rng, 0, 8)) {
    case 0: return Type::bool_type();
    case 1: return Type::char_type();
    case 2: return Type::int_type();
    case 3: return Type::long_type();
    case 4: return Type::float_type();
    case 5: return Type::double_type();
    case 6: return Type::string_type();
    case 7: return Type::pointer_to(Type::int_type());
    default: return Type::pointer_to(Type::pointer_to(Type::double_type()));
  }
}

inline Type any_type(std::mt19937_64& rng) {
  switch (pick(rng, 0, 5)) {
    case 0: {
      Type elem = scalar_type(rng);
      return Type::array_of(elem, static_cast<std::size_t>(pick(rng, 0, 4)));
    }
    case 1: {
      auto def = std::make_shared<RecordDef>();
      def->name = "R" + std::to_string(pick(rng, 0, 3));
      auto n = pick(rng, 1, 3);
      for (std::int64_t i = 0; i < n; ++i) def->fields.push_back({"f" + std::to_string(i), scalar_type(rng)});
      return Type::record(def);
    }
    default:
      return scalar_type(rng);
  }
}

// Integers skewed toward the interesting region around zero and the thresholds.
inline std::int64_t interesting_int(std::mt19937_64& rng) {
  switch (pick(rng, 0, 3)) {
    case 0: return pick(rng, -12, 12);
    case 1: return pick(rng, -10002, 10002);
    case 2: return pick(rng, std::numeric_limits<std::int32_t>::min(), std::numeric_limits<std::int32_t>::max());
    default: return pick(rng, std::numeric_limits<std::int64_t>::min(), std::numeric_limits<std::int64_t>::max());
  }
}

inline RuntimeValue value_of(std::mt19937_64& rng, const Type& t) {
  switch (t.kind()) {
    case TypeKind::Bool: return {t, pick(rng, 0, 1)};
    case TypeKind::Char: return {t, pick(rng, -128, 127)};
    case TypeKind::Int: return {t, static_cast<std::int64_t>(static_cast<std::int32_t>(interesting_int(rng)))};
    case TypeKind::Long: return {t, interesting_int(rng)};
    case TypeKind::Float:
    case TypeKind::Double: {
      double d = 0;
      switch (pick(rng, 0, 5)) {
        case 0: d = std::numeric_limits<double>::infinity() * (pick(rng, 0, 1) ? 1 : -1); break;
        case 1: d = std::nan(""); break;
        case 2: d = static_cast<double>(interesting_int(rng)); break;
        default: d = std::uniform_real_distribution<double>(-20000, 20000)(rng); break;
      }
      if (t.kind() == TypeKind::Float && std::isfinite(d)) d = static_cast<float>(d);
      return {t, d};
    }
    case TypeKind::String: {
      if (pick(rng, 0, 5) == 0) return {t, StringValue{}};
      std::string s;
      auto len = pick(rng, 0, 3) == 0 ? pick(rng, 60, 70) : pick(rng, 0, 8);
      for (std::int64_t i = 0; i < len; ++i) s += static_cast<char>(pick(rng, 1, 255));
      return {t, StringValue{s}};
    }
    case TypeKind::Pointer:
      if (pick(rng, 0, 3) == 0) return {t, PointerValue{}};
      return {t, PointerValue{static_cast<std::uint64_t>(pick(rng, 0, 4096))}};
    case TypeKind::Array: {
      ElementList elems;
      for (std::size_t i = 0; i < t.length(); ++i) elems.push_back(value_of(rng, t.element()));
      return {t, elems};
    }
    case TypeKind::Record: {
      ElementList elems;
      for (const auto& f : t.record_def().fields) elems.push_back(value_of(rng, f.type));
      return {t, elems};
    }
    default:
      return {t, std::int64_t{0}};
  }
}

// A trace with strictly increasing (possibly gapped) steps over a few lines.
inline tracelab::trace::RawTrace trace(std::mt19937_64& rng) {
  tracelab::trace::RawTrace t;
  auto n = pick(rng, 0, 60);
  auto lines = pick(rng, 1, 12);
  std::uint64_t step = static_cast<std::uint64_t>(pick(rng, 0, 3));
  for (std::int64_t i = 0; i < n; ++i) {
    tracelab::trace::TraceEvent ev;
    ev.step = step;
    step += static_cast<std::uint64_t>(pick(rng, 1, 3));
    ev.kind = pick(rng, 0, 7) == 0 ? tracelab::trace::EventKind::Param : tracelab::trace::EventKind::Line;
    ev.line = static_cast<std::uint32_t>(pick(rng, 1, lines));
    ev.function = pick(rng, 0, 1) ? "main" : "helper";
    auto vars = pick(rng, 0, 4);
    for (std::int64_t v = 0; v < vars; ++v) {
      ev.vars.insert_or_assign("v" + std::to_string(pick(rng, 0, 5)), value_of(rng, any_type(rng)));
    }
    t.events.push_back(std::move(ev));
  }
  return t;
}

}  // namespace gen
