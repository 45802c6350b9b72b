#include "tracelab/trace/trace.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace tracelab::trace {

using nlohmann::json;

SchemaError::SchemaError(const std::string& message, std::size_t line)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

FinalizedStates finalize(const RawTrace& trace) {
  FinalizedStates out;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const auto& ev = trace.events[i];
    if (i > 0 && ev.step <= trace.events[i - 1].step) {
      throw MalformedTrace(ev.step == trace.events[i - 1].step
                               ? "duplicate step " + std::to_string(ev.step)
                               : "step " + std::to_string(ev.step) + " follows step " +
                                     std::to_string(trace.events[i - 1].step));
    }
    // Later events overwrite earlier ones, so each line keeps its last snapshot.
    out.states[ev.line] = ev.vars;
    out.covered.insert(ev.line);
  }
  return out;
}

std::set<std::uint32_t> covered_lines(const RawTrace& trace) {
  std::set<std::uint32_t> lines;
  for (const auto& ev : trace.events) lines.insert(ev.line);
  return lines;
}

namespace {

json event_to_json(const TraceEvent& ev) {
  json vars = json::object();
  for (const auto& [name, value] : ev.vars) {
    vars[name] = {{"type", value.type.spelling()}, {"value", minic::render_value(value)}};
  }
  return {{"step", ev.step},
          {"kind", ev.kind == EventKind::Line ? "line" : "param"},
          {"line", ev.line},
          {"func", ev.function},
          {"vars", std::move(vars)}};
}

const json& field(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(std::string("missing field '") + key + "'", line);
  return *it;
}

TraceEvent event_from_json(const json& obj, std::size_t line) {
  if (!obj.is_object()) throw SchemaError("event is not an object", line);
  TraceEvent ev;
  const json& step = field(obj, "step", line);
  if (!step.is_number_unsigned()) throw SchemaError("'step' must be a non-negative integer", line);
  ev.step = step.get<std::uint64_t>();

  const json& kind = field(obj, "kind", line);
  if (kind == "line") {
    ev.kind = EventKind::Line;
  } else if (kind == "param") {
    ev.kind = EventKind::Param;
  } else {
    throw SchemaError("'kind' must be \"line\" or \"param\"", line);
  }

  const json& src_line = field(obj, "line", line);
  if (!src_line.is_number_unsigned() || src_line.get<std::uint64_t>() > UINT32_MAX) {
    throw SchemaError("'line' must be a non-negative 32-bit integer", line);
  }
  ev.line = src_line.get<std::uint32_t>();

  const json& func = field(obj, "func", line);
  if (!func.is_string()) throw SchemaError("'func' must be a string", line);
  ev.function = func.get<std::string>();

  const json& vars = field(obj, "vars", line);
  if (!vars.is_object()) throw SchemaError("'vars' must be an object", line);
  for (const auto& [name, entry] : vars.items()) {
    if (!entry.is_object()) throw SchemaError("variable '" + name + "' is not an object", line);
    const json& type = field(entry, "type", line);
    const json& value = field(entry, "value", line);
    if (!type.is_string() || !value.is_string()) {
      throw SchemaError("variable '" + name + "' needs string 'type' and 'value'", line);
    }
    try {
      auto t = minic::parse_type_spelling(type.get<std::string>());
      ev.vars.emplace(name, minic::parse_value(t, value.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw SchemaError("variable '" + name + "': " + e.what(), line);
    }
  }
  return ev;
}

}  // namespace

void write_trace_jsonl(std::ostream& out, const RawTrace& trace) {
  for (const auto& ev : trace.events) out << event_to_json(ev).dump() << '\n';
}

RawTrace read_trace_jsonl(std::istream& in) {
  RawTrace trace;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw SchemaError(std::string("invalid JSON: ") + e.what(), line);
    }
    trace.events.push_back(event_from_json(obj, line));
  }
  return trace;
}

void export_trace(const std::filesystem::path& path, const RawTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_trace_jsonl(out, trace);
}

RawTrace ingest_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return read_trace_jsonl(in);
}

}  // namespace tracelab::trace
