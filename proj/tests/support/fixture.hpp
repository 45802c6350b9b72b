#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tracelab/minic/interpreter.hpp"
#include "tracelab/minic/parser.hpp"

namespace fixture {

// Expected traces are written by hand, one event per line:
//   P|L <line> <function> | name=value | name=value ...
// and an optional last line "! <ErrorKind>" when the run must fault.
struct ExpectedEvent {
  char kind = 'L';
  std::uint32_t line = 0;
  std::string function;
  std::vector<std::pair<std::string, std::string>> vars;
};

struct Expected {
  std::vector<ExpectedEvent> events;
  std::optional<std::string> error;
};

inline std::filesystem::path dir() { return TRACELAB_FIXTURE_DIR; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline Expected load_expected(const std::filesystem::path& p) {
  Expected out;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '!') {
      out.error = trim(line.substr(1));
      continue;
    }
    ExpectedEvent ev;
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
      auto bar = line.find(" | ", pos);
      parts.push_back(trim(line.substr(pos, bar == std::string::npos ? std::string::npos : bar - pos)));
      if (bar == std::string::npos) break;
      pos = bar + 3;
    }
    std::istringstream head(parts[0]);
    head >> ev.kind >> ev.line >> ev.function;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      auto eq = parts[i].find('=');
      ev.vars.emplace_back(parts[i].substr(0, eq), parts[i].substr(eq + 1));
    }
    out.events.push_back(std::move(ev));
  }
  return out;
}

inline std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir())) {
    if (entry.path().extension() == ".trace") out.push_back(entry.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline tracelab::minic::ExecResult run(const std::string& name) {
  auto program = tracelab::minic::parse(slurp(dir() / (name + ".mc")));
  auto input_path = dir() / (name + ".in");
  auto input = std::filesystem::exists(input_path) ? slurp(input_path) : std::string();
  return tracelab::minic::execute(program, tracelab::minic::ExecInput::from_text(input));
}

// Empty string when the actual trace matches; otherwise the first difference.
inline std::string diff(const tracelab::minic::ExecResult& actual, const Expected& expected) {
  const auto& events = actual.trace.events;
  for (std::size_t i = 0; i < std::max(events.size(), expected.events.size()); ++i) {
    if (i >= events.size()) return "missing event " + std::to_string(i);
    if (i >= expected.events.size()) return "unexpected event " + std::to_string(i);
    const auto& a = events[i];
    const auto& e = expected.events[i];
    char kind = a.kind == tracelab::trace::EventKind::Line ? 'L' : 'P';
    std::string where = "event " + std::to_string(i) + ": ";
    if (a.step != i) return where + "step " + std::to_string(a.step);
    if (kind != e.kind || a.line != e.line || a.function != e.function) {
      return where + kind + " " + std::to_string(a.line) + " " + a.function;
    }
    if (a.vars.size() != e.vars.size()) return where + std::to_string(a.vars.size()) + " vars";
    for (const auto& [name, text] : e.vars) {
      auto it = a.vars.find(name);
      if (it == a.vars.end()) return where + "no var " + name;
      auto rendered = tracelab::minic::render_value(it->second);
      if (rendered != text) return where + name + "=" + rendered + ", expected " + text;
    }
  }
  std::string actual_error = actual.error ? std::string(to_string(actual.error->kind)) : "";
  if (actual_error != expected.error.value_or("")) return "error '" + actual_error + "'";
  return {};
}

}  // namespace fixture
