#include <random>
#include <sstream>

#include "doctest.h"
#include "fixture.hpp"
#include "random_values.hpp"
#include "tracelab/trace/trace.hpp"

using namespace tracelab::trace;

namespace {

// Naive oracle: for every line, scan the whole trace for its max-step event.
std::map<std::uint32_t, VarMap> brute_force_states(const RawTrace& t) {
  std::map<std::uint32_t, VarMap> out;
  std::set<std::uint32_t> lines;
  for (const auto& e : t.events) lines.insert(e.line);
  for (auto line : lines) {
    const TraceEvent* best = nullptr;
    for (const auto& e : t.events) {
      if (e.line == line && (!best || e.step > best->step)) best = &e;
    }
    out[line] = best->vars;
  }
  return out;
}

RawTrace roundtrip(const RawTrace& t) {
  std::stringstream ss;
  write_trace_jsonl(ss, t);
  return read_trace_jsonl(ss);
}

}  // namespace

TEST_CASE("loop lines keep their final snapshot") {
  auto states = finalize(fixture::run("factorial").trace);
  CHECK(render_value(states.states.at(18).at("y")) == "120");
  CHECK(render_value(states.states.at(17).at("i")) == "6");
  CHECK(states.states.at(14).size() == 1);
  CHECK(states.covered == std::set<std::uint32_t>{1, 3, 4, 5, 9, 11, 14, 16, 17, 18, 20});
  CHECK(states.states.count(6) == 0);
  CHECK(states.covered.count(6) == 0);
}

TEST_CASE("finalize matches the brute-force scan on random traces") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    auto t = gen::trace(rng);
    auto f = finalize(t);
    CHECK(f.states == brute_force_states(t));
    CHECK(f.covered == covered_lines(t));
  }
}

TEST_CASE("appending a copy of a line's last event leaves its state unchanged") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    auto t = gen::trace(rng);
    if (t.events.empty()) continue;
    auto before = finalize(t);
    auto dup = t.events[static_cast<std::size_t>(gen::pick(rng, 0, static_cast<std::int64_t>(t.events.size()) - 1))];
    // Only the last event at that line is a faithful duplicate.
    for (const auto& e : t.events) {
      if (e.line == dup.line) dup = e;
    }
    dup.step = t.events.back().step + 1;
    t.events.push_back(dup);
    CHECK(finalize(t) == before);
  }
}

TEST_CASE("covered_lines basics") {
  CHECK(covered_lines(RawTrace{}).empty());
  RawTrace t;
  for (std::uint64_t i = 0; i < 10; ++i) t.events.push_back({i, EventKind::Line, 7, "main", {}});
  CHECK(covered_lines(t) == std::set<std::uint32_t>{7});
}

TEST_CASE("non-monotone or duplicate steps are malformed") {
  RawTrace t;
  t.events.push_back({0, EventKind::Line, 1, "main", {}});
  t.events.push_back({0, EventKind::Line, 2, "main", {}});
  CHECK_THROWS_AS(finalize(t), MalformedTrace);
  t.events[1].step = 5;
  t.events.push_back({3, EventKind::Line, 2, "main", {}});
  CHECK_THROWS_AS(finalize(t), MalformedTrace);
}

TEST_CASE("trace JSONL round-trips interpreter and random traces") {
  for (const auto& name : fixture::names()) {
    auto t = fixture::run(name).trace;
    CHECK(roundtrip(t) == t);
  }
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    auto t = gen::trace(rng);
    CHECK(roundtrip(t) == t);
  }
}

TEST_CASE("a hand-written trace log ingests with matching payloads") {
  std::istringstream in(
      R"({"step":0,"kind":"param","line":1,"func":"f","vars":{"p":{"type":"int*","value":"0x1008"}}})"
      "\n"
      R"({"step":1,"kind":"line","line":3,"func":"f","vars":{"s":{"type":"char*","value":"\"a\\tb\""},"c":{"type":"char","value":"65 'A'"}}})"
      "\n\n"
      R"({"step":4,"kind":"line","line":4,"func":"f","vars":{"a":{"type":"double[2]","value":"{1.5, -inf}"}}})"
      "\n");
  auto t = read_trace_jsonl(in);
  REQUIRE(t.events.size() == 3);
  CHECK(t.events[0].kind == EventKind::Param);
  CHECK(std::get<tracelab::minic::PointerValue>(t.events[0].vars.at("p").payload).cell == 1u);
  CHECK(std::get<tracelab::minic::StringValue>(t.events[1].vars.at("s").payload) == "a\tb");
  CHECK(std::get<std::int64_t>(t.events[1].vars.at("c").payload) == 65);
  CHECK(t.events[2].step == 4);
  const auto& arr = std::get<tracelab::minic::ElementList>(t.events[2].vars.at("a").payload);
  CHECK(std::get<double>(arr[1].payload) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("schema violations carry the offending line number") {
  auto line_of_error = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_trace_jsonl(in);
    } catch (const SchemaError& e) {
      return e.line();
    }
    return 0;
  };
  const std::string ok = R"({"step":0,"kind":"line","line":1,"func":"main","vars":{}})";
  CHECK(line_of_error(ok + "\n" + R"({"kind":"line","line":1,"func":"main","vars":{}})") == 2);
  CHECK(line_of_error(ok + "\n" + ok + "\n{not json") == 3);
  CHECK(line_of_error(R"({"step":0,"kind":"jump","line":1,"func":"main","vars":{}})") == 1);
  CHECK(line_of_error(R"({"step":0,"kind":"line","line":1,"func":"main","vars":{"x":{"type":"int","value":"abc"}}})") == 1);
  CHECK(line_of_error(R"({"step":0,"kind":"line","line":1,"func":"main","vars":{"x":{"type":"quux","value":"1"}}})") == 1);
  CHECK(line_of_error(ok) == 0);
}
