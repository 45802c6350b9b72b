#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "doctest.h"
#include "fixture.hpp"
#include "json.hpp"
#include "random_values.hpp"
#include "tracelab/quant/quantizer.hpp"

using namespace tracelab::quant;
using tracelab::minic::RuntimeValue;
using tracelab::minic::Type;

namespace {

QuantizedBin ibin(std::int64_t v) {
  return quantize(Type::int_type(), RuntimeValue::integer(Type::int_type(), v)).bin;
}

QuantizedBin dbin(double v) {
  return quantize(Type::double_type(), RuntimeValue::floating(Type::double_type(), v)).bin;
}

int tier_rank(QuantizedBin b) {
  switch (b) {
    case QuantizedBin::IntPosSmall: return 0;
    case QuantizedBin::IntPosRegular: return 1;
    case QuantizedBin::IntPosLarge: return 2;
    default: return -1;
  }
}

}  // namespace

TEST_CASE("the uninitialized sentinel and its negation are large") {
  auto t = quantize(Type::int_type(), RuntimeValue::integer(Type::int_type(), 32767));
  CHECK(t == QuantizedTuple{DataTypeLabel::Basic, ValueTypeLabel::Integer, QuantizedBin::IntPosLarge});
  CHECK(ibin(-32767) == QuantizedBin::IntNegLarge);
  CHECK(ibin(0) == QuantizedBin::IntZero);
  CHECK(ibin(120) == QuantizedBin::IntPosRegular);
}

TEST_CASE("integer boundaries at the default thresholds") {
  const std::pair<std::int64_t, QuantizedBin> cases[] = {
      {-10000, QuantizedBin::IntNegLarge},  {-9999, QuantizedBin::IntNegRegular},
      {-11, QuantizedBin::IntNegRegular},   {-10, QuantizedBin::IntNegSmall},
      {-1, QuantizedBin::IntNegSmall},      {0, QuantizedBin::IntZero},
      {1, QuantizedBin::IntPosSmall},       {10, QuantizedBin::IntPosSmall},
      {11, QuantizedBin::IntPosRegular},    {9999, QuantizedBin::IntPosRegular},
      {10000, QuantizedBin::IntPosLarge},
  };
  for (const auto& [v, expected] : cases) {
    CAPTURE(v);
    CHECK(ibin(v) == expected);
  }
  CHECK(ibin(std::numeric_limits<std::int64_t>::min()) == QuantizedBin::IntNegLarge);
}

TEST_CASE("float binning mirrors integers; NaN has no magnitude") {
  CHECK(dbin(0.0) == QuantizedBin::FloatZero);
  CHECK(dbin(-0.0) == QuantizedBin::FloatZero);
  CHECK(dbin(0.5) == QuantizedBin::FloatPosSmall);
  CHECK(dbin(10.0) == QuantizedBin::FloatPosSmall);
  CHECK(dbin(10.5) == QuantizedBin::FloatPosRegular);
  CHECK(dbin(-9999.9) == QuantizedBin::FloatNegRegular);
  CHECK(dbin(10000.0) == QuantizedBin::FloatPosLarge);
  CHECK(dbin(std::numeric_limits<double>::infinity()) == QuantizedBin::FloatPosLarge);
  CHECK(dbin(-std::numeric_limits<double>::infinity()) == QuantizedBin::FloatNegLarge);
  auto nan = quantize(Type::double_type(), RuntimeValue::floating(Type::double_type(), std::nan("")));
  CHECK(nan == QuantizedTuple{DataTypeLabel::Basic, ValueTypeLabel::Float, QuantizedBin::UnknownType});
}

TEST_CASE("chars, strings, pointers, arrays, bools and records") {
  auto c = [](std::int64_t code) {
    return quantize(Type::char_type(), RuntimeValue::integer(Type::char_type(), code)).bin;
  };
  CHECK(c(0) == QuantizedBin::NulChar);
  CHECK(c(32) == QuantizedBin::PrintableChar);
  CHECK(c(126) == QuantizedBin::PrintableChar);
  CHECK(c(127) == QuantizedBin::NonPrintableChar);
  CHECK(c(10) == QuantizedBin::NonPrintableChar);
  CHECK(c(-1) == QuantizedBin::NonPrintableChar);

  auto s = Type::string_type();
  CHECK(quantize(s, {s, tracelab::minic::StringValue{""}}) ==
        QuantizedTuple{DataTypeLabel::Pointer, ValueTypeLabel::String, QuantizedBin::EmptyString});
  CHECK(quantize(s, {s, tracelab::minic::StringValue{std::string(63, 'a')}}).bin == QuantizedBin::RegularString);
  CHECK(quantize(s, {s, tracelab::minic::StringValue{std::string(64, 'a')}}).bin == QuantizedBin::LargeString);
  CHECK(quantize(s, {s, tracelab::minic::StringValue{}}).bin == QuantizedBin::NullPointer);

  auto p = Type::pointer_to(Type::double_type());
  CHECK(quantize(p, {p, tracelab::minic::PointerValue{}}) ==
        QuantizedTuple{DataTypeLabel::Pointer, ValueTypeLabel::Float, QuantizedBin::NullPointer});
  CHECK(quantize(p, {p, tracelab::minic::PointerValue{3}}).bin == QuantizedBin::ValidPointer);

  auto a0 = Type::array_of(Type::int_type(), 0);
  auto a2 = Type::array_of(Type::int_type(), 2);
  auto a64 = Type::array_of(Type::int_type(), 64);
  std::mt19937_64 rng(1);
  CHECK(quantize(a0, gen::value_of(rng, a0)) ==
        QuantizedTuple{DataTypeLabel::Array, ValueTypeLabel::Composite, QuantizedBin::EmptyArray});
  CHECK(quantize(a2, gen::value_of(rng, a2)).bin == QuantizedBin::RegularArray);
  CHECK(quantize(a64, gen::value_of(rng, a64)).bin == QuantizedBin::LargeArray);

  auto b = Type::bool_type();
  CHECK(quantize(b, RuntimeValue::integer(b, 1)) ==
        QuantizedTuple{DataTypeLabel::Basic, ValueTypeLabel::Boolean, QuantizedBin::BoolTrue});
  CHECK(quantize(b, RuntimeValue::integer(b, 0)).bin == QuantizedBin::BoolFalse);

  auto def = std::make_shared<tracelab::minic::RecordDef>();
  def->name = "P";
  def->fields = {{"a", Type::int_type()}};
  auto r = Type::record(def);
  CHECK(quantize(r, gen::value_of(rng, r)) ==
        QuantizedTuple{DataTypeLabel::Struct, ValueTypeLabel::Composite, QuantizedBin::StructValue});
}

TEST_CASE("unexecuted occurrences keep their type labels") {
  CHECK(quantize_unexecuted(Type::int_type()) ==
        QuantizedTuple{DataTypeLabel::Basic, ValueTypeLabel::Integer, QuantizedBin::Unknown});
  CHECK(quantize_unexecuted(Type::string_type()) ==
        QuantizedTuple{DataTypeLabel::Pointer, ValueTypeLabel::String, QuantizedBin::Unknown});
  CHECK(quantize_unexecuted(Type::array_of(Type::char_type(), 3)) ==
        QuantizedTuple{DataTypeLabel::Array, ValueTypeLabel::Composite, QuantizedBin::Unknown});
}

TEST_CASE("random values: totality, no Unknown, sign symmetry, monotonicity") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 5000; ++i) {
    auto t = gen::any_type(rng);
    auto v = gen::value_of(rng, t);
    auto q = quantize(t, v);
    CHECK(static_cast<std::size_t>(q.bin) < kBinCount);
    CHECK(q.bin != QuantizedBin::Unknown);
    CHECK(q.data_type == data_type_of(t));
  }
  for (int i = 0; i < 5000; ++i) {
    std::int64_t v = gen::interesting_int(rng);
    if (v == 0 || v == std::numeric_limits<std::int64_t>::min()) continue;
    auto pos = static_cast<int>(ibin(v));
    auto neg = static_cast<int>(ibin(-v));
    CHECK(pos + neg == 2 * static_cast<int>(QuantizedBin::IntZero));
  }
  std::int64_t prev = 1;
  for (std::int64_t v = 1; v < 20000; v += gen::pick(rng, 1, 50)) {
    CHECK(tier_rank(ibin(prev)) <= tier_rank(ibin(v)));
    prev = v;
  }
}

TEST_CASE("custom thresholds shift the tiers and are validated") {
  QuantizationThresholds thr{.small_max = 100, .large_min = 1000, .long_len = 4};
  auto i = Type::int_type();
  CHECK(quantize(i, RuntimeValue::integer(i, 100), thr).bin == QuantizedBin::IntPosSmall);
  CHECK(quantize(i, RuntimeValue::integer(i, 1000), thr).bin == QuantizedBin::IntPosLarge);
  auto s = Type::string_type();
  CHECK(quantize(s, {s, tracelab::minic::StringValue{"abcd"}}, thr).bin == QuantizedBin::LargeString);
  CHECK_THROWS_AS((QuantizationThresholds{0, 10, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((QuantizationThresholds{10, 10, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((QuantizationThresholds{1, 10, 0}.validate()), std::invalid_argument);
  CHECK_NOTHROW(QuantizationThresholds{}.validate());
}

TEST_CASE("strategies") {
  auto v = RuntimeValue::integer(Type::int_type(), 32767);
  CHECK(ConcreteStrategy().label(v) == "32767");
  CHECK(BinStrategy().label(v) == "IntPosLarge");
  CHECK(make_strategy("concrete")->name() == "concrete");
  CHECK_THROWS_AS(make_strategy("coarse"), std::invalid_argument);

  std::set<std::string> concrete, bins;
  auto c = make_strategy("concrete");
  auto b = make_strategy("bins");
  for (const auto& name : fixture::names()) {
    for (const auto& ev : fixture::run(name).trace.events) {
      for (const auto& [var, value] : ev.vars) {
        concrete.insert(c->label(value));
        bins.insert(b->label(value));
      }
    }
  }
  CHECK(concrete.size() > bins.size());
}

TEST_CASE("taxonomy lists 30 bins with stable ids") {
  auto doc = nlohmann::json::parse(taxonomy_json());
  REQUIRE(doc["bins"].size() == kBinCount);
  for (std::size_t i = 0; i < kBinCount; ++i) {
    CHECK(doc["bins"][i]["id"] == i);
    auto name = doc["bins"][i]["name"].get<std::string>();
    CHECK(bin_from_string(name) == static_cast<QuantizedBin>(i));
  }
  CHECK(doc["unknown_bin"] == 29);
  CHECK(doc["data_types"].size() == kDataTypeCount);
  CHECK(doc["value_types"].size() == kValueTypeCount);
  CHECK(taxonomy_hash().size() == 16);
  CHECK(taxonomy_hash() == taxonomy_hash());
}
