#include "tracelab/minic/value.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace tracelab::minic {

namespace {

constexpr std::uint64_t kAddressBase = 0x1000;
constexpr std::uint64_t kCellStride = 8;

[[noreturn]] void bad_value(std::string_view text, const std::string& why) {
  throw std::invalid_argument("bad value '" + std::string(text) + "': " + why);
}

void append_escaped(std::string& out, unsigned char c, char quote) {
  switch (c) {
    case '\n': out += "\\n"; return;
    case '\t': out += "\\t"; return;
    case '\r': out += "\\r"; return;
    case '\\': out += "\\\\"; return;
    default: break;
  }
  if (c == static_cast<unsigned char>(quote)) {
    out += '\\';
    out += quote;
    return;
  }
  if (c >= 32 && c <= 126) {
    out += static_cast<char>(c);
    return;
  }
  char buf[5];
  std::snprintf(buf, sizeof buf, "\\%03o", static_cast<unsigned>(c));
  out += buf;
}

// Decodes one possibly-escaped character starting at text[pos].
char unescape_one(std::string_view text, std::size_t& pos) {
  char c = text[pos++];
  if (c != '\\') return c;
  if (pos >= text.size()) bad_value(text, "dangling escape");
  char e = text[pos++];
  switch (e) {
    case 'n': return '\n';
    case 't': return '\t';
    case 'r': return '\r';
    case '\\': return '\\';
    case '"': return '"';
    case '\'': return '\'';
    default: break;
  }
  if (e >= '0' && e <= '7') {
    unsigned v = static_cast<unsigned>(e - '0');
    for (int i = 0; i < 2 && pos < text.size() && text[pos] >= '0' && text[pos] <= '7'; ++i) {
      v = v * 8 + static_cast<unsigned>(text[pos++] - '0');
    }
    return static_cast<char>(static_cast<unsigned char>(v));
  }
  bad_value(text, "unknown escape");
}

std::string render_floating(const Type& type, double v) {
  char buf[64];
  std::to_chars_result r{};
  if (type.kind() == TypeKind::Float) {
    r = std::to_chars(buf, buf + sizeof buf, static_cast<float>(v));
  } else {
    r = std::to_chars(buf, buf + sizeof buf, v);
  }
  return std::string(buf, r.ptr);
}

std::string render_char(std::int64_t code) {
  std::string out = std::to_string(code) + " '";
  append_escaped(out, static_cast<unsigned char>(code), '\'');
  return out + "'";
}

std::string render_string(const StringValue& s) {
  if (!s) return "null";
  std::string out = "\"";
  for (char c : *s) append_escaped(out, static_cast<unsigned char>(c), '"');
  return out + "\"";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

// Splits the inside of `{...}` on top-level commas, honoring quotes.
std::vector<std::string_view> split_elements(std::string_view inner) {
  std::vector<std::string_view> parts;
  if (trim(inner).empty()) return parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    char c = inner[i];
    if (c == '"' || c == '\'') {
      for (++i; i < inner.size() && inner[i] != c; ++i) {
        if (inner[i] == '\\') ++i;
      }
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      --depth;
    } else if (c == ',' && depth == 0) {
      parts.push_back(trim(inner.substr(start, i - start)));
      start = i + 1;
    }
  }
  parts.push_back(trim(inner.substr(start)));
  return parts;
}

std::int64_t parse_int(std::string_view text) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    bad_value(text, "expected integer");
  }
  return v;
}

}  // namespace

bool RuntimeValue::well_formed() const {
  switch (type.kind()) {
    case TypeKind::Bool:
    case TypeKind::Char:
    case TypeKind::Int:
    case TypeKind::Long:
      return std::holds_alternative<std::int64_t>(payload);
    case TypeKind::Float:
    case TypeKind::Double:
      return std::holds_alternative<double>(payload);
    case TypeKind::String:
      return std::holds_alternative<StringValue>(payload);
    case TypeKind::Pointer:
      return std::holds_alternative<PointerValue>(payload);
    case TypeKind::Array: {
      const auto* elems = std::get_if<ElementList>(&payload);
      if (!elems || elems->size() != type.length()) return false;
      for (const auto& e : *elems) {
        if (!(e.type == type.element()) || !e.well_formed()) return false;
      }
      return true;
    }
    case TypeKind::Record: {
      const auto* elems = std::get_if<ElementList>(&payload);
      const auto& fields = type.record_def().fields;
      if (!elems || elems->size() != fields.size()) return false;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (!((*elems)[i].type == fields[i].type) || !(*elems)[i].well_formed()) return false;
      }
      return true;
    }
    case TypeKind::Void:
      return false;
  }
  return false;
}

bool operator==(const RuntimeValue& a, const RuntimeValue& b) {
  if (!(a.type == b.type) || a.payload.index() != b.payload.index()) return false;
  if (const auto* x = std::get_if<double>(&a.payload)) {
    double y = std::get<double>(b.payload);
    if (std::isnan(*x) || std::isnan(y)) return std::isnan(*x) && std::isnan(y);
    return std::bit_cast<std::uint64_t>(*x) == std::bit_cast<std::uint64_t>(y);
  }
  if (const auto* x = std::get_if<PointerValue>(&a.payload)) {
    return x->cell == std::get<PointerValue>(b.payload).cell;
  }
  if (const auto* x = std::get_if<ElementList>(&a.payload)) {
    const auto& y = std::get<ElementList>(b.payload);
    if (x->size() != y.size()) return false;
    for (std::size_t i = 0; i < x->size(); ++i) {
      if (!((*x)[i] == y[i])) return false;
    }
    return true;
  }
  if (const auto* x = std::get_if<StringValue>(&a.payload)) {
    return *x == std::get<StringValue>(b.payload);
  }
  return std::get<std::int64_t>(a.payload) == std::get<std::int64_t>(b.payload);
}

std::string format_address(std::uint64_t cell) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%llx",
                static_cast<unsigned long long>(kAddressBase + cell * kCellStride));
  return buf;
}

std::optional<std::uint64_t> parse_address(std::string_view text) {
  if (text.size() < 3 || text.substr(0, 2) != "0x") return std::nullopt;
  std::uint64_t raw = 0;
  auto [ptr, ec] = std::from_chars(text.data() + 2, text.data() + text.size(), raw, 16);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  if (raw < kAddressBase || (raw - kAddressBase) % kCellStride != 0) return std::nullopt;
  return (raw - kAddressBase) / kCellStride;
}

std::string render_value(const RuntimeValue& value) {
  const Type& t = value.type;
  switch (t.kind()) {
    case TypeKind::Bool:
      return std::get<std::int64_t>(value.payload) != 0 ? "true" : "false";
    case TypeKind::Char:
      return render_char(std::get<std::int64_t>(value.payload));
    case TypeKind::Int:
    case TypeKind::Long:
      return std::to_string(std::get<std::int64_t>(value.payload));
    case TypeKind::Float:
    case TypeKind::Double:
      return render_floating(t, std::get<double>(value.payload));
    case TypeKind::String:
      return render_string(std::get<StringValue>(value.payload));
    case TypeKind::Pointer: {
      const auto& p = std::get<PointerValue>(value.payload);
      return p.cell ? format_address(*p.cell) : "null";
    }
    case TypeKind::Array: {
      std::string out = "{";
      const auto& elems = std::get<ElementList>(value.payload);
      for (std::size_t i = 0; i < elems.size(); ++i) {
        if (i) out += ", ";
        out += render_value(elems[i]);
      }
      return out + "}";
    }
    case TypeKind::Record: {
      std::string out = "{";
      const auto& elems = std::get<ElementList>(value.payload);
      const auto& fields = t.record_def().fields;
      for (std::size_t i = 0; i < elems.size(); ++i) {
        if (i) out += ", ";
        out += fields[i].name + " = " + render_value(elems[i]);
      }
      return out + "}";
    }
    case TypeKind::Void:
      break;
  }
  return "<void>";
}

RuntimeValue parse_value(const Type& type, std::string_view text) {
  text = trim(text);
  switch (type.kind()) {
    case TypeKind::Bool:
      if (text == "true") return {type, std::int64_t{1}};
      if (text == "false") return {type, std::int64_t{0}};
      bad_value(text, "expected true/false");
    case TypeKind::Char: {
      auto space = text.find(' ');
      return {type, parse_int(text.substr(0, space))};
    }
    case TypeKind::Int:
    case TypeKind::Long:
      return {type, parse_int(text)};
    case TypeKind::Float:
    case TypeKind::Double: {
      const char* first = text.data();
      const char* last = text.data() + text.size();
      std::from_chars_result r{};
      double v = 0;
      if (type.kind() == TypeKind::Float) {
        float f = 0;
        r = std::from_chars(first, last, f);
        v = f;
      } else {
        r = std::from_chars(first, last, v);
      }
      if (r.ec != std::errc() || r.ptr != last) bad_value(text, "expected number");
      return {type, v};
    }
    case TypeKind::String: {
      if (text == "null") return {type, StringValue{}};
      if (text.size() < 2 || text.front() != '"' || text.back() != '"') {
        bad_value(text, "expected quoted string");
      }
      std::string_view body = text.substr(1, text.size() - 2);
      std::string s;
      for (std::size_t i = 0; i < body.size();) s += unescape_one(body, i);
      return {type, StringValue{std::move(s)}};
    }
    case TypeKind::Pointer: {
      if (text == "null") return {type, PointerValue{}};
      auto cell = parse_address(text);
      if (!cell) bad_value(text, "expected hex address");
      return {type, PointerValue{cell}};
    }
    case TypeKind::Array:
    case TypeKind::Record: {
      if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
        bad_value(text, "expected braces");
      }
      auto parts = split_elements(text.substr(1, text.size() - 2));
      ElementList elems;
      if (type.kind() == TypeKind::Array) {
        if (parts.size() != type.length()) bad_value(text, "array length mismatch");
        for (auto p : parts) elems.push_back(parse_value(type.element(), p));
      } else {
        const auto& fields = type.record_def().fields;
        if (parts.size() != fields.size()) bad_value(text, "field count mismatch");
        for (std::size_t i = 0; i < parts.size(); ++i) {
          std::string prefix = fields[i].name + " = ";
          if (parts[i].substr(0, prefix.size()) != prefix) bad_value(text, "field name mismatch");
          elems.push_back(parse_value(fields[i].type, parts[i].substr(prefix.size())));
        }
      }
      return {type, std::move(elems)};
    }
    case TypeKind::Void:
      break;
  }
  bad_value(text, "void has no values");
}

}  // namespace tracelab::minic
