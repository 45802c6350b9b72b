#include "tracelab/minic/types.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace tracelab::minic {

Type Type::pointer_to(const Type& pointee) {
  if (pointee.kind() == TypeKind::Char) return string_type();
  Type t(TypeKind::Pointer);
  t.element_ = std::make_shared<const Type>(pointee);
  return t;
}

Type Type::array_of(const Type& element, std::size_t length) {
  Type t(TypeKind::Array);
  t.element_ = std::make_shared<const Type>(element);
  t.length_ = length;
  return t;
}

Type Type::record(std::shared_ptr<const RecordDef> def) {
  Type t(TypeKind::Record);
  t.record_ = std::move(def);
  return t;
}

const Type& Type::element() const {
  if (!element_) throw std::logic_error("type has no element: " + spelling());
  return *element_;
}

const RecordDef& Type::record_def() const {
  if (!record_) throw std::logic_error("type is not a record: " + spelling());
  return *record_;
}

bool Type::is_integral() const {
  switch (kind_) {
    case TypeKind::Bool:
    case TypeKind::Char:
    case TypeKind::Int:
    case TypeKind::Long:
      return true;
    default:
      return false;
  }
}

bool Type::is_floating() const {
  return kind_ == TypeKind::Float || kind_ == TypeKind::Double;
}

bool Type::is_pointer_like() const {
  return kind_ == TypeKind::Pointer || kind_ == TypeKind::String;
}

bool Type::is_scalar() const {
  return is_arithmetic() || is_pointer_like();
}

std::size_t Type::cell_count() const {
  switch (kind_) {
    case TypeKind::Array:
      return length_ * element_->cell_count();
    case TypeKind::Record:
      return record_->fields.size();
    case TypeKind::Void:
      return 0;
    default:
      return 1;
  }
}

std::string Type::spelling() const {
  switch (kind_) {
    case TypeKind::Void: return "void";
    case TypeKind::Bool: return "bool";
    case TypeKind::Char: return "char";
    case TypeKind::Int: return "int";
    case TypeKind::Long: return "long";
    case TypeKind::Float: return "float";
    case TypeKind::Double: return "double";
    case TypeKind::String: return "char*";
    case TypeKind::Pointer: return element_->spelling() + "*";
    case TypeKind::Array:
      return element_->spelling() + "[" + std::to_string(length_) + "]";
    case TypeKind::Record: {
      std::string out = "struct " + record_->name + "{";
      for (const auto& f : record_->fields) {
        out += f.type.spelling() + " " + f.name + ";";
      }
      return out + "}";
    }
  }
  return "?";
}

bool operator==(const Type& a, const Type& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case TypeKind::Pointer:
      return *a.element_ == *b.element_;
    case TypeKind::Array:
      return a.length_ == b.length_ && *a.element_ == *b.element_;
    case TypeKind::Record:
      return a.record_ == b.record_ || *a.record_ == *b.record_;
    default:
      return true;
  }
}

std::optional<std::size_t> RecordDef::field_index(std::string_view field) const {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].name == field) return i;
  }
  return std::nullopt;
}

bool operator==(const RecordDef& a, const RecordDef& b) {
  if (a.name != b.name || a.fields.size() != b.fields.size()) return false;
  for (std::size_t i = 0; i < a.fields.size(); ++i) {
    if (a.fields[i].name != b.fields[i].name ||
        !(a.fields[i].type == b.fields[i].type)) {
      return false;
    }
  }
  return true;
}

namespace {

class SpellingParser {
 public:
  explicit SpellingParser(std::string_view text) : text_(text) {}

  Type parse_full() {
    Type t = parse();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return t;
  }

 private:
  Type parse() {
    Type t = parse_base();
    skip_ws();
    while (pos_ < text_.size() && text_[pos_] == '*') {
      ++pos_;
      t = Type::pointer_to(t);
      skip_ws();
    }
    if (pos_ < text_.size() && text_[pos_] == '[') {
      ++pos_;
      std::size_t n = 0;
      auto [ptr, ec] =
          std::from_chars(text_.data() + pos_, text_.data() + text_.size(), n);
      if (ec != std::errc()) fail("bad array length");
      pos_ = static_cast<std::size_t>(ptr - text_.data());
      expect(']');
      t = Type::array_of(t, n);
    }
    return t;
  }

  Type parse_base() {
    std::string word = ident();
    if (word == "void") return Type::void_type();
    if (word == "bool") return Type::bool_type();
    if (word == "char") return Type::char_type();
    if (word == "int") return Type::int_type();
    if (word == "long") return Type::long_type();
    if (word == "float") return Type::float_type();
    if (word == "double") return Type::double_type();
    if (word == "struct") {
      auto def = std::make_shared<RecordDef>();
      def->name = ident();
      expect('{');
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != '}') {
        Type ft = parse();
        std::string fname = ident();
        expect(';');
        def->fields.push_back({std::move(fname), std::move(ft)});
        skip_ws();
      }
      expect('}');
      return Type::record(std::move(def));
    }
    fail("unknown type '" + word + "'");
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("bad type spelling '" + std::string(text_) +
                                "': " + why);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Type parse_type_spelling(std::string_view spelling) {
  return SpellingParser(spelling).parse_full();
}

}  // namespace tracelab::minic
