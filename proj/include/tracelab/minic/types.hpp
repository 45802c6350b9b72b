#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tracelab::minic {

struct RecordDef;

enum class TypeKind {
  Void,
  Bool,
  Char,
  Int,
  Long,
  Float,
  Double,
  String,  // char*
  Pointer,
  Array,
  Record,
};

/// Static type of a MiniC value. Immutable, cheap to copy.
class Type {
 public:
  Type() = default;

  static Type void_type() { return Type(TypeKind::Void); }
  static Type bool_type() { return Type(TypeKind::Bool); }
  static Type char_type() { return Type(TypeKind::Char); }
  static Type int_type() { return Type(TypeKind::Int); }
  static Type long_type() { return Type(TypeKind::Long); }
  static Type float_type() { return Type(TypeKind::Float); }
  static Type double_type() { return Type(TypeKind::Double); }
  static Type string_type() { return Type(TypeKind::String); }
  static Type pointer_to(const Type& pointee);
  static Type array_of(const Type& element, std::size_t length);
  static Type record(std::shared_ptr<const RecordDef> def);

  TypeKind kind() const { return kind_; }

  /// Pointee for pointers, element type for arrays.
  const Type& element() const;
  std::size_t length() const { return length_; }
  const RecordDef& record_def() const;
  const std::shared_ptr<const RecordDef>& record_ptr() const { return record_; }

  bool is_void() const { return kind_ == TypeKind::Void; }
  bool is_integral() const;
  bool is_floating() const;
  bool is_arithmetic() const { return is_integral() || is_floating(); }
  bool is_pointer_like() const;
  bool is_scalar() const;

  /// Number of memory cells a value of this type occupies.
  std::size_t cell_count() const;

  /// Canonical spelling, e.g. "int", "char*", "int[5]", "struct P{int a;double b;}".
  std::string spelling() const;

  friend bool operator==(const Type& a, const Type& b);

 private:
  explicit Type(TypeKind kind) : kind_(kind) {}

  TypeKind kind_ = TypeKind::Void;
  std::shared_ptr<const Type> element_;
  std::size_t length_ = 0;
  std::shared_ptr<const RecordDef> record_;
};

struct RecordField {
  std::string name;
  Type type;
};

// Record fields are restricted to scalar types; field i lives in cell i.
struct RecordDef {
  std::string name;
  std::vector<RecordField> fields;

  std::optional<std::size_t> field_index(std::string_view field) const;
};

bool operator==(const RecordDef& a, const RecordDef& b);

/// Inverse of Type::spelling(). Throws std::invalid_argument.
Type parse_type_spelling(std::string_view spelling);

}  // namespace tracelab::minic
