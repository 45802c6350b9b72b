#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tracelab/minic/types.hpp"

namespace tracelab::minic {

struct SourceLoc {
  std::uint32_t line = 0;    // 1-based
  std::uint32_t column = 0;  // 1-based
  std::size_t offset = 0;    // byte offset into the source text
};

using NodeId = std::uint32_t;

struct Expr;
struct Stmt;
struct VarDecl;
struct Function;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

// ---- expressions ----------------------------------------------------------

struct IntLiteral {
  std::string lexeme;
  std::int64_t value = 0;
};
struct FloatLiteral {
  std::string lexeme;
  double value = 0;
};
struct CharLiteral {
  std::string lexeme;
  std::int64_t value = 0;
};
struct StringLiteral {
  std::string lexeme;
  std::string value;
};
struct BoolLiteral {
  bool value = false;
};
struct NullLiteral {};

struct VarRef {
  std::string name;
  const VarDecl* decl = nullptr;  // set by the resolver
};

enum class UnaryOp { Neg, Plus, Not, AddrOf, Deref, PreInc, PreDec, PostInc, PostDec };
struct Unary {
  UnaryOp op;
  ExprPtr operand;
};

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

enum class AssignOp { Set, Add, Sub, Mul, Div, Mod };
struct Assign {
  AssignOp op;
  ExprPtr target;
  ExprPtr value;
};

enum class Builtin { ReadInt, ReadLong, ReadFloat, ReadChar, ReadStr, Print };

struct Call {
  std::string callee;
  std::vector<ExprPtr> args;
  const Function* function = nullptr;  // user function, or
  std::optional<Builtin> builtin;      // a built-in
};

struct Index {
  ExprPtr base;
  ExprPtr index;
};

struct Member {
  ExprPtr base;
  std::string field;
  bool arrow = false;
  std::size_t field_index = 0;  // set by the resolver
};

struct Cast {
  Type target;
  ExprPtr operand;
};

struct Expr {
  SourceLoc loc;
  std::variant<IntLiteral, FloatLiteral, CharLiteral, StringLiteral, BoolLiteral,
               NullLiteral, VarRef, Unary, Binary, Assign, Call, Index, Member, Cast>
      node;
  Type type;  // set by the resolver
};

// ---- statements -----------------------------------------------------------

struct VarDecl {
  std::string name;
  SourceLoc name_loc;
  Type type;
  ExprPtr init;                         // scalar initializer
  std::vector<ExprPtr> array_init;      // `{a, b, c}` initializer
  bool has_array_init = false;
  std::uint32_t decl_id = 0;            // unique per program, set by the parser
  bool is_param = false;
};

struct Block {
  std::vector<StmtPtr> stmts;
  std::size_t lbrace_offset = 0;  // offset of '{'
  SourceLoc rbrace;
};

struct DeclStmt {
  Type base;  // declared base type before per-declarator '*' and '[N]'
  std::vector<std::unique_ptr<VarDecl>> decls;
};

struct ExprStmt {
  ExprPtr expr;
};

struct If {
  ExprPtr cond;
  StmtPtr then_branch;
  StmtPtr else_branch;  // may be null
};

struct While {
  ExprPtr cond;
  StmtPtr body;
};

struct For {
  StmtPtr init;   // DeclStmt, ExprStmt, or null
  ExprPtr cond;   // may be null
  ExprPtr step;   // may be null
  StmtPtr body;
};

struct Return {
  ExprPtr value;  // may be null
};

struct Break {};
struct Continue {};
struct Empty {};

struct SwitchArm {
  NodeId id = 0;
  std::optional<std::int64_t> value;  // nullopt for `default`
  std::string value_lexeme;
  SourceLoc label_loc;
  std::size_t colon_offset = 0;
  std::vector<StmtPtr> body;
};

struct Switch {
  ExprPtr subject;
  std::vector<SwitchArm> arms;
  std::size_t lbrace_offset = 0;
  SourceLoc rbrace;
};

struct Stmt {
  NodeId id = 0;
  SourceLoc loc;
  std::variant<Block, DeclStmt, ExprStmt, If, While, For, Return, Break, Continue,
               Switch, Empty>
      node;
};

// ---- top level ------------------------------------------------------------

struct Function {
  std::string name;
  Type return_type;
  SourceLoc loc;  // start of the declaration (return type)
  SourceLoc name_loc;
  std::vector<std::unique_ptr<VarDecl>> params;
  StmtPtr body;  // always a Block
};

struct RecordDecl {
  std::shared_ptr<const RecordDef> def;
  SourceLoc loc;
};

/// A parsed and resolved MiniC program. Move-only; AST nodes have stable
/// addresses for the lifetime of the Program.
struct Program {
  std::vector<RecordDecl> records;
  std::vector<std::unique_ptr<Function>> functions;
  std::uint32_t decl_count = 0;
  NodeId node_count = 0;

  const Function* find_function(const std::string& name) const;
};

/// Statements that produce one trace step on their own line (everything but
/// compound statements and `;`).
bool is_simple_statement(const Stmt& stmt);

}  // namespace tracelab::minic
