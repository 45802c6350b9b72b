#include "tracelab/minic/parser.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <unordered_map>

#include "lexer.hpp"

namespace tracelab::minic {

using detail::Tok;
using detail::TokKind;

// ---- SourceProgram / errors ------------------------------------------------

SourceProgram::SourceProgram(std::string text, std::string problem_id)
    : text_(std::move(text)), problem_id_(std::move(problem_id)) {
  line_starts_.push_back(0);
  for (std::size_t i = 0; i < text_.size(); ++i) {
    if (text_[i] == '\n' && i + 1 < text_.size()) line_starts_.push_back(i + 1);
  }
}

std::string_view SourceProgram::line(std::uint32_t line) const {
  if (line == 0 || line > line_starts_.size()) return {};
  std::size_t start = line_starts_[line - 1];
  std::size_t end = text_.find('\n', start);
  if (end == std::string::npos) end = text_.size();
  return std::string_view(text_).substr(start, end - start);
}

std::uint32_t SourceProgram::line_of(std::size_t offset) const {
  auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
  return static_cast<std::uint32_t>(it - line_starts_.begin());
}

ParseError::ParseError(const std::string& message, std::uint32_t line, std::uint32_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

const Function* Program::find_function(const std::string& name) const {
  for (const auto& f : functions) {
    if (f->name == name) return f.get();
  }
  return nullptr;
}

bool is_simple_statement(const Stmt& stmt) {
  return std::holds_alternative<DeclStmt>(stmt.node) ||
         std::holds_alternative<ExprStmt>(stmt.node) ||
         std::holds_alternative<Return>(stmt.node) ||
         std::holds_alternative<Break>(stmt.node) ||
         std::holds_alternative<Continue>(stmt.node);
}

namespace {

[[noreturn]] void fail_at(const SourceLoc& loc, const std::string& message) {
  throw ParseError(message, loc.line, loc.column);
}

std::int64_t decode_char_literal(const Tok& tok) {
  std::string_view body(tok.text);
  body = body.substr(1, body.size() - 2);
  if (body.empty()) fail_at(tok.loc, "empty character literal");
  std::int64_t value = 0;
  std::size_t used = 1;
  if (body[0] == '\\') {
    if (body.size() < 2) fail_at(tok.loc, "bad escape");
    used = 2;
    switch (body[1]) {
      case 'n': value = '\n'; break;
      case 't': value = '\t'; break;
      case 'r': value = '\r'; break;
      case '0': value = 0; break;
      case '\\': value = '\\'; break;
      case '\'': value = '\''; break;
      case '"': value = '"'; break;
      default: fail_at(tok.loc, "unsupported escape in character literal");
    }
  } else {
    value = static_cast<signed char>(body[0]);
  }
  if (used != body.size()) fail_at(tok.loc, "multi-character literal");
  return value;
}

std::string decode_string_literal(const Tok& tok) {
  std::string_view body(tok.text);
  body = body.substr(1, body.size() - 2);
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '\\') {
      out += body[i];
      continue;
    }
    if (++i >= body.size()) fail_at(tok.loc, "bad escape");
    switch (body[i]) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      case '0': out += '\0'; break;
      case '\\': out += '\\'; break;
      case '\'': out += '\''; break;
      case '"': out += '"'; break;
      default: fail_at(tok.loc, "unsupported escape in string literal");
    }
  }
  return out;
}

bool is_type_keyword(const Tok& t) {
  if (t.kind != TokKind::Keyword) return false;
  return t.text == "int" || t.text == "long" || t.text == "float" || t.text == "double" ||
         t.text == "char" || t.text == "bool" || t.text == "void" || t.text == "struct";
}

// ---- parser ------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  Program run() {
    while (!at_end()) {
      if (peek().text == "struct" && peek(1).kind == TokKind::Ident && peek(2).text == "{") {
        parse_record();
      } else {
        program_.functions.push_back(parse_function());
      }
    }
    program_.decl_count = next_decl_id_;
    program_.node_count = next_node_id_;
    return std::move(program_);
  }

 private:
  // -- token helpers
  const Tok& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == TokKind::End; }
  const Tok& take() {
    const Tok& t = toks_[pos_];
    if (t.kind != TokKind::End) ++pos_;
    return t;
  }
  bool check(std::string_view text) const {
    const Tok& t = peek();
    return (t.kind == TokKind::Punct || t.kind == TokKind::Keyword) && t.text == text;
  }
  bool accept(std::string_view text) {
    if (!check(text)) return false;
    take();
    return true;
  }
  const Tok& expect(std::string_view text) {
    if (!check(text)) {
      const Tok& t = peek();
      fail_at(t.loc, "expected '" + std::string(text) + "' but found " +
                         (t.kind == TokKind::End ? "end of input" : "'" + t.text + "'"));
    }
    return take();
  }
  const Tok& expect_ident() {
    if (peek().kind != TokKind::Ident) {
      fail_at(peek().loc, "expected identifier but found '" + peek().text + "'");
    }
    return take();
  }

  StmtPtr make_stmt(const SourceLoc& loc) {
    auto s = std::make_unique<Stmt>();
    s->id = next_node_id_++;
    s->loc = loc;
    return s;
  }

  // -- types
  Type parse_base_type() {
    const Tok& t = take();
    if (t.text == "int") return Type::int_type();
    if (t.text == "long") return Type::long_type();
    if (t.text == "float") return Type::float_type();
    if (t.text == "double") return Type::double_type();
    if (t.text == "char") return Type::char_type();
    if (t.text == "bool") return Type::bool_type();
    if (t.text == "void") return Type::void_type();
    if (t.text == "struct") {
      const Tok& name = expect_ident();
      auto it = records_.find(name.text);
      if (it == records_.end()) fail_at(name.loc, "unknown struct '" + name.text + "'");
      return Type::record(it->second);
    }
    fail_at(t.loc, "expected a type but found '" + t.text + "'");
  }

  Type apply_pointer(Type base, const SourceLoc& loc) {
    if (!accept("*")) return base;
    if (base.is_void()) fail_at(loc, "void pointers are not supported");
    if (check("*")) {
      if (base.kind() != TypeKind::Char) fail_at(peek().loc, "multi-level pointers are not supported");
      take();
      return Type::pointer_to(Type::string_type());
    }
    return Type::pointer_to(base);
  }

  void parse_record() {
    SourceLoc loc = take().loc;  // struct
    const Tok& name = expect_ident();
    if (records_.count(name.text)) fail_at(name.loc, "struct '" + name.text + "' redefined");
    auto def = std::make_shared<RecordDef>();
    def->name = name.text;
    expect("{");
    while (!check("}")) {
      SourceLoc floc = peek().loc;
      if (!is_type_keyword(peek()) || peek().text == "struct" || peek().text == "void") {
        fail_at(floc, "struct fields must have scalar types");
      }
      Type ft = apply_pointer(parse_base_type(), floc);
      const Tok& fname = expect_ident();
      if (def->field_index(fname.text)) fail_at(fname.loc, "duplicate field '" + fname.text + "'");
      def->fields.push_back({fname.text, ft});
      expect(";");
    }
    expect("}");
    expect(";");
    if (def->fields.empty()) fail_at(loc, "struct has no fields");
    records_[def->name] = def;
    program_.records.push_back({def, loc});
  }

  // -- functions
  std::unique_ptr<Function> parse_function() {
    auto fn = std::make_unique<Function>();
    fn->loc = peek().loc;
    if (!is_type_keyword(peek())) fail_at(peek().loc, "expected a function definition");
    fn->return_type = apply_pointer(parse_base_type(), fn->loc);
    const Tok& name = expect_ident();
    fn->name = name.text;
    fn->name_loc = name.loc;
    expect("(");
    if (check("void") && peek(1).text == ")") take();
    if (!check(")")) {
      do {
        SourceLoc ploc = peek().loc;
        if (!is_type_keyword(peek())) fail_at(ploc, "expected parameter type");
        auto decl = std::make_unique<VarDecl>();
        decl->type = apply_pointer(parse_base_type(), ploc);
        const Tok& pname = expect_ident();
        decl->name = pname.text;
        decl->name_loc = pname.loc;
        decl->is_param = true;
        decl->decl_id = next_decl_id_++;
        fn->params.push_back(std::move(decl));
      } while (accept(","));
    }
    expect(")");
    if (!check("{")) fail_at(peek().loc, "expected function body");
    fn->body = parse_block();
    return fn;
  }

  // -- statements
  StmtPtr parse_block() {
    const Tok& lb = expect("{");
    auto s = make_stmt(lb.loc);
    Block block;
    block.lbrace_offset = lb.loc.offset;
    while (!check("}")) {
      if (at_end()) fail_at(peek().loc, "unexpected end of input in block");
      block.stmts.push_back(parse_statement());
    }
    block.rbrace = take().loc;
    s->node = std::move(block);
    return s;
  }

  StmtPtr parse_statement() {
    const Tok& t = peek();
    if (check("{")) return parse_block();
    if (check(";")) {
      auto s = make_stmt(take().loc);
      s->node = Empty{};
      return s;
    }
    if (is_type_keyword(t)) {
      auto s = make_stmt(t.loc);
      s->node = parse_decl();
      expect(";");
      return s;
    }
    if (t.kind == TokKind::Keyword) {
      if (t.text == "if") return parse_if();
      if (t.text == "while") return parse_while();
      if (t.text == "for") return parse_for();
      if (t.text == "switch") return parse_switch();
      if (t.text == "return") {
        auto s = make_stmt(take().loc);
        Return r;
        if (!check(";")) r.value = parse_expr();
        expect(";");
        s->node = std::move(r);
        return s;
      }
      if (t.text == "break" || t.text == "continue") {
        auto s = make_stmt(take().loc);
        if (t.text == "break") {
          s->node = Break{};
        } else {
          s->node = Continue{};
        }
        expect(";");
        return s;
      }
      if (t.text == "else" || t.text == "case" || t.text == "default") {
        fail_at(t.loc, "unexpected '" + t.text + "'");
      }
    }
    auto s = make_stmt(t.loc);
    s->node = ExprStmt{parse_expr()};
    expect(";");
    return s;
  }

  DeclStmt parse_decl() {
    DeclStmt d;
    SourceLoc loc = peek().loc;
    d.base = parse_base_type();
    if (d.base.is_void()) fail_at(loc, "variables cannot have type void");
    do {
      auto decl = std::make_unique<VarDecl>();
      SourceLoc dloc = peek().loc;
      Type t = apply_pointer(d.base, dloc);
      const Tok& name = expect_ident();
      decl->name = name.text;
      decl->name_loc = name.loc;
      if (accept("[")) {
        const Tok& n = take();
        std::size_t len = 0;
        auto [ptr, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), len);
        if (n.kind != TokKind::IntLit || ec != std::errc() || len == 0 || len > 4096) {
          fail_at(n.loc, "array length must be an integer literal in [1, 4096]");
        }
        expect("]");
        if (t.kind() == TypeKind::Record) fail_at(dloc, "arrays of structs are not supported");
        t = Type::array_of(t, len);
      }
      decl->type = t;
      if (accept("=")) {
        if (t.kind() == TypeKind::Array) {
          expect("{");
          decl->has_array_init = true;
          if (!check("}")) {
            do {
              decl->array_init.push_back(parse_assignment());
            } while (accept(","));
          }
          expect("}");
        } else {
          decl->init = parse_assignment();
        }
      }
      decl->decl_id = next_decl_id_++;
      d.decls.push_back(std::move(decl));
    } while (accept(","));
    return d;
  }

  StmtPtr parse_if() {
    auto s = make_stmt(take().loc);
    If node;
    expect("(");
    node.cond = parse_expr();
    expect(")");
    node.then_branch = parse_statement();
    if (accept("else")) node.else_branch = parse_statement();
    s->node = std::move(node);
    return s;
  }

  StmtPtr parse_while() {
    auto s = make_stmt(take().loc);
    While node;
    expect("(");
    node.cond = parse_expr();
    expect(")");
    node.body = parse_statement();
    s->node = std::move(node);
    return s;
  }

  StmtPtr parse_for() {
    auto s = make_stmt(take().loc);
    For node;
    expect("(");
    if (!check(";")) {
      auto init = make_stmt(peek().loc);
      if (is_type_keyword(peek())) {
        init->node = parse_decl();
      } else {
        init->node = ExprStmt{parse_expr()};
      }
      node.init = std::move(init);
    }
    expect(";");
    if (!check(";")) node.cond = parse_expr();
    expect(";");
    if (!check(")")) node.step = parse_expr();
    expect(")");
    node.body = parse_statement();
    s->node = std::move(node);
    return s;
  }

  StmtPtr parse_switch() {
    auto s = make_stmt(take().loc);
    Switch node;
    expect("(");
    node.subject = parse_expr();
    expect(")");
    node.lbrace_offset = expect("{").loc.offset;
    while (!check("}")) {
      SwitchArm arm;
      arm.id = next_node_id_++;
      arm.label_loc = peek().loc;
      if (accept("default")) {
        arm.value_lexeme = "default";
      } else if (accept("case")) {
        bool negative = accept("-");
        const Tok& v = take();
        if (v.kind == TokKind::IntLit) {
          std::int64_t value = 0;
          auto [ptr, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), value);
          if (ec != std::errc()) fail_at(v.loc, "case value out of range");
          arm.value = negative ? -value : value;
        } else if (v.kind == TokKind::CharLit && !negative) {
          arm.value = decode_char_literal(v);
        } else {
          fail_at(v.loc, "case labels must be integer or character literals");
        }
        arm.value_lexeme = (negative ? "-" : "") + v.text;
      } else {
        fail_at(peek().loc, "expected 'case' or 'default'");
      }
      arm.colon_offset = expect(":").loc.offset;
      while (!check("case") && !check("default") && !check("}")) {
        if (at_end()) fail_at(peek().loc, "unexpected end of input in switch");
        arm.body.push_back(parse_statement());
      }
      node.arms.push_back(std::move(arm));
    }
    node.rbrace = take().loc;
    s->node = std::move(node);
    return s;
  }

  // -- expressions
  ExprPtr make_expr(const SourceLoc& loc) {
    auto e = std::make_unique<Expr>();
    e->loc = loc;
    return e;
  }

  ExprPtr parse_expr() { return parse_assignment(); }

  ExprPtr parse_assignment() {
    ExprPtr lhs = parse_binary(0);
    static const std::map<std::string, AssignOp> kOps = {
        {"=", AssignOp::Set}, {"+=", AssignOp::Add}, {"-=", AssignOp::Sub},
        {"*=", AssignOp::Mul}, {"/=", AssignOp::Div}, {"%=", AssignOp::Mod}};
    if (peek().kind == TokKind::Punct) {
      auto it = kOps.find(peek().text);
      if (it != kOps.end()) {
        SourceLoc loc = take().loc;
        auto e = make_expr(lhs->loc);
        (void)loc;
        e->node = Assign{it->second, std::move(lhs), parse_assignment()};
        return e;
      }
    }
    return lhs;
  }

  static int precedence(const Tok& t, BinaryOp& op) {
    if (t.kind != TokKind::Punct) return -1;
    static const std::map<std::string, std::pair<int, BinaryOp>> kTable = {
        {"||", {0, BinaryOp::Or}},  {"&&", {1, BinaryOp::And}}, {"==", {2, BinaryOp::Eq}},
        {"!=", {2, BinaryOp::Ne}},  {"<", {3, BinaryOp::Lt}},   {"<=", {3, BinaryOp::Le}},
        {">", {3, BinaryOp::Gt}},   {">=", {3, BinaryOp::Ge}},  {"+", {4, BinaryOp::Add}},
        {"-", {4, BinaryOp::Sub}},  {"*", {5, BinaryOp::Mul}},  {"/", {5, BinaryOp::Div}},
        {"%", {5, BinaryOp::Mod}}};
    auto it = kTable.find(t.text);
    if (it == kTable.end()) return -1;
    op = it->second.second;
    return it->second.first;
  }

  ExprPtr parse_binary(int min_prec) {
    ExprPtr lhs = parse_unary();
    while (true) {
      BinaryOp op{};
      int prec = precedence(peek(), op);
      if (prec < min_prec) break;
      take();
      ExprPtr rhs = parse_binary(prec + 1);
      auto e = make_expr(lhs->loc);
      e->node = Binary{op, std::move(lhs), std::move(rhs)};
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    const Tok& t = peek();
    static const std::map<std::string, UnaryOp> kPrefix = {
        {"-", UnaryOp::Neg},    {"+", UnaryOp::Plus},     {"!", UnaryOp::Not},
        {"&", UnaryOp::AddrOf}, {"*", UnaryOp::Deref},    {"++", UnaryOp::PreInc},
        {"--", UnaryOp::PreDec}};
    if (t.kind == TokKind::Punct) {
      auto it = kPrefix.find(t.text);
      if (it != kPrefix.end()) {
        SourceLoc loc = take().loc;
        auto e = make_expr(loc);
        e->node = Unary{it->second, parse_unary()};
        return e;
      }
      if (t.text == "(" && is_type_keyword(peek(1))) {
        SourceLoc loc = take().loc;
        Type target = apply_pointer(parse_base_type(), loc);
        expect(")");
        auto e = make_expr(loc);
        e->node = Cast{target, parse_unary()};
        return e;
      }
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    while (true) {
      if (check("[")) {
        take();
        auto idx = make_expr(e->loc);
        ExprPtr index = parse_expr();
        expect("]");
        idx->node = Index{std::move(e), std::move(index)};
        e = std::move(idx);
      } else if (check(".") || check("->")) {
        bool arrow = take().text == "->";
        const Tok& field = expect_ident();
        auto m = make_expr(e->loc);
        m->node = Member{std::move(e), field.text, arrow, 0};
        e = std::move(m);
      } else if (check("++") || check("--")) {
        bool inc = take().text == "++";
        auto u = make_expr(e->loc);
        u->node = Unary{inc ? UnaryOp::PostInc : UnaryOp::PostDec, std::move(e)};
        e = std::move(u);
      } else {
        break;
      }
    }
    return e;
  }

  ExprPtr parse_primary() {
    const Tok& t = take();
    auto e = make_expr(t.loc);
    switch (t.kind) {
      case TokKind::IntLit: {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc()) fail_at(t.loc, "integer literal out of range");
        e->node = IntLiteral{t.text, v};
        return e;
      }
      case TokKind::FloatLit: {
        double v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc()) fail_at(t.loc, "bad floating literal");
        e->node = FloatLiteral{t.text, v};
        return e;
      }
      case TokKind::CharLit:
        e->node = CharLiteral{t.text, decode_char_literal(t)};
        return e;
      case TokKind::StringLit:
        e->node = StringLiteral{t.text, decode_string_literal(t)};
        return e;
      case TokKind::Ident:
        if (check("(")) {
          take();
          Call call;
          call.callee = t.text;
          if (!check(")")) {
            do {
              call.args.push_back(parse_assignment());
            } while (accept(","));
          }
          expect(")");
          e->node = std::move(call);
        } else {
          e->node = VarRef{t.text, nullptr};
        }
        return e;
      case TokKind::Keyword:
        if (t.text == "true" || t.text == "false") {
          e->node = BoolLiteral{t.text == "true"};
          return e;
        }
        if (t.text == "NULL") {
          e->node = NullLiteral{};
          return e;
        }
        break;
      case TokKind::Punct:
        if (t.text == "(") {
          ExprPtr inner = parse_expr();
          expect(")");
          return inner;
        }
        break;
      case TokKind::End:
        fail_at(t.loc, "unexpected end of input");
    }
    fail_at(t.loc, "unexpected '" + t.text + "' in expression");
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  Program program_;
  std::map<std::string, std::shared_ptr<const RecordDef>> records_;
  std::uint32_t next_decl_id_ = 0;
  NodeId next_node_id_ = 0;
};

// ---- resolver ----------------------------------------------------------------

Type null_type() { return Type::pointer_to(Type::void_type()); }

bool is_null_type(const Type& t) {
  return t.kind() == TypeKind::Pointer && t.element().is_void();
}

Type promote(const Type& t) {
  if (t.kind() == TypeKind::Bool || t.kind() == TypeKind::Char) return Type::int_type();
  return t;
}

Type common_arithmetic(const Type& a, const Type& b) {
  if (a.kind() == TypeKind::Double || b.kind() == TypeKind::Double) return Type::double_type();
  if (a.kind() == TypeKind::Float || b.kind() == TypeKind::Float) return Type::float_type();
  if (a.kind() == TypeKind::Long || b.kind() == TypeKind::Long) return Type::long_type();
  return Type::int_type();
}

class Resolver {
 public:
  explicit Resolver(Program& program) : program_(program) {}

  void run() {
    std::map<std::string, const Function*> seen;
    for (const auto& fn : program_.functions) {
      if (builtin_of(fn->name)) fail_at(fn->name_loc, "'" + fn->name + "' is a built-in");
      if (!seen.emplace(fn->name, fn.get()).second) {
        fail_at(fn->name_loc, "function '" + fn->name + "' redefined");
      }
      if (!fn->return_type.is_void() && !fn->return_type.is_scalar()) {
        fail_at(fn->loc, "functions must return a scalar or void");
      }
      for (const auto& p : fn->params) {
        if (!p->type.is_scalar()) fail_at(p->name_loc, "parameters must have scalar types");
      }
    }
    const Function* main_fn = program_.find_function("main");
    if (!main_fn) throw MissingMain();
    if (!main_fn->params.empty()) fail_at(main_fn->name_loc, "main takes no parameters");
    for (const auto& fn : program_.functions) resolve_function(*fn);
  }

 private:
  static std::optional<Builtin> builtin_of(const std::string& name) {
    if (name == "read_int") return Builtin::ReadInt;
    if (name == "read_long") return Builtin::ReadLong;
    if (name == "read_float") return Builtin::ReadFloat;
    if (name == "read_char") return Builtin::ReadChar;
    if (name == "read_str") return Builtin::ReadStr;
    if (name == "print") return Builtin::Print;
    return std::nullopt;
  }

  void push() { scopes_.emplace_back(); }
  void pop() { scopes_.pop_back(); }

  void declare(const VarDecl& decl) {
    auto& scope = scopes_.back();
    if (scope.count(decl.name)) fail_at(decl.name_loc, "'" + decl.name + "' redeclared in the same scope");
    scope[decl.name] = &decl;
  }

  const VarDecl* lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) return found->second;
    }
    return nullptr;
  }

  void resolve_function(const Function& fn) {
    current_ = &fn;
    push();
    for (const auto& p : fn.params) declare(*p);
    resolve_stmt(*fn.body);
    pop();
  }

  void resolve_stmt(const Stmt& stmt) {
    std::visit([&](const auto& node) { resolve_node(stmt, node); }, stmt.node);
  }

  void resolve_node(const Stmt&, const Block& b) {
    push();
    for (const auto& s : b.stmts) resolve_stmt(*s);
    pop();
  }

  void resolve_node(const Stmt&, const DeclStmt& d) {
    for (const auto& decl : d.decls) {
      if (decl->type.kind() == TypeKind::Array) {
        if (decl->array_init.size() > decl->type.length()) {
          fail_at(decl->name_loc, "too many initializers for '" + decl->name + "'");
        }
        for (const auto& e : decl->array_init) {
          check_convertible(decl->type.element(), resolve_expr(*e), e->loc);
        }
      } else if (decl->init) {
        if (decl->type.kind() == TypeKind::Record) {
          fail_at(decl->name_loc, "struct initializers are not supported");
        }
        check_convertible(decl->type, resolve_expr(*decl->init), decl->init->loc);
      }
      declare(*decl);
    }
  }

  void resolve_node(const Stmt&, const ExprStmt& s) { resolve_expr(*s.expr); }

  void resolve_node(const Stmt&, const If& s) {
    require_scalar(resolve_expr(*s.cond), s.cond->loc);
    resolve_stmt(*s.then_branch);
    if (s.else_branch) resolve_stmt(*s.else_branch);
  }

  void resolve_node(const Stmt&, const While& s) {
    require_scalar(resolve_expr(*s.cond), s.cond->loc);
    ++loop_depth_;
    resolve_stmt(*s.body);
    --loop_depth_;
  }

  void resolve_node(const Stmt&, const For& s) {
    push();
    if (s.init) resolve_stmt(*s.init);
    if (s.cond) require_scalar(resolve_expr(*s.cond), s.cond->loc);
    if (s.step) resolve_expr(*s.step);
    ++loop_depth_;
    resolve_stmt(*s.body);
    --loop_depth_;
    pop();
  }

  void resolve_node(const Stmt& stmt, const Return& s) {
    if (current_->return_type.is_void()) {
      if (s.value) fail_at(stmt.loc, "void function returns a value");
    } else {
      if (!s.value) fail_at(stmt.loc, "missing return value");
      check_convertible(current_->return_type, resolve_expr(*s.value), s.value->loc);
    }
  }

  void resolve_node(const Stmt& stmt, const Break&) {
    if (loop_depth_ == 0 && switch_depth_ == 0) fail_at(stmt.loc, "break outside loop or switch");
  }

  void resolve_node(const Stmt& stmt, const Continue&) {
    if (loop_depth_ == 0) fail_at(stmt.loc, "continue outside loop");
  }

  void resolve_node(const Stmt&, const Switch& s) {
    Type t = resolve_expr(*s.subject);
    if (!t.is_integral()) fail_at(s.subject->loc, "switch subject must be integral");
    std::map<std::int64_t, bool> values;
    bool has_default = false;
    ++switch_depth_;
    push();
    for (const auto& arm : s.arms) {
      if (arm.value) {
        if (values.count(*arm.value)) fail_at(arm.label_loc, "duplicate case value");
        values[*arm.value] = true;
      } else {
        if (has_default) fail_at(arm.label_loc, "duplicate default label");
        has_default = true;
      }
      for (const auto& st : arm.body) {
        if (std::holds_alternative<DeclStmt>(st->node)) {
          fail_at(st->loc, "declarations in a case arm must be enclosed in braces");
        }
        resolve_stmt(*st);
      }
    }
    pop();
    --switch_depth_;
  }

  void resolve_node(const Stmt&, const Empty&) {}

  // -- expressions

  void require_scalar(const Type& t, const SourceLoc& loc) {
    if (!t.is_scalar() && !is_null_type(t)) fail_at(loc, "expected a scalar value");
  }

  static bool decays_to(const Type& from, const Type& to) {
    return from.kind() == TypeKind::Array && to.kind() == TypeKind::Pointer &&
           from.element() == to.element();
  }

  void check_convertible(const Type& to, const Type& from, const SourceLoc& loc) {
    bool ok = false;
    if (to.is_arithmetic()) {
      ok = from.is_arithmetic();
    } else if (to.kind() == TypeKind::String) {
      ok = from.kind() == TypeKind::String || is_null_type(from);
    } else if (to.kind() == TypeKind::Pointer) {
      ok = from == to || is_null_type(from) || decays_to(from, to);
    }
    if (!ok) fail_at(loc, "cannot convert " + from.spelling() + " to " + to.spelling());
  }

  static bool is_lvalue(const Expr& e) {
    if (std::holds_alternative<VarRef>(e.node)) return true;
    if (const auto* idx = std::get_if<Index>(&e.node)) {
      return idx->base->type.kind() != TypeKind::String;
    }
    if (std::holds_alternative<Member>(e.node)) return true;
    if (const auto* u = std::get_if<Unary>(&e.node)) return u->op == UnaryOp::Deref;
    return false;
  }

  void require_assignable(const Expr& target) {
    if (!is_lvalue(target)) fail_at(target.loc, "expression is not assignable");
    if (!target.type.is_scalar()) fail_at(target.loc, "cannot assign to " + target.type.spelling());
  }

  Type resolve_expr(Expr& e) {
    e.type = std::visit([&](auto& node) { return type_node(e, node); }, e.node);
    return e.type;
  }

  Type type_node(Expr&, IntLiteral& lit) {
    if (lit.value > std::numeric_limits<std::int32_t>::max()) return Type::long_type();
    return Type::int_type();
  }
  Type type_node(Expr&, FloatLiteral&) { return Type::double_type(); }
  Type type_node(Expr&, CharLiteral&) { return Type::char_type(); }
  Type type_node(Expr&, StringLiteral&) { return Type::string_type(); }
  Type type_node(Expr&, BoolLiteral&) { return Type::bool_type(); }
  Type type_node(Expr&, NullLiteral&) { return null_type(); }

  Type type_node(Expr& e, VarRef& ref) {
    ref.decl = lookup(ref.name);
    if (!ref.decl) fail_at(e.loc, "use of undeclared identifier '" + ref.name + "'");
    return ref.decl->type;
  }

  Type type_node(Expr& e, Unary& u) {
    Type t = resolve_expr(*u.operand);
    switch (u.op) {
      case UnaryOp::Neg:
      case UnaryOp::Plus:
        if (!t.is_arithmetic()) fail_at(e.loc, "unary arithmetic on " + t.spelling());
        return promote(t);
      case UnaryOp::Not:
        require_scalar(t, e.loc);
        return Type::int_type();
      case UnaryOp::AddrOf:
        if (!is_lvalue(*u.operand)) fail_at(e.loc, "cannot take the address of an rvalue");
        if (t.kind() == TypeKind::Char || t.kind() == TypeKind::Array) {
          fail_at(e.loc, "cannot take the address of " + t.spelling());
        }
        return Type::pointer_to(t);
      case UnaryOp::Deref:
        if (t.kind() != TypeKind::Pointer || t.element().is_void()) {
          fail_at(e.loc, "cannot dereference " + t.spelling());
        }
        return t.element();
      case UnaryOp::PreInc:
      case UnaryOp::PreDec:
      case UnaryOp::PostInc:
      case UnaryOp::PostDec:
        require_assignable(*u.operand);
        if (!t.is_arithmetic() && t.kind() != TypeKind::Pointer) {
          fail_at(e.loc, "cannot increment " + t.spelling());
        }
        return t;
    }
    return t;
  }

  Type type_node(Expr& e, Binary& b) {
    Type l = resolve_expr(*b.lhs);
    Type r = resolve_expr(*b.rhs);
    switch (b.op) {
      case BinaryOp::Add:
      case BinaryOp::Sub:
        if (l.kind() == TypeKind::Pointer && r.is_integral()) return l;
        if (b.op == BinaryOp::Add && r.kind() == TypeKind::Pointer && l.is_integral()) return r;
        [[fallthrough]];
      case BinaryOp::Mul:
      case BinaryOp::Div:
        if (!l.is_arithmetic() || !r.is_arithmetic()) {
          fail_at(e.loc, "invalid operands " + l.spelling() + " and " + r.spelling());
        }
        return common_arithmetic(l, r);
      case BinaryOp::Mod:
        if (!l.is_integral() || !r.is_integral()) fail_at(e.loc, "'%' needs integer operands");
        return common_arithmetic(l, r);
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge:
        if (!l.is_arithmetic() || !r.is_arithmetic()) {
          fail_at(e.loc, "relational comparison needs arithmetic operands");
        }
        return Type::int_type();
      case BinaryOp::Eq:
      case BinaryOp::Ne: {
        bool ok = (l.is_arithmetic() && r.is_arithmetic()) ||
                  (l.is_pointer_like() && (r == l || is_null_type(r))) ||
                  (r.is_pointer_like() && is_null_type(l)) ||
                  (is_null_type(l) && is_null_type(r));
        if (!ok) fail_at(e.loc, "cannot compare " + l.spelling() + " with " + r.spelling());
        return Type::int_type();
      }
      case BinaryOp::And:
      case BinaryOp::Or:
        require_scalar(l, b.lhs->loc);
        require_scalar(r, b.rhs->loc);
        return Type::int_type();
    }
    return l;
  }

  Type type_node(Expr& e, Assign& a) {
    Type target = resolve_expr(*a.target);
    Type value = resolve_expr(*a.value);
    require_assignable(*a.target);
    if (a.op == AssignOp::Set) {
      check_convertible(target, value, a.value->loc);
    } else if (target.kind() == TypeKind::Pointer &&
               (a.op == AssignOp::Add || a.op == AssignOp::Sub)) {
      if (!value.is_integral()) fail_at(e.loc, "pointer offset must be integral");
    } else if (a.op == AssignOp::Mod) {
      if (!target.is_integral() || !value.is_integral()) fail_at(e.loc, "'%=' needs integer operands");
    } else if (!target.is_arithmetic() || !value.is_arithmetic()) {
      fail_at(e.loc, "compound assignment needs arithmetic operands");
    }
    return target;
  }

  Type type_node(Expr& e, Call& c) {
    for (auto& arg : c.args) resolve_expr(*arg);
    if (auto b = builtin_of(c.callee)) {
      c.builtin = b;
      if (*b == Builtin::Print) {
        for (const auto& arg : c.args) require_scalar(arg->type, arg->loc);
        return Type::void_type();
      }
      if (!c.args.empty()) fail_at(e.loc, c.callee + " takes no arguments");
      switch (*b) {
        case Builtin::ReadInt: return Type::int_type();
        case Builtin::ReadLong: return Type::long_type();
        case Builtin::ReadFloat: return Type::double_type();
        case Builtin::ReadChar: return Type::char_type();
        case Builtin::ReadStr: return Type::string_type();
        case Builtin::Print: break;
      }
      return Type::void_type();
    }
    c.function = program_.find_function(c.callee);
    if (!c.function) fail_at(e.loc, "call to undefined function '" + c.callee + "'");
    if (c.function->params.size() != c.args.size()) {
      fail_at(e.loc, "'" + c.callee + "' expects " + std::to_string(c.function->params.size()) +
                         " arguments");
    }
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      check_convertible(c.function->params[i]->type, c.args[i]->type, c.args[i]->loc);
    }
    return c.function->return_type;
  }

  Type type_node(Expr& e, Index& idx) {
    Type base = resolve_expr(*idx.base);
    Type index = resolve_expr(*idx.index);
    if (!index.is_integral()) fail_at(idx.index->loc, "array index must be integral");
    if (base.kind() == TypeKind::Array || base.kind() == TypeKind::Pointer) return base.element();
    if (base.kind() == TypeKind::String) return Type::char_type();
    fail_at(e.loc, "cannot index " + base.spelling());
  }

  Type type_node(Expr& e, Member& m) {
    Type base = resolve_expr(*m.base);
    if (m.arrow) {
      if (base.kind() != TypeKind::Pointer || base.element().kind() != TypeKind::Record) {
        fail_at(e.loc, "'->' needs a struct pointer");
      }
      base = base.element();
    } else if (base.kind() != TypeKind::Record) {
      fail_at(e.loc, "'.' needs a struct");
    }
    auto index = base.record_def().field_index(m.field);
    if (!index) fail_at(e.loc, "no field '" + m.field + "' in struct " + base.record_def().name);
    m.field_index = *index;
    return base.record_def().fields[*index].type;
  }

  Type type_node(Expr& e, Cast& c) {
    Type from = resolve_expr(*c.operand);
    if (!c.target.is_arithmetic() || !from.is_arithmetic()) {
      fail_at(e.loc, "only arithmetic casts are supported");
    }
    return c.target;
  }

  Program& program_;
  const Function* current_ = nullptr;
  std::vector<std::unordered_map<std::string, const VarDecl*>> scopes_;
  int loop_depth_ = 0;
  int switch_depth_ = 0;
};

}  // namespace

Program parse(std::string_view source) {
  Program program = Parser(detail::lex(source)).run();
  Resolver(program).run();
  return program;
}

std::string normalize_source(std::string_view source) {
  return print_program(parse(source));
}

}  // namespace tracelab::minic
