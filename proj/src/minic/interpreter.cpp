#include "tracelab/minic/interpreter.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace tracelab::minic {

std::string_view to_string(ExecErrorKind kind) {
  switch (kind) {
    case ExecErrorKind::StepBudgetExceeded: return "StepBudgetExceeded";
    case ExecErrorKind::InputExhausted: return "InputExhausted";
    case ExecErrorKind::InputFormat: return "InputFormat";
    case ExecErrorKind::DivisionByZero: return "DivisionByZero";
    case ExecErrorKind::NullDereference: return "NullDereference";
    case ExecErrorKind::InvalidMemoryAccess: return "InvalidMemoryAccess";
    case ExecErrorKind::IndexOutOfBounds: return "IndexOutOfBounds";
    case ExecErrorKind::StackOverflow: return "StackOverflow";
  }
  return "Unknown";
}

ExecInput ExecInput::from_text(std::string_view text) {
  ExecInput in;
  std::istringstream stream{std::string(text)};
  std::string tok;
  while (stream >> tok) in.tokens.push_back(tok);
  return in;
}

std::string ExecInput::to_text() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

namespace {

using Scalar = std::variant<std::int64_t, double, StringValue, PointerValue>;

struct Value {
  Type type;
  Scalar s;
};

struct Cell {
  Type type;
  Scalar value;
};

struct LValue {
  std::size_t cell;
  Type type;
};

struct Fault {
  ExecErrorKind kind;
  std::string message;
};

enum class Flow { Normal, Break, Continue, Return };

struct Scope {
  std::vector<const VarDecl*> decls;
  std::size_t memory_mark = 0;
};

struct Frame {
  const Function* function = nullptr;
  std::uint64_t call_id = 0;
  std::vector<Scope> scopes;
  std::unordered_map<const VarDecl*, std::size_t> address;
};

std::int64_t wrap_integral(std::int64_t v, TypeKind kind) {
  switch (kind) {
    case TypeKind::Int:
      return static_cast<std::int32_t>(static_cast<std::uint32_t>(v));
    case TypeKind::Char:
      return static_cast<std::int8_t>(static_cast<std::uint8_t>(v));
    case TypeKind::Bool:
      return v != 0;
    default:
      return v;
  }
}

// Truncation toward zero; NaN and out-of-range map to INT64_MIN (the x86
// "integer indefinite" value) so that conversions stay deterministic.
std::int64_t double_to_int(double d) {
  if (std::isnan(d) || d >= 9223372036854775808.0 || d < -9223372036854775808.0) {
    return std::numeric_limits<std::int64_t>::min();
  }
  return static_cast<std::int64_t>(d);
}

double round_floating(double d, TypeKind kind) {
  return kind == TypeKind::Float ? static_cast<double>(static_cast<float>(d)) : d;
}

std::int64_t wrapping_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wrapping_sub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
std::int64_t wrapping_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

Type common_arithmetic(const Type& a, const Type& b) {
  if (a.kind() == TypeKind::Double || b.kind() == TypeKind::Double) return Type::double_type();
  if (a.kind() == TypeKind::Float || b.kind() == TypeKind::Float) return Type::float_type();
  if (a.kind() == TypeKind::Long || b.kind() == TypeKind::Long) return Type::long_type();
  return Type::int_type();
}

class Interpreter {
 public:
  Interpreter(const Program& program, const ExecInput& input, const ExecConfig& cfg)
      : program_(program), input_(input), cfg_(cfg) {}

  ExecResult run() {
    const Function* main_fn = program_.find_function("main");
    try {
      Value rv = call(*main_fn, {});
      if (rv.type.is_integral()) result_.exit_code = std::get<std::int64_t>(rv.s);
    } catch (const Fault& f) {
      result_.error = ExecError{f.kind, current_line_, f.message};
    }
    return std::move(result_);
  }

 private:
  // ---- memory -------------------------------------------------------------

  Scalar default_scalar(const Type& t) const {
    switch (t.kind()) {
      case TypeKind::Bool:
      case TypeKind::Char:
      case TypeKind::Int:
      case TypeKind::Long:
        return wrap_integral(cfg_.uninit_sentinel_int, t.kind());
      case TypeKind::Float:
      case TypeKind::Double:
        return round_floating(cfg_.uninit_sentinel_float, t.kind());
      case TypeKind::String:
        return StringValue{};
      default:
        return PointerValue{};
    }
  }

  Scalar zero_scalar(const Type& t) const {
    if (t.is_integral()) return std::int64_t{0};
    if (t.is_floating()) return 0.0;
    if (t.kind() == TypeKind::String) return StringValue{};
    return PointerValue{};
  }

  std::size_t allocate(const VarDecl& decl) {
    std::size_t base = memory_.size();
    const Type& t = decl.type;
    if (t.kind() == TypeKind::Array) {
      for (std::size_t i = 0; i < t.length(); ++i) memory_.push_back({t.element(), default_scalar(t.element())});
    } else if (t.kind() == TypeKind::Record) {
      for (const auto& f : t.record_def().fields) memory_.push_back({f.type, default_scalar(f.type)});
    } else {
      memory_.push_back({t, default_scalar(t)});
    }
    Frame& frame = frames_.back();
    frame.scopes.back().decls.push_back(&decl);
    frame.address[&decl] = base;
    return base;
  }

  void push_scope() {
    frames_.back().scopes.push_back(Scope{{}, memory_.size()});
  }

  void pop_scope() {
    Frame& frame = frames_.back();
    for (const VarDecl* d : frame.scopes.back().decls) frame.address.erase(d);
    memory_.resize(frame.scopes.back().memory_mark);
    frame.scopes.pop_back();
  }

  void check_cell(std::size_t cell, const Type& type) const {
    if (type.kind() == TypeKind::Record) {
      const auto& fields = type.record_def().fields;
      for (std::size_t i = 0; i < fields.size(); ++i) check_cell(cell + i, fields[i].type);
      return;
    }
    if (cell >= memory_.size() || !(memory_[cell].type == type)) {
      throw Fault{ExecErrorKind::InvalidMemoryAccess,
                  "access to " + format_address(cell) + " as " + type.spelling()};
    }
  }

  Value load(const LValue& lv) const {
    return Value{lv.type, memory_[lv.cell].value};
  }

  void store(const LValue& lv, const Value& v) {
    memory_[lv.cell].value = v.s;
  }

  RuntimeValue read_value(std::size_t cell, const Type& type) const {
    switch (type.kind()) {
      case TypeKind::Array: {
        ElementList elems;
        for (std::size_t i = 0; i < type.length(); ++i) elems.push_back(read_value(cell + i, type.element()));
        return {type, std::move(elems)};
      }
      case TypeKind::Record: {
        ElementList elems;
        const auto& fields = type.record_def().fields;
        for (std::size_t i = 0; i < fields.size(); ++i) elems.push_back(read_value(cell + i, fields[i].type));
        return {type, std::move(elems)};
      }
      default:
        return std::visit([&](const auto& s) { return RuntimeValue{type, s}; }, memory_[cell].value);
    }
  }

  // ---- events -------------------------------------------------------------

  std::map<std::string, RuntimeValue> snapshot() const {
    std::map<std::string, RuntimeValue> vars;
    const Frame& frame = frames_.back();
    for (const auto& scope : frame.scopes) {
      for (const VarDecl* d : scope.decls) {
        vars.insert_or_assign(d->name, read_value(frame.address.at(d), d->type));
      }
    }
    return vars;
  }

  void hit(std::uint32_t line) {
    current_line_ = line;
    ++result_.line_hits[line];
  }

  // Consecutive simple statements on one line collapse into one event.
  void emit_line(std::uint32_t line, bool simple) {
    auto& events = result_.trace.events;
    const Frame& frame = frames_.back();
    if (simple && merge_ && merge_->index + 1 == events.size() && merge_->line == line &&
        merge_->call_id == frame.call_id) {
      events[merge_->index].vars = snapshot();
      return;
    }
    if (line_events_ >= cfg_.step_budget) {
      throw Fault{ExecErrorKind::StepBudgetExceeded,
                  "step budget of " + std::to_string(cfg_.step_budget) + " lines exhausted"};
    }
    events.push_back({events.size(), trace::EventKind::Line, line, frame.function->name, snapshot()});
    ++line_events_;
    if (simple) {
      merge_ = MergeSlot{events.size() - 1, line, frame.call_id};
    } else {
      merge_.reset();
    }
  }

  void emit_params() {
    auto& events = result_.trace.events;
    const Frame& frame = frames_.back();
    events.push_back({events.size(), trace::EventKind::Param, frame.function->loc.line,
                      frame.function->name, snapshot()});
    merge_.reset();
  }

  // ---- calls --------------------------------------------------------------

  Value call(const Function& fn, const std::vector<Value>& args) {
    if (frames_.size() >= cfg_.max_call_depth) {
      throw Fault{ExecErrorKind::StackOverflow, "call depth exceeds " + std::to_string(cfg_.max_call_depth)};
    }
    frames_.push_back(Frame{&fn, next_call_id_++, {}, {}});
    push_scope();
    for (std::size_t i = 0; i < fn.params.size(); ++i) {
      std::size_t cell = allocate(*fn.params[i]);
      memory_[cell].value = convert(args[i], fn.params[i]->type).s;
    }
    current_line_ = fn.loc.line;
    emit_params();
    return_value_.reset();
    exec(*fn.body);
    Value rv{fn.return_type, std::int64_t{0}};
    if (return_value_) {
      rv = *return_value_;
    } else if (!fn.return_type.is_void()) {
      rv = Value{fn.return_type, default_scalar(fn.return_type)};
    }
    return_value_.reset();
    pop_scope();
    frames_.pop_back();
    return rv;
  }

  // ---- statements ---------------------------------------------------------

  Flow enter(const Stmt& body, NodeId id) {
    ++result_.block_entries[id];
    return exec(body);
  }

  Flow exec(const Stmt& s) {
    return std::visit([&](const auto& node) { return exec_node(s, node); }, s.node);
  }

  Flow exec_node(const Stmt&, const Block& b) {
    push_scope();
    for (const auto& st : b.stmts) {
      Flow f = exec(*st);
      if (f != Flow::Normal) {
        pop_scope();
        return f;
      }
    }
    pop_scope();
    return Flow::Normal;
  }

  void declare(const DeclStmt& d) {
    for (const auto& decl : d.decls) {
      if (decl->has_array_init) {
        std::vector<Value> init;
        for (const auto& e : decl->array_init) init.push_back(convert(eval(*e), decl->type.element()));
        std::size_t base = allocate(*decl);
        for (std::size_t i = 0; i < decl->type.length(); ++i) {
          memory_[base + i].value = i < init.size() ? init[i].s : zero_scalar(decl->type.element());
        }
      } else if (decl->init) {
        Value v = convert(eval(*decl->init), decl->type);
        std::size_t cell = allocate(*decl);
        memory_[cell].value = v.s;
      } else {
        allocate(*decl);
      }
    }
  }

  Flow exec_node(const Stmt& s, const DeclStmt& d) {
    hit(s.loc.line);
    declare(d);
    emit_line(s.loc.line, true);
    return Flow::Normal;
  }

  Flow exec_node(const Stmt& s, const ExprStmt& e) {
    hit(s.loc.line);
    eval(*e.expr);
    emit_line(s.loc.line, true);
    return Flow::Normal;
  }

  Flow exec_node(const Stmt& s, const If& i) {
    hit(s.loc.line);
    bool taken = truthy(eval(*i.cond));
    emit_line(s.loc.line, false);
    if (taken) return enter(*i.then_branch, i.then_branch->id);
    if (i.else_branch) return enter(*i.else_branch, i.else_branch->id);
    return Flow::Normal;
  }

  Flow exec_node(const Stmt& s, const While& w) {
    while (true) {
      hit(s.loc.line);
      bool go = truthy(eval(*w.cond));
      emit_line(s.loc.line, false);
      if (!go) break;
      Flow f = enter(*w.body, w.body->id);
      if (f == Flow::Break) break;
      if (f == Flow::Return) return f;
    }
    return Flow::Normal;
  }

  Flow exec_node(const Stmt& s, const For& f) {
    push_scope();
    hit(s.loc.line);
    if (f.init) {
      if (const auto* d = std::get_if<DeclStmt>(&f.init->node)) {
        declare(*d);
      } else {
        eval(*std::get<ExprStmt>(f.init->node).expr);
      }
    }
    bool first = true;
    while (true) {
      if (!first) {
        hit(s.loc.line);
        if (f.step) eval(*f.step);
      }
      first = false;
      bool go = f.cond ? truthy(eval(*f.cond)) : true;
      emit_line(s.loc.line, false);
      if (!go) break;
      Flow flow = enter(*f.body, f.body->id);
      if (flow == Flow::Break) break;
      if (flow == Flow::Return) {
        pop_scope();
        return flow;
      }
    }
    pop_scope();
    return Flow::Normal;
  }

  Flow exec_node(const Stmt& s, const Return& r) {
    hit(s.loc.line);
    const Type& rt = frames_.back().function->return_type;
    if (r.value) {
      return_value_ = convert(eval(*r.value), rt);
    } else {
      return_value_ = Value{rt, std::int64_t{0}};
    }
    emit_line(s.loc.line, true);
    return Flow::Return;
  }

  Flow exec_node(const Stmt& s, const Break&) {
    hit(s.loc.line);
    emit_line(s.loc.line, true);
    return Flow::Break;
  }

  Flow exec_node(const Stmt& s, const Continue&) {
    hit(s.loc.line);
    emit_line(s.loc.line, true);
    return Flow::Continue;
  }

  Flow exec_node(const Stmt& s, const Switch& sw) {
    hit(s.loc.line);
    std::int64_t v = std::get<std::int64_t>(eval(*sw.subject).s);
    emit_line(s.loc.line, false);
    std::size_t start = sw.arms.size();
    for (std::size_t i = 0; i < sw.arms.size(); ++i) {
      if (sw.arms[i].value && *sw.arms[i].value == v) {
        start = i;
        break;
      }
    }
    if (start == sw.arms.size()) {
      for (std::size_t i = 0; i < sw.arms.size(); ++i) {
        if (!sw.arms[i].value) start = i;
      }
    }
    push_scope();
    for (std::size_t i = start; i < sw.arms.size(); ++i) {
      ++result_.block_entries[sw.arms[i].id];
      for (const auto& st : sw.arms[i].body) {
        Flow f = exec(*st);
        if (f == Flow::Break) {
          pop_scope();
          return Flow::Normal;
        }
        if (f != Flow::Normal) {
          pop_scope();
          return f;
        }
      }
    }
    pop_scope();
    return Flow::Normal;
  }

  Flow exec_node(const Stmt&, const Empty&) { return Flow::Normal; }

  // ---- expressions --------------------------------------------------------

  static bool truthy(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v.s)) return *i != 0;
    if (const auto* d = std::get_if<double>(&v.s)) return *d != 0.0;
    if (const auto* s = std::get_if<StringValue>(&v.s)) return s->has_value();
    return std::get<PointerValue>(v.s).cell.has_value();
  }

  static Value convert(const Value& v, const Type& to) {
    if (to.is_arithmetic()) {
      if (to.is_integral()) {
        std::int64_t x = 0;
        if (const auto* i = std::get_if<std::int64_t>(&v.s)) {
          x = *i;
        } else {
          double d = std::get<double>(v.s);
          if (to.kind() == TypeKind::Bool) return Value{to, std::int64_t{d != 0.0}};
          x = double_to_int(d);
        }
        return Value{to, wrap_integral(x, to.kind())};
      }
      double d = 0;
      if (const auto* i = std::get_if<std::int64_t>(&v.s)) {
        d = static_cast<double>(*i);
      } else {
        d = std::get<double>(v.s);
      }
      return Value{to, round_floating(d, to.kind())};
    }
    if (to.kind() == TypeKind::String) {
      if (std::holds_alternative<PointerValue>(v.s)) return Value{to, StringValue{}};
      return Value{to, v.s};
    }
    if (to.kind() == TypeKind::Pointer) return Value{to, std::get<PointerValue>(v.s)};
    return v;
  }

  static std::int64_t as_int(const Value& v) { return std::get<std::int64_t>(v.s); }

  std::size_t offset_cell(const PointerValue& p, std::int64_t delta) const {
    if (!p.cell) throw Fault{ExecErrorKind::NullDereference, "arithmetic on a null pointer"};
    std::int64_t cell = static_cast<std::int64_t>(*p.cell) + delta;
    if (cell < 0) throw Fault{ExecErrorKind::InvalidMemoryAccess, "pointer moved below the address space"};
    return static_cast<std::size_t>(cell);
  }

  LValue lvalue(const Expr& e) {
    if (const auto* ref = std::get_if<VarRef>(&e.node)) {
      return LValue{frames_.back().address.at(ref->decl), ref->decl->type};
    }
    if (const auto* idx = std::get_if<Index>(&e.node)) {
      const Type& base_type = idx->base->type;
      if (base_type.kind() == TypeKind::Array) {
        LValue base = lvalue(*idx->base);
        std::int64_t i = as_int(eval(*idx->index));
        if (i < 0 || static_cast<std::uint64_t>(i) >= base_type.length()) {
          throw Fault{ExecErrorKind::IndexOutOfBounds,
                      "index " + std::to_string(i) + " out of bounds for " + base_type.spelling()};
        }
        return LValue{base.cell + static_cast<std::size_t>(i), base_type.element()};
      }
      Value p = eval(*idx->base);
      std::int64_t i = as_int(eval(*idx->index));
      const auto& ptr = std::get<PointerValue>(p.s);
      if (!ptr.cell) throw Fault{ExecErrorKind::NullDereference, "indexing a null pointer"};
      std::size_t cell = offset_cell(ptr, i);
      check_cell(cell, base_type.element());
      return LValue{cell, base_type.element()};
    }
    if (const auto* m = std::get_if<Member>(&e.node)) {
      std::size_t base = 0;
      const Type* record = nullptr;
      if (m->arrow) {
        Value p = eval(*m->base);
        const auto& ptr = std::get<PointerValue>(p.s);
        if (!ptr.cell) throw Fault{ExecErrorKind::NullDereference, "'->' on a null pointer"};
        record = &m->base->type.element();
        base = *ptr.cell;
        check_cell(base, *record);
      } else {
        LValue lv = lvalue(*m->base);
        record = &m->base->type;
        base = lv.cell;
      }
      return LValue{base + m->field_index, record->record_def().fields[m->field_index].type};
    }
    if (const auto* u = std::get_if<Unary>(&e.node)) {
      Value p = eval(*u->operand);
      const auto& ptr = std::get<PointerValue>(p.s);
      if (!ptr.cell) throw Fault{ExecErrorKind::NullDereference, "dereferencing a null pointer"};
      check_cell(*ptr.cell, e.type);
      return LValue{*ptr.cell, e.type};
    }
    throw Fault{ExecErrorKind::InvalidMemoryAccess, "expression is not addressable"};
  }

  Value eval(const Expr& e) {
    return std::visit([&](const auto& node) { return eval_node(e, node); }, e.node);
  }

  Value eval_node(const Expr& e, const IntLiteral& n) {
    return Value{e.type, wrap_integral(n.value, e.type.kind())};
  }
  Value eval_node(const Expr& e, const FloatLiteral& n) { return Value{e.type, n.value}; }
  Value eval_node(const Expr& e, const CharLiteral& n) { return Value{e.type, n.value}; }
  Value eval_node(const Expr& e, const StringLiteral& n) { return Value{e.type, StringValue{n.value}}; }
  Value eval_node(const Expr& e, const BoolLiteral& n) { return Value{e.type, std::int64_t{n.value}}; }
  Value eval_node(const Expr& e, const NullLiteral&) { return Value{e.type, PointerValue{}}; }

  Value eval_node(const Expr& e, const VarRef& ref) {
    LValue lv = lvalue(e);
    if (ref.decl->type.kind() == TypeKind::Array) {
      return Value{Type::pointer_to(ref.decl->type.element()), PointerValue{lv.cell}};
    }
    return load(lv);
  }

  Value eval_node(const Expr& e, const Unary& u) {
    switch (u.op) {
      case UnaryOp::Neg: {
        Value v = convert(eval(*u.operand), e.type);
        if (e.type.is_integral()) return Value{e.type, wrap_integral(wrapping_sub(0, as_int(v)), e.type.kind())};
        return Value{e.type, -std::get<double>(v.s)};
      }
      case UnaryOp::Plus:
        return convert(eval(*u.operand), e.type);
      case UnaryOp::Not:
        return Value{e.type, std::int64_t{truthy(eval(*u.operand)) ? 0 : 1}};
      case UnaryOp::AddrOf: {
        LValue lv = lvalue(*u.operand);
        return Value{e.type, PointerValue{lv.cell}};
      }
      case UnaryOp::Deref:
        return load(lvalue(e));
      case UnaryOp::PreInc:
      case UnaryOp::PreDec:
      case UnaryOp::PostInc:
      case UnaryOp::PostDec: {
        LValue lv = lvalue(*u.operand);
        Value old = load(lv);
        bool inc = u.op == UnaryOp::PreInc || u.op == UnaryOp::PostInc;
        Value updated = old;
        if (lv.type.kind() == TypeKind::Pointer) {
          updated.s = PointerValue{offset_cell(std::get<PointerValue>(old.s), inc ? 1 : -1)};
        } else if (lv.type.is_integral()) {
          updated.s = wrap_integral(wrapping_add(as_int(old), inc ? 1 : -1), lv.type.kind());
        } else {
          updated.s = round_floating(std::get<double>(old.s) + (inc ? 1.0 : -1.0), lv.type.kind());
        }
        store(lv, updated);
        bool pre = u.op == UnaryOp::PreInc || u.op == UnaryOp::PreDec;
        return pre ? updated : old;
      }
    }
    return Value{e.type, std::int64_t{0}};
  }

  Value arithmetic(BinaryOp op, const Value& lhs, const Value& rhs, const Type& type) {
    if (type.kind() == TypeKind::Pointer) {
      bool pointer_left = lhs.type.kind() == TypeKind::Pointer;
      const Value& p = pointer_left ? lhs : rhs;
      std::int64_t n = as_int(pointer_left ? rhs : lhs);
      if (op == BinaryOp::Sub) n = -n;
      return Value{type, PointerValue{offset_cell(std::get<PointerValue>(p.s), n)}};
    }
    Value a = convert(lhs, type);
    Value b = convert(rhs, type);
    if (type.is_integral()) {
      std::int64_t x = as_int(a);
      std::int64_t y = as_int(b);
      std::int64_t r = 0;
      switch (op) {
        case BinaryOp::Add: r = wrapping_add(x, y); break;
        case BinaryOp::Sub: r = wrapping_sub(x, y); break;
        case BinaryOp::Mul: r = wrapping_mul(x, y); break;
        case BinaryOp::Div:
        case BinaryOp::Mod:
          if (y == 0) throw Fault{ExecErrorKind::DivisionByZero, "integer division by zero"};
          if (y == -1) {
            r = op == BinaryOp::Div ? wrapping_sub(0, x) : 0;
          } else {
            r = op == BinaryOp::Div ? x / y : x % y;
          }
          break;
        default: break;
      }
      return Value{type, wrap_integral(r, type.kind())};
    }
    double x = std::get<double>(a.s);
    double y = std::get<double>(b.s);
    double r = 0;
    switch (op) {
      case BinaryOp::Add: r = x + y; break;
      case BinaryOp::Sub: r = x - y; break;
      case BinaryOp::Mul: r = x * y; break;
      case BinaryOp::Div: r = x / y; break;
      default: break;
    }
    return Value{type, round_floating(r, type.kind())};
  }

  static bool compare(BinaryOp op, const Value& l, const Value& r) {
    if (l.type.is_arithmetic() && r.type.is_arithmetic()) {
      Type t = common_arithmetic(l.type, r.type);
      Value a = convert(l, t);
      Value b = convert(r, t);
      auto cmp = [op](auto x, auto y) {
        switch (op) {
          case BinaryOp::Lt: return x < y;
          case BinaryOp::Le: return x <= y;
          case BinaryOp::Gt: return x > y;
          case BinaryOp::Ge: return x >= y;
          case BinaryOp::Eq: return x == y;
          case BinaryOp::Ne: return x != y;
          default: return false;
        }
      };
      if (t.is_integral()) return cmp(as_int(a), as_int(b));
      return cmp(std::get<double>(a.s), std::get<double>(b.s));
    }
    // Pointer-like equality; null literals carry a PointerValue.
    auto key = [](const Value& v) -> std::optional<std::string> {
      if (const auto* s = std::get_if<StringValue>(&v.s)) {
        return s->has_value() ? std::optional<std::string>("s" + **s) : std::nullopt;
      }
      const auto& p = std::get<PointerValue>(v.s);
      return p.cell ? std::optional<std::string>("p" + std::to_string(*p.cell)) : std::nullopt;
    };
    bool equal = key(l) == key(r);
    return op == BinaryOp::Eq ? equal : !equal;
  }

  Value eval_node(const Expr& e, const Binary& b) {
    if (b.op == BinaryOp::And) {
      bool v = truthy(eval(*b.lhs)) && truthy(eval(*b.rhs));
      return Value{e.type, std::int64_t{v}};
    }
    if (b.op == BinaryOp::Or) {
      bool v = truthy(eval(*b.lhs)) || truthy(eval(*b.rhs));
      return Value{e.type, std::int64_t{v}};
    }
    Value l = eval(*b.lhs);
    Value r = eval(*b.rhs);
    switch (b.op) {
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge:
      case BinaryOp::Eq:
      case BinaryOp::Ne:
        return Value{e.type, std::int64_t{compare(b.op, l, r)}};
      default:
        return arithmetic(b.op, l, r, e.type);
    }
  }

  Value eval_node(const Expr&, const Assign& a) {
    LValue lv = lvalue(*a.target);
    Value rhs = eval(*a.value);
    Value result;
    if (a.op == AssignOp::Set) {
      result = convert(rhs, lv.type);
    } else {
      static constexpr BinaryOp kOps[] = {BinaryOp::Add, BinaryOp::Add, BinaryOp::Sub,
                                          BinaryOp::Mul, BinaryOp::Div, BinaryOp::Mod};
      BinaryOp op = kOps[static_cast<int>(a.op)];
      Value old = load(lv);
      Type t = lv.type.kind() == TypeKind::Pointer ? lv.type : common_arithmetic(lv.type, rhs.type);
      result = convert(arithmetic(op, old, rhs, t), lv.type);
    }
    store(lv, result);
    return result;
  }

  const std::string& next_input() {
    if (input_pos_ >= input_.tokens.size()) {
      throw Fault{ExecErrorKind::InputExhausted, "read past the end of the input"};
    }
    return input_.tokens[input_pos_++];
  }

  template <typename T>
  T parse_number(const std::string& tok) {
    T v{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw Fault{ExecErrorKind::InputFormat, "cannot read '" + tok + "' as a number"};
    }
    return v;
  }

  static std::string print_text(const Value& v) {
    if (v.type.kind() == TypeKind::Char) return std::string(1, static_cast<char>(as_int(v)));
    if (v.type.kind() == TypeKind::String) {
      const auto& s = std::get<StringValue>(v.s);
      return s ? *s : "(null)";
    }
    if (v.type.kind() == TypeKind::Pointer && !std::get<PointerValue>(v.s).cell) return "(nil)";
    return render_value(std::visit([&](const auto& x) { return RuntimeValue{v.type, x}; }, v.s));
  }

  Value eval_node(const Expr& e, const Call& c) {
    if (c.builtin) {
      switch (*c.builtin) {
        case Builtin::ReadInt: {
          std::int64_t v = parse_number<std::int64_t>(next_input());
          if (v < std::numeric_limits<std::int32_t>::min() || v > std::numeric_limits<std::int32_t>::max()) {
            throw Fault{ExecErrorKind::InputFormat, "integer input out of int range"};
          }
          return Value{e.type, v};
        }
        case Builtin::ReadLong:
          return Value{e.type, parse_number<std::int64_t>(next_input())};
        case Builtin::ReadFloat:
          return Value{e.type, parse_number<double>(next_input())};
        case Builtin::ReadChar: {
          const std::string& tok = next_input();
          if (tok.size() != 1) throw Fault{ExecErrorKind::InputFormat, "expected a single character"};
          return Value{e.type, std::int64_t{static_cast<signed char>(tok[0])}};
        }
        case Builtin::ReadStr:
          return Value{e.type, StringValue{next_input()}};
        case Builtin::Print: {
          std::string line;
          for (std::size_t i = 0; i < c.args.size(); ++i) {
            if (i) line += ' ';
            line += print_text(eval(*c.args[i]));
          }
          result_.output += line + "\n";
          return Value{e.type, std::int64_t{0}};
        }
      }
    }
    std::vector<Value> args;
    args.reserve(c.args.size());
    for (const auto& a : c.args) args.push_back(eval(*a));
    std::uint32_t line = current_line_;
    Value rv = call(*c.function, args);
    current_line_ = line;
    return rv;
  }

  Value eval_node(const Expr& e, const Index& idx) {
    if (idx.base->type.kind() == TypeKind::String) {
      Value s = eval(*idx.base);
      std::int64_t i = as_int(eval(*idx.index));
      const auto& str = std::get<StringValue>(s.s);
      if (!str) throw Fault{ExecErrorKind::NullDereference, "indexing a null string"};
      if (i < 0 || static_cast<std::uint64_t>(i) > str->size()) {
        throw Fault{ExecErrorKind::IndexOutOfBounds, "string index " + std::to_string(i) + " out of bounds"};
      }
      std::int64_t ch = static_cast<std::uint64_t>(i) == str->size()
                            ? 0
                            : static_cast<signed char>((*str)[static_cast<std::size_t>(i)]);
      return Value{e.type, ch};
    }
    return load(lvalue(e));
  }

  Value eval_node(const Expr& e, const Member&) { return load(lvalue(e)); }

  Value eval_node(const Expr& e, const Cast& c) { return convert(eval(*c.operand), e.type); }

  struct MergeSlot {
    std::size_t index;
    std::uint32_t line;
    std::uint64_t call_id;
  };

  const Program& program_;
  const ExecInput& input_;
  const ExecConfig& cfg_;
  ExecResult result_;
  std::vector<Cell> memory_;
  std::vector<Frame> frames_;
  std::optional<Value> return_value_;
  std::optional<MergeSlot> merge_;
  std::size_t input_pos_ = 0;
  std::uint64_t line_events_ = 0;
  std::uint64_t next_call_id_ = 0;
  std::uint32_t current_line_ = 0;
};

}  // namespace

ExecResult execute(const Program& program, const ExecInput& input, const ExecConfig& cfg) {
  return Interpreter(program, input, cfg).run();
}

}  // namespace tracelab::minic
