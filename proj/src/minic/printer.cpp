#include <string>

#include "tracelab/minic/parser.hpp"

namespace tracelab::minic {

namespace {

constexpr int kAssignPrec = 1;
constexpr int kUnaryPrec = 8;
constexpr int kPostfixPrec = 9;
constexpr int kPrimaryPrec = 10;

int binary_prec(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 2;
    case BinaryOp::And: return 3;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 4;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 5;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 6;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod: return 7;
  }
  return 0;
}

const char* binary_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

const char* assign_text(AssignOp op) {
  switch (op) {
    case AssignOp::Set: return "=";
    case AssignOp::Add: return "+=";
    case AssignOp::Sub: return "-=";
    case AssignOp::Mul: return "*=";
    case AssignOp::Div: return "/=";
    case AssignOp::Mod: return "%=";
  }
  return "?";
}

// Base keyword plus the stars a declarator needs, e.g. ("char", "*") for char*.
std::pair<std::string, std::string> split_declarator_type(const Type& t) {
  switch (t.kind()) {
    case TypeKind::String:
      return {"char", "*"};
    case TypeKind::Pointer: {
      auto inner = split_declarator_type(t.element());
      return {inner.first, inner.second + "*"};
    }
    case TypeKind::Record:
      return {"struct " + t.record_def().name, ""};
    default:
      return {t.spelling(), ""};
  }
}

class Printer {
 public:
  std::string run(const Program& program) {
    bool first = true;
    for (const auto& rec : program.records) {
      if (!first) out_ += "\n";
      first = false;
      out_ += "struct " + rec.def->name + " {\n";
      for (const auto& f : rec.def->fields) {
        auto [base, stars] = split_declarator_type(f.type);
        out_ += "    " + base + " " + stars + f.name + ";\n";
      }
      out_ += "};\n";
    }
    for (const auto& fn : program.functions) {
      if (!first) out_ += "\n";
      first = false;
      function(*fn);
    }
    return std::move(out_);
  }

 private:
  void line(int indent, const std::string& text) {
    out_.append(static_cast<std::size_t>(indent) * 4, ' ');
    out_ += text;
    out_ += '\n';
  }

  void function(const Function& fn) {
    auto [base, stars] = split_declarator_type(fn.return_type);
    std::string header = base + " " + stars + fn.name + "(";
    for (std::size_t i = 0; i < fn.params.size(); ++i) {
      if (i) header += ", ";
      auto [pb, ps] = split_declarator_type(fn.params[i]->type);
      header += pb + " " + ps + fn.params[i]->name;
    }
    header += ")";
    line(0, header);
    line(0, "{");
    for (const auto& s : std::get<Block>(fn.body->node).stmts) stmt(*s, 1);
    line(0, "}");
  }

  // Prints `head {`, the body statements, and `}`; non-block bodies get braces.
  void braced(const std::string& head, const Stmt& body, int indent) {
    line(indent, head + "{");
    if (const auto* b = std::get_if<Block>(&body.node)) {
      for (const auto& s : b->stmts) stmt(*s, indent + 1);
    } else {
      stmt(body, indent + 1);
    }
    line(indent, "}");
  }

  void stmt(const Stmt& s, int indent) {
    if (const auto* b = std::get_if<Block>(&s.node)) {
      line(indent, "{");
      for (const auto& st : b->stmts) stmt(*st, indent + 1);
      line(indent, "}");
    } else if (const auto* d = std::get_if<DeclStmt>(&s.node)) {
      line(indent, decl(*d) + ";");
    } else if (const auto* e = std::get_if<ExprStmt>(&s.node)) {
      line(indent, expr(*e->expr, 0) + ";");
    } else if (const auto* i = std::get_if<If>(&s.node)) {
      if_chain(*i, indent, "");
    } else if (const auto* w = std::get_if<While>(&s.node)) {
      braced("while (" + expr(*w->cond, 0) + ") ", *w->body, indent);
    } else if (const auto* f = std::get_if<For>(&s.node)) {
      std::string head = "for (";
      if (f->init) {
        if (const auto* fd = std::get_if<DeclStmt>(&f->init->node)) {
          head += decl(*fd);
        } else {
          head += expr(*std::get<ExprStmt>(f->init->node).expr, 0);
        }
      }
      head += ";";
      if (f->cond) head += " " + expr(*f->cond, 0);
      head += ";";
      if (f->step) head += " " + expr(*f->step, 0);
      head += ") ";
      braced(head, *f->body, indent);
    } else if (const auto* r = std::get_if<Return>(&s.node)) {
      line(indent, r->value ? "return " + expr(*r->value, 0) + ";" : "return;");
    } else if (std::holds_alternative<Break>(s.node)) {
      line(indent, "break;");
    } else if (std::holds_alternative<Continue>(s.node)) {
      line(indent, "continue;");
    } else if (const auto* sw = std::get_if<Switch>(&s.node)) {
      line(indent, "switch (" + expr(*sw->subject, 0) + ") {");
      for (const auto& arm : sw->arms) {
        line(indent + 1, arm.value ? "case " + arm.value_lexeme + ":" : "default:");
        for (const auto& st : arm.body) stmt(*st, indent + 2);
      }
      line(indent, "}");
    } else {
      line(indent, ";");
    }
  }

  void if_chain(const If& i, int indent, const std::string& prefix) {
    braced(prefix + "if (" + expr(*i.cond, 0) + ") ", *i.then_branch, indent);
    if (!i.else_branch) return;
    if (const auto* nested = std::get_if<If>(&i.else_branch->node)) {
      if_chain(*nested, indent, "else ");
    } else {
      braced("else ", *i.else_branch, indent);
    }
  }

  std::string decl(const DeclStmt& d) {
    auto [base, unused] = split_declarator_type(d.base);
    std::string out = base + " ";
    for (std::size_t i = 0; i < d.decls.size(); ++i) {
      const VarDecl& v = *d.decls[i];
      if (i) out += ", ";
      Type t = v.type;
      std::string suffix;
      if (t.kind() == TypeKind::Array) {
        suffix = "[" + std::to_string(t.length()) + "]";
        t = t.element();
      }
      out += split_declarator_type(t).second + v.name + suffix;
      if (v.has_array_init) {
        out += " = {";
        for (std::size_t k = 0; k < v.array_init.size(); ++k) {
          if (k) out += ", ";
          out += expr(*v.array_init[k], kAssignPrec);
        }
        out += "}";
      } else if (v.init) {
        out += " = " + expr(*v.init, kAssignPrec);
      }
    }
    return out;
  }

  static std::string paren(const std::string& s, bool wrap) {
    return wrap ? "(" + s + ")" : s;
  }

  std::string expr(const Expr& e, int min_prec) {
    int prec = kPrimaryPrec;
    std::string s = std::visit([&](const auto& node) { return text(node, prec); }, e.node);
    return paren(s, prec < min_prec);
  }

  std::string text(const IntLiteral& n, int&) { return n.lexeme; }
  std::string text(const FloatLiteral& n, int&) { return n.lexeme; }
  std::string text(const CharLiteral& n, int&) { return n.lexeme; }
  std::string text(const StringLiteral& n, int&) { return n.lexeme; }
  std::string text(const BoolLiteral& n, int&) { return n.value ? "true" : "false"; }
  std::string text(const NullLiteral&, int&) { return "NULL"; }
  std::string text(const VarRef& n, int&) { return n.name; }

  std::string text(const Unary& u, int& prec) {
    if (u.op == UnaryOp::PostInc || u.op == UnaryOp::PostDec) {
      prec = kPostfixPrec;
      return expr(*u.operand, kPostfixPrec) + (u.op == UnaryOp::PostInc ? "++" : "--");
    }
    prec = kUnaryPrec;
    std::string op;
    switch (u.op) {
      case UnaryOp::Neg: op = "-"; break;
      case UnaryOp::Plus: op = "+"; break;
      case UnaryOp::Not: op = "!"; break;
      case UnaryOp::AddrOf: op = "&"; break;
      case UnaryOp::Deref: op = "*"; break;
      case UnaryOp::PreInc: op = "++"; break;
      case UnaryOp::PreDec: op = "--"; break;
      default: break;
    }
    std::string operand = expr(*u.operand, kUnaryPrec);
    // Keep "- -x" from lexing as "--x".
    if (!operand.empty() && (operand[0] == op.back() ||
                             (op.back() == '-' && operand[0] == '-') ||
                             (op.back() == '+' && operand[0] == '+'))) {
      operand = "(" + operand + ")";
    }
    return op + operand;
  }

  std::string text(const Binary& b, int& prec) {
    prec = binary_prec(b.op);
    return expr(*b.lhs, prec) + " " + binary_text(b.op) + " " + expr(*b.rhs, prec + 1);
  }

  std::string text(const Assign& a, int& prec) {
    prec = kAssignPrec;
    return expr(*a.target, kUnaryPrec) + " " + assign_text(a.op) + " " +
           expr(*a.value, kAssignPrec);
  }

  std::string text(const Call& c, int& prec) {
    prec = kPostfixPrec;
    std::string out = c.callee + "(";
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      if (i) out += ", ";
      out += expr(*c.args[i], kAssignPrec);
    }
    return out + ")";
  }

  std::string text(const Index& i, int& prec) {
    prec = kPostfixPrec;
    return expr(*i.base, kPostfixPrec) + "[" + expr(*i.index, 0) + "]";
  }

  std::string text(const Member& m, int& prec) {
    prec = kPostfixPrec;
    return expr(*m.base, kPostfixPrec) + (m.arrow ? "->" : ".") + m.field;
  }

  std::string text(const Cast& c, int& prec) {
    prec = kUnaryPrec;
    auto [base, stars] = split_declarator_type(c.target);
    return "(" + base + stars + ")" + expr(*c.operand, kUnaryPrec);
  }

  std::string out_;
};

}  // namespace

std::string print_program(const Program& program) { return Printer().run(program); }

}  // namespace tracelab::minic
