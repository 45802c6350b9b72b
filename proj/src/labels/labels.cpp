#include "tracelab/labels/labels.hpp"

#include <algorithm>

#include "json.hpp"

namespace tracelab::labels {

using namespace minic;

MissingVariable::MissingVariable(const std::string& name, std::uint32_t line)
    : std::runtime_error("variable '" + name + "' is not in the state of covered line " + std::to_string(line)) {}

std::string_view to_string(BranchKind kind) {
  switch (kind) {
    case BranchKind::IfThen: return "IfThen";
    case BranchKind::IfElse: return "IfElse";
    case BranchKind::WhileBody: return "WhileBody";
    case BranchKind::ForBody: return "ForBody";
    case BranchKind::SwitchCase: return "SwitchCase";
  }
  return "?";
}

std::string_view to_string(OccurrenceRole role) {
  switch (role) {
    case OccurrenceRole::Declaration: return "decl";
    case OccurrenceRole::Parameter: return "param";
    case OccurrenceRole::Use: return "use";
  }
  return "?";
}

std::size_t Annotation::shift(std::size_t offset) const {
  std::size_t before = 0;
  for (const auto& s : sites) before += s.insertion_offset <= offset;
  return offset + before * kMaskMarker.size();
}

namespace {

class OccurrenceCollector {
 public:
  std::vector<VariableOccurrence> out;

  void function(const Function& fn) {
    for (const auto& p : fn.params) declared(*p, OccurrenceRole::Parameter);
    stmt(*fn.body);
  }

 private:
  void declared(const VarDecl& d, OccurrenceRole role) {
    out.push_back({d.name, d.name_loc.line, d.name_loc.offset, d.name_loc.offset + d.name.size(), d.type,
                   d.decl_id, role});
  }

  void stmt(const Stmt& s) {
    std::visit([&](const auto& node) { visit(node); }, s.node);
  }

  void visit(const Block& b) {
    for (const auto& st : b.stmts) stmt(*st);
  }
  void visit(const DeclStmt& d) {
    for (const auto& decl : d.decls) {
      if (decl->init) expr(*decl->init);
      for (const auto& e : decl->array_init) expr(*e);
      declared(*decl, OccurrenceRole::Declaration);
    }
  }
  void visit(const ExprStmt& e) { expr(*e.expr); }
  void visit(const If& i) {
    expr(*i.cond);
    stmt(*i.then_branch);
    if (i.else_branch) stmt(*i.else_branch);
  }
  void visit(const While& w) {
    expr(*w.cond);
    stmt(*w.body);
  }
  void visit(const For& f) {
    if (f.init) stmt(*f.init);
    if (f.cond) expr(*f.cond);
    if (f.step) expr(*f.step);
    stmt(*f.body);
  }
  void visit(const Return& r) {
    if (r.value) expr(*r.value);
  }
  void visit(const Switch& sw) {
    expr(*sw.subject);
    for (const auto& arm : sw.arms) {
      for (const auto& st : arm.body) stmt(*st);
    }
  }
  void visit(const Break&) {}
  void visit(const Continue&) {}
  void visit(const Empty&) {}

  void expr(const Expr& e) {
    std::visit([&](const auto& node) { visit_expr(e, node); }, e.node);
  }

  template <typename Literal>
  void visit_expr(const Expr&, const Literal&) {}
  void visit_expr(const Expr& e, const VarRef& r) {
    out.push_back({r.name, e.loc.line, e.loc.offset, e.loc.offset + r.name.size(), r.decl->type,
                   r.decl->decl_id, OccurrenceRole::Use});
  }
  void visit_expr(const Expr&, const Unary& u) { expr(*u.operand); }
  void visit_expr(const Expr&, const Binary& b) {
    expr(*b.lhs);
    expr(*b.rhs);
  }
  void visit_expr(const Expr&, const Assign& a) {
    expr(*a.target);
    expr(*a.value);
  }
  void visit_expr(const Expr&, const Call& c) {
    for (const auto& a : c.args) expr(*a);
  }
  void visit_expr(const Expr&, const Index& i) {
    expr(*i.base);
    expr(*i.index);
  }
  void visit_expr(const Expr&, const Member& m) { expr(*m.base); }
  void visit_expr(const Expr&, const Cast& c) { expr(*c.operand); }
};

class SiteCollector {
 public:
  explicit SiteCollector(const SourceProgram& source) : source_(source) {}

  std::vector<BranchSite> out;

  void stmt(const Stmt& s) {
    if (const auto* b = std::get_if<Block>(&s.node)) {
      for (const auto& st : b->stmts) stmt(*st);
    } else if (const auto* i = std::get_if<If>(&s.node)) {
      body_site(BranchKind::IfThen, *i->then_branch);
      if (i->else_branch) {
        // `else if` chains: the nested if carries the sites.
        if (std::holds_alternative<If>(i->else_branch->node)) {
          stmt(*i->else_branch);
        } else {
          body_site(BranchKind::IfElse, *i->else_branch);
        }
      }
    } else if (const auto* w = std::get_if<While>(&s.node)) {
      body_site(BranchKind::WhileBody, *w->body);
    } else if (const auto* f = std::get_if<For>(&s.node)) {
      body_site(BranchKind::ForBody, *f->body);
    } else if (const auto* sw = std::get_if<Switch>(&s.node)) {
      for (const auto& arm : sw->arms) {
        BranchSite site{BranchKind::SwitchCase, arm.colon_offset + 1, source_.line_of(arm.colon_offset), arm.id, {}, false};
        for (const auto& st : arm.body) site.body_lines.push_back(st->loc.line);
        out.push_back(std::move(site));
        for (const auto& st : arm.body) stmt(*st);
      }
    }
  }

 private:
  void body_site(BranchKind kind, const Stmt& body) {
    const auto* b = std::get_if<Block>(&body.node);
    if (!b) {
      throw std::invalid_argument("branch body at line " + std::to_string(body.loc.line) +
                                  " is not braced; normalize the source first");
    }
    BranchSite site{kind, b->lbrace_offset + 1, source_.line_of(b->lbrace_offset), body.id, {}, false};
    for (const auto& st : b->stmts) site.body_lines.push_back(st->loc.line);
    out.push_back(std::move(site));
    for (const auto& st : b->stmts) stmt(*st);
  }

  const SourceProgram& source_;
};

}  // namespace

std::vector<VariableOccurrence> find_occurrences(const Program& program) {
  OccurrenceCollector collector;
  for (const auto& fn : program.functions) collector.function(*fn);
  std::stable_sort(collector.out.begin(), collector.out.end(),
                   [](const auto& a, const auto& b) { return a.begin < b.begin; });
  return std::move(collector.out);
}

std::vector<OccurrenceLabel> build_labels(const std::vector<VariableOccurrence>& occurrences,
                                          const trace::FinalizedStates& finalized,
                                          const quant::QuantizationThresholds& thr) {
  std::vector<OccurrenceLabel> out;
  out.reserve(occurrences.size());
  for (const auto& occ : occurrences) {
    if (!finalized.covered.count(occ.line)) {
      out.push_back({quant::quantize_unexecuted(occ.type), Coverage::No});
      continue;
    }
    auto state = finalized.states.find(occ.line);
    if (state == finalized.states.end()) throw MissingVariable(occ.name, occ.line);
    auto value = state->second.find(occ.name);
    if (value == state->second.end()) throw MissingVariable(occ.name, occ.line);
    out.push_back({quant::quantize(occ.type, value->second, thr), Coverage::Yes});
  }
  return out;
}

Annotation annotate_branches(const Program& program, const SourceProgram& source,
                             const std::set<std::uint32_t>& covered) {
  SiteCollector collector(source);
  for (const auto& fn : program.functions) collector.stmt(*fn->body);
  Annotation out;
  out.sites = std::move(collector.out);
  std::stable_sort(out.sites.begin(), out.sites.end(),
                   [](const auto& a, const auto& b) { return a.insertion_offset < b.insertion_offset; });
  for (auto& site : out.sites) {
    site.taken = std::any_of(site.body_lines.begin(), site.body_lines.end(),
                             [&](std::uint32_t l) { return covered.count(l) > 0; });
  }
  const std::string& text = source.text();
  std::size_t prev = 0;
  for (const auto& site : out.sites) {
    out.code.append(text, prev, site.insertion_offset - prev);
    out.code += kMaskMarker;
    prev = site.insertion_offset;
  }
  out.code.append(text, prev, std::string::npos);
  return out;
}

LabeledSample make_sample(const Program& program, const SourceProgram& source, const std::string& input_text,
                          const trace::RawTrace& trace, const quant::QuantizationThresholds& thr) {
  auto finalized = trace::finalize(trace);
  auto occurrences = find_occurrences(program);
  auto labels = build_labels(occurrences, finalized, thr);
  auto annotation = annotate_branches(program, source, finalized.covered);

  LabeledSample sample;
  sample.problem_id = source.problem_id();
  sample.input_text = input_text;
  sample.code = source.text();
  for (std::size_t i = 0; i < occurrences.size(); ++i) {
    std::size_t shifted = annotation.shift(occurrences[i].begin);
    sample.occurrences.push_back({std::move(occurrences[i]), labels[i], shifted});
  }
  sample.annotated_code = std::move(annotation.code);
  sample.branches = std::move(annotation.sites);
  return sample;
}

std::string to_json_line(const LabeledSample& sample) {
  nlohmann::json occs = nlohmann::json::array();
  for (const auto& o : sample.occurrences) {
    const auto& occ = o.occurrence;
    occs.push_back({
        {"name", occ.name},
        {"line", occ.line},
        {"begin", occ.begin},
        {"end", occ.end},
        {"annotated_begin", o.annotated_begin},
        {"type", occ.type.spelling()},
        {"decl_id", occ.decl_id},
        {"role", to_string(occ.role)},
        {"covered", o.label.coverage == Coverage::Yes},
        {"data_type", static_cast<int>(o.label.state.data_type)},
        {"value_type", static_cast<int>(o.label.state.value_type)},
        {"bin", static_cast<int>(o.label.state.bin)},
    });
  }
  nlohmann::json branches = nlohmann::json::array();
  for (const auto& b : sample.branches) {
    branches.push_back({
        {"kind", to_string(b.kind)},
        {"offset", b.insertion_offset},
        {"line", b.line},
        {"taken", b.taken},
    });
  }
  nlohmann::json doc = {
      {"problem_id", sample.problem_id},
      {"input", sample.input_text},
      {"code", sample.code},
      {"annotated_code", sample.annotated_code},
      {"occurrences", std::move(occs)},
      {"branches", std::move(branches)},
  };
  return doc.dump();
}

}  // namespace tracelab::labels
