#include "boundck/syntax.hpp"

#include <functional>

namespace boundck {

std::string BaseType::str() const {
  switch (kind_) {
    case Kind::Int: return "int";
    case Kind::Bool: return "bool";
    case Kind::Iterator: return "Iterator<" + elem_->str() + ">";
    case Kind::List: return "List<" + elem_->str() + ">";
  }
  return "?";
}

bool operator==(const BaseType& a, const BaseType& b) {
  if (a.kind_ != b.kind_) return false;
  if (!a.elem_ || !b.elem_) return !a.elem_ && !b.elem_;
  return *a.elem_ == *b.elem_;
}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

CmpOp negate(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Le;
    case CmpOp::Ge: return CmpOp::Lt;
  }
  return op;
}

bool apply(CmpOp op, std::int64_t a, std::int64_t b) {
  switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
  }
  return false;
}

// --- RefExpr / Refinement factories -----------------------------------------

namespace {
RefExprPtr make(RefExpr e) { return std::make_shared<const RefExpr>(std::move(e)); }
RefinementPtr make(Refinement r) { return std::make_shared<const Refinement>(std::move(r)); }
}  // namespace

RefExprPtr RefExpr::lit(std::int64_t n) { return make(RefExpr{Kind::IntLit, n, {}, {}, {}}); }
RefExprPtr RefExpr::self_int() { return make(RefExpr{Kind::IntVar, 0, {}, {}, {}}); }
RefExprPtr RefExpr::int_var(std::string x) { return make(RefExpr{Kind::IntVar, 0, std::move(x), {}, {}}); }
RefExprPtr RefExpr::len(std::string x) { return make(RefExpr{Kind::Len, 0, std::move(x), {}, {}}); }
RefExprPtr RefExpr::idx(std::string x) { return make(RefExpr{Kind::Idx, 0, std::move(x), {}, {}}); }
RefExprPtr RefExpr::add(RefExprPtr a, RefExprPtr b) {
  return make(RefExpr{Kind::Add, 0, {}, std::move(a), std::move(b)});
}
RefExprPtr RefExpr::sub(RefExprPtr a, RefExprPtr b) {
  return make(RefExpr{Kind::Sub, 0, {}, std::move(a), std::move(b)});
}
RefExprPtr RefExpr::scale(std::int64_t k, RefExprPtr a) {
  return make(RefExpr{Kind::Scale, k, {}, std::move(a), {}});
}
RefExprPtr RefExpr::counter(std::string c) { return make(RefExpr{Kind::Counter, 0, std::move(c), {}, {}}); }

RefinementPtr Refinement::lit(bool b) {
  Refinement r{Kind::BoolLit};
  r.value = b;
  return make(std::move(r));
}
RefinementPtr Refinement::bool_var(std::string x) {
  Refinement r{Kind::BoolVar};
  r.var = std::move(x);
  return make(std::move(r));
}
RefinementPtr Refinement::iter_of(std::string target, std::string subject) {
  Refinement r{Kind::IterOf};
  r.var = std::move(target);
  r.subject = std::move(subject);
  return make(std::move(r));
}
RefinementPtr Refinement::cmp(CmpOp op, RefExprPtr a, RefExprPtr b) {
  Refinement r{Kind::Cmp};
  r.op = op;
  r.lhs = std::move(a);
  r.rhs = std::move(b);
  return make(std::move(r));
}
RefinementPtr Refinement::lor(RefinementPtr a, RefinementPtr b) {
  Refinement r{Kind::Or};
  r.left = std::move(a);
  r.right = std::move(b);
  return make(std::move(r));
}
RefinementPtr Refinement::lnot(RefinementPtr a) {
  Refinement r{Kind::Not};
  r.left = std::move(a);
  return make(std::move(r));
}
RefinementPtr Refinement::land(RefinementPtr a, RefinementPtr b) {
  return lnot(lor(lnot(std::move(a)), lnot(std::move(b))));
}
RefinementPtr Refinement::implies(RefinementPtr a, RefinementPtr b) {
  return lor(lnot(std::move(a)), std::move(b));
}

bool structurally_equal(const RefExpr& a, const RefExpr& b) {
  if (a.kind != b.kind || a.value != b.value || a.var != b.var) return false;
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
  if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
  if (a.lhs && !structurally_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !structurally_equal(*a.rhs, *b.rhs)) return false;
  return true;
}

bool structurally_equal(const Refinement& a, const Refinement& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Refinement::Kind::BoolLit: return a.value == b.value;
    case Refinement::Kind::BoolVar: return a.var == b.var;
    case Refinement::Kind::IterOf: return a.var == b.var && a.subject == b.subject;
    case Refinement::Kind::Cmp:
      return a.op == b.op && structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
    case Refinement::Kind::Or:
      return structurally_equal(*a.left, *b.left) && structurally_equal(*a.right, *b.right);
    case Refinement::Kind::Not: return structurally_equal(*a.left, *b.left);
  }
  return false;
}

// --- Expr / Stmt factories --------------------------------------------------

namespace {
ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
StmtPtr make(Stmt s) { return std::make_shared<const Stmt>(std::move(s)); }
}  // namespace

ExprPtr Expr::var(std::string x, bool input) {
  Expr e{input ? Kind::InputVar : Kind::Var};
  e.name = std::move(x);
  return make(std::move(e));
}
ExprPtr Expr::int_lit(std::int64_t n) {
  Expr e{Kind::IntLit};
  e.int_value = n;
  return make(std::move(e));
}
ExprPtr Expr::bool_lit(bool b) {
  Expr e{Kind::BoolLit};
  e.bool_value = b;
  return make(std::move(e));
}
ExprPtr Expr::iterator_of(std::string y) {
  Expr e{Kind::IteratorOf};
  e.name = std::move(y);
  return make(std::move(e));
}
ExprPtr Expr::new_list(BaseType elem) {
  Expr e{Kind::NewList};
  e.elem = std::move(elem);
  return make(std::move(e));
}
ExprPtr Expr::arith_op(ArithOp op, ExprPtr a, ExprPtr b) {
  Expr e{Kind::Arith};
  e.arith = op;
  e.lhs = std::move(a);
  e.rhs = std::move(b);
  return make(std::move(e));
}
ExprPtr Expr::cmp_op(CmpOp op, ExprPtr a, ExprPtr b) {
  Expr e{Kind::Cmp};
  e.cmp = op;
  e.lhs = std::move(a);
  e.rhs = std::move(b);
  return make(std::move(e));
}
ExprPtr Expr::or_op(ExprPtr a, ExprPtr b) {
  Expr e{Kind::Or};
  e.lhs = std::move(a);
  e.rhs = std::move(b);
  return make(std::move(e));
}
ExprPtr Expr::not_op(ExprPtr a) {
  Expr e{Kind::Not};
  e.lhs = std::move(a);
  return make(std::move(e));
}
ExprPtr Expr::nondet() { return make(Expr{Kind::Nondet}); }

StmtPtr Stmt::assign(std::string x, ExprPtr e, CounterId c, SourceLoc loc) {
  Stmt s{Kind::Assign, std::move(c)};
  s.target = std::move(x);
  s.expr = std::move(e);
  s.loc = loc;
  return make(std::move(s));
}
StmtPtr Stmt::next(std::string x, std::string z, CounterId c, SourceLoc loc) {
  Stmt s{Kind::Next, std::move(c)};
  s.target = std::move(x);
  s.source = std::move(z);
  s.loc = loc;
  return make(std::move(s));
}
StmtPtr Stmt::remove(std::string y, CounterId c, SourceLoc loc) {
  Stmt s{Kind::Remove, std::move(c)};
  s.target = std::move(y);
  s.loc = loc;
  return make(std::move(s));
}
StmtPtr Stmt::add(std::string y, std::string x, CounterId c, SourceLoc loc) {
  Stmt s{Kind::Add, std::move(c)};
  s.target = std::move(y);
  s.source = std::move(x);
  s.loc = loc;
  return make(std::move(s));
}
StmtPtr Stmt::skip(CounterId c, SourceLoc loc) {
  Stmt s{Kind::Skip, std::move(c)};
  s.loc = loc;
  return make(std::move(s));
}
StmtPtr Stmt::block(std::vector<StmtPtr> body, CounterId c, SourceLoc loc) {
  Stmt s{Kind::Block, std::move(c)};
  s.body = std::move(body);
  s.loc = loc;
  return make(std::move(s));
}
StmtPtr Stmt::if_else(ExprPtr cond, StmtPtr s1, StmtPtr s2, CounterId c, SourceLoc loc) {
  Stmt s{Kind::If, std::move(c)};
  s.expr = std::move(cond);
  s.then_branch = std::move(s1);
  s.else_branch = std::move(s2);
  s.loc = loc;
  return make(std::move(s));
}
StmtPtr Stmt::while_loop(ExprPtr cond, StmtPtr body, CounterId c, SourceLoc loc) {
  Stmt s{Kind::While, std::move(c)};
  s.expr = std::move(cond);
  s.then_branch = std::move(body);
  s.loc = loc;
  return make(std::move(s));
}
StmtPtr Stmt::relabel(const Stmt& s, CounterId c) {
  Stmt copy = s;
  copy.counter = std::move(c);
  return make(std::move(copy));
}

// --- Method queries -----------------------------------------------------------

std::vector<const VarDecl*> Method::declarations() const {
  std::vector<const VarDecl*> out;
  for (const auto& d : inputs) out.push_back(&d);
  for (const auto& d : locals) out.push_back(&d);
  return out;
}

const VarDecl* Method::find(std::string_view n) const {
  for (const auto& d : inputs)
    if (d.name == n) return &d;
  for (const auto& d : locals)
    if (d.name == n) return &d;
  return nullptr;
}

namespace {
void preorder(const StmtPtr& s, std::vector<StmtPtr>& out) {
  if (!s) return;
  out.push_back(s);
  switch (s->kind) {
    case Stmt::Kind::Block:
      for (const auto& c : s->body) preorder(c, out);
      break;
    case Stmt::Kind::If:
      preorder(s->then_branch, out);
      preorder(s->else_branch, out);
      break;
    case Stmt::Kind::While:
      preorder(s->then_branch, out);
      break;
    default:
      break;
  }
}
}  // namespace

std::vector<StmtPtr> Method::statements() const {
  std::vector<StmtPtr> out;
  preorder(body, out);
  return out;
}

const Stmt* Method::find_statement(const CounterId& c) const {
  if (c.is_bot()) return nullptr;
  for (const auto& s : statements())
    if (s->counter == c) return s.get();
  return nullptr;
}

std::vector<CounterId> Method::counters() const {
  std::vector<CounterId> out;
  for (const auto& s : statements()) out.push_back(s->counter);
  return out;
}

// --- Labeling ---------------------------------------------------------------

namespace {
StmtPtr label_rec(const StmtPtr& s, int& index) {
  const int mine = index++;
  Stmt copy = *s;
  if (copy.counter.is_bot()) copy.counter = CounterId{"@" + std::to_string(mine)};
  switch (copy.kind) {
    case Stmt::Kind::Block:
      for (auto& c : copy.body) c = label_rec(c, index);
      break;
    case Stmt::Kind::If:
      copy.then_branch = label_rec(copy.then_branch, index);
      copy.else_branch = label_rec(copy.else_branch, index);
      break;
    case Stmt::Kind::While:
      copy.then_branch = label_rec(copy.then_branch, index);
      break;
    default:
      break;
  }
  return std::make_shared<const Stmt>(std::move(copy));
}
}  // namespace

Method label_counters(Method m) {
  int index = 0;
  if (m.body) m.body = label_rec(m.body, index);
  return m;
}

// --- Free symbols -------------------------------------------------------------

namespace {
void collect(const RefExpr& e, FreeSymbols& fs) {
  switch (e.kind) {
    case RefExpr::Kind::IntLit: break;
    case RefExpr::Kind::IntVar:
      if (e.var.empty()) fs.self_value = true; else fs.vars.insert(e.var);
      break;
    case RefExpr::Kind::Len:
      if (e.var.empty()) fs.self_len = true; else fs.len_of.insert(e.var);
      break;
    case RefExpr::Kind::Idx:
      if (e.var.empty()) fs.self_idx = true; else fs.idx_of.insert(e.var);
      break;
    case RefExpr::Kind::Counter: fs.counters.insert(e.var); break;
    case RefExpr::Kind::Add:
    case RefExpr::Kind::Sub:
      collect(*e.lhs, fs);
      collect(*e.rhs, fs);
      break;
    case RefExpr::Kind::Scale: collect(*e.lhs, fs); break;
  }
}

void collect(const Refinement& r, FreeSymbols& fs) {
  switch (r.kind) {
    case Refinement::Kind::BoolLit: break;
    case Refinement::Kind::BoolVar:
      if (r.var.empty()) fs.self_value = true; else fs.vars.insert(r.var);
      break;
    case Refinement::Kind::IterOf:
      fs.iterof_targets.insert(r.var);
      if (r.subject.empty()) fs.self_iterof = true; else fs.iterof_subjects.insert(r.subject);
      break;
    case Refinement::Kind::Cmp:
      collect(*r.lhs, fs);
      collect(*r.rhs, fs);
      break;
    case Refinement::Kind::Or:
      collect(*r.left, fs);
      collect(*r.right, fs);
      break;
    case Refinement::Kind::Not: collect(*r.left, fs); break;
  }
}

bool linear(const RefExpr& e) {
  switch (e.kind) {
    case RefExpr::Kind::Add:
    case RefExpr::Kind::Sub: return linear(*e.lhs) && linear(*e.rhs);
    case RefExpr::Kind::Scale: return linear(*e.lhs);
    default: return true;
  }
}
}  // namespace

std::set<std::string> FreeSymbols::all_vars() const {
  std::set<std::string> out = vars;
  out.insert(len_of.begin(), len_of.end());
  out.insert(idx_of.begin(), idx_of.end());
  out.insert(iterof_targets.begin(), iterof_targets.end());
  out.insert(iterof_subjects.begin(), iterof_subjects.end());
  return out;
}

FreeSymbols free_symbols(const Refinement& r) {
  FreeSymbols fs;
  collect(r, fs);
  return fs;
}

FreeSymbols free_symbols(const RefExpr& e) {
  FreeSymbols fs;
  collect(e, fs);
  return fs;
}

bool is_linear(const Refinement& r) {
  switch (r.kind) {
    case Refinement::Kind::Cmp: return linear(*r.lhs) && linear(*r.rhs);
    case Refinement::Kind::Or: return is_linear(*r.left) && is_linear(*r.right);
    case Refinement::Kind::Not: return is_linear(*r.left);
    default: return true;
  }
}

// --- Structural equality of programs -----------------------------------------

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.int_value != b.int_value || a.bool_value != b.bool_value ||
      a.name != b.name || a.arith != b.arith || a.cmp != b.cmp || a.elem != b.elem)
    return false;
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
  if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
  if (a.lhs && !structurally_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !structurally_equal(*a.rhs, *b.rhs)) return false;
  return true;
}

bool structurally_equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.counter != b.counter || a.target != b.target || a.source != b.source)
    return false;
  if (static_cast<bool>(a.expr) != static_cast<bool>(b.expr)) return false;
  if (a.expr && !structurally_equal(*a.expr, *b.expr)) return false;
  if (a.body.size() != b.body.size()) return false;
  for (std::size_t i = 0; i < a.body.size(); ++i)
    if (!structurally_equal(*a.body[i], *b.body[i])) return false;
  auto same_child = [](const StmtPtr& x, const StmtPtr& y) {
    if (static_cast<bool>(x) != static_cast<bool>(y)) return false;
    return !x || structurally_equal(*x, *y);
  };
  return same_child(a.then_branch, b.then_branch) && same_child(a.else_branch, b.else_branch);
}

bool structurally_equal(const Method& a, const Method& b) {
  auto same_decls = [](const std::vector<VarDecl>& x, const std::vector<VarDecl>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].name != y[i].name || x[i].is_input != y[i].is_input) return false;
      if (!(x[i].type.base == y[i].type.base)) return false;
      if (!structurally_equal(*x[i].type.refinement, *y[i].type.refinement)) return false;
      if (static_cast<bool>(x[i].init) != static_cast<bool>(y[i].init)) return false;
      if (x[i].init && !structurally_equal(*x[i].init, *y[i].init)) return false;
    }
    return true;
  };
  return a.name == b.name && same_decls(a.inputs, b.inputs) && same_decls(a.locals, b.locals) &&
         structurally_equal(*a.body, *b.body) && structurally_equal(*a.guarantee, *b.guarantee);
}

ParseError::ParseError(Kind kind, SourceLoc loc, std::string message, std::vector<std::string> expected)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message),
      kind_(kind),
      loc_(loc),
      expected_(std::move(expected)) {}

}  // namespace boundck
