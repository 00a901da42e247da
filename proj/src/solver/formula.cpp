#include <algorithm>

#include "boundck/smt.hpp"

namespace boundck::smt {

TermPtr Term::constant(std::int64_t n) { return std::make_shared<const Term>(Term{Kind::Const, n, {}, {}, {}}); }
TermPtr Term::symbol(std::string s) { return std::make_shared<const Term>(Term{Kind::Sym, 0, std::move(s), {}, {}}); }
TermPtr Term::add(TermPtr a, TermPtr b) {
  return std::make_shared<const Term>(Term{Kind::Add, 0, {}, std::move(a), std::move(b)});
}
TermPtr Term::sub(TermPtr a, TermPtr b) {
  return std::make_shared<const Term>(Term{Kind::Sub, 0, {}, std::move(a), std::move(b)});
}
TermPtr Term::mul(std::int64_t k, TermPtr a) {
  return std::make_shared<const Term>(Term{Kind::Mul, k, {}, std::move(a), {}});
}

namespace {
FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
}  // namespace

FormulaPtr Formula::truth(bool b) { return make(Formula{b ? Kind::True : Kind::False}); }

FormulaPtr Formula::bool_sym(std::string s) {
  Formula f{Kind::BoolSym};
  f.sym = std::move(s);
  return make(std::move(f));
}

FormulaPtr Formula::cmp(CmpOp op, TermPtr a, TermPtr b) {
  Formula f{Kind::Cmp};
  f.op = op;
  f.lhs = std::move(a);
  f.rhs = std::move(b);
  return make(std::move(f));
}

FormulaPtr Formula::conj(std::vector<FormulaPtr> fs) {
  std::vector<FormulaPtr> flat;
  for (auto& f : fs) {
    if (f->kind == Kind::True) continue;
    if (f->kind == Kind::And) {
      flat.insert(flat.end(), f->args.begin(), f->args.end());
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (flat.empty()) return truth(true);
  if (flat.size() == 1) return flat.front();
  Formula f{Kind::And};
  f.args = std::move(flat);
  return make(std::move(f));
}

FormulaPtr Formula::disj(std::vector<FormulaPtr> fs) {
  std::vector<FormulaPtr> flat;
  for (auto& f : fs) {
    if (f->kind == Kind::False) continue;
    if (f->kind == Kind::Or) {
      flat.insert(flat.end(), f->args.begin(), f->args.end());
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (flat.empty()) return truth(false);
  if (flat.size() == 1) return flat.front();
  Formula f{Kind::Or};
  f.args = std::move(flat);
  return make(std::move(f));
}

FormulaPtr Formula::neg(FormulaPtr a) {
  Formula f{Kind::Not};
  f.args = {std::move(a)};
  return make(std::move(f));
}

FormulaPtr Formula::implies(FormulaPtr a, FormulaPtr b) {
  Formula f{Kind::Implies};
  f.args = {std::move(a), std::move(b)};
  return make(std::move(f));
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind != b.kind || a.value != b.value || a.sym != b.sym) return false;
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs) || static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs))
    return false;
  return (!a.lhs || *a.lhs == *b.lhs) && (!a.rhs || *a.rhs == *b.rhs);
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.kind != b.kind || a.sym != b.sym || a.op != b.op || a.args.size() != b.args.size()) return false;
  if (a.kind == Formula::Kind::Cmp && !(*a.lhs == *b.lhs && *a.rhs == *b.rhs)) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!(*a.args[i] == *b.args[i])) return false;
  return true;
}

void SymbolTable::declare(const std::string& name, Sort sort, Origin origin) {
  auto [it, inserted] = symbols_.emplace(name, SymbolInfo{sort, origin});
  if (!inserted && it->second.sort != sort)
    throw SmtError(SmtError::Kind::UnsortedSymbol, "symbol '" + name + "' declared with two sorts");
}

const SymbolInfo& SymbolTable::at(const std::string& name) const {
  auto it = symbols_.find(name);
  if (it == symbols_.end()) throw SmtError(SmtError::Kind::UnsortedSymbol, "undeclared symbol '" + name + "'");
  return it->second;
}

std::int64_t Model::int_value(const std::string& s) const {
  auto it = ints.find(s);
  return it == ints.end() ? 0 : it->second;
}

bool Model::bool_value(const std::string& s) const {
  auto it = bools.find(s);
  return it != bools.end() && it->second;
}

namespace {
void collect(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Sym) out.insert(t.sym);
  if (t.lhs) collect(*t.lhs, out);
  if (t.rhs) collect(*t.rhs, out);
}

void collect(const Formula& f, std::set<std::string>& out) {
  if (f.kind == Formula::Kind::BoolSym) out.insert(f.sym);
  if (f.lhs) collect(*f.lhs, out);
  if (f.rhs) collect(*f.rhs, out);
  for (const auto& a : f.args) collect(*a, out);
}
}  // namespace

std::set<std::string> symbols_of(const Formula& f) {
  std::set<std::string> out;
  collect(f, out);
  return out;
}

std::int64_t evaluate(const Term& t, const Model& m) {
  switch (t.kind) {
    case Term::Kind::Const: return t.value;
    case Term::Kind::Sym: return m.int_value(t.sym);
    case Term::Kind::Add: return evaluate(*t.lhs, m) + evaluate(*t.rhs, m);
    case Term::Kind::Sub: return evaluate(*t.lhs, m) - evaluate(*t.rhs, m);
    case Term::Kind::Mul: return t.value * evaluate(*t.lhs, m);
  }
  return 0;
}

bool evaluate(const Formula& f, const Model& m) {
  switch (f.kind) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::BoolSym: return m.bool_value(f.sym);
    case Formula::Kind::Cmp: return apply(f.op, evaluate(*f.lhs, m), evaluate(*f.rhs, m));
    case Formula::Kind::And:
      return std::all_of(f.args.begin(), f.args.end(), [&](const FormulaPtr& a) { return evaluate(*a, m); });
    case Formula::Kind::Or:
      return std::any_of(f.args.begin(), f.args.end(), [&](const FormulaPtr& a) { return evaluate(*a, m); });
    case Formula::Kind::Not: return !evaluate(*f.args[0], m);
    case Formula::Kind::Implies: return !evaluate(*f.args[0], m) || evaluate(*f.args[1], m);
  }
  return false;
}

namespace {
std::string text(const Term& t, int min_level) {
  switch (t.kind) {
    case Term::Kind::Const: return std::to_string(t.value);
    case Term::Kind::Sym: return t.sym;
    case Term::Kind::Add:
    case Term::Kind::Sub: {
      std::string s = text(*t.lhs, 1) + (t.kind == Term::Kind::Add ? " + " : " - ") + text(*t.rhs, 2);
      return min_level > 1 ? "(" + s + ")" : s;
    }
    case Term::Kind::Mul: {
      std::string s = std::to_string(t.value) + "*" + text(*t.lhs, 2);
      return min_level > 2 ? "(" + s + ")" : s;
    }
  }
  return "?";
}

std::string join_text(const std::vector<FormulaPtr>& args, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += sep;
    const Formula& a = *args[i];
    bool atomic = a.kind == Formula::Kind::True || a.kind == Formula::Kind::False ||
                  a.kind == Formula::Kind::BoolSym || a.kind == Formula::Kind::Cmp ||
                  a.kind == Formula::Kind::Not;
    out += atomic ? to_text(a) : "(" + to_text(a) + ")";
  }
  return out;
}
}  // namespace

std::string to_text(const Term& t) { return text(t, 1); }

std::string to_text(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::True: return "true";
    case Formula::Kind::False: return "false";
    case Formula::Kind::BoolSym: return f.sym;
    case Formula::Kind::Cmp:
      return to_text(*f.lhs) + " " + std::string(to_string(f.op)) + " " + to_text(*f.rhs);
    case Formula::Kind::And: return join_text(f.args, " && ");
    case Formula::Kind::Or: return join_text(f.args, " || ");
    case Formula::Kind::Not: {
      const Formula& a = *f.args.front();
      bool bare = a.kind == Formula::Kind::True || a.kind == Formula::Kind::False || a.kind == Formula::Kind::BoolSym ||
                  a.kind == Formula::Kind::Not;
      return "!" + (bare ? to_text(a) : "(" + to_text(a) + ")");
    }
    case Formula::Kind::Implies: return join_text(f.args, " ==> ");
  }
  return "?";
}

std::string to_sexpr(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Const:
      if (t.value < 0) return "(- " + std::to_string(0 - static_cast<std::uint64_t>(t.value)) + ")";
      return std::to_string(t.value);
    case Term::Kind::Sym: return t.sym;
    case Term::Kind::Add: return "(+ " + to_sexpr(*t.lhs) + " " + to_sexpr(*t.rhs) + ")";
    case Term::Kind::Sub: return "(- " + to_sexpr(*t.lhs) + " " + to_sexpr(*t.rhs) + ")";
    case Term::Kind::Mul: return "(* " + to_sexpr(*Term::constant(t.value)) + " " + to_sexpr(*t.lhs) + ")";
  }
  return "?";
}

std::string to_sexpr(const Formula& f) {
  auto nary = [&](std::string_view head) {
    std::string out = "(" + std::string(head);
    for (const auto& a : f.args) out += " " + to_sexpr(*a);
    return out + ")";
  };
  switch (f.kind) {
    case Formula::Kind::True: return "true";
    case Formula::Kind::False: return "false";
    case Formula::Kind::BoolSym: return f.sym;
    case Formula::Kind::Cmp: {
      std::string a = to_sexpr(*f.lhs), b = to_sexpr(*f.rhs);
      switch (f.op) {
        case CmpOp::Eq: return "(= " + a + " " + b + ")";
        case CmpOp::Ne: return "(not (= " + a + " " + b + "))";
        case CmpOp::Lt: return "(< " + a + " " + b + ")";
        case CmpOp::Le: return "(<= " + a + " " + b + ")";
        case CmpOp::Gt: return "(> " + a + " " + b + ")";
        case CmpOp::Ge: return "(>= " + a + " " + b + ")";
      }
      return "?";
    }
    case Formula::Kind::And: return nary("and");
    case Formula::Kind::Or: return nary("or");
    case Formula::Kind::Not: return nary("not");
    case Formula::Kind::Implies: return nary("=>");
  }
  return "?";
}

std::string to_smtlib(const Formula& f, const SymbolTable& t) {
  for (const auto& s : symbols_of(f)) t.at(s);
  std::string out = "(set-option :produce-models true)\n(set-logic QF_LIA)\n";
  for (const auto& [name, info] : t.symbols())
    out += "(declare-const " + name + (info.sort == Sort::Int ? " Int)\n" : " Bool)\n");
  out += "(assert " + to_sexpr(f) + ")\n(check-sat)\n(get-model)\n";
  return out;
}

std::string_view to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Unsat: return "unsat";
    case Verdict::Kind::Sat: return "sat";
    case Verdict::Kind::Unknown: return "unknown";
  }
  return "?";
}

std::string_view to_string(Validity::Kind k) {
  switch (k) {
    case Validity::Kind::Valid: return "valid";
    case Validity::Kind::Invalid: return "invalid";
    case Validity::Kind::Unknown: return "unknown";
  }
  return "?";
}

}  // namespace boundck::smt
