#include "boundck/encode.hpp"

namespace boundck {

using smt::Formula;
using smt::FormulaPtr;
using smt::Origin;
using smt::Sort;
using smt::Term;
using smt::TermPtr;

std::string var_symbol(const std::string& x) { return "v_" + x; }
std::string len_symbol(const std::string& x) { return "len_" + x; }
std::string idx_symbol(const std::string& x) { return "idx_" + x; }
std::string counter_symbol(const std::string& c) { return "cnt_" + c; }
std::string iterof_symbol(const std::string& it, const std::string& list) { return "iof_" + it + "@" + list; }

Encoder::Encoder(const Method& m) : method_(m) {
  for (const VarDecl* d : m.declarations()) types_.emplace(d->name, d->type.base);
}

const BaseType* Encoder::type_of(const std::string& x) const {
  auto it = types_.find(x);
  return it == types_.end() ? nullptr : &it->second;
}

std::string Encoder::fresh_var(const BaseType& t) {
  std::string name = "$" + std::to_string(fresh_++);
  types_.emplace(name, t);
  return name;
}

namespace {
const std::string& bind(const std::string& var, const std::string& self_var) {
  if (!var.empty()) return var;
  if (self_var.empty()) throw std::logic_error("refinement mentions self but no variable is bound");
  return self_var;
}

Origin origin_of(const std::string& x) { return x.front() == '$' ? Origin::Fresh : Origin::Variable; }
}  // namespace

TermPtr Encoder::len_term(const std::string& x) {
  std::string s = len_symbol(x);
  table_.declare(s, Sort::Int, x.front() == '$' ? Origin::Fresh : Origin::Length);
  len_of_[s] = x;
  return Term::symbol(s);
}

TermPtr Encoder::idx_term(const std::string& x) {
  std::string s = idx_symbol(x);
  table_.declare(s, Sort::Int, x.front() == '$' ? Origin::Fresh : Origin::Index);
  idx_of_[s] = x;
  return Term::symbol(s);
}

TermPtr Encoder::compile(const RefExpr& e, const std::string& self_var) {
  switch (e.kind) {
    case RefExpr::Kind::IntLit: return Term::constant(e.value);
    case RefExpr::Kind::IntVar: {
      const std::string& x = bind(e.var, self_var);
      table_.declare(var_symbol(x), Sort::Int, origin_of(x));
      return Term::symbol(var_symbol(x));
    }
    case RefExpr::Kind::Len: return len_term(bind(e.var, self_var));
    case RefExpr::Kind::Idx: return idx_term(bind(e.var, self_var));
    case RefExpr::Kind::Counter:
      table_.declare(counter_symbol(e.var), Sort::Int, Origin::Counter);
      return Term::symbol(counter_symbol(e.var));
    case RefExpr::Kind::Add: return Term::add(compile(*e.lhs, self_var), compile(*e.rhs, self_var));
    case RefExpr::Kind::Sub: return Term::sub(compile(*e.lhs, self_var), compile(*e.rhs, self_var));
    case RefExpr::Kind::Scale: return Term::mul(e.value, compile(*e.lhs, self_var));
  }
  return Term::constant(0);
}

FormulaPtr Encoder::compile(const Refinement& r, const std::string& self_var) {
  switch (r.kind) {
    case Refinement::Kind::BoolLit: return Formula::truth(r.value);
    case Refinement::Kind::BoolVar: {
      const std::string& x = bind(r.var, self_var);
      table_.declare(var_symbol(x), Sort::Bool, origin_of(x));
      return Formula::bool_sym(var_symbol(x));
    }
    case Refinement::Kind::IterOf: {
      const std::string& it = bind(r.subject, self_var);
      std::string s = iterof_symbol(it, r.var);
      table_.declare(s, Sort::Bool, Origin::IterOf);
      iterof_[s] = {it, r.var};
      return Formula::bool_sym(s);
    }
    case Refinement::Kind::Cmp:
      return Formula::cmp(r.op, compile(*r.lhs, self_var), compile(*r.rhs, self_var));
    case Refinement::Kind::Or: return Formula::disj({compile(*r.left, self_var), compile(*r.right, self_var)});
    case Refinement::Kind::Not: return Formula::neg(compile(*r.left, self_var));
  }
  return Formula::truth(true);
}

FormulaPtr Encoder::phi(const std::string& x, const RefinementType& t) {
  const Refinement& r = *t.refinement;
  if (r.kind == Refinement::Kind::IterOf && r.subject.empty()) {
    TermPtr idx = idx_term(x);
    return Formula::conj({Formula::cmp(CmpOp::Le, Term::constant(0), idx),
                          Formula::cmp(CmpOp::Le, idx, len_term(r.var))});
  }
  return compile(r, x);
}

FormulaPtr Encoder::standing(const std::set<std::string>& symbols) {
  std::vector<FormulaPtr> facts;
  std::map<std::string, std::vector<std::string>> by_iterator;
  for (const auto& s : symbols) {
    if (!table_.contains(s)) continue;
    if (len_of_.count(s) || idx_of_.count(s) || table_.at(s).origin == Origin::Counter)
      facts.push_back(Formula::cmp(CmpOp::Ge, Term::symbol(s), Term::constant(0)));
    auto io = iterof_.find(s);
    if (io != iterof_.end()) {
      const auto& [it, list] = io->second;
      TermPtr idx = idx_term(it);
      facts.push_back(Formula::implies(
          Formula::bool_sym(s), Formula::conj({Formula::cmp(CmpOp::Ge, idx, Term::constant(0)),
                                               Formula::cmp(CmpOp::Le, idx, len_term(list))})));
      by_iterator[it].push_back(s);
    }
  }
  for (const auto& [it, syms] : by_iterator) {
    for (std::size_t i = 0; i < syms.size(); ++i)
      for (std::size_t j = i + 1; j < syms.size(); ++j)
        facts.push_back(Formula::neg(Formula::conj({Formula::bool_sym(syms[i]), Formula::bool_sym(syms[j])})));
  }
  // Range facts can introduce len/idx symbols that need their own bounds.
  std::set<std::string> extra;
  for (const auto& f : facts)
    for (const auto& s : smt::symbols_of(*f))
      if (!symbols.count(s) && (len_of_.count(s) || idx_of_.count(s))) extra.insert(s);
  for (const auto& s : extra) facts.push_back(Formula::cmp(CmpOp::Ge, Term::symbol(s), Term::constant(0)));
  return Formula::conj(std::move(facts));
}

FormulaPtr Encoder::standing_for(const smt::Formula& f) { return standing(smt::symbols_of(f)); }

smt::SymbolTable Encoder::table_for(const smt::Formula& f) const {
  smt::SymbolTable t;
  for (const auto& s : smt::symbols_of(f)) {
    const auto& info = table_.at(s);
    t.declare(s, info.sort, info.origin);
  }
  return t;
}

}  // namespace boundck
