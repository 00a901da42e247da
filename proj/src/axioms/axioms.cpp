#include "boundck/axioms.hpp"

#include "boundck/encode.hpp"

namespace boundck {

using smt::Formula;
using smt::FormulaPtr;
using smt::Term;

namespace {

smt::TermPtr cnt(const CounterId& c) { return Term::symbol(counter_symbol(c.name)); }

FormulaPtr eq(const CounterId& a, const CounterId& b, std::int64_t plus = 0) {
  smt::TermPtr rhs = plus == 0 ? cnt(b) : Term::add(cnt(b), Term::constant(plus));
  return Formula::cmp(CmpOp::Eq, cnt(a), rhs);
}

void collect(const Stmt& s, std::vector<AxiomPart>& out) {
  switch (s.kind) {
    case Stmt::Kind::Block: {
      const auto& body = s.body;
      const std::size_t n = body.size();
      // d_j: the counters of children j and j+1 differ by one, all other
      // neighbours agree; d_n: all equal.
      std::vector<FormulaPtr> ds;
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<FormulaPtr> d;
        for (std::size_t i = 0; i + 1 < n; ++i)
          d.push_back(eq(body[i]->counter, body[i + 1]->counter, i == j ? 1 : 0));
        ds.push_back(Formula::conj(std::move(d)));
      }
      out.push_back({"R-Block", s.counter,
                     Formula::conj({eq(s.counter, body.front()->counter), Formula::disj(std::move(ds))})});
      for (const auto& c : body) collect(*c, out);
      break;
    }
    case Stmt::Kind::If: {
      smt::TermPtr sum = Term::add(cnt(s.then_branch->counter), cnt(s.else_branch->counter));
      out.push_back({"R-If", s.counter,
                     Formula::disj({Formula::cmp(CmpOp::Eq, cnt(s.counter), sum),
                                    Formula::cmp(CmpOp::Eq, cnt(s.counter), Term::add(sum, Term::constant(1)))})});
      collect(*s.then_branch, out);
      collect(*s.else_branch, out);
      break;
    }
    case Stmt::Kind::While:
      collect(*s.then_branch, out);
      break;
    default:
      break;
  }
}

}  // namespace

CounterAxioms counter_axioms(const Method& m) {
  CounterAxioms a;
  std::vector<FormulaPtr> global;
  for (const auto& c : m.counters())
    global.push_back(Formula::cmp(CmpOp::Ge, cnt(c), Term::constant(0)));
  global.push_back(Formula::cmp(CmpOp::Le, cnt(m.body->counter), Term::constant(1)));
  a.parts.push_back({"Global", m.body->counter, Formula::conj(std::move(global))});
  collect(*m.body, a.parts);
  std::vector<FormulaPtr> all;
  for (const auto& p : a.parts) all.push_back(p.formula);
  a.formula = Formula::conj(std::move(all));
  return a;
}

void declare_counters(const Method& m, smt::SymbolTable& t) {
  for (const auto& c : m.counters()) t.declare(counter_symbol(c.name), smt::Sort::Int, smt::Origin::Counter);
}

bool eval_axioms(const CounterAxioms& a, const Env& env) {
  smt::Model model;
  for (const auto& [c, v] : env.counters) model.ints[counter_symbol(c)] = v;
  return smt::evaluate(*a.formula, model);
}

}  // namespace boundck
