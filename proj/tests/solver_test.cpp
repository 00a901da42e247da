#include <gtest/gtest.h>

#include <random>

#include "boundck/smt.hpp"
#include "support.hpp"

using namespace boundck;
using namespace boundck::smt;
using boundck::testing::brute_force;
using boundck::testing::FormulaGen;
using boundck::testing::int_table;

namespace {

TermPtr sym(const std::string& s) { return Term::symbol(s); }
TermPtr lit(std::int64_t n) { return Term::constant(n); }

Solver solver(int timeout_ms = 10000) {
  SolverConfig c;
  c.timeout_ms = timeout_ms;
  return Solver(c);
}

SymbolTable table(std::initializer_list<std::string> ints) {
  SymbolTable t;
  for (const auto& s : ints) t.declare(s, Sort::Int, Origin::Variable);
  return t;
}

}  // namespace

TEST(SmtLib, DeclaresAndAsserts) {
  SymbolTable t;
  t.declare("v_x", Sort::Int, Origin::Variable);
  std::string text = to_smtlib(*Formula::cmp(CmpOp::Ge, sym("v_x"), lit(0)), t);
  EXPECT_NE(text.find("(declare-const v_x Int)"), std::string::npos) << text;
  EXPECT_NE(text.find("(assert (>= v_x 0))"), std::string::npos) << text;
  EXPECT_NE(text.find("(check-sat)"), std::string::npos);
}

TEST(SmtLib, FalseIsUnsat) {
  SymbolTable t;
  std::string text = to_smtlib(*Formula::truth(false), t);
  EXPECT_NE(text.find("(assert false)"), std::string::npos) << text;
  EXPECT_EQ(solver().check(*Formula::truth(false), t).kind, Verdict::Kind::Unsat);
}

TEST(SmtLib, Deterministic) {
  std::mt19937_64 rng(3);
  FormulaGen gen(rng);
  for (int i = 0; i < 50; ++i) {
    FormulaPtr f = gen.formula(4);
    SymbolTable t = int_table(4);
    EXPECT_EQ(to_smtlib(*f, t), to_smtlib(*f, t));
  }
}

TEST(SmtLib, NegativeConstantsAndBooleans) {
  SymbolTable t;
  t.declare("b", Sort::Bool, Origin::IterOf);
  t.declare("x", Sort::Int, Origin::Variable);
  FormulaPtr f = Formula::conj({Formula::bool_sym("b"), Formula::cmp(CmpOp::Eq, sym("x"), lit(-3))});
  std::string text = to_smtlib(*f, t);
  EXPECT_NE(text.find("(declare-const b Bool)"), std::string::npos);
  EXPECT_NE(text.find("(- 3)"), std::string::npos) << text;
  Verdict v = solver().check(*f, t);
  ASSERT_EQ(v.kind, Verdict::Kind::Sat);
  EXPECT_EQ(v.model.int_value("x"), -3);
  EXPECT_TRUE(v.model.bool_value("b"));
}

TEST(SymbolTableTest, RedeclareWithOtherSortThrows) {
  SymbolTable t;
  t.declare("x", Sort::Int, Origin::Variable);
  t.declare("x", Sort::Int, Origin::Variable);
  try {
    t.declare("x", Sort::Bool, Origin::Variable);
    FAIL();
  } catch (const SmtError& e) {
    EXPECT_EQ(e.kind(), SmtError::Kind::UnsortedSymbol);
  }
}

TEST(Check, ContradictionUnsat) {
  SymbolTable t = table({"c"});
  FormulaPtr f = Formula::conj({Formula::cmp(CmpOp::Ge, sym("c"), lit(0)), Formula::cmp(CmpOp::Lt, sym("c"), lit(0))});
  EXPECT_EQ(solver().check(*f, t).kind, Verdict::Kind::Unsat);
}

TEST(Check, SatModelSatisfiesFormula) {
  SymbolTable t = table({"c"});
  FormulaPtr f = Formula::cmp(CmpOp::Gt, sym("c"), lit(5));
  Verdict v = solver().check(*f, t);
  ASSERT_EQ(v.kind, Verdict::Kind::Sat);
  EXPECT_GE(v.model.int_value("c"), 6);
  EXPECT_TRUE(evaluate(*f, v.model));
}

TEST(Check, TimeoutIsUnknown) {
  // Pigeonhole-style disequalities over many symbols keep the solver busy
  // well past a 1 ms budget.
  SymbolTable t;
  std::vector<FormulaPtr> fs;
  const int n = 40;
  for (int i = 0; i < n; ++i) {
    t.declare("p" + std::to_string(i), Sort::Int, Origin::Variable);
    fs.push_back(Formula::cmp(CmpOp::Ge, sym("p" + std::to_string(i)), lit(0)));
    fs.push_back(Formula::cmp(CmpOp::Lt, sym("p" + std::to_string(i)), lit(n - 1)));
    for (int j = 0; j < i; ++j)
      fs.push_back(Formula::cmp(CmpOp::Ne, sym("p" + std::to_string(i)), sym("p" + std::to_string(j))));
  }
  Verdict v = solver(1).check(*Formula::conj(fs), t);
  EXPECT_EQ(v.kind, Verdict::Kind::Unknown);
  EXPECT_EQ(v.reason, "timeout");
}

TEST(Validity, TrueImpliesTrue) {
  SymbolTable t;
  EXPECT_EQ(solver().check_validity(Formula::truth(true), Formula::truth(true), t).kind, Validity::Kind::Valid);
}

TEST(Validity, FragmentInvariantImpliesBound) {
  SymbolTable t = table({"len_s", "len_t", "cnt_C", "cnt_D"});
  FormulaPtr hyp = Formula::conj({
      Formula::cmp(CmpOp::Eq, Term::add(sym("len_s"), sym("cnt_D")), Term::add(sym("len_t"), sym("cnt_C"))),
      Formula::disj({Formula::cmp(CmpOp::Eq, sym("cnt_C"), sym("cnt_D")),
                     Formula::cmp(CmpOp::Eq, sym("cnt_C"), Term::add(sym("cnt_D"), lit(1)))}),
  });
  FormulaPtr goal = Formula::conj({Formula::cmp(CmpOp::Le, Term::sub(sym("len_s"), sym("len_t")), lit(1)),
                                   Formula::cmp(CmpOp::Le, Term::sub(sym("len_t"), sym("len_s")), lit(1))});
  EXPECT_EQ(solver().check_validity(hyp, goal, t).kind, Validity::Kind::Valid);
}

TEST(Validity, InvalidWithCounterexample) {
  SymbolTable t = table({"len_s", "len_t"});
  FormulaPtr hyp = Formula::cmp(CmpOp::Eq, sym("len_s"), sym("len_t"));
  FormulaPtr goal = Formula::cmp(CmpOp::Eq, Term::add(sym("len_s"), lit(1)), sym("len_t"));
  Validity v = solver().check_validity(hyp, goal, t);
  ASSERT_EQ(v.kind, Validity::Kind::Invalid);
  EXPECT_TRUE(evaluate(*hyp, v.counterexample));
  EXPECT_FALSE(evaluate(*goal, v.counterexample));
}

TEST(Output, ParsesModel) {
  SymbolTable t;
  t.declare("x", Sort::Int, Origin::Variable);
  t.declare("b", Sort::Bool, Origin::IterOf);
  Verdict v = parse_solver_output(
      "sat\n(\n  (define-fun x () Int\n    (- 4))\n  (define-fun b () Bool true)\n  (define-fun zz () Int 9)\n)\n", t);
  ASSERT_EQ(v.kind, Verdict::Kind::Sat);
  EXPECT_EQ(v.model.int_value("x"), -4);
  EXPECT_TRUE(v.model.bool_value("b"));
  EXPECT_EQ(v.model.ints.count("zz"), 0u);
}

TEST(Output, UnsatAndGarbage) {
  SymbolTable t;
  EXPECT_EQ(parse_solver_output("unsat\n(error \"model is not available\")\n", t).kind, Verdict::Kind::Unsat);
  Verdict v = parse_solver_output("segfault", t);
  EXPECT_EQ(v.kind, Verdict::Kind::Unknown);
  EXPECT_FALSE(v.reason.empty());
}

TEST(Output, Unbalanced) {
  SymbolTable t;
  try {
    parse_solver_output("sat\n((define-fun x () Int 3)", t);
    FAIL();
  } catch (const SmtError& e) {
    EXPECT_EQ(e.kind(), SmtError::Kind::MalformedModel);
  }
}

TEST(Resolve, MissingSolver) {
  try {
    resolve_solver("/nonexistent/solver");
    FAIL();
  } catch (const SmtError& e) {
    EXPECT_EQ(e.kind(), SmtError::Kind::SolverNotFound);
  }
}

TEST(Evaluate, AbsentSymbolsDefault) {
  Model m;
  EXPECT_EQ(evaluate(*Term::add(sym("x"), lit(2)), m), 2);
  EXPECT_FALSE(evaluate(*Formula::bool_sym("b"), m));
  EXPECT_TRUE(evaluate(*Formula::implies(Formula::bool_sym("b"), Formula::truth(false)), m));
}

// Brute force over a box against the solver: a box model forces Sat, every
// Sat model evaluates to true, and Unsat means the box holds no model.
TEST(Properties, BruteForceAgreement) {
  std::mt19937_64 rng(41);
  FormulaGen gen(rng);
  Solver s = solver();
  for (int i = 0; i < 60; ++i) {
    int k = 1 + i % 4;
    FormulaPtr f = gen.formula(k);
    Verdict v = s.check(*f, int_table(k));
    auto box = brute_force(*f, k);
    ASSERT_NE(v.kind, Verdict::Kind::Unknown) << to_text(*f);
    if (box) {
      EXPECT_EQ(v.kind, Verdict::Kind::Sat) << to_text(*f);
    }
    if (v.kind == Verdict::Kind::Sat) {
      EXPECT_TRUE(evaluate(*f, v.model)) << to_text(*f);
    }
  }
}
