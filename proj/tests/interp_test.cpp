#include <gtest/gtest.h>

#include <random>

#include "boundck/interp.hpp"
#include "support.hpp"

using namespace boundck;
using boundck::testing::all_fixtures;
using boundck::testing::load_fixture;
using boundck::testing::ProgramGen;

namespace {

Value ints(std::vector<std::int64_t> xs) {
  std::vector<Value> out;
  for (auto x : xs) out.push_back(Value::integer(x));
  return Value::list(std::move(out));
}

std::string script_of(std::size_t n, char bit) { return std::string(n, bit); }

}  // namespace

TEST(InitEnv, DriverStartsEmpty) {
  Method m = load_fixture("driver.bck");
  Env e = init_env(m, {{"input", ints({})}});
  EXPECT_EQ(e.vars.at("blogDB"), ints({}));
  EXPECT_EQ(e.vars.at("it"), Value::iter(0, "input"));
  EXPECT_EQ(e.counters.size(), m.counters().size());
  for (const auto& [c, n] : e.counters) EXPECT_EQ(n, 0) << c;
}

TEST(InitEnv, NoInputsNoLocals) {
  Method m = parse_method("method m() guarantee \"true\" { skip; }");
  Env e = init_env(m, {});
  EXPECT_TRUE(e.vars.empty());
  EXPECT_EQ(e.counters.size(), 2u);
}

TEST(InitEnv, InputListBound) {
  Method m = load_fixture("driver.bck");
  Env e = init_env(m, {{"input", ints({5, 7})}});
  EXPECT_EQ(e.vars.at("input"), ints({5, 7}));
}

TEST(InitEnv, Errors) {
  Method m = load_fixture("driver.bck");
  try {
    init_env(m, {});
    FAIL();
  } catch (const InterpError& e) {
    EXPECT_EQ(e.kind(), InterpError::Kind::MissingInput);
  }
  try {
    init_env(m, {{"input", ints({})}, {"other", Value::integer(1)}});
    FAIL();
  } catch (const InterpError& e) {
    EXPECT_EQ(e.kind(), InterpError::Kind::UnknownInput);
  }
  try {
    init_env(m, {{"input", Value::integer(3)}});
    FAIL();
  } catch (const InterpError& e) {
    EXPECT_EQ(e.kind(), InterpError::Kind::BaseTypeMismatch);
  }
}

TEST(Step, Add) {
  Config cfg{{{{"y", ints({1, 2})}, {"x", Value::integer(5)}}, {{"c", 3}}}, Stmt::add("y", "x", CounterId{"c"})};
  NondetOracle o = NondetOracle::script("");
  StepResult r = step(cfg, o);
  EXPECT_EQ(r.kind, StepResult::Kind::Stepped);
  EXPECT_EQ(cfg.env.vars.at("y"), ints({1, 2, 5}));
  EXPECT_EQ(cfg.env.counters.at("c"), 4);
  EXPECT_EQ(cfg.stmt->kind, Stmt::Kind::Skip);
  EXPECT_TRUE(cfg.stmt->counter.is_bot());
  EXPECT_EQ(step(cfg, o).kind, StepResult::Kind::Done);
}

TEST(Step, Next) {
  Config cfg{{{{"z", Value::iter(0, "y")}, {"y", ints({8})}, {"x", Value::integer(0)}}, {{"c", 0}}},
             Stmt::next("x", "z", CounterId{"c"})};
  NondetOracle o = NondetOracle::script("");
  ASSERT_EQ(step(cfg, o).kind, StepResult::Kind::Stepped);
  EXPECT_EQ(cfg.env.vars.at("x"), Value::integer(8));
  EXPECT_EQ(cfg.env.vars.at("z"), Value::iter(1, "y"));
  EXPECT_EQ(cfg.env.counters.at("c"), 1);
}

TEST(Step, NextOnExhaustedIteratorIsStuck) {
  Config cfg{{{{"z", Value::iter(1, "y")}, {"y", ints({8})}, {"x", Value::integer(0)}}, {{"c", 0}}},
             Stmt::next("x", "z", CounterId{"c"})};
  NondetOracle o = NondetOracle::script("");
  Env before = cfg.env;
  StepResult r = step(cfg, o);
  EXPECT_EQ(r.kind, StepResult::Kind::Stuck);
  EXPECT_EQ(r.reason, StuckReason::IteratorExhausted);
  EXPECT_EQ(cfg.env, before);
}

TEST(Step, RemoveOnEmptyIsStuck) {
  Config cfg{{{{"y", ints({})}}, {{"c", 0}}}, Stmt::remove("y", CounterId{"c"})};
  NondetOracle o = NondetOracle::script("");
  StepResult r = step(cfg, o);
  EXPECT_EQ(r.kind, StepResult::Kind::Stuck);
  EXPECT_EQ(r.reason, StuckReason::RemoveEmpty);
}

TEST(Step, BlockSkipBumpsBlockAndSkip) {
  Method m = parse_method("method m() guarantee \"true\" { b: { s: skip; t: skip; } }");
  Config cfg{init_env(m, {}), m.body};
  NondetOracle o = NondetOracle::script("");
  // One step descends through the body block and b, consuming s.
  ASSERT_EQ(step(cfg, o).kind, StepResult::Kind::Stepped);
  EXPECT_EQ(cfg.env.counters.at("b"), 1);
  EXPECT_EQ(cfg.env.counters.at("s"), 1);
  EXPECT_EQ(cfg.env.counters.at("t"), 0);
  // The residual of b is unlabeled, so only t moves next.
  ASSERT_EQ(step(cfg, o).kind, StepResult::Kind::Stepped);
  EXPECT_EQ(cfg.env.counters.at("b"), 1);
  EXPECT_EQ(cfg.env.counters.at("s"), 1);
  EXPECT_EQ(cfg.env.counters.at("t"), 1);
}

TEST(Step, WhileCountsEntriesNotIterations) {
  Method m = parse_method("method m() guarantee \"true\" { w: while (*) { k: skip; } }");
  NondetOracle o = NondetOracle::script("1110");
  Trace t = run(m, {}, o, 100);
  ASSERT_EQ(t.status, RunStatus::Done);
  EXPECT_EQ(t.envs.back().counters.at("w"), 1);
  EXPECT_EQ(t.envs.back().counters.at("k"), 3);
}

TEST(Run, FuelZero) {
  Method m = load_fixture("driver.bck");
  NondetOracle o = NondetOracle::script("");
  Trace t = run(m, {{"input", ints({})}}, o, 0);
  EXPECT_EQ(t.envs.size(), 1u);
  EXPECT_EQ(t.status, RunStatus::FuelExhausted);
}

TEST(Run, DriverOneRound) {
  Method m = load_fixture("driver.bck");
  NondetOracle o = NondetOracle::script("10");
  Trace t = run(m, {{"input", ints({1})}}, o, 200);
  ASSERT_EQ(t.status, RunStatus::Done);
  const Env& last = t.envs.back();
  EXPECT_EQ(last.vars.at("blogDB"), ints({}));
  EXPECT_EQ(last.vars.at("blog"), Value::integer(1));
  EXPECT_EQ(last.counters.at("c8"), 1);
  EXPECT_EQ(last.counters.at("c10"), 1);
  std::size_t peak = 0;
  for (const Env& e : t.envs) peak = std::max(peak, e.vars.at("blogDB").elems.size());
  EXPECT_EQ(peak, 1u);
}

TEST(Run, UnboundedQueueGrowsWithFuel) {
  Method m = load_fixture("unbounded.bck");
  std::size_t prev = 0;
  for (std::size_t fuel : {10u, 25u, 50u}) {
    NondetOracle o = NondetOracle::script(script_of(fuel, '1'));
    Trace t = run(m, {{"x", Value::integer(4)}}, o, fuel);
    EXPECT_EQ(t.status, RunStatus::FuelExhausted);
    std::size_t len = t.envs.back().vars.at("q").elems.size();
    EXPECT_GT(len, prev);
    EXPECT_EQ(static_cast<std::int64_t>(len), t.envs.back().counters.at("c1"));
    prev = len;
  }
}

TEST(Oracle, ScriptBitsThenFalse) {
  NondetOracle o = NondetOracle::script("101");
  EXPECT_TRUE(o.next());
  EXPECT_FALSE(o.next());
  EXPECT_TRUE(o.next());
  EXPECT_FALSE(o.next());
  EXPECT_FALSE(o.next());
  EXPECT_EQ(o.consumed(), 5u);
}

TEST(Oracle, BadScript) {
  try {
    NondetOracle::script("10x");
    FAIL();
  } catch (const InterpError& e) {
    EXPECT_EQ(e.kind(), InterpError::Kind::BadScript);
  }
}

TEST(Oracle, SeededIsDeterministic) {
  NondetOracle a = NondetOracle::seeded(99), b = NondetOracle::seeded(99);
  for (int i = 0; i < 64; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Expr, EvalAndReduce) {
  Env env{{{"x", Value::integer(3)}}, {}};
  NondetOracle o = NondetOracle::script("");
  ExprPtr e = Expr::arith_op(ArithOp::Add, Expr::var("x"), Expr::arith_op(ArithOp::Mul, Expr::int_lit(2), Expr::int_lit(4)));
  EXPECT_EQ(eval_expr(*e, env, o), Value::integer(11));
  ExprPtr once = reduce_expr(*e, env, o);
  EXPECT_EQ(to_string(*once), "3 + 2 * 4");
  try {
    eval_expr(*Expr::not_op(Expr::var("x")), env, o);
    FAIL();
  } catch (const InterpError& err) {
    EXPECT_EQ(err.kind(), InterpError::Kind::BaseTypeMismatch);
  }
}

TEST(RefinementSemantics, LenEqualsCounter) {
  Method m = parse_method("method m() guarantee \"true\" { let x: List<int> inv \"len(self) == c1\" = new List<int>; c1: skip; }");
  Env env{{{"x", ints({7})}}, {{"c1", 1}}};
  EXPECT_TRUE(eval_refinement(*m.locals[0].type.refinement, "x", env));
}

TEST(RefinementSemantics, IterOf) {
  RefinementPtr r = Refinement::iter_of("y");
  Env good{{{"z", Value::iter(2, "y")}, {"y", ints({1, 2})}, {"w", ints({})}}, {}};
  Env bad{{{"z", Value::iter(2, "w")}, {"y", ints({1, 2})}, {"w", ints({})}}, {}};
  EXPECT_TRUE(eval_refinement(*r, "z", good));
  EXPECT_FALSE(eval_refinement(*r, "z", bad));
}

TEST(RefinementSemantics, ShowBlogsOneUnrolling) {
  Method m = load_fixture("showblogs.bck");
  // blog 4 stored; both headers added and one loop iteration done.
  Env env{{{"blogDB", ints({4})}, {"toShow", ints({1, 2, 4})}, {"it", Value::iter(1, "blogDB")}, {"blog", Value::integer(4)}},
          {{"c28", 1}, {"c30", 1}, {"c32", 1}, {"c33", 1}}};
  EXPECT_TRUE(eval_refinement(*m.find("toShow")->type.refinement, "toShow", env));
  env.counters["c33"] = 0;
  EXPECT_FALSE(eval_refinement(*m.find("toShow")->type.refinement, "toShow", env));
}

TEST(WellTyped, InitialEnvOfFixtures) {
  for (const auto& f : {"driver.bck", "showblogs.bck", "fragment.bck", "jforum.bck", "unbounded.bck"}) {
    Method m = load_fixture(f);
    std::mt19937_64 rng(1);
    auto in = sample_inputs(m, rng);
    ASSERT_TRUE(in) << f;
    EXPECT_TRUE(well_typed(init_env(m, *in), m).empty()) << f;
  }
}

TEST(WellTyped, ReportsViolatingVariable) {
  Method m = load_fixture("driver.bck");
  Env env = init_env(m, {{"input", ints({})}});
  env.vars["blogDB"] = ints({3});
  auto v = well_typed(env, m);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].var, "blogDB");
}

TEST(WellTyped, AllTrueRefinementsAlwaysHold) {
  Method m = parse_method(
      "method m(a: List<int> inv \"true\") guarantee \"true\" { let k: int inv \"true\" = 0; while (*) { k = k + 1; a.add(k); } }");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    NondetOracle o = NondetOracle::seeded(seed);
    Trace t = run(m, {{"a", ints({})}}, o, 100);
    for (const Env& e : t.envs) EXPECT_TRUE(well_typed(e, m).empty());
  }
}

TEST(SampleInputs, SatisfyInputRefinements) {
  Method m = parse_method(
      "method m(n: int inv \"self >= 2 and self <= 4\", xs: List<int> inv \"len(self) >= 3\", "
      "it: Iterator<int> inv \"iterOf(xs)\") guarantee \"true\" { skip; }");
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    auto in = sample_inputs(m, rng);
    ASSERT_TRUE(in);
    Env e = init_env(m, *in);
    EXPECT_TRUE(well_typed(e, m).empty());
  }
}

TEST(SampleInputs, UnsatisfiableGivesUp) {
  Method m = parse_method("method m(n: int inv \"self > self\") guarantee \"true\" { skip; }");
  std::mt19937_64 rng(5);
  EXPECT_FALSE(sample_inputs(m, rng, 6, 20).has_value());
}

// Random programs: same seed gives the same trace; counters never decrease
// and move by at most one per step.
TEST(Properties, DeterminismAndCounterMonotonicity) {
  std::mt19937_64 rng(21);
  ProgramGen gen(rng);
  for (int i = 0; i < 150; ++i) {
    Method m = parse_method(gen.source());
    auto in = sample_inputs(m, rng);
    ASSERT_TRUE(in);
    NondetOracle o1 = NondetOracle::seeded(i), o2 = NondetOracle::seeded(i);
    Trace t1 = run(m, *in, o1, 150), t2 = run(m, *in, o2, 150);
    ASSERT_EQ(t1.envs, t2.envs);
    ASSERT_EQ(t1.status, t2.status);
    for (std::size_t k = 1; k < t1.envs.size(); ++k) {
      const auto& before = t1.envs[k - 1].counters;
      const auto& after = t1.envs[k].counters;
      ASSERT_EQ(before.size(), after.size());
      for (const auto& [c, n] : after) {
        std::int64_t d = n - before.at(c);
        ASSERT_TRUE(d == 0 || d == 1) << c << " moved by " << d;
      }
    }
  }
}

// Only the statement being entered, and the blocks whose first child it is,
// bump in one step: every bumped counter is an ancestor chain of blocks ending
// in one statement.
TEST(Properties, BumpedCountersFormOneChain) {
  for (const auto& f : all_fixtures()) {
    Method m = load_fixture(f);
    std::mt19937_64 rng(3);
    auto in = sample_inputs(m, rng);
    ASSERT_TRUE(in) << f;
    NondetOracle o = NondetOracle::seeded(7);
    Trace t = run(m, *in, o, 200);
    for (std::size_t k = 1; k < t.envs.size(); ++k) {
      std::vector<const Stmt*> bumped;
      for (const auto& [c, n] : t.envs[k].counters)
        if (n != t.envs[k - 1].counters.at(c)) bumped.push_back(m.find_statement(CounterId{c}));
      int non_blocks = 0;
      for (const Stmt* s : bumped) non_blocks += s->kind != Stmt::Kind::Block;
      EXPECT_LE(non_blocks, 1) << f << " step " << k;
    }
  }
}
