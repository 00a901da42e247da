#include <gtest/gtest.h>

#include <random>

#include "boundck/axioms.hpp"
#include "boundck/encode.hpp"
#include "support.hpp"

using namespace boundck;
using boundck::testing::all_fixtures;
using boundck::testing::load_fixture;
using boundck::testing::ProgramGen;

namespace {

const AxiomPart* part_for(const CounterAxioms& a, const std::string& node) {
  for (const auto& p : a.parts)
    if (p.node.name == node) return &p;
  return nullptr;
}

smt::Model model_of(std::map<std::string, std::int64_t> counters) {
  smt::Model m;
  for (const auto& [c, n] : counters) m.ints[counter_symbol(c)] = n;
  return m;
}

}  // namespace

TEST(Axioms, SingleStatementBlock) {
  Method m = parse_method("method m() guarantee \"true\" { b: { s: skip; } }");
  CounterAxioms a = counter_axioms(m);
  const AxiomPart* p = part_for(a, "b");
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->rule, "R-Block");
  for (int vb = 0; vb <= 3; ++vb)
    for (int vs = 0; vs <= 3; ++vs)
      EXPECT_EQ(smt::evaluate(*p->formula, model_of({{"b", vb}, {"s", vs}})), vb == vs) << smt::to_text(*p->formula);
}

TEST(Axioms, FragmentBlockGivesAdjacentDisjunction) {
  Method m = load_fixture("fragment.bck");
  CounterAxioms a = counter_axioms(m);
  // Oracle: over all small valuations, the axioms restrict (C, D) exactly as
  // the block shape says: C == D or C == D + 1.
  const Stmt* c = m.find_statement(CounterId{"C"});
  ASSERT_NE(c, nullptr);
  std::string block, skip;
  for (const StmtPtr& s : m.statements())
    if (s->kind == Stmt::Kind::Block && !s->body.empty() && s->body.front().get() == c) {
      block = s->counter.name;
      skip = s->body[1]->counter.name;
    }
  ASSERT_FALSE(block.empty());
  for (int vb = 0; vb <= 3; ++vb)
    for (int vc = 0; vc <= 3; ++vc)
      for (int vs = 0; vs <= 3; ++vs)
        for (int vd = 0; vd <= 3; ++vd) {
          smt::Model mod = model_of({{block, vb}, {"C", vc}, {skip, vs}, {"D", vd}});
          const AxiomPart* p = part_for(a, block);
          ASSERT_NE(p, nullptr);
          bool holds = smt::evaluate(*p->formula, mod);
          bool shape = vb == vc && (vc == vs || vc == vs + 1) && (vs == vd || vs == vd + 1) && vc - vd <= 1;
          EXPECT_EQ(holds, shape) << vb << vc << vs << vd;
          if (holds) {
            EXPECT_TRUE(vc == vd || vc == vd + 1);
          }
        }
}

TEST(Axioms, IfBranchesSumToNode) {
  Method m = parse_method("method m() guarantee \"true\" { i: if (*) a: skip; else b: skip; }");
  CounterAxioms a = counter_axioms(m);
  const AxiomPart* p = part_for(a, "i");
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->rule, "R-If");
  EXPECT_TRUE(smt::evaluate(*p->formula, model_of({{"i", 3}, {"a", 2}, {"b", 1}})));
  EXPECT_TRUE(smt::evaluate(*p->formula, model_of({{"i", 3}, {"a", 1}, {"b", 1}})));
  EXPECT_FALSE(smt::evaluate(*p->formula, model_of({{"i", 3}, {"a", 2}, {"b", 2}})));
  EXPECT_FALSE(smt::evaluate(*p->formula, model_of({{"i", 3}, {"a", 0}, {"b", 1}})));
}

TEST(Axioms, ZeroEnvironmentSatisfies) {
  for (const auto& f : all_fixtures()) {
    Method m = load_fixture(f);
    std::mt19937_64 rng(2);
    auto in = sample_inputs(m, rng);
    ASSERT_TRUE(in) << f;
    EXPECT_TRUE(eval_axioms(counter_axioms(m), init_env(m, *in))) << f;
  }
}

TEST(Axioms, NegativeCounterFails) {
  Method m = load_fixture("driver.bck");
  Env e = init_env(m, {{"input", Value::list()}});
  e.counters["c9"] = -1;
  EXPECT_FALSE(eval_axioms(counter_axioms(m), e));
}

TEST(Axioms, BodyRunsAtMostOnce) {
  Method m = load_fixture("driver.bck");
  Env e = init_env(m, {{"input", Value::list()}});
  for (auto& [c, n] : e.counters) n = 2;
  EXPECT_FALSE(eval_axioms(counter_axioms(m), e));
}

TEST(Axioms, DeclaredCountersCoverFormula) {
  for (const auto& f : all_fixtures()) {
    Method m = load_fixture(f);
    smt::SymbolTable t;
    declare_counters(m, t);
    EXPECT_EQ(t.symbols().size(), m.counters().size());
    for (const auto& s : smt::symbols_of(*counter_axioms(m).formula)) EXPECT_TRUE(t.contains(s)) << f << " " << s;
  }
}

// Every environment of a sampled run satisfies the axioms.
TEST(Properties, TraceSoundnessOnFixtures) {
  for (const auto& f : all_fixtures()) {
    Method m = load_fixture(f);
    CounterAxioms a = counter_axioms(m);
    std::mt19937_64 rng(4);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      auto in = sample_inputs(m, rng);
      ASSERT_TRUE(in) << f;
      NondetOracle o = NondetOracle::seeded(seed);
      Trace t = run(m, *in, o, 200);
      for (std::size_t k = 0; k < t.envs.size(); ++k) ASSERT_TRUE(eval_axioms(a, t.envs[k])) << f << " seed " << seed << " step " << k;
    }
  }
}

TEST(Properties, TraceSoundnessOnRandomPrograms) {
  std::mt19937_64 rng(31);
  ProgramGen gen(rng, {.max_depth = 4});
  for (int i = 0; i < 200; ++i) {
    std::string src = gen.source();
    Method m = parse_method(src);
    CounterAxioms a = counter_axioms(m);
    auto in = sample_inputs(m, rng);
    ASSERT_TRUE(in);
    NondetOracle o = NondetOracle::seeded(i);
    Trace t = run(m, *in, o, 200);
    for (std::size_t k = 0; k < t.envs.size(); ++k) ASSERT_TRUE(eval_axioms(a, t.envs[k])) << src << "\nstep " << k;
  }
}
