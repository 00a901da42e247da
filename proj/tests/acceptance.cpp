// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "boundck/alias.hpp"
#include "boundck/verify.hpp"
#include "support.hpp"

using namespace boundck;
using boundck::testing::alias_free_fixtures;
using boundck::testing::all_fixtures;
using boundck::testing::fixture_path;
using boundck::testing::load_fixture;
using boundck::testing::read_text;

namespace {

constexpr int kRuns = 200;
constexpr std::size_t kFuel = 200;

struct Timed {
  VerificationReport report;
  double ms;
};

Timed check(const std::string& fixture, bool alias = false) {
  VerifyConfig c;
  c.alias = alias;
  auto start = std::chrono::steady_clock::now();
  VerificationReport r = verify_source(read_text(fixture_path(fixture)), c);
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return {std::move(r), ms};
}

bool all_valid(const VerificationReport& r) {
  for (const auto& o : r.obligations)
    if (o.verdict != smt::Validity::Kind::Valid) return false;
  return r.base_errors.empty() && !r.obligations.empty();
}

// hypothesis ⇒ goal under the method's counter declarations.
bool implied(const Method& m, const smt::FormulaPtr& hypothesis, const smt::FormulaPtr& goal) {
  smt::SymbolTable t;
  declare_counters(m, t);
  smt::Solver s{smt::SolverConfig{}};
  return s.check_validity(hypothesis, goal, t).kind == smt::Validity::Kind::Valid;
}

smt::TermPtr cnt(const std::string& c) { return smt::Term::symbol(counter_symbol(c)); }

// One sampled state of a run; the view resolves names under whichever
// semantics produced it.
using StateVisitor = std::function<void(const StateView&, const std::map<std::string, std::int64_t>&)>;

// kRuns random-oracle runs of `m`; store semantics when `alias` is set.
void sample_runs(const Method& m, bool alias, std::uint64_t salt, const StateVisitor& visit) {
  std::mt19937_64 rng(0x5eed + salt);
  for (int i = 0; i < kRuns; ++i) {
    auto in = sample_inputs(m, rng);
    if (!in) throw std::runtime_error("no inputs satisfy the input refinements of " + m.name);
    NondetOracle o = NondetOracle::seeded(salt * 1000 + static_cast<std::uint64_t>(i));
    if (alias) {
      AliasTrace t = run_alias(m, *in, o, kFuel);
      for (const AliasEnv& e : t.envs) visit(AliasView(e), e.counters);
    } else {
      Trace t = run(m, *in, o, kFuel);
      for (const Env& e : t.envs) visit(EnvView(e), e.counters);
    }
  }
}

struct Outcome_ {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int n, const std::string& title, const std::function<Outcome_()>& body) {
  Outcome_ o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("criterion %2d: %s  %s (%s)\n", n, o.pass ? "PASS" : "FAIL", title.c_str(), o.detail.c_str());
  std::fflush(stdout);
}

std::string ms(double v) {
  std::ostringstream s;
  s.precision(0);
  s << std::fixed << v << " ms";
  return s.str();
}

}  // namespace

int main() {
  report(1, "two-list fragment: block axiom proves |len(s)-len(t)| <= 1; naive invariant fails T-Add", [] {
    Timed good = check("fragment.bck"), naive = check("fragment_naive.bck");
    Method m = load_fixture("fragment.bck");
    auto ax = counter_axioms(m).formula;
    bool axiom = implied(m, ax,
                         smt::Formula::disj({smt::Formula::cmp(CmpOp::Eq, cnt("C"), cnt("D")),
                                             smt::Formula::cmp(CmpOp::Eq, cnt("C"), smt::Term::add(cnt("D"), smt::Term::constant(1)))}));
    bool unsat = good.report.query_verdict && good.report.query_verdict->kind == smt::Verdict::Kind::Unsat;
    bool add_fails = false;
    for (const auto& o : naive.report.obligations)
      add_fails |= o.obligation.rule == "T-Add" && o.obligation.counter.name == "C" && o.verdict == smt::Validity::Kind::Invalid;
    bool pass = axiom && unsat && good.report.outcome == Outcome::Verified && add_fails &&
                naive.report.outcome == Outcome::NotVerified && good.ms < 1000 && naive.ms < 1000;
    return Outcome_{pass, "axiom " + std::string(axiom ? "ok" : "missing") + ", query " + (unsat ? "unsat" : "not unsat") +
                              ", naive T-Add at C " + (add_fails ? "invalid" : "not invalid") + ", " + ms(good.ms) + " / " +
                              ms(naive.ms)};
  });

  report(2, "driver verifies len(blogDB) < 2 with exit 0", [] {
    Timed t = check("driver.bck");
    int code = exit_code(t.report.outcome);
    return Outcome_{code == 0 && t.ms < 2000, std::string(to_string(t.report.outcome)) + ", exit " + std::to_string(code) + ", " + ms(t.ms)};
  });

  report(3, "showBlogs verifies len(toShow) <= len(blogDB) + 2", [] {
    Timed t = check("showblogs.bck");
    Method m = load_fixture("showblogs.bck");
    auto ax = counter_axioms(m).formula;
    auto le1 = [&](const std::string& c) { return smt::Formula::cmp(CmpOp::Le, cnt(c), smt::Term::constant(1)); };
    bool bounds = implied(m, ax, le1("c28")) && implied(m, ax, le1("c30"));
    bool loop = implied(m, ax,
                        smt::Formula::disj({smt::Formula::cmp(CmpOp::Eq, cnt("c32"), cnt("c33")),
                                            smt::Formula::cmp(CmpOp::Eq, cnt("c32"), smt::Term::add(cnt("c33"), smt::Term::constant(1)))}));
    int code = exit_code(t.report.outcome);
    return Outcome_{code == 0 && bounds && loop && t.ms < 2000,
                    std::string(to_string(t.report.outcome)) + ", c28/c30 <= 1 " + (bounds ? "derived" : "missing") +
                        ", loop disjunction " + (loop ? "derived" : "missing") + ", " + ms(t.ms)};
  });

  report(4, "comment loop: invariant type-checks and len(comments) <= len(stream) verifies", [] {
    Timed t = check("jforum.bck");
    bool valid = all_valid(t.report);
    return Outcome_{valid && t.report.outcome == Outcome::Verified && t.ms < 2000,
                    std::to_string(t.report.obligations.size()) + " obligations " + (valid ? "all valid" : "not all valid") +
                        ", " + std::string(to_string(t.report.outcome)) + ", " + ms(t.ms)};
  });

  report(5, "unbounded queue fails with a satisfying model", [] {
    Timed t = check("unbounded.bck");
    const auto& v = t.report.query_verdict;
    bool model = v && v->kind == smt::Verdict::Kind::Sat && !v->model.ints.empty() && smt::evaluate(*t.report.query, v->model);
    int code = exit_code(t.report.outcome);
    std::string c1 = model ? ", cnt_c1 = " + std::to_string(v->model.int_value("cnt_c1")) : "";
    return Outcome_{code == 1 && model && t.ms < 2000, "exit " + std::to_string(code) + c1 + ", " + ms(t.ms)};
  });

  // Fixtures whose obligations all hold, with the pipeline that checked them.
  std::vector<std::pair<std::string, bool>> typed;
  for (const auto& f : all_fixtures()) {
    if (all_valid(check(f).report)) typed.emplace_back(f, false);
    else if (all_valid(check(f, true).report)) typed.emplace_back(f, true);
  }

  report(6, "preservation: sampled runs of type-checked fixtures stay well-typed", [&] {
    std::size_t states = 0, violations = 0;
    std::string names;
    for (const auto& [f, alias] : typed) {
      Method m = load_fixture(f);
      sample_runs(m, alias, f.size(), [&](const StateView& s, const auto&) {
        ++states;
        violations += well_typed(s, m).size();
      });
      names += (names.empty() ? "" : " ") + f;
    }
    return Outcome_{violations == 0 && !typed.empty(), std::to_string(typed.size()) + " fixtures [" + names + "], " +
                                                         std::to_string(states) + " states, " + std::to_string(violations) +
                                                         " violations"};
  });

  report(7, "axiom soundness: every sampled state of every fixture satisfies the axioms", [] {
    std::size_t states = 0, violations = 0;
    for (const auto& f : all_fixtures()) {
      Method m = load_fixture(f);
      CounterAxioms ax = counter_axioms(m);
      sample_runs(m, f == "alias.bck", f.size(), [&](const StateView&, const std::map<std::string, std::int64_t>& c) {
        ++states;
        Env e;
        e.counters = c;
        violations += !eval_axioms(ax, e);
      });
    }
    return Outcome_{violations == 0, std::to_string(all_fixtures().size()) + " fixtures, " + std::to_string(states) +
                                         " states, " + std::to_string(violations) + " violations"};
  });

  report(8, "one-sidedness: verified guarantees hold in every sampled state", [] {
    std::size_t states = 0, violations = 0, verified = 0;
    for (const auto& f : all_fixtures()) {
      bool alias = f == "alias.bck";
      if (check(f, alias).report.outcome != Outcome::Verified) continue;
      ++verified;
      Method m = load_fixture(f);
      sample_runs(m, alias, f.size(), [&](const StateView& s, const auto&) {
        ++states;
        violations += !eval_refinement(*m.guarantee, "", s);
      });
    }
    return Outcome_{violations == 0 && verified > 0, std::to_string(verified) + " verified fixtures, " +
                                                         std::to_string(states) + " states, " +
                                                         std::to_string(violations) + " violations"};
  });

  report(9, "solver agrees with brute force on random linear formulas", [] {
    std::mt19937_64 rng(909);
    boundck::testing::FormulaGen gen(rng);
    smt::Solver s{smt::SolverConfig{}};
    int total = 0, with_model = 0, disagreements = 0;
    for (int i = 0; i < 120; ++i) {
      int k = 1 + i % 4;
      smt::FormulaPtr f = gen.formula(k);
      auto box = boundck::testing::brute_force(*f, k);
      smt::Verdict v = s.check(*f, boundck::testing::int_table(k));
      ++total;
      if (box) {
        ++with_model;
        disagreements += v.kind != smt::Verdict::Kind::Sat;
      }
      if (v.kind == smt::Verdict::Kind::Sat) disagreements += !smt::evaluate(*f, v.model);
    }
    return Outcome_{disagreements == 0 && total >= 100, std::to_string(total) + " formulas, " + std::to_string(with_model) +
                                                            " with a box model, " + std::to_string(disagreements) +
                                                            " disagreements"};
  });

  report(10, "alias degeneration: --alias matches the default pipeline on alias-free fixtures", [] {
    int mismatches = 0;
    std::string detail;
    for (const auto& f : alias_free_fixtures()) {
      VerificationReport a = check(f).report, b = check(f, true).report;
      std::set<std::string> ia, ib;
      for (const auto& o : a.obligations) ia.insert(o.obligation.id + "=" + std::string(smt::to_string(o.verdict)));
      for (const auto& o : b.obligations) ib.insert(o.obligation.id + "=" + std::string(smt::to_string(o.verdict)));
      if (ia != ib || a.outcome != b.outcome) {
        ++mismatches;
        detail += " " + f;
      }
    }
    return Outcome_{mismatches == 0, std::to_string(alias_free_fixtures().size()) + " fixtures, " +
                                         std::to_string(mismatches) + " mismatches" + detail};
  });

  std::printf("%s\n", failures == 0 ? "all criteria passed" : (std::to_string(failures) + " criteria failed").c_str());
  return failures == 0 ? 0 : 1;
}
