#include "boundck/verify.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "json.hpp"

namespace boundck {

using smt::Formula;
using smt::FormulaPtr;

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Verified: return "Verified";
    case Outcome::NotVerified: return "NotVerified";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::Verified: return 0;
    case Outcome::NotVerified: return 1;
    case Outcome::Inconclusive: return 2;
  }
  return 2;
}

bool VerificationReport::consistent() const {
  bool all_valid = std::all_of(obligations.begin(), obligations.end(),
                               [](const ObligationResult& o) { return o.verdict == smt::Validity::Kind::Valid; });
  bool unsat = query_verdict && query_verdict->kind == smt::Verdict::Kind::Unsat;
  return (outcome == Outcome::Verified) == (all_valid && unsat && base_errors.empty() && alias_violations.empty());
}

Query assemble_query(const Method& m, Encoder& enc, const std::vector<RefinementPtr>& assumptions,
                     const AliasGroups* groups) {
  FreeSymbols g = free_symbols(*m.guarantee);
  if (g.uses_self()) throw QueryError(QueryError::Kind::GuaranteeMentionsSelf, "the guarantee may not mention self");
  if (!g.iterof_targets.empty())
    throw QueryError(QueryError::Kind::GuaranteeMentionsIterOf, "the guarantee may not mention iterOf");

  std::vector<FormulaPtr> parts;
  // Declares every counter, including those only the axioms mention.
  for (const auto& c : m.counters()) enc.compile(*RefExpr::counter(c.name));
  parts.push_back(counter_axioms(m).formula);
  for (const VarDecl* d : m.declarations()) parts.push_back(enc.phi(d->name, d->type));
  for (const auto& a : assumptions) {
    if (free_symbols(*a).uses_self()) throw QueryError(QueryError::Kind::BadAssumption, "assumptions may not mention self");
    parts.push_back(enc.compile(*a));
  }
  if (groups) {
    for (const auto& cls : groups->classes)
      for (std::size_t i = 1; i < cls.size(); ++i)
        parts.push_back(enc.compile(*Refinement::cmp(CmpOp::Eq, RefExpr::len(cls[0]), RefExpr::len(cls[i]))));
  }
  parts.push_back(Formula::neg(enc.compile(*m.guarantee)));
  FormulaPtr body = Formula::conj(parts);
  Query q;
  q.formula = Formula::conj({enc.standing_for(*body), body});
  q.table = enc.table_for(*q.formula);
  return q;
}

namespace {

class Emitter {
 public:
  explicit Emitter(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
  }

  void emit(const std::string& name, const Formula& f, const smt::SymbolTable& t) {
    if (dir_.empty()) return;
    std::string stem = name;
    for (int k = 2; used_.count(stem); ++k) stem = name + "." + std::to_string(k);
    used_.insert(stem);
    std::ofstream out(std::filesystem::path(dir_) / (stem + ".smt2"));
    if (!out) throw std::runtime_error("cannot write to " + dir_);
    out << smt::to_smtlib(f, t);
  }

 private:
  std::string dir_;
  std::set<std::string> used_;
};

}  // namespace

VerificationReport verify_method(const Method& m, const VerifyConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport r;
  r.method = m.name;
  r.alias = config.alias;
  r.notes.push_back("the if-statement axiom and the body bound are derived from the step rules");
  r.notes.push_back("lengths, indices and counters are assumed non-negative in every query");

  std::unique_ptr<smt::Solver> solver;
  auto finish = [&](Outcome o, std::string stage, std::string reason) {
    r.outcome = o;
    r.stage = std::move(stage);
    r.reason = std::move(reason);
    r.solver_queries = solver ? solver->queries() : 0;
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
  };

  CounterAxioms axioms = counter_axioms(m);
  r.axioms = axioms.parts;
  r.axiom_formula = axioms.formula;

  r.base_errors = base_typecheck(m);
  if (!r.base_errors.empty())
    return finish(Outcome::NotVerified, "base", std::to_string(r.base_errors.size()) + " base type error(s)");

  const AliasGroups* groups = nullptr;
  if (config.alias) {
    AliasAnalysis a = compute_alias_groups(m);
    r.alias_groups = std::move(a.groups);
    r.alias_violations = std::move(a.violations);
    if (!r.alias_violations.empty())
      return finish(Outcome::NotVerified, "alias", "the must-alias assumption does not hold");
    groups = &r.alias_groups;
  }

  std::vector<RefinementPtr> assumptions;
  try {
    for (const auto& a : config.assumptions) assumptions.push_back(parse_refinement(a, m));
  } catch (const ParseError& e) {
    return finish(Outcome::NotVerified, "assume", std::string("bad assumption: ") + e.what());
  }

  try {
    solver = std::make_unique<smt::Solver>(config.solver);
  } catch (const smt::SmtError& e) {
    return finish(Outcome::Inconclusive, "solver", e.what());
  }

  Emitter emitter(config.emit_smt_dir);
  Encoder enc(m);
  for (Obligation& ob : check_method(m, enc, groups)) {
    ObligationResult res;
    if (ob.decided) {
      res.verdict = *ob.decided ? smt::Validity::Kind::Valid : smt::Validity::Kind::Invalid;
    } else {
      res.used_solver = true;
      FormulaPtr negated = Formula::conj({ob.hypothesis, Formula::neg(ob.conclusion)});
      smt::SymbolTable t = enc.table_for(*negated);
      emitter.emit(ob.id, *negated, t);
      try {
        smt::Validity v = solver->check_validity(ob.hypothesis, ob.conclusion, t);
        res.verdict = v.kind;
        res.counterexample = std::move(v.counterexample);
        res.reason = std::move(v.reason);
      } catch (const smt::SmtError& e) {
        res.verdict = smt::Validity::Kind::Unknown;
        res.reason = e.what();
      }
    }
    res.obligation = std::move(ob);
    r.obligations.push_back(std::move(res));
  }

  std::size_t invalid = 0, unknown = 0;
  for (const auto& o : r.obligations) {
    invalid += o.verdict == smt::Validity::Kind::Invalid;
    unknown += o.verdict == smt::Validity::Kind::Unknown;
  }
  if (invalid)
    return finish(Outcome::NotVerified, "obligations", std::to_string(invalid) + " obligation(s) do not hold");
  if (unknown)
    return finish(Outcome::Inconclusive, "obligations", std::to_string(unknown) + " obligation(s) undecided");

  Query q;
  try {
    q = assemble_query(m, enc, assumptions, groups);
  } catch (const QueryError& e) {
    return finish(Outcome::NotVerified, "query", e.what());
  }
  r.query = q.formula;
  emitter.emit(m.name + ".query", *q.formula, q.table);
  try {
    r.query_verdict = solver->check(*q.formula, q.table);
  } catch (const smt::SmtError& e) {
    r.query_verdict = smt::Verdict{smt::Verdict::Kind::Unknown, {}, e.what()};
  }
  switch (r.query_verdict->kind) {
    case smt::Verdict::Kind::Unsat: return finish(Outcome::Verified, "query", "the guarantee holds in every reachable state");
    case smt::Verdict::Kind::Sat: return finish(Outcome::NotVerified, "query", "the guarantee can be violated");
    case smt::Verdict::Kind::Unknown: break;
  }
  return finish(Outcome::Inconclusive, "query", "solver: " + r.query_verdict->reason);
}

VerificationReport verify_source(const std::string& source, const VerifyConfig& config) {
  try {
    return verify_method(parse_method(source), config);
  } catch (const ParseError& e) {
    VerificationReport r;
    r.parse_error = e.what();
    r.outcome = Outcome::NotVerified;
    r.stage = "parse";
    r.reason = e.what();
    return r;
  }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

std::string_view verdict_word(smt::Validity::Kind k) {
  switch (k) {
    case smt::Validity::Kind::Valid: return "valid";
    case smt::Validity::Kind::Invalid: return "invalid";
    case smt::Validity::Kind::Unknown: return "unknown";
  }
  return "?";
}

nlohmann::json model_json(const smt::Model& m) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : m.ints) j[k] = v;
  for (const auto& [k, v] : m.bools) j[k] = v;
  return j;
}

void model_text(std::ostream& out, const smt::Model& m, const std::string& indent) {
  for (const auto& [k, v] : m.ints) out << indent << k << " = " << v << "\n";
  for (const auto& [k, v] : m.bools) out << indent << k << " = " << (v ? "true" : "false") << "\n";
}

std::string counter_name(const CounterId& c) { return c.is_bot() ? "" : c.name; }

}  // namespace

std::string render_text(const VerificationReport& r) {
  std::ostringstream out;
  out << "method " << (r.method.empty() ? "?" : r.method) << ": " << to_string(r.outcome) << "\n";
  out << "  stage: " << r.stage << " (" << r.reason << ")\n";
  if (r.parse_error) return out.str();

  if (r.base_errors.empty()) {
    out << "  base check: ok\n";
  } else {
    out << "  base check: " << r.base_errors.size() << " error(s)\n";
    for (const auto& e : r.base_errors)
      out << "    " << e.loc.line << ":" << e.loc.column << " [" << e.rule << "] " << e.message << "\n";
  }

  if (r.alias) {
    out << "  alias groups:";
    for (const auto& cls : r.alias_groups.classes) {
      out << " {";
      for (std::size_t i = 0; i < cls.size(); ++i) out << (i ? ", " : "") << cls[i];
      out << "}";
    }
    out << "\n";
    for (const auto& v : r.alias_violations) out << "    violation at " << v.loc.line << ":" << v.loc.column << ": " << v.message << "\n";
  }

  if (!r.obligations.empty()) {
    std::size_t valid = 0, trivial = 0;
    for (const auto& o : r.obligations) {
      valid += o.verdict == smt::Validity::Kind::Valid;
      trivial += !o.used_solver && o.verdict == smt::Validity::Kind::Valid;
    }
    out << "  obligations: " << r.obligations.size() << " (" << valid << " valid, " << trivial
        << " decided without the solver)\n";
    for (const auto& o : r.obligations) {
      if (!o.used_solver && o.verdict == smt::Validity::Kind::Valid) continue;
      out << "    [" << verdict_word(o.verdict) << "] " << o.obligation.id;
      if (!o.used_solver) out << " (" << o.obligation.note << ")";
      out << "\n";
      if (o.verdict != smt::Validity::Kind::Valid) {
        out << "      " << to_string(*o.obligation.premise) << "  =>  " << to_string(*o.obligation.goal) << "\n";
        if (!o.reason.empty()) out << "      reason: " << o.reason << "\n";
        model_text(out, o.counterexample, "      ");
      }
    }
  }

  if (r.axiom_formula) out << "  axioms: " << smt::to_text(*r.axiom_formula) << "\n";
  if (r.query_verdict) {
    out << "  query: " << smt::to_string(r.query_verdict->kind) << "\n";
    if (r.query_verdict->kind == smt::Verdict::Kind::Sat) {
      out << "  counterexample:\n";
      model_text(out, r.query_verdict->model, "    ");
    }
  }
  for (const auto& n : r.notes) out << "  note: " << n << "\n";
  return out.str();
}

std::string render_json(const VerificationReport& r, bool with_timings) {
  nlohmann::json j;
  j["method"] = r.method;
  j["file"] = r.file;
  j["outcome"] = to_string(r.outcome);
  j["stage"] = r.stage;
  j["reason"] = r.reason;
  j["parse_error"] = r.parse_error ? nlohmann::json(*r.parse_error) : nlohmann::json();

  j["base_errors"] = nlohmann::json::array();
  for (const auto& e : r.base_errors)
    j["base_errors"].push_back({{"rule", e.rule}, {"node", e.node}, {"message", e.message},
                                {"line", e.loc.line}, {"column", e.loc.column}});

  nlohmann::json alias;
  alias["enabled"] = r.alias;
  alias["groups"] = r.alias_groups.classes;
  alias["violations"] = nlohmann::json::array();
  for (const auto& v : r.alias_violations)
    alias["violations"].push_back({{"statement", v.stmt}, {"message", v.message}, {"line", v.loc.line}, {"column", v.loc.column}});
  j["alias"] = alias;

  j["obligations"] = nlohmann::json::array();
  for (const auto& o : r.obligations) {
    const Obligation& ob = o.obligation;
    j["obligations"].push_back({
        {"id", ob.id},
        {"kind", to_string(ob.kind)},
        {"rule", ob.rule},
        {"counter", counter_name(ob.counter)},
        {"var", ob.var},
        {"premise", to_string(*ob.premise)},
        {"goal", to_string(*ob.goal)},
        {"hypothesis", smt::to_text(*ob.hypothesis)},
        {"conclusion", smt::to_text(*ob.conclusion)},
        {"verdict", verdict_word(o.verdict)},
        {"solver", o.used_solver},
        {"note", ob.note},
        {"reason", o.reason},
        {"counterexample", model_json(o.counterexample)},
    });
  }

  nlohmann::json axioms;
  axioms["formula"] = r.axiom_formula ? smt::to_text(*r.axiom_formula) : "";
  axioms["parts"] = nlohmann::json::array();
  for (const auto& p : r.axioms)
    axioms["parts"].push_back({{"rule", p.rule}, {"node", counter_name(p.node)}, {"formula", smt::to_text(*p.formula)}});
  j["axioms"] = axioms;

  if (r.query_verdict) {
    j["query"] = {{"formula", r.query ? smt::to_text(*r.query) : ""},
                  {"verdict", smt::to_string(r.query_verdict->kind)},
                  {"model", model_json(r.query_verdict->model)},
                  {"reason", r.query_verdict->reason}};
  } else {
    j["query"] = nullptr;
  }
  j["notes"] = r.notes;
  if (with_timings) j["timings"] = {{"total_ms", r.elapsed_ms}, {"solver_queries", r.solver_queries}};
  return j.dump(2);
}

}  // namespace boundck
