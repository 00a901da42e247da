#include "boundck/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "boundck/alias.hpp"
#include "boundck/axioms.hpp"
#include "boundck/verify.hpp"

namespace boundck {

namespace {

constexpr int kUsage = 3;

using nlohmann::json;

Value value_from_json(const json& j, const BaseType& t, const std::string& where) {
  auto fail = [&](const std::string& what) { throw std::invalid_argument(where + ": expected " + what); };
  switch (t.kind()) {
    case BaseType::Kind::Int:
      if (!j.is_number_integer()) fail("an integer");
      return Value::integer(j.get<std::int64_t>());
    case BaseType::Kind::Bool:
      if (!j.is_boolean()) fail("a boolean");
      return Value::boolean(j.get<bool>());
    case BaseType::Kind::List: {
      if (!j.is_array()) fail("an array");
      std::vector<Value> elems;
      for (std::size_t i = 0; i < j.size(); ++i)
        elems.push_back(value_from_json(j[i], t.element(), where + "[" + std::to_string(i) + "]"));
      return Value::list(std::move(elems));
    }
    case BaseType::Kind::Iterator:
      if (j.is_string()) return Value::iter(0, j.get<std::string>());
      if (!j.is_object() || !j.contains("target") || !j["target"].is_string()) fail("a list name or {\"target\", \"pos\"}");
      return Value::iter(j.value("pos", std::int64_t{0}), j["target"].get<std::string>());
  }
  fail("a value");
  return {};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- run ---------------------------------------------------------------------

struct RunOptions {
  std::string file, inputs;
  std::optional<std::uint64_t> seed;
  std::string script;
  std::size_t fuel = 100;
  bool invariants = false, axioms = false, alias = false, json = false;
};

struct Checked {
  std::vector<json> invariant_violations;
  std::vector<std::size_t> axiom_violations;
};

void check_state(const StateView& view, const std::map<std::string, std::int64_t>& counters, std::size_t step,
                 const Method& m, const CounterAxioms& ax, const RunOptions& o, Checked& out) {
  if (o.invariants)
    for (const auto& v : well_typed(view, m))
      out.invariant_violations.push_back({{"step", step}, {"var", v.var}, {"refinement", v.refinement}});
  if (o.axioms) {
    Env counters_only;
    counters_only.counters = counters;
    if (!eval_axioms(ax, counters_only)) out.axiom_violations.push_back(step);
  }
}

std::string render_slot(const AliasEnv& env, const Slot& s) {
  switch (s.kind) {
    case Slot::Kind::Int: return std::to_string(s.num);
    case Slot::Kind::Bool: return s.flag ? "true" : "false";
    case Slot::Kind::Iter: return "<" + std::to_string(s.num) + ", @" + std::to_string(s.addr) + ">";
    case Slot::Kind::Ref: {
      auto it = env.store.find(s.addr);
      return (it == env.store.end() ? std::string("?") : Value::list(it->second).str()) + " @" + std::to_string(s.addr);
    }
  }
  return "?";
}

int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
  Method m;
  Inputs inputs;
  try {
    m = parse_method(read_file(o.file));
    if (!o.inputs.empty()) inputs = inputs_from_json(m, read_file(o.inputs));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (auto errors = base_typecheck(m); !errors.empty()) {
    for (const auto& e : errors) err << o.file << ":" << e.loc.line << ":" << e.loc.column << ": " << e.message << "\n";
    return kUsage;
  }

  CounterAxioms ax = counter_axioms(m);
  Checked checked;
  std::string status, reason;
  std::size_t steps = 0, consumed = 0;
  std::vector<std::pair<std::string, std::string>> final_vars;
  std::map<std::string, std::int64_t> final_counters;
  try {
    NondetOracle oracle = o.seed ? NondetOracle::seeded(*o.seed) : NondetOracle::script(o.script);
    if (o.alias) {
      AliasTrace t = run_alias(m, inputs, oracle, o.fuel);
      for (std::size_t i = 0; i < t.envs.size(); ++i)
        check_state(AliasView(t.envs[i]), t.envs[i].counters, i, m, ax, o, checked);
      status = to_string(t.status);
      reason = t.status == RunStatus::Stuck ? std::string(to_string(t.reason)) : "";
      steps = t.envs.size() - 1;
      for (const auto& [k, s] : t.envs.back().vars) final_vars.emplace_back(k, render_slot(t.envs.back(), s));
      final_counters = t.envs.back().counters;
    } else {
      Trace t = run(m, inputs, oracle, o.fuel);
      for (std::size_t i = 0; i < t.envs.size(); ++i) check_state(EnvView(t.envs[i]), t.envs[i].counters, i, m, ax, o, checked);
      status = to_string(t.status);
      reason = t.status == RunStatus::Stuck ? std::string(to_string(t.reason)) : "";
      steps = t.envs.size() - 1;
      for (const auto& [k, v] : t.envs.back().vars) final_vars.emplace_back(k, v.str());
      final_counters = t.envs.back().counters;
    }
    consumed = oracle.consumed();
  } catch (const InterpError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  const bool failed = !checked.invariant_violations.empty() || !checked.axiom_violations.empty();
  if (o.json) {
    json j;
    j["method"] = m.name;
    j["status"] = status;
    j["reason"] = reason;
    j["steps"] = steps;
    j["nondet_consumed"] = consumed;
    j["final"] = json::object();
    for (const auto& [k, v] : final_vars) j["final"][k] = v;
    j["counters"] = final_counters;
    j["invariant_violations"] = checked.invariant_violations;
    j["axiom_violations"] = checked.axiom_violations;
    out << j.dump(2) << "\n";
  } else {
    out << "method " << m.name << ": " << status << (reason.empty() ? "" : " (" + reason + ")") << " after " << steps
        << " step(s)\n";
    out << "  nondet bits consumed: " << consumed << "\n";
    for (const auto& [k, v] : final_vars) out << "  " << k << " = " << v << "\n";
    out << "  counters:";
    for (const auto& [c, n] : final_counters) out << " " << c << "=" << n;
    out << "\n";
    if (o.invariants) out << "  invariant violations: " << checked.invariant_violations.size() << "\n";
    for (const auto& v : checked.invariant_violations)
      out << "    step " << v["step"].get<std::size_t>() << ": " << v["var"].get<std::string>() << " violates "
          << v["refinement"].get<std::string>() << "\n";
    if (o.axioms) out << "  axiom violations: " << checked.axiom_violations.size() << "\n";
  }
  return failed ? 1 : 0;
}

// --- check / axioms ----------------------------------------------------------

int cmd_check(const std::string& file, VerifyConfig config, bool as_json, std::ostream& out, std::ostream& err) {
  std::string source;
  try {
    source = read_file(file);
    smt::resolve_solver(config.solver.path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  VerificationReport r;
  try {
    r = verify_source(source, config);
  } catch (const std::exception& e) {  // emit directory trouble
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  r.file = file;
  out << (as_json ? render_json(r) + "\n" : render_text(r));
  return exit_code(r.outcome);
}

int cmd_axioms(const std::string& file, std::ostream& out, std::ostream& err) {
  Method m;
  try {
    m = parse_method(read_file(file));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  CounterAxioms ax = counter_axioms(m);
  out << "axioms of " << m.name << ":\n";
  for (const auto& p : ax.parts) out << "  [" << p.rule << " " << p.node.name << "] " << smt::to_text(*p.formula) << "\n";
  smt::SymbolTable t;
  declare_counters(m, t);
  out << "\n" << smt::to_smtlib(*ax.formula, t);
  return 0;
}

}  // namespace

Inputs inputs_from_json(const Method& m, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("inputs: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("inputs: expected an object");
  Inputs out;
  for (const auto& [name, value] : j.items()) {
    const VarDecl* d = m.find(name);
    if (!d || !d->is_input) throw std::invalid_argument("inputs: '" + name + "' is not an input of " + m.name);
    out[name] = value_from_json(value, d->type.base, name);
  }
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"boundck: refinement types with AST counters for collection length bounds"};
  app.require_subcommand(1);

  std::string file;
  VerifyConfig vc;
  bool check_json = false;
  auto* check = app.add_subcommand("check", "type-check a method and verify its guarantee");
  check->add_option("file", file, "method source (.bck)")->required();
  check->add_option("--solver", vc.solver.path, "solver executable (default: $BOUNDCK_SOLVER, then z3)");
  check->add_option("--timeout", vc.solver.timeout_ms, "per-query timeout in ms")->check(CLI::PositiveNumber);
  check->add_option("--emit-smt", vc.emit_smt_dir, "write each solver query to DIR");
  check->add_option("--assume", vc.assumptions, "extra refinement over the inputs (repeatable)");
  check->add_flag("--alias", vc.alias, "use the must-alias rules");
  check->add_flag("--json", check_json, "print the report as JSON");

  RunOptions ro;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "execute a method with the reference interpreter");
  run->add_option("file", ro.file, "method source (.bck)")->required();
  run->add_option("--inputs", ro.inputs, "JSON object of input values");
  auto* seed_opt = run->add_option("--seed", seed, "seed for '*'");
  auto* script_opt = run->add_option("--script", ro.script, "bits for '*', e.g. 1101");
  seed_opt->excludes(script_opt);
  run->add_option("--fuel", ro.fuel, "step budget")->required();
  run->add_flag("--assert-invariants", ro.invariants, "check every state against the declared refinements");
  run->add_flag("--assert-axioms", ro.axioms, "check every state against the counter axioms");
  run->add_flag("--alias", ro.alias, "use the store semantics");
  run->add_flag("--json", ro.json, "print the summary as JSON");

  auto* axioms = app.add_subcommand("axioms", "print the counter axioms of a method");
  axioms->add_option("file", file, "method source (.bck)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  if (*check) return cmd_check(file, vc, check_json, out, err);
  if (*run) {
    if (*seed_opt) ro.seed = seed;
    return cmd_run(ro, out, err);
  }
  return cmd_axioms(file, out, err);
}

}  // namespace boundck
