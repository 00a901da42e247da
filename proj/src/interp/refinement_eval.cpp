#include "boundck/interp.hpp"

namespace boundck {

const Value& EnvView::lookup(const std::string& x, Value::Kind kind) const {
  auto it = env_.vars.find(x);
  if (it == env_.vars.end()) throw InterpError(InterpError::Kind::UnboundSymbol, "unbound variable '" + x + "'");
  if (it->second.kind != kind)
    throw InterpError(InterpError::Kind::BaseTypeMismatch, "variable '" + x + "' has the wrong shape");
  return it->second;
}

std::int64_t EnvView::int_of(const std::string& x) const { return lookup(x, Value::Kind::Int).num; }
bool EnvView::bool_of(const std::string& x) const { return lookup(x, Value::Kind::Bool).flag; }
std::int64_t EnvView::len_of(const std::string& x) const {
  return static_cast<std::int64_t>(lookup(x, Value::Kind::List).elems.size());
}
std::int64_t EnvView::idx_of(const std::string& x) const { return lookup(x, Value::Kind::Iter).num; }
bool EnvView::iterates(const std::string& it, const std::string& list) const {
  return lookup(it, Value::Kind::Iter).target == list;
}
std::int64_t EnvView::counter(const std::string& c) const {
  auto it = env_.counters.find(c);
  if (it == env_.counters.end()) throw InterpError(InterpError::Kind::UnboundSymbol, "unbound counter '" + c + "'");
  return it->second;
}

namespace {
const std::string& bind(const std::string& var, const std::string& self_var) {
  if (!var.empty()) return var;
  if (self_var.empty()) throw InterpError(InterpError::Kind::UnboundSymbol, "'self' is unbound");
  return self_var;
}
}  // namespace

std::int64_t eval_ref_expr(const RefExpr& e, const std::string& self_var, const StateView& state) {
  switch (e.kind) {
    case RefExpr::Kind::IntLit: return e.value;
    case RefExpr::Kind::IntVar: return state.int_of(bind(e.var, self_var));
    case RefExpr::Kind::Len: return state.len_of(bind(e.var, self_var));
    case RefExpr::Kind::Idx: return state.idx_of(bind(e.var, self_var));
    case RefExpr::Kind::Counter: return state.counter(e.var);
    case RefExpr::Kind::Add:
      return eval_ref_expr(*e.lhs, self_var, state) + eval_ref_expr(*e.rhs, self_var, state);
    case RefExpr::Kind::Sub:
      return eval_ref_expr(*e.lhs, self_var, state) - eval_ref_expr(*e.rhs, self_var, state);
    case RefExpr::Kind::Scale: return e.value * eval_ref_expr(*e.lhs, self_var, state);
  }
  return 0;
}

bool eval_refinement(const Refinement& r, const std::string& self_var, const StateView& state) {
  switch (r.kind) {
    case Refinement::Kind::BoolLit: return r.value;
    case Refinement::Kind::BoolVar: return state.bool_of(bind(r.var, self_var));
    case Refinement::Kind::IterOf: return state.iterates(bind(r.subject, self_var), r.var);
    case Refinement::Kind::Cmp:
      return apply(r.op, eval_ref_expr(*r.lhs, self_var, state), eval_ref_expr(*r.rhs, self_var, state));
    case Refinement::Kind::Or:
      return eval_refinement(*r.left, self_var, state) || eval_refinement(*r.right, self_var, state);
    case Refinement::Kind::Not: return !eval_refinement(*r.left, self_var, state);
  }
  return false;
}

bool eval_refinement(const Refinement& r, const std::string& self_var, const Env& env) {
  return eval_refinement(r, self_var, EnvView(env));
}

std::vector<Violation> well_typed(const StateView& state, const Method& m) {
  std::vector<Violation> out;
  for (const VarDecl* d : m.declarations()) {
    if (!eval_refinement(*d->type.refinement, d->name, state))
      out.push_back({d->name, to_string(*d->type.refinement)});
  }
  return out;
}

std::vector<Violation> well_typed(const Env& env, const Method& m) { return well_typed(EnvView(env), m); }

namespace {

Value random_value(const BaseType& t, std::mt19937_64& rng, int max_len) {
  switch (t.kind()) {
    case BaseType::Kind::Int: return Value::integer(std::uniform_int_distribution<int>(-5, 5)(rng));
    case BaseType::Kind::Bool: return Value::boolean(std::uniform_int_distribution<int>(0, 1)(rng) == 1);
    case BaseType::Kind::List: {
      int n = std::uniform_int_distribution<int>(0, max_len)(rng);
      std::vector<Value> elems;
      for (int i = 0; i < n; ++i) elems.push_back(random_value(t.element(), rng, max_len / 2));
      return Value::list(std::move(elems));
    }
    case BaseType::Kind::Iterator: break;
  }
  return Value::iter(0, "");
}

}  // namespace

std::optional<Inputs> sample_inputs(const Method& m, std::mt19937_64& rng, int max_len, int attempts) {
  for (int a = 0; a < attempts; ++a) {
    Inputs in;
    for (const VarDecl& d : m.inputs)
      if (!d.type.base.is_iterator()) in[d.name] = random_value(d.type.base, rng, max_len);
    bool ok = true;
    for (const VarDecl& d : m.inputs) {
      if (!d.type.base.is_iterator()) continue;
      std::vector<std::string> lists;
      for (const auto& [name, v] : in)
        if (v.kind == Value::Kind::List && m.find(name)->type.base == BaseType::list_of(d.type.base.element()))
          lists.push_back(name);
      if (lists.empty()) {
        ok = false;
        break;
      }
      const std::string& target = lists[std::uniform_int_distribution<std::size_t>(0, lists.size() - 1)(rng)];
      auto len = static_cast<std::int64_t>(in[target].elems.size());
      in[d.name] = Value::iter(std::uniform_int_distribution<std::int64_t>(0, len)(rng), target);
    }
    if (!ok) continue;
    try {
      NondetOracle oracle = NondetOracle::seeded(rng());
      Env env = init_env(m, in, oracle);
      bool inputs_ok = true;
      for (const VarDecl& d : m.inputs)
        if (!eval_refinement(*d.type.refinement, d.name, env)) inputs_ok = false;
      if (inputs_ok) return in;
    } catch (const InterpError&) {
    }
  }
  return std::nullopt;
}

}  // namespace boundck
