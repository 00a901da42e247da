#include "boundck/interp.hpp"

namespace boundck {

Value Value::integer(std::int64_t n) {
  Value v;
  v.kind = Kind::Int;
  v.num = n;
  return v;
}

Value Value::boolean(bool b) {
  Value v;
  v.kind = Kind::Bool;
  v.flag = b;
  return v;
}

Value Value::iter(std::int64_t pos, std::string target) {
  Value v;
  v.kind = Kind::Iter;
  v.num = pos;
  v.target = std::move(target);
  return v;
}

Value Value::list(std::vector<Value> elems) {
  Value v;
  v.kind = Kind::List;
  v.elems = std::move(elems);
  return v;
}

std::string Value::str() const {
  switch (kind) {
    case Kind::Int: return std::to_string(num);
    case Kind::Bool: return flag ? "true" : "false";
    case Kind::Iter: return "<" + std::to_string(num) + ", " + target + ">";
    case Kind::List: {
      std::string out = "[";
      for (std::size_t i = 0; i < elems.size(); ++i) out += (i ? ", " : "") + elems[i].str();
      return out + "]";
    }
  }
  return "?";
}

bool conforms(const Value& v, const BaseType& t) {
  switch (t.kind()) {
    case BaseType::Kind::Int: return v.kind == Value::Kind::Int;
    case BaseType::Kind::Bool: return v.kind == Value::Kind::Bool;
    case BaseType::Kind::Iterator: return v.kind == Value::Kind::Iter && v.num >= 0;
    case BaseType::Kind::List:
      if (v.kind != Value::Kind::List) return false;
      for (const auto& e : v.elems)
        if (!conforms(e, t.element())) return false;
      return true;
  }
  return false;
}

NondetOracle NondetOracle::seeded(std::uint64_t seed) {
  NondetOracle o;
  o.rng_.emplace(seed);
  return o;
}

NondetOracle NondetOracle::script(std::string_view bits) {
  for (char c : bits)
    if (c != '0' && c != '1') throw InterpError(InterpError::Kind::BadScript, "script must contain only 0 and 1");
  NondetOracle o;
  o.script_ = std::string(bits);
  return o;
}

bool NondetOracle::next() {
  std::size_t i = consumed_++;
  if (rng_) return ((*rng_)() >> 63) != 0;
  return i < script_.size() && script_[i] == '1';
}

std::string_view to_string(StuckReason r) {
  switch (r) {
    case StuckReason::None: return "none";
    case StuckReason::IteratorExhausted: return "iterator exhausted";
    case StuckReason::RemoveEmpty: return "remove on empty list";
    case StuckReason::IllTyped: return "ill-typed state";
  }
  return "?";
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Done: return "Done";
    case RunStatus::FuelExhausted: return "FuelExhausted";
    case RunStatus::Stuck: return "Stuck";
  }
  return "?";
}

namespace {

struct Stuck {
  StuckReason reason;
};

const Value& lookup(const Env& env, const std::string& x) {
  auto it = env.vars.find(x);
  if (it == env.vars.end()) throw InterpError(InterpError::Kind::UnboundSymbol, "unbound variable '" + x + "'");
  return it->second;
}

Value& lookup_mut(Env& env, const std::string& x) {
  auto it = env.vars.find(x);
  if (it == env.vars.end()) throw InterpError(InterpError::Kind::UnboundSymbol, "unbound variable '" + x + "'");
  return it->second;
}

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

const Value& expect_kind(const Value& v, Value::Kind k) {
  if (v.kind != k) throw Stuck{StuckReason::IllTyped};
  return v;
}

Value combine(const Expr& e, const Value& a, const Value* b) {
  switch (e.kind) {
    case Expr::Kind::Arith: {
      std::int64_t x = expect_kind(a, Value::Kind::Int).num, y = expect_kind(*b, Value::Kind::Int).num;
      switch (e.arith) {
        case ArithOp::Add: return Value::integer(wrap_add(x, y));
        case ArithOp::Sub: return Value::integer(wrap_sub(x, y));
        case ArithOp::Mul: return Value::integer(wrap_mul(x, y));
      }
      break;
    }
    case Expr::Kind::Cmp:
      if (a.kind == Value::Kind::Bool && b->kind == Value::Kind::Bool &&
          (e.cmp == CmpOp::Eq || e.cmp == CmpOp::Ne))
        return Value::boolean((a.flag == b->flag) == (e.cmp == CmpOp::Eq));
      return Value::boolean(apply(e.cmp, expect_kind(a, Value::Kind::Int).num, expect_kind(*b, Value::Kind::Int).num));
    case Expr::Kind::Or:
      return Value::boolean(expect_kind(a, Value::Kind::Bool).flag || expect_kind(*b, Value::Kind::Bool).flag);
    case Expr::Kind::Not: return Value::boolean(!expect_kind(a, Value::Kind::Bool).flag);
    default: break;
  }
  throw Stuck{StuckReason::IllTyped};
}

// Big-step evaluation, consuming `*` left to right.
Value eval_full(const Expr& e, const Env& env, NondetOracle& oracle) {
  switch (e.kind) {
    case Expr::Kind::Var:
    case Expr::Kind::InputVar: return lookup(env, e.name);
    case Expr::Kind::IntLit: return Value::integer(e.int_value);
    case Expr::Kind::BoolLit: return Value::boolean(e.bool_value);
    case Expr::Kind::Nondet: return Value::boolean(oracle.next());
    case Expr::Kind::IteratorOf: return Value::iter(0, e.name);
    case Expr::Kind::NewList: return Value::list();
    case Expr::Kind::Not: {
      Value a = eval_full(*e.lhs, env, oracle);
      return combine(e, a, nullptr);
    }
    default: {
      Value a = eval_full(*e.lhs, env, oracle);
      Value b = eval_full(*e.rhs, env, oracle);
      return combine(e, a, &b);
    }
  }
}

ExprPtr as_expr(const Value& v) {
  if (v.kind == Value::Kind::Int) return Expr::int_lit(v.num);
  if (v.kind == Value::Kind::Bool) return Expr::bool_lit(v.flag);
  throw Stuck{StuckReason::IllTyped};
}

Value as_value(const Expr& e) {
  return e.kind == Expr::Kind::IntLit ? Value::integer(e.int_value) : Value::boolean(e.bool_value);
}

// One leftmost reduction step of a scalar expression.
ExprPtr reduce_once(const Expr& e, const Env& env, NondetOracle& oracle) {
  switch (e.kind) {
    case Expr::Kind::Var:
    case Expr::Kind::InputVar: return as_expr(lookup(env, e.name));
    case Expr::Kind::Nondet: return Expr::bool_lit(oracle.next());
    case Expr::Kind::Not:
      if (!e.lhs->is_value()) return Expr::not_op(reduce_once(*e.lhs, env, oracle));
      return as_expr(combine(e, as_value(*e.lhs), nullptr));
    case Expr::Kind::Arith:
    case Expr::Kind::Cmp:
    case Expr::Kind::Or: {
      auto rebuild = [&](ExprPtr a, ExprPtr b) {
        if (e.kind == Expr::Kind::Arith) return Expr::arith_op(e.arith, std::move(a), std::move(b));
        if (e.kind == Expr::Kind::Cmp) return Expr::cmp_op(e.cmp, std::move(a), std::move(b));
        return Expr::or_op(std::move(a), std::move(b));
      };
      if (!e.lhs->is_value()) return rebuild(reduce_once(*e.lhs, env, oracle), e.rhs);
      if (!e.rhs->is_value()) return rebuild(e.lhs, reduce_once(*e.rhs, env, oracle));
      Value b = as_value(*e.rhs);
      return as_expr(combine(e, as_value(*e.lhs), &b));
    }
    default: throw Stuck{StuckReason::IllTyped};
  }
}

void bump(const Stmt& s, Env& env) {
  if (!s.counter.is_bot()) ++env.counters[s.counter.name];
}

StmtPtr aux_skip() { return Stmt::skip(); }

StmtPtr step_stmt(const StmtPtr& sp, Env& env, NondetOracle& oracle) {
  const Stmt& s = *sp;
  switch (s.kind) {
    case Stmt::Kind::Skip: throw Stuck{StuckReason::IllTyped};
    case Stmt::Kind::Assign: {
      bump(s, env);
      Value v = eval_full(*s.expr, env, oracle);
      lookup_mut(env, s.target) = std::move(v);
      return aux_skip();
    }
    case Stmt::Kind::Next: {
      bump(s, env);
      Value& it = lookup_mut(env, s.source);
      expect_kind(it, Value::Kind::Iter);
      const Value& list = expect_kind(lookup(env, it.target), Value::Kind::List);
      if (it.num < 0 || it.num >= static_cast<std::int64_t>(list.elems.size()))
        throw Stuck{StuckReason::IteratorExhausted};
      Value elem = list.elems[static_cast<std::size_t>(it.num)];
      ++it.num;
      lookup_mut(env, s.target) = std::move(elem);
      return aux_skip();
    }
    case Stmt::Kind::Add: {
      bump(s, env);
      Value elem = lookup(env, s.source);
      Value& list = lookup_mut(env, s.target);
      expect_kind(list, Value::Kind::List);
      list.elems.push_back(std::move(elem));
      return aux_skip();
    }
    case Stmt::Kind::Remove: {
      bump(s, env);
      Value& list = lookup_mut(env, s.target);
      expect_kind(list, Value::Kind::List);
      if (list.elems.empty()) throw Stuck{StuckReason::RemoveEmpty};
      list.elems.pop_back();
      return aux_skip();
    }
    case Stmt::Kind::If: {
      bump(s, env);
      if (s.expr->kind == Expr::Kind::BoolLit) return s.expr->bool_value ? s.then_branch : s.else_branch;
      return Stmt::if_else(reduce_once(*s.expr, env, oracle), s.then_branch, s.else_branch);
    }
    case Stmt::Kind::While: {
      bump(s, env);
      return Stmt::if_else(s.expr, Stmt::block({s.then_branch, Stmt::relabel(s, CounterId::bot())}), aux_skip());
    }
    case Stmt::Kind::Block: {
      bump(s, env);
      const StmtPtr& first = s.body.front();
      if (first->kind == Stmt::Kind::Skip) {
        bump(*first, env);
        if (s.body.size() == 1) return aux_skip();
        return Stmt::block(std::vector<StmtPtr>(s.body.begin() + 1, s.body.end()));
      }
      std::vector<StmtPtr> rest = s.body;
      rest.front() = step_stmt(first, env, oracle);
      return Stmt::block(std::move(rest));
    }
  }
  throw Stuck{StuckReason::IllTyped};
}

}  // namespace

Value eval_expr(const Expr& e, const Env& env, NondetOracle& oracle) {
  try {
    return eval_full(e, env, oracle);
  } catch (const Stuck&) {
    throw InterpError(InterpError::Kind::BaseTypeMismatch, "ill-typed expression " + to_string(e));
  }
}

ExprPtr reduce_expr(const Expr& e, const Env& env, NondetOracle& oracle) {
  try {
    return reduce_once(e, env, oracle);
  } catch (const Stuck&) {
    throw InterpError(InterpError::Kind::BaseTypeMismatch, "ill-typed expression " + to_string(e));
  }
}

Env init_env(const Method& m, const Inputs& inputs, NondetOracle& oracle) {
  Env env;
  for (const auto& [name, value] : inputs) {
    const VarDecl* d = m.find(name);
    if (!d || !d->is_input) throw InterpError(InterpError::Kind::UnknownInput, "'" + name + "' is not an input");
  }
  for (const VarDecl& d : m.inputs) {
    auto it = inputs.find(d.name);
    if (it == inputs.end()) throw InterpError(InterpError::Kind::MissingInput, "missing input '" + d.name + "'");
    if (!conforms(it->second, d.type.base))
      throw InterpError(InterpError::Kind::BaseTypeMismatch,
                        "input '" + d.name + "' is not a " + d.type.base.str() + ": " + it->second.str());
    env.vars[d.name] = it->second;
  }
  for (const auto& c : m.counters()) env.counters[c.name] = 0;
  for (const VarDecl& d : m.locals) {
    Value v;
    try {
      v = eval_full(*d.init, env, oracle);
    } catch (const Stuck&) {
      throw InterpError(InterpError::Kind::BaseTypeMismatch, "initializer of '" + d.name + "' is ill-typed");
    }
    if (!conforms(v, d.type.base))
      throw InterpError(InterpError::Kind::BaseTypeMismatch,
                        "initializer of '" + d.name + "' is not a " + d.type.base.str());
    env.vars[d.name] = std::move(v);
  }
  for (const auto& [name, v] : env.vars) {
    if (v.kind == Value::Kind::Iter) {
      auto t = env.vars.find(v.target);
      if (t == env.vars.end() || t->second.kind != Value::Kind::List)
        throw InterpError(InterpError::Kind::BaseTypeMismatch, "iterator '" + name + "' targets no list");
    }
  }
  return env;
}

Env init_env(const Method& m, const Inputs& inputs) {
  NondetOracle none = NondetOracle::script("");
  return init_env(m, inputs, none);
}

StepResult step(Config& cfg, NondetOracle& oracle) {
  if (cfg.stmt->kind == Stmt::Kind::Skip) return {StepResult::Kind::Done};
  Env env = cfg.env;
  try {
    StmtPtr next = step_stmt(cfg.stmt, env, oracle);
    cfg.env = std::move(env);
    cfg.stmt = std::move(next);
    return {StepResult::Kind::Stepped};
  } catch (const Stuck& s) {
    return {StepResult::Kind::Stuck, s.reason};
  }
}

Trace run(const Method& m, const Inputs& inputs, NondetOracle& oracle, std::size_t fuel) {
  Trace trace;
  Config cfg{init_env(m, inputs, oracle), m.body};
  trace.envs.push_back(cfg.env);
  for (std::size_t used = 0;; ++used) {
    if (cfg.stmt->kind == Stmt::Kind::Skip) {
      trace.status = RunStatus::Done;
      return trace;
    }
    if (used == fuel) {
      trace.status = RunStatus::FuelExhausted;
      return trace;
    }
    StepResult r = step(cfg, oracle);
    if (r.kind == StepResult::Kind::Stuck) {
      trace.status = RunStatus::Stuck;
      trace.reason = r.reason;
      return trace;
    }
    trace.envs.push_back(cfg.env);
  }
}

}  // namespace boundck
