#include "boundck/alias.hpp"

#include <algorithm>
#include <set>

namespace boundck {

// ---------------------------------------------------------------------------
// Groups
// ---------------------------------------------------------------------------

namespace {

class UnionFind {
 public:
  void add(const std::string& x) { parent_.emplace(x, x); }
  std::string find(const std::string& x) {
    std::string& p = parent_.at(x);
    if (p != x) p = find(p);
    return p;
  }
  void merge(const std::string& a, const std::string& b) { parent_.at(find(a)) = find(b); }

 private:
  std::map<std::string, std::string> parent_;
};

struct Copy {
  std::string target, source;
};

bool is_list_var(const Method& m, const std::string& x) {
  const VarDecl* d = m.find(x);
  return d && d->type.base.is_list();
}

bool is_var(const Expr& e) { return e.kind == Expr::Kind::Var || e.kind == Expr::Kind::InputVar; }

}  // namespace

AliasAnalysis compute_alias_groups(const Method& m) {
  AliasAnalysis out;
  std::vector<std::string> lists;
  for (const VarDecl* d : m.declarations())
    if (d->type.base.is_list()) lists.push_back(d->name);

  std::vector<Copy> copies;
  for (const VarDecl& d : m.locals)
    if (d.type.base.is_list() && is_var(*d.init)) copies.push_back({d.name, d.init->name});
  const auto stmts = m.statements();
  for (const auto& s : stmts)
    if (s->kind == Stmt::Kind::Assign && is_list_var(m, s->target) && is_var(*s->expr))
      copies.push_back({s->target, s->expr->name});

  UnionFind uf;
  for (const auto& x : lists) uf.add(x);
  for (const auto& c : copies) uf.merge(c.target, c.source);

  std::map<std::string, std::size_t> index;
  for (const auto& x : lists) {
    std::string root = uf.find(x);
    auto [it, fresh] = index.emplace(root, out.groups.classes.size());
    if (fresh) out.groups.classes.emplace_back();
    out.groups.classes[it->second].push_back(x);
    out.groups.class_of[x] = it->second;
  }

  auto merged = [&](const std::string& x) { return out.groups.alias(x).size() > 1; };
  for (const auto& s : stmts) {
    bool fresh_list = (s->kind == Stmt::Kind::Assign && s->expr->kind == Expr::Kind::NewList) ||
                      (s->kind == Stmt::Kind::Next && is_list_var(m, s->target));
    if (fresh_list && merged(s->target))
      out.violations.push_back({to_string(*s), "'" + s->target + "' has aliases but receives a fresh list", s->loc});
  }

  // A variable copied from several sources must not link otherwise unrelated lists.
  std::map<std::string, std::set<std::string>> sources;
  for (const auto& c : copies) sources[c.target].insert(c.source);
  for (const auto& [x, srcs] : sources) {
    if (srcs.size() < 2) continue;
    UnionFind without;
    for (const auto& y : lists) without.add(y);
    for (const auto& c : copies)
      if (c.target != x && c.source != x) without.merge(c.target, c.source);
    const std::string first = without.find(*srcs.begin());
    if (std::any_of(srcs.begin(), srcs.end(), [&](const std::string& y) { return without.find(y) != first; })) {
      std::string names;
      for (const auto& y : srcs) names += (names.empty() ? "" : ", ") + y;
      out.violations.push_back({x, "'" + x + "' is copied from unrelated lists " + names, m.find(x)->loc});
    }
  }
  return out;
}

std::vector<Obligation> check_stmt_alias(const TypingContext& ctx, const Stmt& s, Encoder& enc,
                                         const AliasGroups& groups) {
  return check_stmt(ctx, s, enc, &groups);
}

// ---------------------------------------------------------------------------
// Store semantics
// ---------------------------------------------------------------------------

void AliasEnv::collect_garbage() {
  std::set<Address> live;
  for (const auto& [name, s] : vars)
    if (s.kind == Slot::Kind::Ref || s.kind == Slot::Kind::Iter) live.insert(s.addr);
  std::erase_if(store, [&](const auto& kv) { return !live.count(kv.first); });
}

namespace {

struct Stuck {
  StuckReason reason;
};

Slot scalar(const Value& v) {
  Slot s;
  if (v.kind == Value::Kind::Int) {
    s.kind = Slot::Kind::Int;
    s.num = v.num;
  } else if (v.kind == Value::Kind::Bool) {
    s.kind = Slot::Kind::Bool;
    s.flag = v.flag;
  } else {
    throw Stuck{StuckReason::IllTyped};
  }
  return s;
}

Slot ref(Address a) {
  Slot s;
  s.kind = Slot::Kind::Ref;
  s.addr = a;
  return s;
}

Slot iter(std::int64_t pos, Address a) {
  Slot s;
  s.kind = Slot::Kind::Iter;
  s.num = pos;
  s.addr = a;
  return s;
}

Address allocate(AliasEnv& env, std::vector<Value> elems) {
  Address a = env.next_addr++;
  env.store[a] = std::move(elems);
  return a;
}

Slot& slot_of(AliasEnv& env, const std::string& x) {
  auto it = env.vars.find(x);
  if (it == env.vars.end()) throw InterpError(InterpError::Kind::UnboundSymbol, "unbound variable '" + x + "'");
  return it->second;
}

std::vector<Value>& list_at(AliasEnv& env, const Slot& s) {
  if (s.kind != Slot::Kind::Ref && s.kind != Slot::Kind::Iter) throw Stuck{StuckReason::IllTyped};
  auto it = env.store.find(s.addr);
  if (it == env.store.end()) throw Stuck{StuckReason::IllTyped};
  return it->second;
}

// Scalar variables only; enough to evaluate int and bool expressions.
Env scalars(const AliasEnv& env) {
  Env out;
  for (const auto& [name, s] : env.vars) {
    if (s.kind == Slot::Kind::Int) out.vars[name] = Value::integer(s.num);
    else if (s.kind == Slot::Kind::Bool) out.vars[name] = Value::boolean(s.flag);
  }
  return out;
}

Value eval_scalar(const Expr& e, const AliasEnv& env, NondetOracle& oracle) {
  try {
    return eval_expr(e, scalars(env), oracle);
  } catch (const InterpError&) {
    throw Stuck{StuckReason::IllTyped};
  }
}

// Element value to slot; nested lists get their own address.
Slot materialize(AliasEnv& env, const Value& v) {
  if (v.kind == Value::Kind::List) return ref(allocate(env, v.elems));
  if (v.kind == Value::Kind::Iter) return iter(v.num, slot_of(env, v.target).addr);
  return scalar(v);
}

// Slot to element value for storing inside a list.
Value freeze(AliasEnv& env, const Slot& s) {
  switch (s.kind) {
    case Slot::Kind::Int: return Value::integer(s.num);
    case Slot::Kind::Bool: return Value::boolean(s.flag);
    case Slot::Kind::Ref: return Value::list(list_at(env, s));
    case Slot::Kind::Iter:
      for (const auto& [name, t] : env.vars)
        if (t.kind == Slot::Kind::Ref && t.addr == s.addr) return Value::iter(s.num, name);
      return Value::iter(s.num, "");
  }
  throw Stuck{StuckReason::IllTyped};
}

void bump(const Stmt& s, AliasEnv& env) {
  if (!s.counter.is_bot()) ++env.counters[s.counter.name];
}

StmtPtr step_stmt(const StmtPtr& sp, AliasEnv& env, NondetOracle& oracle) {
  const Stmt& s = *sp;
  switch (s.kind) {
    case Stmt::Kind::Skip: throw Stuck{StuckReason::IllTyped};
    case Stmt::Kind::Assign: {
      bump(s, env);
      const Expr& e = *s.expr;
      Slot& x = slot_of(env, s.target);
      if (e.kind == Expr::Kind::NewList) {
        list_at(env, x).clear();
      } else if (e.kind == Expr::Kind::IteratorOf) {
        x = iter(0, slot_of(env, e.name).addr);
      } else if (is_var(e) && slot_of(env, e.name).kind != Slot::Kind::Int &&
                 slot_of(env, e.name).kind != Slot::Kind::Bool) {
        x = slot_of(env, e.name);
      } else {
        x = scalar(eval_scalar(e, env, oracle));
      }
      return Stmt::skip();
    }
    case Stmt::Kind::Next: {
      bump(s, env);
      Slot& it = slot_of(env, s.source);
      if (it.kind != Slot::Kind::Iter) throw Stuck{StuckReason::IllTyped};
      const auto& elems = list_at(env, it);
      if (it.num < 0 || it.num >= static_cast<std::int64_t>(elems.size())) throw Stuck{StuckReason::IteratorExhausted};
      Value elem = elems[static_cast<std::size_t>(it.num)];
      ++it.num;
      Slot v = materialize(env, elem);
      slot_of(env, s.target) = v;
      return Stmt::skip();
    }
    case Stmt::Kind::Add: {
      bump(s, env);
      Value elem = freeze(env, slot_of(env, s.source));
      const Slot& y = slot_of(env, s.target);
      if (y.kind != Slot::Kind::Ref) throw Stuck{StuckReason::IllTyped};
      list_at(env, y).push_back(std::move(elem));
      return Stmt::skip();
    }
    case Stmt::Kind::Remove: {
      bump(s, env);
      const Slot& y = slot_of(env, s.target);
      if (y.kind != Slot::Kind::Ref) throw Stuck{StuckReason::IllTyped};
      auto& elems = list_at(env, y);
      if (elems.empty()) throw Stuck{StuckReason::RemoveEmpty};
      elems.pop_back();
      return Stmt::skip();
    }
    case Stmt::Kind::If: {
      bump(s, env);
      if (s.expr->kind == Expr::Kind::BoolLit) return s.expr->bool_value ? s.then_branch : s.else_branch;
      try {
        return Stmt::if_else(reduce_expr(*s.expr, scalars(env), oracle), s.then_branch, s.else_branch);
      } catch (const InterpError&) {
        throw Stuck{StuckReason::IllTyped};
      }
    }
    case Stmt::Kind::While:
      bump(s, env);
      return Stmt::if_else(s.expr, Stmt::block({s.then_branch, Stmt::relabel(s, CounterId::bot())}), Stmt::skip());
    case Stmt::Kind::Block: {
      bump(s, env);
      const StmtPtr& first = s.body.front();
      if (first->kind == Stmt::Kind::Skip) {
        bump(*first, env);
        if (s.body.size() == 1) return Stmt::skip();
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

AliasEnv init_alias_env(const Method& m, const Inputs& inputs, NondetOracle& oracle) {
  // The name-based initial state fixes every value; only sharing differs.
  Env plain = init_env(m, inputs, oracle);
  AliasEnv env;
  env.counters = plain.counters;
  for (const VarDecl* d : m.declarations()) {
    const Value& v = plain.vars.at(d->name);
    if (v.kind != Value::Kind::List) continue;
    if (!d->is_input && is_var(*d->init)) env.vars[d->name] = env.vars.at(d->init->name);
    else env.vars[d->name] = ref(allocate(env, v.elems));
  }
  for (const VarDecl* d : m.declarations()) {
    const Value& v = plain.vars.at(d->name);
    if (v.kind == Value::Kind::Iter) env.vars[d->name] = iter(v.num, env.vars.at(v.target).addr);
    else if (v.kind != Value::Kind::List) env.vars[d->name] = scalar(v);
  }
  return env;
}

StepResult step_alias(AliasConfig& cfg, NondetOracle& oracle) {
  if (cfg.stmt->kind == Stmt::Kind::Skip) return {StepResult::Kind::Done};
  AliasEnv env = cfg.env;
  try {
    StmtPtr next = step_stmt(cfg.stmt, env, oracle);
    env.collect_garbage();
    cfg.env = std::move(env);
    cfg.stmt = std::move(next);
    return {StepResult::Kind::Stepped};
  } catch (const Stuck& s) {
    return {StepResult::Kind::Stuck, s.reason};
  }
}

AliasTrace run_alias(const Method& m, const Inputs& inputs, NondetOracle& oracle, std::size_t fuel) {
  AliasTrace trace;
  AliasConfig cfg{init_alias_env(m, inputs, oracle), m.body};
  trace.envs.push_back(cfg.env);
  for (std::size_t used = 0;; ++used) {
    if (cfg.stmt->kind == Stmt::Kind::Skip) {
      trace.status = RunStatus::Done;
      return trace;
    }
    if (used == fuel) return trace;
    StepResult r = step_alias(cfg, oracle);
    if (r.kind == StepResult::Kind::Stuck) {
      trace.status = RunStatus::Stuck;
      trace.reason = r.reason;
      return trace;
    }
    trace.envs.push_back(cfg.env);
  }
}

const Slot& AliasView::slot(const std::string& x, Slot::Kind kind) const {
  auto it = env_.vars.find(x);
  if (it == env_.vars.end()) throw InterpError(InterpError::Kind::UnboundSymbol, "unbound variable '" + x + "'");
  if (it->second.kind != kind)
    throw InterpError(InterpError::Kind::BaseTypeMismatch, "variable '" + x + "' has the wrong shape");
  return it->second;
}

std::int64_t AliasView::int_of(const std::string& x) const { return slot(x, Slot::Kind::Int).num; }
bool AliasView::bool_of(const std::string& x) const { return slot(x, Slot::Kind::Bool).flag; }
std::int64_t AliasView::len_of(const std::string& x) const {
  auto it = env_.store.find(slot(x, Slot::Kind::Ref).addr);
  if (it == env_.store.end()) throw InterpError(InterpError::Kind::UnboundSymbol, "dangling list '" + x + "'");
  return static_cast<std::int64_t>(it->second.size());
}
std::int64_t AliasView::idx_of(const std::string& x) const { return slot(x, Slot::Kind::Iter).num; }
bool AliasView::iterates(const std::string& it, const std::string& list) const {
  return slot(it, Slot::Kind::Iter).addr == slot(list, Slot::Kind::Ref).addr;
}
std::int64_t AliasView::counter(const std::string& c) const {
  auto it = env_.counters.find(c);
  if (it == env_.counters.end()) throw InterpError(InterpError::Kind::UnboundSymbol, "unbound counter '" + c + "'");
  return it->second;
}

}  // namespace boundck
