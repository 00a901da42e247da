#include "boundck/interp.hpp"
#include "boundck/typecheck.hpp"

namespace boundck {

std::string_view to_string(Obligation::Kind k) {
  switch (k) {
    case Obligation::Kind::Subtype: return "subtype";
    case Obligation::Kind::Equivalence: return "equivalence";
    case Obligation::Kind::InitConforms: return "init";
  }
  return "?";
}

const std::vector<std::string>& AliasGroups::alias(const std::string& x) const {
  static const std::vector<std::string> empty;
  auto it = class_of.find(x);
  return it == class_of.end() ? empty : classes[it->second];
}

bool AliasGroups::all_singletons() const {
  for (const auto& c : classes)
    if (c.size() > 1) return false;
  return true;
}

TypingContext context_of(const Method& m) {
  TypingContext ctx;
  for (const VarDecl* d : m.declarations()) ctx.emplace_back(d->name, d->type);
  return ctx;
}

namespace {

RefExprPtr plus(RefExprPtr e, std::int64_t k) {
  return k >= 0 ? RefExpr::add(std::move(e), RefExpr::lit(k)) : RefExpr::sub(std::move(e), RefExpr::lit(-k));
}

std::string counter_label(const CounterId& c) { return c.is_bot() ? "init" : c.name; }

Obligation make_obligation(Obligation::Kind kind, const std::string& rule, const CounterId& c, const std::string& var,
                           RefinementPtr premise, RefinementPtr goal, const std::vector<RefinementPtr>& extra,
                           Encoder& enc) {
  Obligation ob;
  ob.kind = kind;
  ob.rule = rule;
  ob.counter = c;
  ob.var = var;
  ob.id = enc.method().name + "." + rule + "." + counter_label(c) + "." + var;
  std::vector<smt::FormulaPtr> hyps = {enc.compile(*premise)};
  for (const auto& e : extra) hyps.push_back(enc.compile(*e));
  ob.conclusion = enc.compile(*goal);
  smt::FormulaPtr body = smt::Formula::conj(hyps);
  smt::FormulaPtr both = smt::Formula::conj({body, ob.conclusion});
  ob.hypothesis = smt::Formula::conj({enc.standing_for(*both), body});
  if (structurally_equal(*premise, *goal)) {
    ob.decided = true;
    ob.note = "conclusion identical to hypothesis";
  }
  ob.premise = std::move(premise);
  ob.goal = std::move(goal);
  return ob;
}

// Equalities len(a) == len(b) tying an alias class together.
std::vector<RefinementPtr> class_equalities(const std::vector<std::string>& cls) {
  std::vector<RefinementPtr> out;
  for (std::size_t i = 1; i < cls.size(); ++i)
    out.push_back(Refinement::cmp(CmpOp::Eq, RefExpr::len(cls[0]), RefExpr::len(cls[i])));
  return out;
}

// Receiver classes: the alias class under `groups`, else just the variable.
std::vector<std::string> receivers(const std::string& y, const AliasGroups* groups) {
  if (groups) {
    const auto& cls = groups->alias(y);
    if (!cls.empty()) return cls;
  }
  return {y};
}

std::optional<RefExprPtr> int_ref(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Var:
    case Expr::Kind::InputVar: return RefExpr::int_var(e.name);
    case Expr::Kind::IntLit: return RefExpr::lit(e.int_value);
    case Expr::Kind::Arith: {
      auto b = int_ref(*e.rhs);
      if (!b) return std::nullopt;
      if (e.arith == ArithOp::Mul) {
        if (e.lhs->kind != Expr::Kind::IntLit) return std::nullopt;
        return RefExpr::scale(e.lhs->int_value, *b);
      }
      auto a = int_ref(*e.lhs);
      if (!a) return std::nullopt;
      return e.arith == ArithOp::Add ? RefExpr::add(*a, *b) : RefExpr::sub(*a, *b);
    }
    default: return std::nullopt;
  }
}

RefinementPtr bool_ref(const Expr& e, Encoder& enc) {
  switch (e.kind) {
    case Expr::Kind::Var:
    case Expr::Kind::InputVar: return Refinement::bool_var(e.name);
    case Expr::Kind::BoolLit: return Refinement::lit(e.bool_value);
    case Expr::Kind::Nondet: return Refinement::bool_var(enc.fresh_var(BaseType::bool_type()));
    case Expr::Kind::Or: return Refinement::lor(bool_ref(*e.lhs, enc), bool_ref(*e.rhs, enc));
    case Expr::Kind::Not: return Refinement::lnot(bool_ref(*e.lhs, enc));
    case Expr::Kind::Cmp: {
      auto a = int_ref(*e.lhs);
      auto b = int_ref(*e.rhs);
      if (a && b) return Refinement::cmp(e.cmp, *a, *b);
      RefinementPtr p = bool_ref(*e.lhs, enc), q = bool_ref(*e.rhs, enc);
      RefinementPtr same = Refinement::lor(Refinement::land(p, q), Refinement::land(Refinement::lnot(p), Refinement::lnot(q)));
      return e.cmp == CmpOp::Eq ? same : Refinement::lnot(same);
    }
    default: return Refinement::bool_var(enc.fresh_var(BaseType::bool_type()));
  }
}

class RuleChecker {
 public:
  RuleChecker(const TypingContext& ctx, Encoder& enc, const AliasGroups* groups)
      : ctx_(ctx), enc_(enc), groups_(groups) {}

  void check(const Stmt& s) {
    const CounterId& c = s.counter;
    switch (s.kind) {
      case Stmt::Kind::Add:
      case Stmt::Kind::Remove: {
        const char* rule = s.kind == Stmt::Kind::Add ? "T-Add" : "T-Remove";
        std::int64_t delta = s.kind == Stmt::Kind::Add ? 1 : -1;
        Substitution sub = bump(c);
        auto cls = receivers(s.target, groups_);
        for (const auto& y : cls) sub.len[y] = plus(RefExpr::len(y), delta);
        all_gamma(rule, c, sub, class_equalities(cls));
        break;
      }
      case Stmt::Kind::Assign: check_assign(s); break;
      case Stmt::Kind::Next: {
        Substitution sub = bump(c);
        sub.idx[s.source] = plus(RefExpr::idx(s.source), 1);
        all_gamma("T-Next", c, sub, {});
        for (const auto& [w, t] : ctx_) {
          Obligation ob = check_equivalence_t_next(*instantiate_self(*t.refinement, w), s.target, enc_);
          ob.counter = c;
          ob.var = w;
          ob.id = enc_.method().name + "." + ob.rule + "." + counter_label(c) + "." + w;
          out_.push_back(std::move(ob));
        }
        break;
      }
      case Stmt::Kind::Skip: {
        Substitution sub = bump(c);
        for (const auto& [w, t] : ctx_) {
          if (!free_symbols(*t.refinement).counters.count(c.name)) continue;
          RefinementPtr r = instantiate_self(*t.refinement, w);
          out_.push_back(make_obligation(Obligation::Kind::Subtype, "T-Skip", c, w, r, substitute(*r, sub), {}, enc_));
        }
        break;
      }
      case Stmt::Kind::Block:
        all_gamma("T-Counter", c, bump(c), {});
        for (const auto& child : s.body) check(*child);
        break;
      case Stmt::Kind::If:
        all_gamma("T-Counter", c, bump(c), {});
        check(*s.then_branch);
        check(*s.else_branch);
        break;
      case Stmt::Kind::While:
        all_gamma("T-Counter", c, bump(c), {});
        check(*s.then_branch);
        break;
    }
  }

  std::vector<Obligation> take() { return std::move(out_); }

 private:
  static Substitution bump(const CounterId& c) {
    Substitution sub;
    if (!c.is_bot()) sub.counter[c.name] = plus(RefExpr::counter(c.name), 1);
    return sub;
  }

  void all_gamma(const std::string& rule, const CounterId& c, const Substitution& sub,
                 const std::vector<RefinementPtr>& extra) {
    for (const auto& [w, t] : ctx_) {
      RefinementPtr r = instantiate_self(*t.refinement, w);
      out_.push_back(make_obligation(Obligation::Kind::Subtype, rule, c, w, r, substitute(*r, sub), extra, enc_));
    }
  }

  const BaseType& type_of(const std::string& x) const {
    const BaseType* t = enc_.type_of(x);
    if (!t) throw std::logic_error("unknown variable " + x);
    return *t;
  }

  void check_assign(const Stmt& s) {
    const CounterId& c = s.counter;
    const std::string& x = s.target;
    const Expr& e = *s.expr;
    const BaseType& tx = type_of(x);
    Substitution sub = bump(c);
    if (tx.is_list()) {
      auto cls = receivers(x, groups_);
      const char* rule;
      if (e.kind == Expr::Kind::NewList) {
        rule = "T-AssignNewList";
        for (const auto& y : cls) sub.len[y] = RefExpr::lit(0);
      } else {
        rule = "T-AssignList";
        for (const auto& y : cls) sub.len[y] = RefExpr::len(e.name);
      }
      all_gamma(rule, c, sub, class_equalities(cls));
      return;
    }
    if (tx.is_iterator()) {
      if (e.kind == Expr::Kind::IteratorOf) {
        sub.idx[x] = RefExpr::lit(0);
        all_gamma("T-AssignIter", c, sub, {});
        for (const auto& [w, t] : ctx_) {
          if (w != x) continue;
          Substitution own = sub;
          own.retarget[x] = e.name;
          RefinementPtr r = instantiate_self(*t.refinement, w);
          out_.push_back(make_obligation(Obligation::Kind::Subtype, "T-AssignIterTarget", c, w, r,
                                         substitute(*r, own), {}, enc_));
        }
        return;
      }
      sub.rename[x] = e.name;
      all_gamma("T-Assign", c, sub, {});
      return;
    }
    if (tx.is_int()) {
      auto v = int_ref(e);
      if (v) {
        sub.int_var[x] = *v;
      } else {
        sub.rename[x] = enc_.fresh_var(tx);
      }
    } else {
      sub.bool_var[x] = bool_ref(e, enc_);
    }
    all_gamma("T-Assign", c, sub, {});
  }

  const TypingContext& ctx_;
  Encoder& enc_;
  const AliasGroups* groups_;
  std::vector<Obligation> out_;
};

}  // namespace

std::vector<Obligation> check_stmt(const TypingContext& ctx, const Stmt& s, Encoder& enc, const AliasGroups* groups) {
  RuleChecker rc(ctx, enc, groups);
  rc.check(s);
  return rc.take();
}

Obligation check_equivalence_t_next(const Refinement& r, const std::string& x, Encoder& enc) {
  const BaseType* t = enc.type_of(x);
  if (!t) throw std::logic_error("unknown variable " + x);
  Substitution sub;
  sub.rename[x] = enc.fresh_var(*t);
  RefinementPtr premise = substitute(r, sub);
  RefinementPtr goal = std::make_shared<const Refinement>(r);
  return make_obligation(Obligation::Kind::Equivalence, "T-NextExists", CounterId::bot(), x, premise, goal, {}, enc);
}

namespace {

// Equations describing a local's initial value, for the symbolic fallback.
std::vector<RefinementPtr> init_equations(const VarDecl& d, Encoder& enc) {
  const Expr& e = *d.init;
  const BaseType& t = d.type.base;
  std::vector<RefinementPtr> out;
  if (t.is_list()) {
    if (e.kind == Expr::Kind::NewList) out.push_back(Refinement::cmp(CmpOp::Eq, RefExpr::len(d.name), RefExpr::lit(0)));
    else out.push_back(Refinement::cmp(CmpOp::Eq, RefExpr::len(d.name), RefExpr::len(e.name)));
  } else if (t.is_iterator()) {
    if (e.kind == Expr::Kind::IteratorOf) {
      out.push_back(Refinement::cmp(CmpOp::Eq, RefExpr::idx(d.name), RefExpr::lit(0)));
      out.push_back(Refinement::iter_of(e.name, d.name));
    } else {
      out.push_back(Refinement::cmp(CmpOp::Eq, RefExpr::idx(d.name), RefExpr::idx(e.name)));
    }
  } else if (t.is_int()) {
    if (auto v = int_ref(e)) out.push_back(Refinement::cmp(CmpOp::Eq, RefExpr::int_var(d.name), *v));
  } else if (e.kind != Expr::Kind::Nondet) {
    RefinementPtr b = bool_ref(e, enc);
    RefinementPtr x = Refinement::bool_var(d.name);
    out.push_back(Refinement::lor(Refinement::land(x, b), Refinement::land(Refinement::lnot(x), Refinement::lnot(b))));
  }
  return out;
}

}  // namespace

std::vector<Obligation> check_decls(const Method& m, Encoder& enc) {
  std::vector<Obligation> out;
  // Locals-only initial state. Locals whose value depends on inputs or `*`
  // stay unbound, so refinements mentioning them fall back to a symbolic check.
  Env env;
  for (const auto& c : m.counters()) env.counters[c.name] = 0;
  std::set<std::string> unknown;
  NondetOracle none = NondetOracle::script("");
  auto depends = [&](const Expr& e, auto&& self) -> bool {
    switch (e.kind) {
      case Expr::Kind::InputVar:
      case Expr::Kind::Nondet: return true;
      case Expr::Kind::Var: return unknown.count(e.name) > 0;
      default: return (e.lhs && self(*e.lhs, self)) || (e.rhs && self(*e.rhs, self));
    }
  };
  for (const VarDecl& d : m.locals) {
    if (depends(*d.init, depends)) {
      unknown.insert(d.name);
      continue;
    }
    try {
      env.vars[d.name] = eval_expr(*d.init, env, none);
    } catch (const InterpError&) {
      unknown.insert(d.name);
    }
  }

  std::vector<RefinementPtr> eqs;
  bool eqs_built = false;
  for (const VarDecl& d : m.locals) {
    RefinementPtr r = instantiate_self(*d.type.refinement, d.name);
    bool concrete = !unknown.count(d.name);
    if (concrete) {
      try {
        bool ok = eval_refinement(*r, d.name, env);
        Obligation ob;
        ob.kind = Obligation::Kind::InitConforms;
        ob.rule = "T-Decl";
        ob.var = d.name;
        ob.id = m.name + ".T-Decl.init." + d.name;
        ob.premise = Refinement::lit(true);
        ob.goal = r;
        ob.hypothesis = smt::Formula::truth(true);
        ob.conclusion = smt::Formula::truth(ok);
        ob.decided = ok;
        ob.note = ok ? "initial value conforms" : "initial value violates the refinement";
        out.push_back(std::move(ob));
        continue;
      } catch (const InterpError&) {
        // Mentions an input or an input-dependent local: decide symbolically.
      }
    }
    if (!eqs_built) {
      eqs_built = true;
      for (const VarDecl* in : m.declarations())
        if (in->is_input) eqs.push_back(instantiate_self(*in->type.refinement, in->name));
      for (const auto& c : m.counters())
        eqs.push_back(Refinement::cmp(CmpOp::Eq, RefExpr::counter(c.name), RefExpr::lit(0)));
      for (const VarDecl& l : m.locals) {
        auto more = init_equations(l, enc);
        eqs.insert(eqs.end(), more.begin(), more.end());
      }
    }
    out.push_back(make_obligation(Obligation::Kind::InitConforms, "T-Decl", CounterId::bot(), d.name,
                                  Refinement::lit(true), r, eqs, enc));
  }
  return out;
}

std::vector<Obligation> check_method(const Method& m, Encoder& enc, const AliasGroups* groups) {
  std::vector<Obligation> out = check_decls(m, enc);
  std::vector<Obligation> body = check_stmt(context_of(m), *m.body, enc, groups);
  out.insert(out.end(), std::make_move_iterator(body.begin()), std::make_move_iterator(body.end()));
  return out;
}

}  // namespace boundck
