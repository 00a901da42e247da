#include "boundck/typecheck.hpp"

namespace boundck {
namespace {

const std::string& renamed(const std::string& x, const Substitution& s) {
  auto it = s.rename.find(x);
  return it == s.rename.end() ? x : it->second;
}

template <typename Map>
const typename Map::mapped_type* find(const Map& m, const std::string& key) {
  auto it = m.find(key);
  return it == m.end() ? nullptr : &it->second;
}

}  // namespace

RefExprPtr substitute(const RefExpr& e, const Substitution& s) {
  switch (e.kind) {
    case RefExpr::Kind::IntLit: return std::make_shared<const RefExpr>(e);
    case RefExpr::Kind::IntVar:
      if (e.var.empty()) return RefExpr::self_int();
      if (auto* r = find(s.int_var, e.var)) return *r;
      return RefExpr::int_var(renamed(e.var, s));
    case RefExpr::Kind::Len:
      if (e.var.empty()) return RefExpr::len("");
      if (auto* r = find(s.len, e.var)) return *r;
      return RefExpr::len(renamed(e.var, s));
    case RefExpr::Kind::Idx:
      if (e.var.empty()) return RefExpr::idx("");
      if (auto* r = find(s.idx, e.var)) return *r;
      return RefExpr::idx(renamed(e.var, s));
    case RefExpr::Kind::Counter:
      if (auto* r = find(s.counter, e.var)) return *r;
      return RefExpr::counter(e.var);
    case RefExpr::Kind::Add: return RefExpr::add(substitute(*e.lhs, s), substitute(*e.rhs, s));
    case RefExpr::Kind::Sub: return RefExpr::sub(substitute(*e.lhs, s), substitute(*e.rhs, s));
    case RefExpr::Kind::Scale: return RefExpr::scale(e.value, substitute(*e.lhs, s));
  }
  return std::make_shared<const RefExpr>(e);
}

RefinementPtr substitute(const Refinement& r, const Substitution& s) {
  switch (r.kind) {
    case Refinement::Kind::BoolLit: return std::make_shared<const Refinement>(r);
    case Refinement::Kind::BoolVar:
      if (r.var.empty()) return Refinement::bool_var("");
      if (auto* b = find(s.bool_var, r.var)) return *b;
      return Refinement::bool_var(renamed(r.var, s));
    case Refinement::Kind::IterOf:
      if (!r.subject.empty()) {
        if (auto* y = find(s.retarget, r.subject)) return Refinement::lit(r.var == *y);
        return Refinement::iter_of(renamed(r.var, s), renamed(r.subject, s));
      }
      return Refinement::iter_of(renamed(r.var, s));
    case Refinement::Kind::Cmp: return Refinement::cmp(r.op, substitute(*r.lhs, s), substitute(*r.rhs, s));
    case Refinement::Kind::Or: return Refinement::lor(substitute(*r.left, s), substitute(*r.right, s));
    case Refinement::Kind::Not: return Refinement::lnot(substitute(*r.left, s));
  }
  return std::make_shared<const Refinement>(r);
}

RefinementType substitute(const RefinementType& t, const Substitution& s) {
  return RefinementType{t.base, substitute(*t.refinement, s)};
}

RefinementPtr instantiate_self(const Refinement& r, const std::string& x) {
  switch (r.kind) {
    case Refinement::Kind::BoolVar: return Refinement::bool_var(r.var.empty() ? x : r.var);
    case Refinement::Kind::IterOf: return Refinement::iter_of(r.var, r.subject.empty() ? x : r.subject);
    case Refinement::Kind::Cmp: {
      auto inst = [&](const RefExpr& e, auto&& self) -> RefExprPtr {
        switch (e.kind) {
          case RefExpr::Kind::IntVar: return RefExpr::int_var(e.var.empty() ? x : e.var);
          case RefExpr::Kind::Len: return RefExpr::len(e.var.empty() ? x : e.var);
          case RefExpr::Kind::Idx: return RefExpr::idx(e.var.empty() ? x : e.var);
          case RefExpr::Kind::Add: return RefExpr::add(self(*e.lhs, self), self(*e.rhs, self));
          case RefExpr::Kind::Sub: return RefExpr::sub(self(*e.lhs, self), self(*e.rhs, self));
          case RefExpr::Kind::Scale: return RefExpr::scale(e.value, self(*e.lhs, self));
          default: return std::make_shared<const RefExpr>(e);
        }
      };
      return Refinement::cmp(r.op, inst(*r.lhs, inst), inst(*r.rhs, inst));
    }
    case Refinement::Kind::Or: return Refinement::lor(instantiate_self(*r.left, x), instantiate_self(*r.right, x));
    case Refinement::Kind::Not: return Refinement::lnot(instantiate_self(*r.left, x));
    default: return std::make_shared<const Refinement>(r);
  }
}

}  // namespace boundck
