#include <optional>

#include "boundck/typecheck.hpp"

namespace boundck {
namespace {

class BaseChecker {
 public:
  explicit BaseChecker(const Method& m) : m_(m) {}

  std::vector<BaseTypeError> run() {
    for (const VarDecl& d : m_.locals) {
      std::string node = "let " + d.name + " = " + to_string(*d.init);
      check_assign(d.name, *d.init, node, d.loc, "BaseT-Decl");
    }
    check(*m_.body);
    return std::move(errors_);
  }

 private:
  std::optional<BaseType> type_of_var(const std::string& x) const {
    const VarDecl* d = m_.find(x);
    if (!d) return std::nullopt;
    return d->type.base;
  }

  void error(std::string rule, std::string node, std::string msg, SourceLoc loc) {
    errors_.push_back({std::move(rule), std::move(node), std::move(msg), loc});
  }

  // Type of a scalar or list/iterator expression; reports mismatches inside it.
  std::optional<BaseType> infer(const Expr& e, const std::string& node, SourceLoc loc) {
    auto want = [&](const Expr& sub, const BaseType& t, const char* rule) {
      auto got = infer(sub, node, loc);
      if (got && !(*got == t)) error(rule, node, "expected " + t.str() + " operand, found " + got->str(), loc);
    };
    switch (e.kind) {
      case Expr::Kind::Var:
      case Expr::Kind::InputVar: {
        auto t = type_of_var(e.name);
        if (!t) error("BaseT-Var", node, "unknown variable '" + e.name + "'", loc);
        return t;
      }
      case Expr::Kind::IntLit: return BaseType::int_type();
      case Expr::Kind::BoolLit:
      case Expr::Kind::Nondet: return BaseType::bool_type();
      case Expr::Kind::IteratorOf: {
        auto t = type_of_var(e.name);
        if (!t || !t->is_list()) {
          error("BaseT-Iter", node, "'" + e.name + "' is not a list", loc);
          return std::nullopt;
        }
        return BaseType::iterator_of(t->element());
      }
      case Expr::Kind::NewList: return BaseType::list_of(*e.elem);
      case Expr::Kind::Arith:
        want(*e.lhs, BaseType::int_type(), "BaseT-AssignArith");
        want(*e.rhs, BaseType::int_type(), "BaseT-AssignArith");
        return BaseType::int_type();
      case Expr::Kind::Cmp: {
        auto a = infer(*e.lhs, node, loc);
        auto b = infer(*e.rhs, node, loc);
        bool bool_eq = a && b && a->is_bool() && b->is_bool() && (e.cmp == CmpOp::Eq || e.cmp == CmpOp::Ne);
        if (!bool_eq && ((a && !a->is_int()) || (b && !b->is_int())))
          error("BaseT-AssignComp", node, "comparison operands must be int", loc);
        return BaseType::bool_type();
      }
      case Expr::Kind::Or:
        want(*e.lhs, BaseType::bool_type(), "BaseT-AssignOr");
        want(*e.rhs, BaseType::bool_type(), "BaseT-AssignOr");
        return BaseType::bool_type();
      case Expr::Kind::Not:
        want(*e.lhs, BaseType::bool_type(), "BaseT-AssignNeg");
        return BaseType::bool_type();
    }
    return std::nullopt;
  }

  void check_assign(const std::string& x, const Expr& e, const std::string& node, SourceLoc loc, const char* rule) {
    auto tx = type_of_var(x);
    if (!tx) {
      error(rule, node, "unknown variable '" + x + "'", loc);
      return;
    }
    auto te = infer(e, node, loc);
    if (!te) return;
    if (tx->is_list() && e.kind != Expr::Kind::Var && e.kind != Expr::Kind::InputVar &&
        e.kind != Expr::Kind::NewList) {
      error("BaseT-AssignList", node, "a list can only be assigned a list variable or a new list", loc);
      return;
    }
    if (tx->is_iterator() && e.kind != Expr::Kind::Var && e.kind != Expr::Kind::InputVar &&
        e.kind != Expr::Kind::IteratorOf) {
      error("BaseT-AssignIter", node, "an iterator can only be assigned an iterator variable or y.iter()", loc);
      return;
    }
    if (!(*tx == *te)) error(rule, node, "cannot assign " + te->str() + " to '" + x + "' of type " + tx->str(), loc);
  }

  void check_cond(const Expr& e, const std::string& node, SourceLoc loc, const char* rule) {
    auto t = infer(e, node, loc);
    if (t && !t->is_bool()) error(rule, node, "condition must be bool, found " + t->str(), loc);
  }

  void check_local(const std::string& x, const std::string& node, SourceLoc loc) {
    const VarDecl* d = m_.find(x);
    if (d && d->is_input) error("BaseT-Input", node, "input '" + x + "' cannot be modified", loc);
  }

  void check(const Stmt& s) {
    std::string node = s.is_basic() ? to_string(s) : std::string();
    switch (s.kind) {
      case Stmt::Kind::Assign:
        check_local(s.target, node, s.loc);
        check_assign(s.target, *s.expr, node, s.loc, "BaseT-Assign");
        break;
      case Stmt::Kind::Next: {
        check_local(s.target, node, s.loc);
        auto tz = type_of_var(s.source);
        auto tx = type_of_var(s.target);
        if (!tz || !tz->is_iterator()) {
          error("BaseT-Next", node, "'" + s.source + "' is not an iterator", s.loc);
        } else if (!tx || !(*tx == tz->element())) {
          error("BaseT-Next", node, "'" + s.target + "' does not have the element type " + tz->element().str(), s.loc);
        }
        if (s.target == s.source) error("BaseT-Next", node, "an iterator cannot receive its own element", s.loc);
        break;
      }
      case Stmt::Kind::Add: {
        check_local(s.target, node, s.loc);
        auto ty = type_of_var(s.target);
        auto tx = type_of_var(s.source);
        if (!ty || !ty->is_list()) {
          error("BaseT-Add", node, "'" + s.target + "' is not a list", s.loc);
        } else if (!tx || !(*tx == ty->element())) {
          error("BaseT-Add", node, "'" + s.source + "' does not have the element type " + ty->element().str(), s.loc);
        }
        break;
      }
      case Stmt::Kind::Remove: {
        check_local(s.target, node, s.loc);
        auto ty = type_of_var(s.target);
        if (!ty || !ty->is_list()) error("BaseT-Remove", node, "'" + s.target + "' is not a list", s.loc);
        break;
      }
      case Stmt::Kind::Skip: break;
      case Stmt::Kind::Block:
        if (s.body.empty()) error("BaseT-Block", "{}", "empty block", s.loc);
        for (const auto& c : s.body) check(*c);
        break;
      case Stmt::Kind::If:
        check_cond(*s.expr, "if (" + to_string(*s.expr) + ")", s.loc, "BaseT-If");
        check(*s.then_branch);
        check(*s.else_branch);
        break;
      case Stmt::Kind::While:
        check_cond(*s.expr, "while (" + to_string(*s.expr) + ")", s.loc, "BaseT-While");
        check(*s.then_branch);
        break;
    }
  }

  const Method& m_;
  std::vector<BaseTypeError> errors_;
};

}  // namespace

std::vector<BaseTypeError> base_typecheck(const Method& m) { return BaseChecker(m).run(); }

}  // namespace boundck
