#include "boundck/syntax.hpp"

namespace boundck {
namespace {

std::string wrap(std::string s, bool parens) { return parens ? "(" + s + ")" : s; }

// Refinement expression levels: 1 sum, 2 term, 3 primary.
std::string print(const RefExpr& e, int min_level) {
  switch (e.kind) {
    case RefExpr::Kind::IntLit: return std::to_string(e.value);
    case RefExpr::Kind::IntVar: return e.var.empty() ? "self" : e.var;
    case RefExpr::Kind::Len: return "len(" + (e.var.empty() ? std::string("self") : e.var) + ")";
    case RefExpr::Kind::Idx: return "idx(" + (e.var.empty() ? std::string("self") : e.var) + ")";
    case RefExpr::Kind::Counter: return e.var.front() == '@' ? "c[" + e.var + "]" : e.var;
    case RefExpr::Kind::Add:
    case RefExpr::Kind::Sub:
      return wrap(print(*e.lhs, 1) + (e.kind == RefExpr::Kind::Add ? " + " : " - ") + print(*e.rhs, 2),
                  min_level > 1);
    case RefExpr::Kind::Scale:
      return wrap(std::to_string(e.value) + " * " + print(*e.lhs, 2), min_level > 2);
  }
  return "?";
}

bool is_and(const Refinement& r) {
  return r.kind == Refinement::Kind::Not && r.left->kind == Refinement::Kind::Or &&
         r.left->left->kind == Refinement::Kind::Not && r.left->right->kind == Refinement::Kind::Not;
}

// Refinement levels: 1 or, 2 and, 3 not, 4 atom.
std::string print(const Refinement& r, int min_level) {
  switch (r.kind) {
    case Refinement::Kind::BoolLit: return r.value ? "true" : "false";
    case Refinement::Kind::BoolVar: return r.var.empty() ? "self" : r.var;
    case Refinement::Kind::IterOf:
      return r.subject.empty() ? "iterOf(" + r.var + ")" : "iterOf[" + r.subject + "](" + r.var + ")";
    case Refinement::Kind::Cmp:
      return print(*r.lhs, 1) + " " + std::string(to_string(r.op)) + " " + print(*r.rhs, 1);
    case Refinement::Kind::Or:
      return wrap(print(*r.left, 1) + " or " + print(*r.right, 2), min_level > 1);
    case Refinement::Kind::Not:
      if (is_and(r))
        return wrap(print(*r.left->left->left, 2) + " and " + print(*r.left->right->left, 3), min_level > 2);
      return wrap("not " + print(*r.left, 3), min_level > 3);
  }
  return "?";
}

std::string_view arith_text(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return " + ";
    case ArithOp::Sub: return " - ";
    case ArithOp::Mul: return " * ";
  }
  return " ? ";
}

// Program expression levels: 1 or, 2 not, 3 cmp, 4 sum, 5 mul, 6 primary.
std::string print(const Expr& e, int min_level) {
  switch (e.kind) {
    case Expr::Kind::Var:
    case Expr::Kind::InputVar: return e.name;
    case Expr::Kind::IntLit: return std::to_string(e.int_value);
    case Expr::Kind::BoolLit: return e.bool_value ? "true" : "false";
    case Expr::Kind::Nondet: return "*";
    case Expr::Kind::IteratorOf: return e.name + ".iter()";
    case Expr::Kind::NewList: return "new List<" + e.elem->str() + ">";
    case Expr::Kind::Arith:
      if (e.arith == ArithOp::Mul)
        return wrap(print(*e.lhs, 6) + " * " + print(*e.rhs, 5), min_level > 5);
      return wrap(print(*e.lhs, 4) + std::string(arith_text(e.arith)) + print(*e.rhs, 5), min_level > 4);
    case Expr::Kind::Cmp:
      return wrap(print(*e.lhs, 4) + " " + std::string(to_string(e.cmp)) + " " + print(*e.rhs, 4),
                  min_level > 3);
    case Expr::Kind::Or: return wrap(print(*e.lhs, 1) + " or " + print(*e.rhs, 2), min_level > 1);
    case Expr::Kind::Not: return wrap("not " + print(*e.lhs, 2), min_level > 2);
  }
  return "?";
}

std::string pad(int n) { return std::string(static_cast<std::size_t>(n), ' '); }

void print(const Stmt& s, int indent, std::string& out) {
  if (!s.counter.is_bot() && !s.counter.is_auto()) out += s.counter.name + ": ";
  switch (s.kind) {
    case Stmt::Kind::Assign: out += s.target + " = " + print(*s.expr, 1) + ";"; break;
    case Stmt::Kind::Next: out += s.target + " = " + s.source + ".next();"; break;
    case Stmt::Kind::Remove: out += s.target + ".remove();"; break;
    case Stmt::Kind::Add: out += s.target + ".add(" + s.source + ");"; break;
    case Stmt::Kind::Skip: out += "skip;"; break;
    case Stmt::Kind::Block:
      out += "{\n";
      for (const auto& c : s.body) {
        out += pad(indent + 2);
        print(*c, indent + 2, out);
        out += "\n";
      }
      out += pad(indent) + "}";
      break;
    case Stmt::Kind::If:
      out += "if (" + print(*s.expr, 1) + ") ";
      print(*s.then_branch, indent, out);
      out += " else ";
      print(*s.else_branch, indent, out);
      break;
    case Stmt::Kind::While:
      out += "while (" + print(*s.expr, 1) + ") ";
      print(*s.then_branch, indent, out);
      break;
  }
}

}  // namespace

std::string to_string(const RefExpr& e) { return print(e, 1); }
std::string to_string(const Refinement& r) { return print(r, 1); }
std::string to_string(const Expr& e) { return print(e, 1); }

std::string to_string(const Stmt& s, int indent) {
  std::string out;
  print(s, indent, out);
  return out;
}

std::string pretty_print(const Method& m) {
  std::string out = "method " + m.name + "(";
  for (std::size_t i = 0; i < m.inputs.size(); ++i) {
    const VarDecl& d = m.inputs[i];
    if (i) out += ", ";
    out += d.name + ": " + d.type.base.str() + " inv \"" + to_string(*d.type.refinement) + "\"";
  }
  out += ") guarantee \"" + to_string(*m.guarantee) + "\" {\n";
  for (const VarDecl& d : m.locals) {
    out += "  let " + d.name + ": " + d.type.base.str() + " inv \"" + to_string(*d.type.refinement) +
           "\" = " + to_string(*d.init) + ";\n";
  }
  if (m.body->kind == Stmt::Kind::Block) {
    for (const auto& s : m.body->body) out += "  " + to_string(*s, 2) + "\n";
  } else if (m.body->kind != Stmt::Kind::Skip || !m.body->counter.is_auto()) {
    out += "  " + to_string(*m.body, 2) + "\n";
  }
  out += "}\n";
  return out;
}

}  // namespace boundck
