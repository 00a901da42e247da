#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace boundck {

struct SourceLoc {
  int line = 0;
  int column = 0;
};

// ---------------------------------------------------------------------------
// Base types
// ---------------------------------------------------------------------------

class BaseType {
 public:
  enum class Kind { Int, Bool, Iterator, List };

  BaseType() = default;  // int
  static BaseType int_type() { return BaseType(Kind::Int, nullptr); }
  static BaseType bool_type() { return BaseType(Kind::Bool, nullptr); }
  static BaseType iterator_of(const BaseType& elem) {
    return BaseType(Kind::Iterator, std::make_shared<const BaseType>(elem));
  }
  static BaseType list_of(const BaseType& elem) {
    return BaseType(Kind::List, std::make_shared<const BaseType>(elem));
  }

  Kind kind() const { return kind_; }
  bool is_int() const { return kind_ == Kind::Int; }
  bool is_bool() const { return kind_ == Kind::Bool; }
  bool is_list() const { return kind_ == Kind::List; }
  bool is_iterator() const { return kind_ == Kind::Iterator; }
  /// Element type of a List or Iterator. Precondition: is_list() || is_iterator().
  const BaseType& element() const { return *elem_; }

  std::string str() const;
  friend bool operator==(const BaseType& a, const BaseType& b);

 private:
  BaseType(Kind k, std::shared_ptr<const BaseType> e) : kind_(k), elem_(std::move(e)) {}
  Kind kind_ = Kind::Int;
  std::shared_ptr<const BaseType> elem_;
};

// ---------------------------------------------------------------------------
// Counters
// ---------------------------------------------------------------------------

/// Identifies the AST execution counter of a statement node. User labels
/// (`c8`) and automatic labels (`@k`, k = pre-order index) are both plain
/// names; the empty name is the runtime-only discard counter.
struct CounterId {
  std::string name;

  static CounterId bot() { return CounterId{}; }
  bool is_bot() const { return name.empty(); }
  bool is_auto() const { return !name.empty() && name.front() == '@'; }
  friend bool operator==(const CounterId&, const CounterId&) = default;
  friend auto operator<=>(const CounterId&, const CounterId&) = default;
};

// ---------------------------------------------------------------------------
// Refinement language
// ---------------------------------------------------------------------------

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
std::string_view to_string(CmpOp op);
CmpOp negate(CmpOp op);
bool apply(CmpOp op, std::int64_t a, std::int64_t b);

enum class ArithOp { Add, Sub, Mul };

struct RefExpr;
struct Refinement;
using RefExprPtr = std::shared_ptr<const RefExpr>;
using RefinementPtr = std::shared_ptr<const Refinement>;

/// Integer-valued refinement expression. Len/Idx/SelfInt refer to `self`
/// when `var` is empty; after self-instantiation every reference is named.
struct RefExpr {
  enum class Kind { IntLit, IntVar, Len, Idx, Add, Sub, Scale, Counter };

  Kind kind;
  std::int64_t value = 0;    // IntLit literal, Scale factor
  std::string var;           // IntVar/Len/Idx target ("" = self), Counter name
  RefExprPtr lhs, rhs;       // Add/Sub operands; Scale uses lhs

  bool refers_to_self() const {
    return (kind == Kind::IntVar || kind == Kind::Len || kind == Kind::Idx) && var.empty();
  }

  static RefExprPtr lit(std::int64_t n);
  static RefExprPtr self_int();
  static RefExprPtr int_var(std::string x);
  static RefExprPtr len(std::string x);  // "" = self
  static RefExprPtr idx(std::string x);  // "" = self
  static RefExprPtr add(RefExprPtr a, RefExprPtr b);
  static RefExprPtr sub(RefExprPtr a, RefExprPtr b);
  static RefExprPtr scale(std::int64_t k, RefExprPtr a);
  static RefExprPtr counter(std::string c);
};

/// Boolean refinement. IterOf states that `subject` ("" = self) iterates the
/// list variable `var`.
struct Refinement {
  enum class Kind { BoolLit, BoolVar, IterOf, Cmp, Or, Not };

  Kind kind;
  bool value = false;        // BoolLit
  std::string var;           // BoolVar name ("" = self), IterOf target
  std::string subject;       // IterOf subject ("" = self)
  CmpOp op = CmpOp::Eq;
  RefExprPtr lhs, rhs;       // Cmp
  RefinementPtr left, right; // Or uses both, Not uses left

  static RefinementPtr lit(bool b);
  static RefinementPtr bool_var(std::string x);
  static RefinementPtr iter_of(std::string target, std::string subject = {});
  static RefinementPtr cmp(CmpOp op, RefExprPtr a, RefExprPtr b);
  static RefinementPtr lor(RefinementPtr a, RefinementPtr b);
  static RefinementPtr lnot(RefinementPtr a);
  /// Sugar: `a and b` is not(not a or not b).
  static RefinementPtr land(RefinementPtr a, RefinementPtr b);
  /// Sugar: `a => b` is not a or b.
  static RefinementPtr implies(RefinementPtr a, RefinementPtr b);
};

struct RefinementType {
  BaseType base;
  RefinementPtr refinement;
};

bool structurally_equal(const RefExpr& a, const RefExpr& b);
bool structurally_equal(const Refinement& a, const Refinement& b);

// ---------------------------------------------------------------------------
// Program syntax
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Var, InputVar, IntLit, BoolLit, IteratorOf, NewList, Arith, Cmp, Or, Not, Nondet };

  Kind kind;
  std::int64_t int_value = 0;
  bool bool_value = false;
  std::string name;                                  // Var/InputVar/IteratorOf list
  std::optional<BaseType> elem;                      // NewList element type
  ArithOp arith = ArithOp::Add;
  CmpOp cmp = CmpOp::Eq;
  ExprPtr lhs, rhs;                                  // binary; Not uses lhs

  bool is_value() const { return kind == Kind::IntLit || kind == Kind::BoolLit; }

  static ExprPtr var(std::string x, bool input = false);
  static ExprPtr int_lit(std::int64_t n);
  static ExprPtr bool_lit(bool b);
  static ExprPtr iterator_of(std::string y);
  static ExprPtr new_list(BaseType elem);
  static ExprPtr arith_op(ArithOp op, ExprPtr a, ExprPtr b);
  static ExprPtr cmp_op(CmpOp op, ExprPtr a, ExprPtr b);
  static ExprPtr or_op(ExprPtr a, ExprPtr b);
  static ExprPtr not_op(ExprPtr a);
  static ExprPtr nondet();
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Stmt {
  enum class Kind { Assign, Next, Remove, Add, Skip, Block, If, While };

  Kind kind;
  CounterId counter;
  std::string target;         // Assign/Next lhs x; Remove/Add receiver y
  std::string source;         // Next iterator z; Add element x
  ExprPtr expr;               // Assign rhs; If/While condition
  std::vector<StmtPtr> body;  // Block
  StmtPtr then_branch, else_branch;  // If; While body in then_branch
  SourceLoc loc;

  bool is_basic() const {
    return kind == Kind::Assign || kind == Kind::Next || kind == Kind::Remove ||
           kind == Kind::Add || kind == Kind::Skip;
  }
  const StmtPtr& loop_body() const { return then_branch; }

  static StmtPtr assign(std::string x, ExprPtr e, CounterId c = {}, SourceLoc loc = {});
  static StmtPtr next(std::string x, std::string z, CounterId c = {}, SourceLoc loc = {});
  static StmtPtr remove(std::string y, CounterId c = {}, SourceLoc loc = {});
  static StmtPtr add(std::string y, std::string x, CounterId c = {}, SourceLoc loc = {});
  static StmtPtr skip(CounterId c = {}, SourceLoc loc = {});
  static StmtPtr block(std::vector<StmtPtr> body, CounterId c = {}, SourceLoc loc = {});
  static StmtPtr if_else(ExprPtr cond, StmtPtr s1, StmtPtr s2, CounterId c = {}, SourceLoc loc = {});
  static StmtPtr while_loop(ExprPtr cond, StmtPtr s, CounterId c = {}, SourceLoc loc = {});
  /// Shallow copy carrying a different counter.
  static StmtPtr relabel(const Stmt& s, CounterId c);
};

struct VarDecl {
  std::string name;
  RefinementType type;
  ExprPtr init;  // null for inputs
  bool is_input = false;
  SourceLoc loc;
};

struct Method {
  std::string name;
  std::vector<VarDecl> inputs;
  std::vector<VarDecl> locals;
  StmtPtr body;
  RefinementPtr guarantee;

  /// Inputs then locals, in declaration order.
  std::vector<const VarDecl*> declarations() const;
  const VarDecl* find(std::string_view name) const;
  /// Statement nodes in pre-order, starting with the body.
  std::vector<StmtPtr> statements() const;
  const Stmt* find_statement(const CounterId& c) const;
  std::vector<CounterId> counters() const;
};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, DuplicateLabel, DuplicateVariable, UnknownVariable, NonLinearArithmetic, IllTypedRefinement };

  ParseError(Kind kind, SourceLoc loc, std::string message, std::vector<std::string> expected = {});

  Kind kind() const { return kind_; }
  SourceLoc loc() const { return loc_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  Kind kind_;
  SourceLoc loc_;
  std::vector<std::string> expected_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Parses one method in the `.bck` surface grammar. Refinements are resolved
/// against the method's declarations and statement labels, and every
/// statement receives a counter.
Method parse_method(std::string_view source);

/// Parses a standalone refinement in the context of `m` (used for --assume
/// and tests). `self_type` is the type `self` refers to, if any.
RefinementPtr parse_refinement(std::string_view text, const Method& m,
                               const std::optional<BaseType>& self_type = std::nullopt);

/// Gives every unlabeled statement the counter `@k`, k its pre-order index.
Method label_counters(Method m);

struct FreeSymbols {
  std::set<std::string> vars;            // int/bool variables read directly
  std::set<std::string> len_of;          // len(x)
  std::set<std::string> idx_of;          // idx(x)
  std::set<std::string> iterof_targets;  // iterOf(x) targets
  std::set<std::string> iterof_subjects; // named iterOf subjects (after instantiation)
  std::set<std::string> counters;
  bool self_value = false, self_len = false, self_idx = false, self_iterof = false;

  bool uses_self() const { return self_value || self_len || self_idx || self_iterof; }
  /// Program variables mentioned in any position.
  std::set<std::string> all_vars() const;
};

FreeSymbols free_symbols(const Refinement& r);
FreeSymbols free_symbols(const RefExpr& e);

/// True if every multiplication has a literal factor (always true for parsed
/// refinements; exposed for invariant checks).
bool is_linear(const Refinement& r);

// Printing. The printed form of a method parses back to an identical method.
std::string to_string(const RefExpr& e);
std::string to_string(const Refinement& r);
std::string to_string(const Expr& e);
std::string to_string(const Stmt& s, int indent = 0);
std::string pretty_print(const Method& m);

bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const Stmt& a, const Stmt& b);
bool structurally_equal(const Method& a, const Method& b);

}  // namespace boundck
