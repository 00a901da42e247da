#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "boundck/encode.hpp"
#include "boundck/smt.hpp"
#include "boundck/syntax.hpp"

namespace boundck {

struct BaseTypeError {
  std::string rule;
  std::string node;  // printed statement or declaration
  std::string message;
  SourceLoc loc;
};

/// Checks the base typing rules; an empty result means the method is well formed.
std::vector<BaseTypeError> base_typecheck(const Method& m);

/// Γ: inputs then locals, in declaration order.
using TypingContext = std::vector<std::pair<std::string, RefinementType>>;
TypingContext context_of(const Method& m);

/// Simultaneous replacement over refinement terms. Entries are keyed by the
/// variable (or counter) they rewrite; `rename` moves every occurrence of a
/// variable, including iterOf subjects and targets.
struct Substitution {
  std::map<std::string, RefExprPtr> int_var;
  std::map<std::string, RefinementPtr> bool_var;
  std::map<std::string, RefExprPtr> len;
  std::map<std::string, RefExprPtr> idx;
  std::map<std::string, RefExprPtr> counter;
  std::map<std::string, std::string> rename;
  /// iterOf(t) with subject z becomes the literal (t == y).
  std::map<std::string, std::string> retarget;
};

RefinementPtr substitute(const Refinement& r, const Substitution& s);
RefExprPtr substitute(const RefExpr& e, const Substitution& s);
RefinementType substitute(const RefinementType& t, const Substitution& s);
/// r[x/self].
RefinementPtr instantiate_self(const Refinement& r, const std::string& x);

struct Obligation {
  enum class Kind { Subtype, Equivalence, InitConforms };

  std::string id;  // method.rule.counter.var
  Kind kind = Kind::Subtype;
  std::string rule;
  CounterId counter;
  std::string var;
  RefinementPtr premise;     // refinement-level hypothesis (self instantiated)
  RefinementPtr goal;        // refinement-level conclusion
  smt::FormulaPtr hypothesis;  // includes the standing facts
  smt::FormulaPtr conclusion;
  /// Set when the obligation was decided without the solver.
  std::optional<bool> decided;
  std::string note;
};

std::string_view to_string(Obligation::Kind k);

/// Must-alias classes of list variables; every list variable is in exactly one.
struct AliasGroups {
  std::vector<std::vector<std::string>> classes;
  std::map<std::string, std::size_t> class_of;

  const std::vector<std::string>& alias(const std::string& x) const;
  bool all_singletons() const;
};

/// Obligations of one statement node and its descendants. With `groups`,
/// the alias-aware rule variants are used.
std::vector<Obligation> check_stmt(const TypingContext& ctx, const Stmt& s, Encoder& enc,
                                   const AliasGroups* groups = nullptr);

/// T-Decl: concrete conformance of each local's initial value, falling back
/// to a symbolic obligation when the value depends on inputs.
std::vector<Obligation> check_decls(const Method& m, Encoder& enc);

/// r ⇔ ∃x. r, reduced to r[x'/x] ⇒ r for a fresh x'.
Obligation check_equivalence_t_next(const Refinement& r, const std::string& x, Encoder& enc);

/// Every obligation of a method: declarations, then the body.
std::vector<Obligation> check_method(const Method& m, Encoder& enc, const AliasGroups* groups = nullptr);

}  // namespace boundck
