#pragma once

#include <map>
#include <set>
#include <string>

#include "boundck/smt.hpp"
#include "boundck/syntax.hpp"

namespace boundck {

std::string var_symbol(const std::string& x);
std::string len_symbol(const std::string& x);
std::string idx_symbol(const std::string& x);
std::string counter_symbol(const std::string& c);
std::string iterof_symbol(const std::string& it, const std::string& list);

/// Compiles refinements of one method into solver formulas over a shared
/// symbol table. Fresh variables (for existential elimination and `*`) are
/// named `$k` and carry a base type like declared ones.
class Encoder {
 public:
  explicit Encoder(const Method& m);

  const Method& method() const { return method_; }
  const BaseType* type_of(const std::string& x) const;
  std::string fresh_var(const BaseType& t);

  /// Compiles `r` with `self` bound to `self_var`.
  smt::FormulaPtr compile(const Refinement& r, const std::string& self_var = {});
  smt::TermPtr compile(const RefExpr& e, const std::string& self_var = {});

  /// Constraint contributed by a typed variable to the verification query.
  /// A bare iterOf(y) refinement yields the index range 0 <= idx <= len(y).
  smt::FormulaPtr phi(const std::string& x, const RefinementType& t);

  /// Facts true of every state, restricted to the given symbols: counters,
  /// lengths and indices are non-negative, an iterator walks at most one
  /// list, and an iterOf fact bounds the index by the list length.
  smt::FormulaPtr standing(const std::set<std::string>& symbols);
  /// Standing facts for every symbol of `f`.
  smt::FormulaPtr standing_for(const smt::Formula& f);

  /// The part of the symbol table mentioned by `f`.
  smt::SymbolTable table_for(const smt::Formula& f) const;
  const smt::SymbolTable& table() const { return table_; }

 private:
  smt::TermPtr len_term(const std::string& x);
  smt::TermPtr idx_term(const std::string& x);

  const Method& method_;
  std::map<std::string, BaseType> types_;
  smt::SymbolTable table_;
  std::map<std::string, std::pair<std::string, std::string>> iterof_;  // symbol -> (iterator, list)
  std::map<std::string, std::string> len_of_, idx_of_;                  // symbol -> variable
  int fresh_ = 0;
};

}  // namespace boundck
