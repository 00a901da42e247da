#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "boundck/syntax.hpp"

namespace boundck::smt {

struct Term;
struct Formula;
using TermPtr = std::shared_ptr<const Term>;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Linear integer term.
struct Term {
  enum class Kind { Const, Sym, Add, Sub, Mul };

  Kind kind;
  std::int64_t value = 0;  // Const value, Mul factor
  std::string sym;
  TermPtr lhs, rhs;        // Mul uses lhs

  static TermPtr constant(std::int64_t n);
  static TermPtr symbol(std::string s);
  static TermPtr add(TermPtr a, TermPtr b);
  static TermPtr sub(TermPtr a, TermPtr b);
  static TermPtr mul(std::int64_t k, TermPtr a);
};

struct Formula {
  enum class Kind { True, False, BoolSym, Cmp, And, Or, Not, Implies };

  Kind kind;
  std::string sym;
  CmpOp op = CmpOp::Eq;
  TermPtr lhs, rhs;
  std::vector<FormulaPtr> args;  // And/Or: any arity; Not: 1; Implies: 2

  static FormulaPtr truth(bool b);
  static FormulaPtr bool_sym(std::string s);
  static FormulaPtr cmp(CmpOp op, TermPtr a, TermPtr b);
  /// Flattens nested conjunctions and drops `true`; the empty conjunction is `true`.
  static FormulaPtr conj(std::vector<FormulaPtr> fs);
  static FormulaPtr disj(std::vector<FormulaPtr> fs);
  static FormulaPtr neg(FormulaPtr f);
  static FormulaPtr implies(FormulaPtr a, FormulaPtr b);
};

bool operator==(const Term& a, const Term& b);
bool operator==(const Formula& a, const Formula& b);

enum class Sort { Int, Bool };

enum class Origin { Variable, Length, Index, Counter, IterOf, Fresh };

struct SymbolInfo {
  Sort sort = Sort::Int;
  Origin origin = Origin::Variable;
};

class SmtError : public std::runtime_error {
 public:
  enum class Kind { UnsortedSymbol, SolverNotFound, MalformedModel, ProcessFailure };
  SmtError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class SymbolTable {
 public:
  /// Declares `name`; redeclaring with a different sort throws UnsortedSymbol.
  void declare(const std::string& name, Sort sort, Origin origin);
  bool contains(const std::string& name) const { return symbols_.count(name) > 0; }
  const SymbolInfo& at(const std::string& name) const;
  const std::map<std::string, SymbolInfo>& symbols() const { return symbols_; }

 private:
  std::map<std::string, SymbolInfo> symbols_;
};

struct Model {
  std::map<std::string, std::int64_t> ints;
  std::map<std::string, bool> bools;

  std::int64_t int_value(const std::string& s) const;
  bool bool_value(const std::string& s) const;
};

/// Symbols occurring in `f`.
std::set<std::string> symbols_of(const Formula& f);

/// Concrete evaluation; symbols absent from the model read as 0 / false.
std::int64_t evaluate(const Term& t, const Model& m);
bool evaluate(const Formula& f, const Model& m);

/// Infix rendering for reports.
std::string to_text(const Term& t);
std::string to_text(const Formula& f);

/// S-expression rendering of one formula.
std::string to_sexpr(const Term& t);
std::string to_sexpr(const Formula& f);

/// Complete SMT-LIB 2 script: options, logic, sorted declarations, one assert,
/// check-sat and get-model. Every symbol of `f` must be declared in `t`.
std::string to_smtlib(const Formula& f, const SymbolTable& t);

struct Verdict {
  enum class Kind { Unsat, Sat, Unknown };
  Kind kind = Kind::Unknown;
  Model model;         // Sat only
  std::string reason;  // Unknown only
};

std::string_view to_string(Verdict::Kind k);

struct Validity {
  enum class Kind { Valid, Invalid, Unknown };
  Kind kind = Kind::Unknown;
  Model counterexample;
  std::string reason;
};

std::string_view to_string(Validity::Kind k);

struct SolverConfig {
  enum class Mode { Stdin, File };
  std::string path;  // empty: BOUNDCK_SOLVER, then z3 on PATH
  std::vector<std::string> args;  // defaults to {"-in"} in Stdin mode
  Mode mode = Mode::Stdin;
  int timeout_ms = 10000;
};

/// Resolves the solver executable or throws SolverNotFound.
std::string resolve_solver(const std::string& configured);

/// Parses solver output: the first sat/unsat/unknown token, then the model.
Verdict parse_solver_output(const std::string& output, const SymbolTable& t);

class Solver {
 public:
  explicit Solver(SolverConfig config);

  Verdict check(const Formula& f, const SymbolTable& t) const;
  /// Valid iff hypothesis ∧ ¬conclusion is unsatisfiable.
  Validity check_validity(const FormulaPtr& hypothesis, const FormulaPtr& conclusion, const SymbolTable& t) const;
  /// Raw round trip of an SMT-LIB script.
  std::string run_script(const std::string& script, bool* timed_out) const;

  const std::string& path() const { return path_; }
  std::size_t queries() const { return queries_; }

 private:
  SolverConfig config_;
  std::string path_;
  mutable std::size_t queries_ = 0;
};

}  // namespace boundck::smt
