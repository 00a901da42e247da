#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "boundck/syntax.hpp"

namespace boundck {

struct Value {
  enum class Kind { Int, Bool, Iter, List };

  Kind kind = Kind::Int;
  std::int64_t num = 0;       // Int value, Iter position
  bool flag = false;          // Bool value
  std::string target;         // Iter: the list variable it walks
  std::vector<Value> elems;   // List contents

  static Value integer(std::int64_t n);
  static Value boolean(bool b);
  static Value iter(std::int64_t pos, std::string target);
  static Value list(std::vector<Value> elems = {});

  friend bool operator==(const Value&, const Value&) = default;
  std::string str() const;
};

/// True if `v` has the shape of base type `t` (iterator targets are not checked).
bool conforms(const Value& v, const BaseType& t);

struct Env {
  std::map<std::string, Value> vars;
  std::map<std::string, std::int64_t> counters;  // the discard counter never appears

  friend bool operator==(const Env&, const Env&) = default;
};

class InterpError : public std::runtime_error {
 public:
  enum class Kind { MissingInput, UnknownInput, BaseTypeMismatch, UnboundSymbol, BadScript };
  InterpError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Source of `*` results: a seeded generator or an explicit bit script.
/// An exhausted script yields false forever.
class NondetOracle {
 public:
  static NondetOracle seeded(std::uint64_t seed);
  static NondetOracle script(std::string_view bits);

  bool next();
  std::size_t consumed() const { return consumed_; }

 private:
  NondetOracle() = default;
  std::optional<std::mt19937_64> rng_;
  std::string script_;
  std::size_t consumed_ = 0;
};

enum class StuckReason { None, IteratorExhausted, RemoveEmpty, IllTyped };
std::string_view to_string(StuckReason r);

struct Config {
  Env env;
  StmtPtr stmt;  // residual statement; runtime-introduced nodes carry the discard counter
};

struct StepResult {
  enum class Kind { Stepped, Done, Stuck };
  Kind kind = Kind::Stepped;
  StuckReason reason = StuckReason::None;
};

using Inputs = std::map<std::string, Value>;

/// Counters at zero, inputs bound, locals initialized left to right.
Env init_env(const Method& m, const Inputs& inputs, NondetOracle& oracle);
Env init_env(const Method& m, const Inputs& inputs);

/// Big-step evaluation of one expression; `*` draws from `oracle`.
Value eval_expr(const Expr& e, const Env& env, NondetOracle& oracle);

/// One leftmost reduction of a scalar expression; ill-typed input throws
/// InterpError(BaseTypeMismatch).
ExprPtr reduce_expr(const Expr& e, const Env& env, NondetOracle& oracle);

/// One small step. Leaves `cfg` unchanged when the result is Done or Stuck.
StepResult step(Config& cfg, NondetOracle& oracle);

enum class RunStatus { Done, FuelExhausted, Stuck };
std::string_view to_string(RunStatus s);

struct Trace {
  std::vector<Env> envs;
  RunStatus status = RunStatus::FuelExhausted;
  StuckReason reason = StuckReason::None;
};

Trace run(const Method& m, const Inputs& inputs, NondetOracle& oracle, std::size_t fuel);

/// Read access to a runtime state, enough to decide a refinement.
class StateView {
 public:
  virtual ~StateView() = default;
  virtual std::int64_t int_of(const std::string& x) const = 0;
  virtual bool bool_of(const std::string& x) const = 0;
  virtual std::int64_t len_of(const std::string& x) const = 0;
  virtual std::int64_t idx_of(const std::string& x) const = 0;
  /// True if iterator `it` walks list variable `list`.
  virtual bool iterates(const std::string& it, const std::string& list) const = 0;
  virtual std::int64_t counter(const std::string& c) const = 0;
};

class EnvView : public StateView {
 public:
  explicit EnvView(const Env& env) : env_(env) {}
  std::int64_t int_of(const std::string& x) const override;
  bool bool_of(const std::string& x) const override;
  std::int64_t len_of(const std::string& x) const override;
  std::int64_t idx_of(const std::string& x) const override;
  bool iterates(const std::string& it, const std::string& list) const override;
  std::int64_t counter(const std::string& c) const override;

 private:
  const Value& lookup(const std::string& x, Value::Kind kind) const;
  const Env& env_;
};

/// Decides `r` with `self` bound to `self_var` (empty when r has no self).
bool eval_refinement(const Refinement& r, const std::string& self_var, const StateView& state);
bool eval_refinement(const Refinement& r, const std::string& self_var, const Env& env);
std::int64_t eval_ref_expr(const RefExpr& e, const std::string& self_var, const StateView& state);

struct Violation {
  std::string var;
  std::string refinement;
};

/// Every declared variable checked against its own refinement.
std::vector<Violation> well_typed(const StateView& state, const Method& m);
std::vector<Violation> well_typed(const Env& env, const Method& m);

/// Random inputs satisfying the input refinements, found by rejection
/// sampling; nullopt if `attempts` draws all fail.
std::optional<Inputs> sample_inputs(const Method& m, std::mt19937_64& rng, int max_len = 6, int attempts = 200);

}  // namespace boundck
