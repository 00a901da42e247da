#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "boundck/interp.hpp"
#include "boundck/typecheck.hpp"

namespace boundck {

// ---------------------------------------------------------------------------
// Must-alias groups
// ---------------------------------------------------------------------------

struct AliasViolation {
  std::string stmt;  // printed statement or declaration
  std::string message;
  SourceLoc loc;
};

struct AliasAnalysis {
  AliasGroups groups;
  std::vector<AliasViolation> violations;
};

/// Union-find over list-to-list copies (`x = y;` and `let x = y`). A merged
/// variable that later receives a fresh list, or a variable copied from
/// sources that are otherwise unrelated, breaks the assumption that aliases
/// hold for the whole run.
AliasAnalysis compute_alias_groups(const Method& m);

/// check_stmt with length updates spread over the receiver's alias class.
std::vector<Obligation> check_stmt_alias(const TypingContext& ctx, const Stmt& s, Encoder& enc,
                                         const AliasGroups& groups);

// ---------------------------------------------------------------------------
// Store semantics
// ---------------------------------------------------------------------------

using Address = std::int64_t;

/// A variable's value under the store semantics: scalars inline, lists by
/// address, iterators as <position, address>.
struct Slot {
  enum class Kind { Int, Bool, Iter, Ref };
  Kind kind = Kind::Int;
  std::int64_t num = 0;  // Int value, Iter position
  bool flag = false;
  Address addr = -1;     // Iter and Ref

  friend bool operator==(const Slot&, const Slot&) = default;
};

struct AliasEnv {
  std::map<std::string, Slot> vars;
  std::map<Address, std::vector<Value>> store;
  std::map<std::string, std::int64_t> counters;
  Address next_addr = 0;

  /// Drops addresses no variable refers to.
  void collect_garbage();
};

struct AliasConfig {
  AliasEnv env;
  StmtPtr stmt;
};

AliasEnv init_alias_env(const Method& m, const Inputs& inputs, NondetOracle& oracle);

/// One small step under the store semantics. `x = y` on lists shares the
/// address; declarations allocate; `x = new List` empties x's list in place.
StepResult step_alias(AliasConfig& cfg, NondetOracle& oracle);

struct AliasTrace {
  std::vector<AliasEnv> envs;
  RunStatus status = RunStatus::FuelExhausted;
  StuckReason reason = StuckReason::None;
};

AliasTrace run_alias(const Method& m, const Inputs& inputs, NondetOracle& oracle, std::size_t fuel);

/// Refinement access that resolves lengths and iterator targets through the store.
class AliasView : public StateView {
 public:
  explicit AliasView(const AliasEnv& env) : env_(env) {}
  std::int64_t int_of(const std::string& x) const override;
  bool bool_of(const std::string& x) const override;
  std::int64_t len_of(const std::string& x) const override;
  std::int64_t idx_of(const std::string& x) const override;
  bool iterates(const std::string& it, const std::string& list) const override;
  std::int64_t counter(const std::string& c) const override;

 private:
  const Slot& slot(const std::string& x, Slot::Kind kind) const;
  const AliasEnv& env_;
};

}  // namespace boundck
