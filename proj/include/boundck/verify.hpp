#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "boundck/alias.hpp"
#include "boundck/axioms.hpp"
#include "boundck/encode.hpp"
#include "boundck/smt.hpp"
#include "boundck/typecheck.hpp"

namespace boundck {

enum class Outcome { Verified, NotVerified, Inconclusive };
std::string_view to_string(Outcome o);

struct ObligationResult {
  Obligation obligation;
  smt::Validity::Kind verdict = smt::Validity::Kind::Unknown;
  smt::Model counterexample;  // Invalid with solver only
  std::string reason;         // Unknown only
  bool used_solver = false;
};

struct VerifyConfig {
  smt::SolverConfig solver;
  std::vector<std::string> assumptions;  // extra refinements over inputs
  bool alias = false;
  std::string emit_smt_dir;  // one .smt2 file per solver query when non-empty
};

struct VerificationReport {
  std::string method;
  std::string file;

  std::optional<std::string> parse_error;
  std::vector<BaseTypeError> base_errors;

  bool alias = false;
  AliasGroups alias_groups;
  std::vector<AliasViolation> alias_violations;

  std::vector<ObligationResult> obligations;
  std::vector<AxiomPart> axioms;
  smt::FormulaPtr axiom_formula;

  smt::FormulaPtr query;
  std::optional<smt::Verdict> query_verdict;

  Outcome outcome = Outcome::Inconclusive;
  std::string stage;   // the stage that decided the outcome
  std::string reason;
  std::vector<std::string> notes;

  double elapsed_ms = 0;
  std::size_t solver_queries = 0;

  /// Verified iff every obligation is valid and the query is unsatisfiable.
  bool consistent() const;
};

class QueryError : public std::runtime_error {
 public:
  enum class Kind { GuaranteeMentionsSelf, GuaranteeMentionsIterOf, BadAssumption };
  QueryError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Query {
  smt::FormulaPtr formula;
  smt::SymbolTable table;
};

/// Counter axioms, the refinement constraint of every input and local,
/// `assumptions`, the standing facts and the negated guarantee. With
/// `groups`, lengths of aliased lists are tied together.
Query assemble_query(const Method& m, Encoder& enc, const std::vector<RefinementPtr>& assumptions = {},
                     const AliasGroups* groups = nullptr);

/// Full pipeline over a parsed method. Failures land in the report.
VerificationReport verify_method(const Method& m, const VerifyConfig& config);
/// Parses first; a parse error yields a NotVerified report.
VerificationReport verify_source(const std::string& source, const VerifyConfig& config);

/// Exit status for a report: 0 Verified, 1 NotVerified, 2 Inconclusive.
int exit_code(Outcome o);

std::string render_text(const VerificationReport& r);
/// Stable JSON rendering; `timings` is the only run-dependent member.
std::string render_json(const VerificationReport& r, bool with_timings = true);

}  // namespace boundck
