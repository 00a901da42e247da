#pragma once

#include <string>
#include <vector>

#include "boundck/interp.hpp"
#include "boundck/smt.hpp"
#include "boundck/syntax.hpp"

namespace boundck {

struct AxiomPart {
  std::string rule;  // "Global", "R-Block", "R-If", "R-While"
  CounterId node;
  smt::FormulaPtr formula;
};

struct CounterAxioms {
  smt::FormulaPtr formula;  // conjunction of all parts
  std::vector<AxiomPart> parts;
};

/// Relations between statement counters implied by the program's shape.
CounterAxioms counter_axioms(const Method& m);

/// Declares every counter symbol of `m` in `t`.
void declare_counters(const Method& m, smt::SymbolTable& t);

bool eval_axioms(const CounterAxioms& a, const Env& env);

}  // namespace boundck
