#pragma once

#include <iosfwd>
#include <string>

#include "boundck/interp.hpp"

namespace boundck {

/// Reads input values from JSON text. Ints and bools map directly, lists are
/// arrays, iterators are either a list name or {"target": name, "pos": n}.
/// Throws std::invalid_argument on shape errors.
Inputs inputs_from_json(const Method& m, const std::string& text);

/// Whole command-line front end; returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace boundck
