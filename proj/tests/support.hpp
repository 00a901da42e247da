#pragma once

#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "boundck/interp.hpp"
#include "boundck/smt.hpp"
#include "boundck/syntax.hpp"

namespace boundck::testing {

inline std::string fixture_path(const std::string& name) { return std::string(BOUNDCK_FIXTURES) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Method load_fixture(const std::string& name) { return parse_method(read_text(fixture_path(name))); }

/// Every shipped fixture file name.
inline const std::vector<std::string>& all_fixtures() {
  static const std::vector<std::string> names = {
      "fragment.bck",  "fragment_naive.bck", "driver.bck",    "driver_tight.bck",         "showblogs.bck",
      "jforum.bck",    "jforum_swapped_labels.bck", "unbounded.bck", "alias.bck"};
  return names;
}

/// Fixtures with no list-to-list copies.
inline std::vector<std::string> alias_free_fixtures() {
  std::vector<std::string> out;
  for (const auto& f : all_fixtures())
    if (f != "alias.bck") out.push_back(f);
  return out;
}

struct GenOptions {
  int max_depth = 3;
  int max_block = 4;
  bool list_copies = false;  // emit `d = a;`
};

/// Random method source over a fixed set of declarations. Statements use
/// every syntactic form; refinements mention generated labels.
class ProgramGen {
 public:
  ProgramGen(std::mt19937_64& rng, GenOptions opts = {}) : rng_(rng), opts_(opts) {}

  std::string source() {
    labels_.clear();
    next_label_ = 0;
    std::vector<std::string> body;
    int n = pick(1, opts_.max_block);
    for (int i = 0; i < n; ++i) body.push_back(stmt(0));

    std::ostringstream out;
    out << "method gen(n: int inv \"self >= 0\", xs: List<int> inv \"len(self) <= 4\", b: bool inv \"true\")\n"
        << "    guarantee \"" << guarantee() << "\" {\n"
        << "  let a: List<int> inv \"" << list_ref() << "\" = new List<int>;\n"
        << "  let d: List<int> inv \"true\" = new List<int>;\n"
        << "  let k: int inv \"" << int_ref() << "\" = 0;\n"
        << "  let it: Iterator<int> inv \"iterOf(xs)\" = xs.iter();\n"
        << "  let f: bool inv \"self or not self\" = false;\n";
    for (const auto& s : body) out << s;
    out << "}\n";
    return out.str();
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  std::string label() {
    if (!coin(0.3)) return "";
    std::string l = "L" + std::to_string(next_label_++);
    labels_.push_back(l);
    return l + ": ";
  }

  std::string cond() {
    switch (pick(0, 3)) {
      case 0: return "*";
      case 1: return "k < n";
      case 2: return "not f or b";
      default: return "k + 1 >= 2 * n";
    }
  }

  std::string basic() {
    switch (pick(0, 10)) {
      case 0: return "k = k + 1;";
      case 1: return "k = 2 * n - k;";
      case 2: return "k = it.next();";
      case 3: return "a.add(k);";
      case 4: return "a.remove();";
      case 5: return "d.add(n);";
      case 6: return "skip;";
      case 7: return "f = k < 3 or not f;";
      case 8: return "f = *;";
      case 9: return opts_.list_copies ? "d = a;" : "d = new List<int>;";
      default: return "it = xs.iter();";
    }
  }

  std::string stmt(int depth) {
    std::string pad(2 * depth + 2, ' ');
    std::string l = label();
    int kind = depth >= opts_.max_depth ? 0 : pick(0, 6);
    if (kind <= 3) return pad + l + basic() + "\n";
    if (kind == 4) {
      std::string out = pad + l + "{\n";
      int n = pick(1, opts_.max_block);
      for (int i = 0; i < n; ++i) out += stmt(depth + 1);
      return out + pad + "}\n";
    }
    if (kind == 5) {
      return pad + l + "if (" + cond() + ")\n" + stmt(depth + 1) + pad + "else\n" + stmt(depth + 1);
    }
    return pad + l + "while (" + cond() + ")\n" + stmt(depth + 1);
  }

  std::string term() {
    switch (pick(0, 5)) {
      case 0: return std::to_string(pick(-3, 5));
      case 1: return "n";
      case 2: return "len(xs)";
      case 3: return "idx(it)";
      case 4: return labels_.empty() ? "k" : labels_[pick(0, static_cast<int>(labels_.size()) - 1)];
      default: return "2 * k";
    }
  }

  std::string sum() { return coin() ? term() : term() + (coin() ? " + " : " - ") + term(); }

  std::string cmp() {
    static const char* ops[] = {"==", "!=", "<", "<=", ">", ">="};
    return ops[pick(0, 5)];
  }

  std::string list_ref() { return coin(0.3) ? "true" : "len(self) " + std::string(cmp()) + " " + sum(); }
  std::string int_ref() {
    std::string r = "self " + std::string(cmp()) + " " + sum();
    return coin(0.3) ? r + " or not (" + sum() + " < " + sum() + ")" : r;
  }
  std::string guarantee() { return "len(a) <= " + sum() + " and len(d) >= 0 => k != 7"; }

  std::mt19937_64& rng_;
  GenOptions opts_;
  std::vector<std::string> labels_;
  int next_label_ = 0;
};

/// Random linear formula over `syms` integer symbols named s0, s1, ...
class FormulaGen {
 public:
  explicit FormulaGen(std::mt19937_64& rng) : rng_(rng) {}

  smt::FormulaPtr formula(int syms, int depth = 3) {
    syms_ = syms;
    return node(depth);
  }

  static std::string sym(int i) { return "s" + std::to_string(i); }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  smt::TermPtr term() {
    smt::TermPtr t = smt::Term::constant(pick(-6, 6));
    int n = pick(1, 3);
    for (int i = 0; i < n; ++i) {
      smt::TermPtr s = smt::Term::symbol(sym(pick(0, syms_ - 1)));
      int k = pick(-3, 3);
      if (k != 1) s = smt::Term::mul(k, s);
      t = pick(0, 1) ? smt::Term::add(t, s) : smt::Term::sub(t, s);
    }
    return t;
  }

  smt::FormulaPtr atom() {
    static const CmpOp ops[] = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
    return smt::Formula::cmp(ops[pick(0, 5)], term(), smt::Term::constant(pick(-8, 8)));
  }

  smt::FormulaPtr node(int depth) {
    if (depth == 0) return atom();
    switch (pick(0, 5)) {
      case 0: return atom();
      case 1: return smt::Formula::neg(node(depth - 1));
      case 2: return smt::Formula::disj({node(depth - 1), node(depth - 1)});
      case 3: return smt::Formula::implies(node(depth - 1), node(depth - 1));
      default: return smt::Formula::conj({node(depth - 1), node(depth - 1), node(depth - 1)});
    }
  }

  std::mt19937_64& rng_;
  int syms_ = 1;
};

/// Searches [-bound, bound]^k for a model of `f` over symbols s0..s{k-1}.
inline std::optional<smt::Model> brute_force(const smt::Formula& f, int syms, int bound = 8) {
  smt::Model m;
  std::vector<std::int64_t> v(static_cast<std::size_t>(syms), -bound);
  for (;;) {
    for (int i = 0; i < syms; ++i) m.ints[FormulaGen::sym(i)] = v[static_cast<std::size_t>(i)];
    if (smt::evaluate(f, m)) return m;
    int i = 0;
    while (i < syms && v[static_cast<std::size_t>(i)] == bound) v[static_cast<std::size_t>(i++)] = -bound;
    if (i == syms) return std::nullopt;
    ++v[static_cast<std::size_t>(i)];
  }
}

inline smt::SymbolTable int_table(int syms) {
  smt::SymbolTable t;
  for (int i = 0; i < syms; ++i) t.declare(FormulaGen::sym(i), smt::Sort::Int, smt::Origin::Variable);
  return t;
}

}  // namespace boundck::testing
