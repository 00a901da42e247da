#include <cctype>
#include <map>
#include <set>

#include "boundck/syntax.hpp"

namespace boundck {
namespace {

enum class Tok {
  Ident,
  AutoLabel,  // @k, only meaningful inside c[...]
  Int,
  String,
  Punct,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::int64_t value = 0;
  SourceLoc loc;
};

const std::set<std::string, std::less<>> kKeywords = {
    "method", "guarantee", "inv", "let", "int", "bool", "List", "Iterator", "skip", "if", "else",
    "while", "true", "false", "new", "or", "and", "not", "self", "len", "idx", "iterOf"};

class Lexer {
 public:
  Lexer(std::string_view src, SourceLoc origin) : src_(src), line_(origin.line), col_(origin.column) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      SourceLoc loc{line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "<end of input>", 0, loc});
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        out.push_back({Tok::Ident, std::string(src_.substr(start, pos_ - start)), 0, loc});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        std::string digits(src_.substr(start, pos_ - start));
        if (digits.size() > 18) throw ParseError(ParseError::Kind::Syntax, loc, "integer literal too large");
        out.push_back({Tok::Int, digits, std::stoll(digits), loc});
      } else if (c == '@') {
        advance();
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        if (start == pos_) throw ParseError(ParseError::Kind::Syntax, loc, "expected digits after '@'");
        out.push_back({Tok::AutoLabel, "@" + std::string(src_.substr(start, pos_ - start)), 0, loc});
      } else if (c == '"') {
        advance();
        std::size_t start = pos_;
        SourceLoc inner{line_, col_};
        while (pos_ < src_.size() && src_[pos_] != '"') advance();
        if (pos_ >= src_.size()) throw ParseError(ParseError::Kind::Syntax, loc, "unterminated string");
        Token t{Tok::String, std::string(src_.substr(start, pos_ - start)), 0, inner};
        advance();
        out.push_back(std::move(t));
      } else {
        static const char* two[] = {"==", "!=", "<=", ">=", "=>"};
        std::string p(1, c);
        for (const char* t : two) {
          if (src_.substr(pos_, 2) == t) {
            p = t;
            break;
          }
        }
        if (p.size() == 1 && std::string_view("(){}<>,;:.=+-*[]!").find(c) == std::string_view::npos)
          throw ParseError(ParseError::Kind::Syntax, loc, std::string("unexpected character '") + c + "'");
        for (std::size_t i = 0; i < p.size(); ++i) advance();
        out.push_back({Tok::Punct, p, 0, loc});
      }
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
      if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      return;
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_, col_;
};

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(std::string_view text, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return (t.kind == Tok::Punct || t.kind == Tok::Ident) && t.text == text;
  }
  bool at_ident(std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Ident && !kKeywords.count(t.text);
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool accept(std::string_view text) {
    if (!at(text)) return false;
    ++pos_;
    return true;
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  void expect(std::string_view text) {
    if (!accept(text)) fail({std::string(text)});
  }
  std::string expect_ident() {
    if (!at_ident()) fail({"identifier"});
    return next().text;
  }
  std::int64_t expect_int() {
    if (peek().kind != Tok::Int) fail({"integer"});
    return next().value;
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string msg = "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += "'" + expected[i] + "'";
    }
    msg += ", found '" + peek().text + "'";
    throw ParseError(ParseError::Kind::Syntax, peek().loc, msg, std::move(expected));
  }

  std::size_t mark() const { return pos_; }
  void reset(std::size_t m) { pos_ = m; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

bool is_cmp(const TokenStream& ts) {
  const Token& t = ts.peek();
  if (t.kind != Tok::Punct) return false;
  return t.text == "==" || t.text == "!=" || t.text == "<" || t.text == "<=" || t.text == ">" ||
         t.text == ">=";
}

CmpOp cmp_of(std::string_view s) {
  if (s == "==") return CmpOp::Eq;
  if (s == "!=") return CmpOp::Ne;
  if (s == "<") return CmpOp::Lt;
  if (s == "<=") return CmpOp::Le;
  if (s == ">") return CmpOp::Gt;
  return CmpOp::Ge;
}

BaseType parse_type(TokenStream& ts) {
  if (ts.accept("int")) return BaseType::int_type();
  if (ts.accept("bool")) return BaseType::bool_type();
  if (ts.accept("List")) {
    ts.expect("<");
    BaseType e = parse_type(ts);
    ts.expect(">");
    return BaseType::list_of(e);
  }
  if (ts.accept("Iterator")) {
    ts.expect("<");
    BaseType e = parse_type(ts);
    ts.expect(">");
    return BaseType::iterator_of(e);
  }
  ts.fail({"int", "bool", "List", "Iterator"});
}

// --- Refinements --------------------------------------------------------------

struct RefScope {
  const std::map<std::string, BaseType, std::less<>>& vars;
  const std::set<std::string, std::less<>>& labels;
  std::optional<BaseType> self;
};

class RefParser {
 public:
  RefParser(TokenStream& ts, const RefScope& scope) : ts_(ts), scope_(scope) {}

  RefinementPtr parse_all() {
    RefinementPtr r = parse_implies();
    if (!ts_.at_end()) ts_.fail({"end of refinement"});
    return r;
  }

 private:
  RefinementPtr parse_implies() {
    RefinementPtr lhs = parse_or();
    if (ts_.accept("=>")) return Refinement::implies(lhs, parse_implies());
    return lhs;
  }

  RefinementPtr parse_or() {
    RefinementPtr lhs = parse_and();
    while (ts_.accept("or")) lhs = Refinement::lor(lhs, parse_and());
    return lhs;
  }

  RefinementPtr parse_and() {
    RefinementPtr lhs = parse_not();
    while (ts_.accept("and")) lhs = Refinement::land(lhs, parse_not());
    return lhs;
  }

  RefinementPtr parse_not() {
    if (ts_.accept("not")) return Refinement::lnot(parse_not());
    return parse_atom();
  }

  RefinementPtr parse_atom() {
    // A comparison and a boolean atom can share a prefix (parentheses, names),
    // so try the comparison first and fall back.
    std::size_t m = ts_.mark();
    try {
      RefExprPtr lhs = parse_sum();
      if (!is_cmp(ts_)) ts_.fail({"==", "!=", "<", "<=", ">", ">="});
      CmpOp op = cmp_of(ts_.next().text);
      RefExprPtr rhs = parse_sum();
      return Refinement::cmp(op, lhs, rhs);
    } catch (const ParseError& first) {
      std::size_t reached = ts_.mark();
      ts_.reset(m);
      try {
        return parse_bool_atom();
      } catch (const ParseError& second) {
        // On a tie a semantic arithmetic error beats the boolean reading.
        bool prefer_first = ts_.mark() == reached && first.kind() != ParseError::Kind::Syntax;
        if (ts_.mark() >= reached && !prefer_first) throw;
        throw first;
      }
    }
  }

  RefinementPtr parse_bool_atom() {
    const Token& t = ts_.peek();
    if (ts_.accept("true")) return Refinement::lit(true);
    if (ts_.accept("false")) return Refinement::lit(false);
    if (ts_.accept("(")) {
      RefinementPtr r = parse_implies();
      ts_.expect(")");
      return r;
    }
    if (ts_.accept("iterOf")) {
      ts_.expect("(");
      SourceLoc loc = ts_.peek().loc;
      std::string y = ts_.expect_ident();
      ts_.expect(")");
      require_var(y, loc, BaseType::Kind::List, "iterOf");
      if (!scope_.self || !scope_.self->is_iterator())
        throw ParseError(ParseError::Kind::IllTypedRefinement, t.loc,
                         "iterOf is only allowed in the refinement of an iterator");
      return Refinement::iter_of(y);
    }
    if (ts_.accept("self")) {
      if (!scope_.self || !scope_.self->is_bool())
        throw ParseError(ParseError::Kind::IllTypedRefinement, t.loc, "'self' is not boolean here");
      return Refinement::bool_var("");
    }
    if (ts_.at_ident()) {
      SourceLoc loc = t.loc;
      std::string x = ts_.next().text;
      require_var(x, loc, BaseType::Kind::Bool, "boolean refinement");
      return Refinement::bool_var(x);
    }
    ts_.fail({"true", "false", "(", "iterOf", "self", "identifier", "comparison"});
  }

  RefExprPtr parse_sum() {
    RefExprPtr lhs = parse_term();
    for (;;) {
      if (ts_.accept("+")) lhs = RefExpr::add(lhs, parse_term());
      else if (ts_.accept("-")) lhs = RefExpr::sub(lhs, parse_term());
      else return lhs;
    }
  }

  bool at_literal_factor() const {
    if (ts_.peek().kind == Tok::Int) return ts_.at("*", 1);
    return ts_.at("-") && ts_.peek(1).kind == Tok::Int && ts_.at("*", 2);
  }

  RefExprPtr parse_term() {
    if (at_literal_factor()) {
      bool neg = ts_.accept("-");
      std::int64_t k = ts_.expect_int();
      ts_.expect("*");
      return RefExpr::scale(neg ? -k : k, parse_term());
    }
    RefExprPtr e = parse_primary();
    if (ts_.at("*")) {
      throw ParseError(ParseError::Kind::NonLinearArithmetic, ts_.peek().loc,
                       "multiplication is only allowed by an integer literal on the left");
    }
    return e;
  }

  RefExprPtr parse_primary() {
    const Token& t = ts_.peek();
    if (t.kind == Tok::Int) return RefExpr::lit(ts_.next().value);
    if (ts_.at("-") && ts_.peek(1).kind == Tok::Int) {
      ts_.next();
      return RefExpr::lit(-ts_.next().value);
    }
    if (ts_.accept("(")) {
      RefExprPtr e = parse_sum();
      ts_.expect(")");
      return e;
    }
    if (ts_.accept("self")) {
      if (!scope_.self || !scope_.self->is_int())
        throw ParseError(ParseError::Kind::IllTypedRefinement, t.loc, "'self' is not an integer here");
      return RefExpr::self_int();
    }
    if (ts_.at("len") || ts_.at("idx")) {
      bool is_len = ts_.next().text == "len";
      auto want = is_len ? BaseType::Kind::List : BaseType::Kind::Iterator;
      ts_.expect("(");
      SourceLoc loc = ts_.peek().loc;
      std::string x;
      if (ts_.accept("self")) {
        if (!scope_.self || scope_.self->kind() != want)
          throw ParseError(ParseError::Kind::IllTypedRefinement, loc,
                           std::string("'self' is not ") + (is_len ? "a list" : "an iterator") + " here");
      } else {
        x = ts_.expect_ident();
        require_var(x, loc, want, is_len ? "len" : "idx");
      }
      ts_.expect(")");
      return is_len ? RefExpr::len(x) : RefExpr::idx(x);
    }
    if (ts_.at("c") && ts_.at("[", 1)) {
      ts_.next();
      ts_.next();
      const Token& l = ts_.peek();
      if (l.kind != Tok::Ident && l.kind != Tok::AutoLabel) ts_.fail({"label"});
      std::string name = ts_.next().text;
      ts_.expect("]");
      require_label(name, l.loc);
      return RefExpr::counter(name);
    }
    if (ts_.at_ident()) {
      SourceLoc loc = t.loc;
      std::string x = ts_.next().text;
      if (scope_.vars.count(x)) {
        require_var(x, loc, BaseType::Kind::Int, "integer expression");
        return RefExpr::int_var(x);
      }
      require_label(x, loc);
      return RefExpr::counter(x);
    }
    ts_.fail({"integer", "self", "len", "idx", "identifier", "c[", "("});
  }

  void require_var(const std::string& x, SourceLoc loc, BaseType::Kind want, std::string_view where) const {
    auto it = scope_.vars.find(x);
    if (it == scope_.vars.end())
      throw ParseError(ParseError::Kind::UnknownVariable, loc, "unknown variable '" + x + "'");
    if (it->second.kind() != want)
      throw ParseError(ParseError::Kind::IllTypedRefinement, loc,
                       "'" + x + "' has type " + it->second.str() + ", not usable in " + std::string(where));
  }

  void require_label(const std::string& name, SourceLoc loc) const {
    if (!scope_.labels.count(name))
      throw ParseError(ParseError::Kind::UnknownVariable, loc,
                       "'" + name + "' is neither a declared variable nor a statement label");
  }

  TokenStream& ts_;
  const RefScope& scope_;
};

RefinementPtr parse_refinement_text(std::string_view text, SourceLoc origin, const RefScope& scope) {
  TokenStream ts(Lexer(text, origin).run());
  return RefParser(ts, scope).parse_all();
}

// --- Program ------------------------------------------------------------------

struct PendingRef {
  std::string text;
  SourceLoc loc;
};

class MethodParser {
 public:
  explicit MethodParser(std::string_view src) : ts_(Lexer(src, {1, 1}).run()) {}

  Method parse() {
    Method m;
    ts_.expect("method");
    m.name = ts_.expect_ident();
    ts_.expect("(");
    std::vector<PendingRef> input_refs;
    if (!ts_.at(")")) {
      do {
        VarDecl d;
        d.loc = ts_.peek().loc;
        d.name = ts_.expect_ident();
        ts_.expect(":");
        d.type.base = parse_type(ts_);
        ts_.expect("inv");
        input_refs.push_back(expect_string());
        d.is_input = true;
        declare(d);
        m.inputs.push_back(std::move(d));
      } while (ts_.accept(","));
    }
    ts_.expect(")");
    ts_.expect("guarantee");
    PendingRef guarantee = expect_string();
    SourceLoc body_loc = ts_.peek().loc;
    ts_.expect("{");
    std::vector<PendingRef> local_refs;
    while (ts_.at("let")) {
      ts_.next();
      VarDecl d;
      d.loc = ts_.peek().loc;
      d.name = ts_.expect_ident();
      ts_.expect(":");
      d.type.base = parse_type(ts_);
      ts_.expect("inv");
      local_refs.push_back(expect_string());
      ts_.expect("=");
      d.init = parse_expr();
      ts_.expect(";");
      declare(d);
      m.locals.push_back(std::move(d));
    }
    std::vector<StmtPtr> body;
    while (!ts_.at("}")) body.push_back(parse_stmt());
    ts_.expect("}");
    if (!ts_.at_end()) ts_.fail({"end of input"});
    m.body = body.empty() ? Stmt::skip({}, body_loc) : Stmt::block(std::move(body), {}, body_loc);
    m = label_counters(std::move(m));

    std::set<std::string, std::less<>> labels;
    for (const auto& c : m.counters()) labels.insert(c.name);
    for (std::size_t i = 0; i < m.inputs.size(); ++i)
      m.inputs[i].type.refinement = resolve(input_refs[i], labels, m.inputs[i].type.base);
    for (std::size_t i = 0; i < m.locals.size(); ++i)
      m.locals[i].type.refinement = resolve(local_refs[i], labels, m.locals[i].type.base);
    m.guarantee = resolve(guarantee, labels, std::nullopt);
    return m;
  }

 private:
  PendingRef expect_string() {
    if (ts_.peek().kind != Tok::String) ts_.fail({"\"refinement\""});
    const Token& t = ts_.next();
    return {t.text, t.loc};
  }

  void declare(const VarDecl& d) {
    if (!vars_.emplace(d.name, d.type.base).second)
      throw ParseError(ParseError::Kind::DuplicateVariable, d.loc, "duplicate variable '" + d.name + "'");
    if (d.is_input) inputs_.insert(d.name);
  }

  RefinementPtr resolve(const PendingRef& p, const std::set<std::string, std::less<>>& labels,
                        std::optional<BaseType> self) {
    RefScope scope{vars_, labels, std::move(self)};
    return parse_refinement_text(p.text, p.loc, scope);
  }

  const std::string& use_var(SourceLoc loc, const std::string& x) const {
    if (!vars_.count(x)) throw ParseError(ParseError::Kind::UnknownVariable, loc, "unknown variable '" + x + "'");
    return x;
  }

  StmtPtr parse_stmt() {
    SourceLoc loc = ts_.peek().loc;
    CounterId label;
    if (ts_.at_ident() && ts_.at(":", 1)) {
      label.name = ts_.next().text;
      ts_.next();
      if (vars_.count(label.name))
        throw ParseError(ParseError::Kind::DuplicateLabel, loc,
                         "label '" + label.name + "' clashes with a variable name");
      if (!labels_.insert(label.name).second)
        throw ParseError(ParseError::Kind::DuplicateLabel, loc, "duplicate label '" + label.name + "'");
      loc = ts_.peek().loc;
    }
    if (ts_.accept("skip")) {
      ts_.expect(";");
      return Stmt::skip(label, loc);
    }
    if (ts_.accept("{")) {
      std::vector<StmtPtr> body;
      while (!ts_.at("}")) body.push_back(parse_stmt());
      if (body.empty()) throw ParseError(ParseError::Kind::Syntax, ts_.peek().loc, "empty block", {"statement"});
      ts_.expect("}");
      return Stmt::block(std::move(body), label, loc);
    }
    if (ts_.accept("if")) {
      ts_.expect("(");
      ExprPtr cond = parse_expr();
      ts_.expect(")");
      StmtPtr s1 = parse_stmt();
      ts_.expect("else");
      StmtPtr s2 = parse_stmt();
      return Stmt::if_else(cond, s1, s2, label, loc);
    }
    if (ts_.accept("while")) {
      ts_.expect("(");
      ExprPtr cond = parse_expr();
      ts_.expect(")");
      return Stmt::while_loop(cond, parse_stmt(), label, loc);
    }
    if (!ts_.at_ident()) ts_.fail({"identifier", "skip", "{", "if", "while"});
    SourceLoc name_loc = ts_.peek().loc;
    std::string x = use_var(name_loc, ts_.next().text);
    if (ts_.accept(".")) {
      if (ts_.accept("remove")) {
        ts_.expect("(");
        ts_.expect(")");
        ts_.expect(";");
        return Stmt::remove(x, label, loc);
      }
      if (ts_.accept("add")) {
        ts_.expect("(");
        SourceLoc arg_loc = ts_.peek().loc;
        std::string v = use_var(arg_loc, ts_.expect_ident());
        ts_.expect(")");
        ts_.expect(";");
        return Stmt::add(x, v, label, loc);
      }
      ts_.fail({"add", "remove"});
    }
    ts_.expect("=");
    if (ts_.at_ident() && ts_.at(".", 1) && ts_.at("next", 2)) {
      SourceLoc z_loc = ts_.peek().loc;
      std::string z = use_var(z_loc, ts_.next().text);
      ts_.next();
      ts_.next();
      ts_.expect("(");
      ts_.expect(")");
      ts_.expect(";");
      return Stmt::next(x, z, label, loc);
    }
    ExprPtr e = parse_expr();
    ts_.expect(";");
    return Stmt::assign(x, e, label, loc);
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_not();
    while (ts_.accept("or")) lhs = Expr::or_op(lhs, parse_not());
    return lhs;
  }

  ExprPtr parse_not() {
    if (ts_.accept("not")) return Expr::not_op(parse_not());
    return parse_cmp();
  }

  ExprPtr parse_cmp() {
    ExprPtr lhs = parse_sum();
    if (is_cmp(ts_)) {
      CmpOp op = cmp_of(ts_.next().text);
      return Expr::cmp_op(op, lhs, parse_sum());
    }
    return lhs;
  }

  ExprPtr parse_sum() {
    ExprPtr lhs = parse_mul();
    for (;;) {
      if (ts_.accept("+")) lhs = Expr::arith_op(ArithOp::Add, lhs, parse_mul());
      else if (ts_.accept("-")) lhs = Expr::arith_op(ArithOp::Sub, lhs, parse_mul());
      else return lhs;
    }
  }

  ExprPtr parse_mul() {
    bool literal_factor = (ts_.peek().kind == Tok::Int && ts_.at("*", 1)) ||
                          (ts_.at("-") && ts_.peek(1).kind == Tok::Int && ts_.at("*", 2));
    if (literal_factor) {
      bool neg = ts_.accept("-");
      std::int64_t k = ts_.expect_int();
      ts_.expect("*");
      return Expr::arith_op(ArithOp::Mul, Expr::int_lit(neg ? -k : k), parse_mul());
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const Token& t = ts_.peek();
    if (t.kind == Tok::Int) return Expr::int_lit(ts_.next().value);
    if (ts_.at("-") && ts_.peek(1).kind == Tok::Int) {
      ts_.next();
      return Expr::int_lit(-ts_.next().value);
    }
    if (ts_.accept("true")) return Expr::bool_lit(true);
    if (ts_.accept("false")) return Expr::bool_lit(false);
    if (ts_.accept("*")) return Expr::nondet();
    if (ts_.accept("(")) {
      ExprPtr e = parse_expr();
      ts_.expect(")");
      return e;
    }
    if (ts_.accept("new")) {
      ts_.expect("List");
      ts_.expect("<");
      BaseType elem = parse_type(ts_);
      ts_.expect(">");
      return Expr::new_list(elem);
    }
    if (ts_.at_ident()) {
      SourceLoc loc = t.loc;
      std::string x = use_var(loc, ts_.next().text);
      if (ts_.accept(".")) {
        ts_.expect("iter");
        ts_.expect("(");
        ts_.expect(")");
        return Expr::iterator_of(x);
      }
      return Expr::var(x, inputs_.count(x) > 0);
    }
    ts_.fail({"expression"});
  }

  TokenStream ts_;
  std::map<std::string, BaseType, std::less<>> vars_;
  std::set<std::string, std::less<>> inputs_;
  std::set<std::string, std::less<>> labels_;
};

}  // namespace

Method parse_method(std::string_view source) { return MethodParser(source).parse(); }

RefinementPtr parse_refinement(std::string_view text, const Method& m, const std::optional<BaseType>& self_type) {
  std::map<std::string, BaseType, std::less<>> vars;
  for (const VarDecl* d : m.declarations()) vars.emplace(d->name, d->type.base);
  std::set<std::string, std::less<>> labels;
  for (const auto& c : m.counters()) labels.insert(c.name);
  RefScope scope{vars, labels, self_type};
  return parse_refinement_text(text, {1, 1}, scope);
}

}  // namespace boundck
