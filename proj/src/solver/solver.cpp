#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "boundck/smt.hpp"

namespace boundck::smt {

namespace {

bool executable(const std::string& p) { return !p.empty() && ::access(p.c_str(), X_OK) == 0; }

// --- S-expressions --------------------------------------------------------------

struct SExpr {
  std::string atom;
  std::vector<SExpr> items;
  bool is_list = false;
};

class SExprReader {
 public:
  explicit SExprReader(const std::string& text) : text_(text) {}

  bool next(SExpr& out) {
    skip();
    if (pos_ >= text_.size()) return false;
    out = read();
    return true;
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        return;
      }
    }
  }

  SExpr read() {
    SExpr e;
    if (text_[pos_] == '(') {
      ++pos_;
      e.is_list = true;
      for (;;) {
        skip();
        if (pos_ >= text_.size()) throw SmtError(SmtError::Kind::MalformedModel, "unbalanced parentheses");
        if (text_[pos_] == ')') {
          ++pos_;
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (text_[pos_] == ')') throw SmtError(SmtError::Kind::MalformedModel, "unexpected ')'");
    if (text_[pos_] == '"') {
      std::size_t start = pos_++;
      while (pos_ < text_.size()) {
        if (text_[pos_] == '"') {
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
            pos_ += 2;
            continue;
          }
          break;
        }
        ++pos_;
      }
      ++pos_;
      e.atom = text_.substr(start, pos_ - start);
      return e;
    }
    if (text_[pos_] == '|') {
      std::size_t start = ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '|') ++pos_;
      e.atom = text_.substr(start, pos_ - start);
      ++pos_;
      return e;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')')
      ++pos_;
    e.atom = text_.substr(start, pos_ - start);
    return e;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

std::int64_t int_value(const SExpr& e) {
  if (!e.is_list) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(e.atom, &used);
      if (used == e.atom.size()) return v;
    } catch (const std::exception&) {
    }
  } else if (e.items.size() == 2 && !e.items[0].is_list && e.items[0].atom == "-") {
    return -int_value(e.items[1]);
  }
  throw SmtError(SmtError::Kind::MalformedModel, "unexpected model value");
}

void collect_definitions(const SExpr& e, const SymbolTable& t, Model& m) {
  if (!e.is_list) return;
  if (e.items.size() == 5 && !e.items[0].is_list && e.items[0].atom == "define-fun" && !e.items[1].is_list) {
    const std::string& name = e.items[1].atom;
    const SExpr& sort = e.items[3];
    const SExpr& value = e.items[4];
    if (!t.contains(name)) return;
    if (!sort.is_list && sort.atom == "Bool") {
      if (value.is_list || (value.atom != "true" && value.atom != "false"))
        throw SmtError(SmtError::Kind::MalformedModel, "bad boolean value for " + name);
      m.bools[name] = value.atom == "true";
    } else {
      m.ints[name] = int_value(value);
    }
    return;
  }
  for (const auto& item : e.items) collect_definitions(item, t, m);
}

}  // namespace

std::string resolve_solver(const std::string& configured) {
  if (!configured.empty()) {
    if (executable(configured)) return configured;
    if (configured.find('/') != std::string::npos)
      throw SmtError(SmtError::Kind::SolverNotFound, "solver not executable: " + configured);
  }
  std::string name = configured;
  if (name.empty()) {
    if (const char* env = std::getenv("BOUNDCK_SOLVER"); env && *env) {
      if (executable(env)) return env;
      if (std::string(env).find('/') != std::string::npos)
        throw SmtError(SmtError::Kind::SolverNotFound, std::string("BOUNDCK_SOLVER not executable: ") + env);
      name = env;
    } else {
      name = "z3";
    }
  }
  if (const char* path = std::getenv("PATH")) {
    std::string p = path;
    std::size_t start = 0;
    while (start <= p.size()) {
      std::size_t end = p.find(':', start);
      if (end == std::string::npos) end = p.size();
      std::string dir = p.substr(start, end - start);
      if (!dir.empty() && executable(dir + "/" + name)) return dir + "/" + name;
      start = end + 1;
    }
  }
  throw SmtError(SmtError::Kind::SolverNotFound, "no SMT solver found (tried '" + name + "'); use --solver or BOUNDCK_SOLVER");
}

Verdict parse_solver_output(const std::string& output, const SymbolTable& t) {
  Verdict v;
  SExprReader reader(output);
  SExpr e;
  bool found = false;
  std::vector<SExpr> rest;
  while (reader.next(e)) {
    if (!found && !e.is_list && (e.atom == "sat" || e.atom == "unsat" || e.atom == "unknown")) {
      found = true;
      v.kind = e.atom == "sat" ? Verdict::Kind::Sat : e.atom == "unsat" ? Verdict::Kind::Unsat : Verdict::Kind::Unknown;
      if (v.kind == Verdict::Kind::Unknown) v.reason = "solver answered unknown";
      continue;
    }
    if (found) rest.push_back(std::move(e));
  }
  if (!found) {
    v.kind = Verdict::Kind::Unknown;
    v.reason = "no verdict in solver output: " + output.substr(0, 200);
    return v;
  }
  if (v.kind == Verdict::Kind::Sat)
    for (const auto& r : rest) collect_definitions(r, t, v.model);
  return v;
}

Solver::Solver(SolverConfig config) : config_(std::move(config)), path_(resolve_solver(config_.path)) {
  if (config_.args.empty() && config_.mode == SolverConfig::Mode::Stdin) config_.args = {"-in"};
}

std::string Solver::run_script(const std::string& script, bool* timed_out) const {
  ++queries_;
  if (timed_out) *timed_out = false;
  std::string file;
  if (config_.mode == SolverConfig::Mode::File) {
    char tmpl[] = "/tmp/boundck-XXXXXX.smt2";
    int fd = ::mkstemps(tmpl, 5);
    if (fd < 0) throw SmtError(SmtError::Kind::ProcessFailure, "cannot create temporary file");
    file = tmpl;
    std::size_t off = 0;
    while (off < script.size()) {
      ssize_t n = ::write(fd, script.data() + off, script.size() - off);
      if (n <= 0) break;
      off += static_cast<std::size_t>(n);
    }
    ::close(fd);
  }

  int in_pipe[2], out_pipe[2];
  if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0)
    throw SmtError(SmtError::Kind::ProcessFailure, "pipe failed");
  std::vector<std::string> argv_s = {path_};
  argv_s.insert(argv_s.end(), config_.args.begin(), config_.args.end());
  if (!file.empty()) argv_s.push_back(file);
  std::vector<char*> argv;
  for (auto& a : argv_s) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = ::fork();
  if (pid < 0) throw SmtError(SmtError::Kind::ProcessFailure, "fork failed");
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(out_pipe[1], STDERR_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execv(argv[0], argv.data());
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);

  // The solver reads everything before answering, so write then read.
  ::signal(SIGPIPE, SIG_IGN);
  if (file.empty()) {
    std::size_t off = 0;
    while (off < script.size()) {
      ssize_t n = ::write(in_pipe[1], script.data() + off, script.size() - off);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) break;
      off += static_cast<std::size_t>(n);
    }
  }
  ::close(in_pipe[1]);

  std::string output;
  auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(config_.timeout_ms);
  char buf[4096];
  for (;;) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      ::kill(pid, SIGKILL);
      if (timed_out) *timed_out = true;
      break;
    }
    pollfd pfd{out_pipe[0], POLLIN, 0};
    int r = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (r < 0 && errno == EINTR) continue;
    if (r == 0) continue;
    ssize_t n = ::read(out_pipe[0], buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  ::close(out_pipe[0]);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (!file.empty()) std::filesystem::remove(file);
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127 && output.empty())
    throw SmtError(SmtError::Kind::SolverNotFound, "could not execute " + path_);
  return output;
}

Verdict Solver::check(const Formula& f, const SymbolTable& t) const {
  bool timed_out = false;
  std::string out = run_script(to_smtlib(f, t), &timed_out);
  if (timed_out) {
    Verdict v;
    v.kind = Verdict::Kind::Unknown;
    v.reason = "timeout";
    return v;
  }
  return parse_solver_output(out, t);
}

Validity Solver::check_validity(const FormulaPtr& hypothesis, const FormulaPtr& conclusion,
                                const SymbolTable& t) const {
  Verdict v = check(*Formula::conj({hypothesis, Formula::neg(conclusion)}), t);
  Validity out;
  switch (v.kind) {
    case Verdict::Kind::Unsat: out.kind = Validity::Kind::Valid; break;
    case Verdict::Kind::Sat:
      out.kind = Validity::Kind::Invalid;
      out.counterexample = std::move(v.model);
      break;
    case Verdict::Kind::Unknown:
      out.kind = Validity::Kind::Unknown;
      out.reason = std::move(v.reason);
      break;
  }
  return out;
}

}  // namespace boundck::smt
