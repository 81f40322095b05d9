#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tb {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The solver answered "unknown" (typically its time limit).
class SolverUnknown : public SolverError {
 public:
  using SolverError::SolverError;
};

struct SolverConfig {
  std::string path = "z3";
  std::vector<std::string> args = {"-in", "-smt2"};
  /// Ask the solver for sequence interpolants (get-interpolants).
  bool interpolation = false;
  unsigned timeout_ms = 30000;
};

/// Parsed S-expression.
struct SExpr {
  bool atom = true;
  std::string text;
  std::vector<SExpr> items;

  std::string str() const;
};

SExpr parse_sexpr(const std::string& text);

/// One SMT-LIB 2 solver process spoken to over stdin/stdout. Every command
/// yields exactly one response (print-success is enabled). Not thread-safe;
/// one owner at a time.
class SmtSession {
 public:
  explicit SmtSession(SolverConfig cfg);
  ~SmtSession();
  SmtSession(const SmtSession&) = delete;
  SmtSession& operator=(const SmtSession&) = delete;

  /// Sends one command and returns its response text.
  std::string command(const std::string& cmd);
  /// Sends several commands in one write and returns their responses.
  std::vector<std::string> batch(const std::vector<std::string>& cmds);

  const SolverConfig& config() const { return cfg_; }
  std::size_t commands_sent() const { return sent_; }

 private:
  void start();
  void stop();
  void write_all(const std::string& data);
  std::string read_response();

  SolverConfig cfg_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::size_t sent_ = 0;
};

}  // namespace tb
