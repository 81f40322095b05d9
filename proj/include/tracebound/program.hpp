#pragma once

#include "tracebound/expr.hpp"
#include "tracebound/rational.hpp"

#include <memory>
#include <string>

namespace tb {

/// Program AST: assign, probabilistic choice, nondeterministic choice, skip,
/// sequence, conditional, loop.
class Program {
 public:
  enum class Kind { Assign, Prob, Nondet, Skip, Seq, Ite, While };

  static Program skip();
  static Program assign(std::string var, Expr e);
  static Program prob(Program left, Program right);
  static Program nondet(Program left, Program right);
  static Program seq(Program first, Program second);
  static Program ite(BExpr cond, Program then_branch, Program else_branch);
  static Program loop(BExpr cond, Program body);

  Kind kind() const;
  const std::string& var() const;  // Assign
  const Expr& expr() const;        // Assign
  const BExpr& cond() const;       // Ite, While
  const Program& first() const;    // Prob, Nondet, Seq, Ite (then), While (body)
  const Program& second() const;   // Prob, Nondet, Seq, Ite (else)

  friend bool operator==(const Program& a, const Program& b);

  struct Node;

 private:
  explicit Program(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Pretty-printer producing parseable surface syntax.
std::string to_string(const Program& p, int indent = 0);

/// {pre} program {post} with threshold beta, kept exact.
struct VerificationTask {
  Program program = Program::skip();
  BExpr pre = BExpr::top();
  BExpr post = BExpr::top();
  Rational beta = 0;
  bool has_bound = false;
};

}  // namespace tb
