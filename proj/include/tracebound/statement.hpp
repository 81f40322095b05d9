#pragma once

#include "tracebound/expr.hpp"
#include "tracebound/valuation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tb {

/// Alphabet symbol of a control-flow automaton.
class Statement {
 public:
  enum class Kind { Skip, Assign, Assume, ProbL, ProbR, Nondet };

  static Statement skip();
  static Statement assign(std::string var, Expr e);
  static Statement assume(BExpr cond);
  static Statement prob_left(unsigned tag);
  static Statement prob_right(unsigned tag);
  static Statement nondet(unsigned tag);

  Kind kind() const { return kind_; }
  unsigned tag() const { return tag_; }
  const std::string& var() const { return var_; }
  const Expr& expr() const { return expr_; }
  const BExpr& cond() const { return cond_; }
  bool is_prob() const { return kind_ == Kind::ProbL || kind_ == Kind::ProbR; }

 private:
  Statement(Kind k) : kind_(k) {}
  Kind kind_;
  unsigned tag_ = 0;
  std::string var_;
  Expr expr_ = Expr::lit(0);
  BExpr cond_ = BExpr::top();
};

/// Constructor order (Skip < Assign < Assume < ProbL < ProbR < Nondet), then
/// fields in order, expressions structurally. The only tie-break order used
/// anywhere.
int compare(const Statement& a, const Statement& b);
inline bool operator==(const Statement& a, const Statement& b) { return compare(a, b) == 0; }
inline bool operator<(const Statement& a, const Statement& b) { return compare(a, b) < 0; }

std::string to_string(const Statement& s);

/// Statement semantics; Bottom is absorbing.
Valuation eval_statement(const Statement& s, const Valuation& v);

/// Interned statement handle. Equal statements share one symbol.
using Symbol = std::uint32_t;

/// Process-wide statement interning. Thread-safe.
Symbol intern(const Statement& s);
const Statement& statement(Symbol sym);
/// Statement order lifted to symbols.
bool symbol_less(Symbol a, Symbol b);
std::string symbol_string(Symbol sym);

}  // namespace tb
