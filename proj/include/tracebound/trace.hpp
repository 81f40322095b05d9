#pragma once

#include "tracebound/rational.hpp"
#include "tracebound/statement.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace tb {

/// Non-empty statement sequence.
class Trace {
 public:
  explicit Trace(std::vector<Symbol> symbols);
  Trace(std::initializer_list<Statement> statements);

  const std::vector<Symbol>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  const Statement& at(std::size_t i) const { return statement(symbols_.at(i)); }
  auto begin() const { return symbols_.begin(); }
  auto end() const { return symbols_.end(); }

  friend bool operator==(const Trace& a, const Trace& b) { return a.symbols_ == b.symbols_; }
  /// Length first, then lexicographic by statement order.
  friend bool operator<(const Trace& a, const Trace& b);

 private:
  std::vector<Symbol> symbols_;
};

Trace concat(const Trace& a, const Trace& b);
std::string to_string(const Trace& t);
std::vector<std::string> statement_strings(const Trace& t);

Valuation eval_trace(const Trace& t, const Valuation& v);

/// Number of probabilistic branch statements.
unsigned coin_count(const Trace& t);
/// (1/2)^coin_count
Rational trace_weight(const Trace& t);

/// pre /\ pathwp(t, !post): satisfiable iff t is violating.
BExpr path_condition(const Trace& t, const BExpr& pre, const BExpr& post);
/// Conjunction over members; the set must be non-empty.
BExpr path_condition_set(const std::vector<Trace>& ts, const BExpr& pre, const BExpr& post);

}  // namespace tb
