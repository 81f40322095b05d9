#include "tracebound/trace.hpp"

#include "tracebound/wp.hpp"

#include <algorithm>
#include <stdexcept>

namespace tb {

Trace::Trace(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw std::invalid_argument("traces are non-empty");
}

Trace::Trace(std::initializer_list<Statement> statements) {
  for (const auto& s : statements) symbols_.push_back(intern(s));
  if (symbols_.empty()) throw std::invalid_argument("traces are non-empty");
}

bool operator<(const Trace& a, const Trace& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return symbol_less(a[i], b[i]);
  return false;
}

Trace concat(const Trace& a, const Trace& b) {
  std::vector<Symbol> s = a.symbols();
  s.insert(s.end(), b.begin(), b.end());
  return Trace(std::move(s));
}

std::string to_string(const Trace& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += "; ";
    out += symbol_string(t[i]);
  }
  return out;
}

std::vector<std::string> statement_strings(const Trace& t) {
  std::vector<std::string> out;
  for (Symbol s : t) out.push_back(symbol_string(s));
  return out;
}

Valuation eval_trace(const Trace& t, const Valuation& v) {
  Valuation cur = v;
  for (Symbol s : t) cur = eval_statement(statement(s), cur);
  return cur;
}

unsigned coin_count(const Trace& t) {
  return static_cast<unsigned>(std::count_if(t.begin(), t.end(), [](Symbol s) { return statement(s).is_prob(); }));
}

Rational trace_weight(const Trace& t) { return dyadic(coin_count(t)); }

BExpr path_condition(const Trace& t, const BExpr& pre, const BExpr& post) {
  BExpr q = simplify(BExpr::negate(post));
  for (std::size_t i = t.size(); i-- > 0;) q = path_wp(t.at(i), q);
  return simplify(BExpr::conj(pre, q));
}

BExpr path_condition_set(const std::vector<Trace>& ts, const BExpr& pre, const BExpr& post) {
  if (ts.empty()) throw std::invalid_argument("path_condition_set: empty set");
  std::vector<BExpr> parts;
  for (const auto& t : ts) parts.push_back(path_condition(t, pre, post));
  return simplify(BExpr::conj_all(parts));
}

}  // namespace tb
