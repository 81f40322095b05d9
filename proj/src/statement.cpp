#include "tracebound/statement.hpp"

#include <deque>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>

namespace tb {

Statement Statement::skip() { return Statement(Kind::Skip); }

Statement Statement::assign(std::string var, Expr e) {
  Statement s(Kind::Assign);
  s.var_ = std::move(var);
  s.expr_ = std::move(e);
  return s;
}

Statement Statement::assume(BExpr cond) {
  Statement s(Kind::Assume);
  s.cond_ = std::move(cond);
  return s;
}

Statement Statement::prob_left(unsigned tag) {
  Statement s(Kind::ProbL);
  s.tag_ = tag;
  return s;
}

Statement Statement::prob_right(unsigned tag) {
  Statement s(Kind::ProbR);
  s.tag_ = tag;
  return s;
}

Statement Statement::nondet(unsigned tag) {
  Statement s(Kind::Nondet);
  s.tag_ = tag;
  return s;
}

int compare(const Statement& a, const Statement& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Statement::Kind::Skip:
      return 0;
    case Statement::Kind::Assign: {
      if (int c = a.var().compare(b.var())) return c < 0 ? -1 : 1;
      return compare(a.expr(), b.expr());
    }
    case Statement::Kind::Assume:
      return compare(a.cond(), b.cond());
    default:
      return a.tag() < b.tag() ? -1 : (a.tag() > b.tag() ? 1 : 0);
  }
}

std::string to_string(const Statement& s) {
  switch (s.kind()) {
    case Statement::Kind::Skip:
      return "skip";
    case Statement::Kind::Assign:
      return s.var() + " := " + to_string(s.expr());
    case Statement::Kind::Assume:
      return "assume " + to_string(s.cond());
    case Statement::Kind::ProbL:
      return "probL(" + std::to_string(s.tag()) + ")";
    case Statement::Kind::ProbR:
      return "probR(" + std::to_string(s.tag()) + ")";
    case Statement::Kind::Nondet:
      return "nondet(" + std::to_string(s.tag()) + ")";
  }
  return "?";
}

Valuation eval_statement(const Statement& s, const Valuation& v) {
  if (v.is_bottom()) return v;
  switch (s.kind()) {
    case Statement::Kind::Assign:
      return v.with(s.var(), eval(s.expr(), v));
    case Statement::Kind::Assume:
      return eval(s.cond(), v) ? v : Valuation::bottom_value();
    default:
      return v;
  }
}

namespace {

struct StatementLess {
  bool operator()(const Statement& a, const Statement& b) const { return compare(a, b) < 0; }
};

class Pool {
 public:
  Symbol intern(const Statement& s) {
    {
      std::shared_lock lock(mu_);
      auto it = ids_.find(s);
      if (it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    auto [it, inserted] = ids_.emplace(s, static_cast<Symbol>(items_.size()));
    if (inserted) items_.push_back(s);
    return it->second;
  }

  const Statement& get(Symbol sym) const {
    std::shared_lock lock(mu_);
    if (sym >= items_.size()) throw std::out_of_range("unknown statement symbol");
    // deque keeps element addresses stable across push_back.
    return items_[sym];
  }

 private:
  mutable std::shared_mutex mu_;
  std::map<Statement, Symbol, StatementLess> ids_;
  std::deque<Statement> items_;
};

Pool& pool() {
  static Pool p;
  return p;
}

}  // namespace

Symbol intern(const Statement& s) { return pool().intern(s); }
const Statement& statement(Symbol sym) { return pool().get(sym); }
bool symbol_less(Symbol a, Symbol b) { return a != b && compare(statement(a), statement(b)) < 0; }
std::string symbol_string(Symbol sym) { return to_string(statement(sym)); }

}  // namespace tb
