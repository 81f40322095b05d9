#include "tracebound/wp.hpp"

namespace tb {

BExpr hoare_wp(const Statement& s, const BExpr& q) {
  switch (s.kind()) {
    case Statement::Kind::Assign:
      return simplify(substitute(q, s.var(), s.expr()));
    case Statement::Kind::Assume:
      return simplify(BExpr::implies(s.cond(), q));
    default:
      return q;
  }
}

BExpr path_wp(const Statement& s, const BExpr& q) {
  switch (s.kind()) {
    case Statement::Kind::Assign:
      return simplify(substitute(q, s.var(), s.expr()));
    case Statement::Kind::Assume:
      return simplify(BExpr::conj(s.cond(), q));
    default:
      return q;
  }
}

}  // namespace tb
