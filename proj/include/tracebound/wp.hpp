#pragma once

#include "tracebound/expr.hpp"
#include "tracebound/statement.hpp"

namespace tb {

/// Weakest precondition: assignment substitutes, assume B gives B -> q,
/// everything else is the identity.
BExpr hoare_wp(const Statement& s, const BExpr& q);

/// Conjunctive variant: assume B gives B /\ q. A state satisfies
/// path_wp(s, q) iff executing s does not block and lands in q.
BExpr path_wp(const Statement& s, const BExpr& q);

}  // namespace tb
