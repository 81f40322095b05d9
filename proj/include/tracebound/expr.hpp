#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tb {

using Int = std::int64_t;

class Valuation;

/// Integer arithmetic expression. Immutable, cheap to copy (shared nodes).
class Expr {
 public:
  enum class Kind { Lit, Var, Add, Sub, Mul };

  static Expr lit(Int value);
  static Expr var(std::string name);
  static Expr binary(Kind kind, Expr lhs, Expr rhs);

  Kind kind() const;
  Int value() const;               // Lit only
  const std::string& name() const; // Var only
  const Expr& lhs() const;         // binary only
  const Expr& rhs() const;         // binary only
  bool is_binary() const;

  friend Expr operator+(Expr a, Expr b) { return binary(Kind::Add, std::move(a), std::move(b)); }
  friend Expr operator-(Expr a, Expr b) { return binary(Kind::Sub, std::move(a), std::move(b)); }
  friend Expr operator*(Expr a, Expr b) { return binary(Kind::Mul, std::move(a), std::move(b)); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

/// Boolean expression over comparisons of Expr.
class BExpr {
 public:
  enum class Kind { True, False, Cmp, Not, And, Or };

  static BExpr top();
  static BExpr bottom();
  static BExpr cmp(CmpOp op, Expr lhs, Expr rhs);
  static BExpr negate(BExpr b);
  static BExpr conj(BExpr a, BExpr b);
  static BExpr disj(BExpr a, BExpr b);
  /// a -> b, encoded as !a || b.
  static BExpr implies(BExpr a, BExpr b);
  /// Folds with the neutral element for an empty list.
  static BExpr conj_all(const std::vector<BExpr>& parts);
  static BExpr disj_all(const std::vector<BExpr>& parts);

  Kind kind() const;
  CmpOp op() const;           // Cmp only
  const Expr& left() const;   // Cmp only
  const Expr& right() const;  // Cmp only
  const BExpr& sub() const;   // Not only
  const BExpr& a() const;     // And / Or
  const BExpr& b() const;     // And / Or

 private:
  struct Node;
  explicit BExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Structural total order (-1, 0, 1). Used for interning and tie-breaking.
int compare(const Expr& a, const Expr& b);
int compare(const BExpr& a, const BExpr& b);
inline bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
inline bool operator==(const BExpr& a, const BExpr& b) { return compare(a, b) == 0; }
inline bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }
inline bool operator<(const BExpr& a, const BExpr& b) { return compare(a, b) < 0; }

/// Surface syntax; reparses to the same tree.
std::string to_string(const Expr& e);
std::string to_string(const BExpr& b);
std::string to_string(CmpOp op);

/// SMT-LIB 2 term. Variables are mapped through `rename` when given.
std::string to_smt(const Expr& e, const std::function<std::string(const std::string&)>& rename = {});
std::string to_smt(const BExpr& b, const std::function<std::string(const std::string&)>& rename = {});

void collect_vars(const Expr& e, std::set<std::string>& out);
void collect_vars(const BExpr& b, std::set<std::string>& out);
std::set<std::string> vars_of(const BExpr& b);

Expr substitute(const Expr& e, const std::string& var, const Expr& by);
BExpr substitute(const BExpr& b, const std::string& var, const Expr& by);
/// Simultaneous renaming of variables to other variables.
BExpr rename(const BExpr& b, const std::map<std::string, std::string>& names);

/// Constant folding and boolean-unit simplification; preserves equivalence.
Expr simplify(const Expr& e);
BExpr simplify(const BExpr& b);

/// True when no product has variables on both sides.
bool is_linear(const Expr& e);
bool is_linear(const BExpr& b);

/// Evaluation on a non-bottom valuation. Missing variables throw
/// std::out_of_range. Overflow wraps (two's complement).
Int eval(const Expr& e, const Valuation& v);
bool eval(const BExpr& b, const Valuation& v);

/// Number of nodes; used to prefer compact predicates.
std::size_t size(const BExpr& b);

}  // namespace tb
