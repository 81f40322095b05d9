#include "tracebound/expr.hpp"

#include "tracebound/valuation.hpp"

#include <algorithm>
#include <stdexcept>

namespace tb {

struct Expr::Node {
  Kind kind;
  Int value = 0;
  std::string name;
  Expr lhs = Expr(nullptr);
  Expr rhs = Expr(nullptr);
};

Expr Expr::lit(Int value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lit;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs) {
  if (kind == Kind::Lit || kind == Kind::Var) throw std::invalid_argument("Expr::binary: not a binary kind");
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
Int Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const Expr& Expr::lhs() const { return node_->lhs; }
const Expr& Expr::rhs() const { return node_->rhs; }
bool Expr::is_binary() const { return node_->kind != Kind::Lit && node_->kind != Kind::Var; }

struct BExpr::Node {
  Kind kind;
  CmpOp op = CmpOp::Eq;
  Expr left = Expr::lit(0);
  Expr right = Expr::lit(0);
  BExpr a = BExpr(nullptr);
  BExpr b = BExpr(nullptr);
};

BExpr BExpr::top() {
  static const BExpr t = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::True;
    return BExpr(std::move(n));
  }();
  return t;
}

BExpr BExpr::bottom() {
  static const BExpr f = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::False;
    return BExpr(std::move(n));
  }();
  return f;
}

BExpr BExpr::cmp(CmpOp op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Cmp;
  n->op = op;
  n->left = std::move(lhs);
  n->right = std::move(rhs);
  return BExpr(std::move(n));
}

BExpr BExpr::negate(BExpr b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->a = std::move(b);
  return BExpr(std::move(n));
}

BExpr BExpr::conj(BExpr a, BExpr b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->a = std::move(a);
  n->b = std::move(b);
  return BExpr(std::move(n));
}

BExpr BExpr::disj(BExpr a, BExpr b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->a = std::move(a);
  n->b = std::move(b);
  return BExpr(std::move(n));
}

BExpr BExpr::implies(BExpr a, BExpr b) { return disj(negate(std::move(a)), std::move(b)); }

BExpr BExpr::conj_all(const std::vector<BExpr>& parts) {
  if (parts.empty()) return top();
  BExpr acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = conj(parts[i], acc);
  return acc;
}

BExpr BExpr::disj_all(const std::vector<BExpr>& parts) {
  if (parts.empty()) return bottom();
  BExpr acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = disj(parts[i], acc);
  return acc;
}

BExpr::Kind BExpr::kind() const { return node_->kind; }
CmpOp BExpr::op() const { return node_->op; }
const Expr& BExpr::left() const { return node_->left; }
const Expr& BExpr::right() const { return node_->right; }
const BExpr& BExpr::sub() const { return node_->a; }
const BExpr& BExpr::a() const { return node_->a; }
const BExpr& BExpr::b() const { return node_->b; }

// ---------------------------------------------------------------- ordering

int compare(const Expr& a, const Expr& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Expr::Kind::Lit:
      return a.value() < b.value() ? -1 : (a.value() > b.value() ? 1 : 0);
    case Expr::Kind::Var: {
      int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    default:
      if (int c = compare(a.lhs(), b.lhs())) return c;
      return compare(a.rhs(), b.rhs());
  }
}

int compare(const BExpr& a, const BExpr& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case BExpr::Kind::True:
    case BExpr::Kind::False:
      return 0;
    case BExpr::Kind::Cmp:
      if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
      if (int c = compare(a.left(), b.left())) return c;
      return compare(a.right(), b.right());
    case BExpr::Kind::Not:
      return compare(a.sub(), b.sub());
    default:
      if (int c = compare(a.a(), b.a())) return c;
      return compare(a.b(), b.b());
  }
}

// ---------------------------------------------------------------- printing

namespace {

int prec(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
      return 2;
    default:
      return 3;
  }
}

std::string print(const Expr& e, int min_prec) {
  std::string s;
  switch (e.kind()) {
    case Expr::Kind::Lit:
      s = std::to_string(e.value());
      break;
    case Expr::Kind::Var:
      s = e.name();
      break;
    default: {
      int p = prec(e);
      const char* op = e.kind() == Expr::Kind::Add ? " + " : (e.kind() == Expr::Kind::Sub ? " - " : " * ");
      s = print(e.lhs(), p) + op + print(e.rhs(), p + 1);
      break;
    }
  }
  if (prec(e) < min_prec) return "(" + s + ")";
  return s;
}

int bprec(const BExpr& b) {
  switch (b.kind()) {
    case BExpr::Kind::Or:
      return 1;
    case BExpr::Kind::And:
      return 2;
    case BExpr::Kind::Not:
      return 3;
    default:
      return 4;
  }
}

std::string print(const BExpr& b, int min_prec) {
  std::string s;
  switch (b.kind()) {
    case BExpr::Kind::True:
      s = "true";
      break;
    case BExpr::Kind::False:
      s = "false";
      break;
    case BExpr::Kind::Cmp:
      s = print(b.left(), 0) + " " + to_string(b.op()) + " " + print(b.right(), 0);
      break;
    case BExpr::Kind::Not:
      s = "!" + print(b.sub(), 5);
      break;
    case BExpr::Kind::And:
      s = print(b.a(), 2) + " && " + print(b.b(), 3);
      break;
    case BExpr::Kind::Or:
      s = print(b.a(), 1) + " || " + print(b.b(), 2);
      break;
  }
  // Comparisons are parenthesized under negation for readability.
  if (bprec(b) < min_prec || (min_prec == 5 && b.kind() == BExpr::Kind::Cmp)) return "(" + s + ")";
  return s;
}

std::string smt_lit(Int v) {
  if (v < 0) {
    // Negation of INT64_MIN overflows; print via unsigned magnitude.
    auto mag = static_cast<std::uint64_t>(0) - static_cast<std::uint64_t>(v);
    return "(- " + std::to_string(mag) + ")";
  }
  return std::to_string(v);
}

}  // namespace

std::string to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

std::string to_string(const Expr& e) { return print(e, 0); }
std::string to_string(const BExpr& b) { return print(b, 0); }

std::string to_smt(const Expr& e, const std::function<std::string(const std::string&)>& rename) {
  switch (e.kind()) {
    case Expr::Kind::Lit:
      return smt_lit(e.value());
    case Expr::Kind::Var:
      return rename ? rename(e.name()) : e.name();
    case Expr::Kind::Add:
      return "(+ " + to_smt(e.lhs(), rename) + " " + to_smt(e.rhs(), rename) + ")";
    case Expr::Kind::Sub:
      return "(- " + to_smt(e.lhs(), rename) + " " + to_smt(e.rhs(), rename) + ")";
    case Expr::Kind::Mul:
      return "(* " + to_smt(e.lhs(), rename) + " " + to_smt(e.rhs(), rename) + ")";
  }
  return "";
}

std::string to_smt(const BExpr& b, const std::function<std::string(const std::string&)>& rename) {
  switch (b.kind()) {
    case BExpr::Kind::True:
      return "true";
    case BExpr::Kind::False:
      return "false";
    case BExpr::Kind::Cmp: {
      std::string l = to_smt(b.left(), rename), r = to_smt(b.right(), rename);
      switch (b.op()) {
        case CmpOp::Eq: return "(= " + l + " " + r + ")";
        case CmpOp::Ne: return "(not (= " + l + " " + r + "))";
        case CmpOp::Lt: return "(< " + l + " " + r + ")";
        case CmpOp::Le: return "(<= " + l + " " + r + ")";
        case CmpOp::Gt: return "(> " + l + " " + r + ")";
        case CmpOp::Ge: return "(>= " + l + " " + r + ")";
      }
      return "";
    }
    case BExpr::Kind::Not:
      return "(not " + to_smt(b.sub(), rename) + ")";
    case BExpr::Kind::And:
      return "(and " + to_smt(b.a(), rename) + " " + to_smt(b.b(), rename) + ")";
    case BExpr::Kind::Or:
      return "(or " + to_smt(b.a(), rename) + " " + to_smt(b.b(), rename) + ")";
  }
  return "";
}

// ---------------------------------------------------------------- variables

void collect_vars(const Expr& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case Expr::Kind::Lit:
      return;
    case Expr::Kind::Var:
      out.insert(e.name());
      return;
    default:
      collect_vars(e.lhs(), out);
      collect_vars(e.rhs(), out);
  }
}

void collect_vars(const BExpr& b, std::set<std::string>& out) {
  switch (b.kind()) {
    case BExpr::Kind::True:
    case BExpr::Kind::False:
      return;
    case BExpr::Kind::Cmp:
      collect_vars(b.left(), out);
      collect_vars(b.right(), out);
      return;
    case BExpr::Kind::Not:
      collect_vars(b.sub(), out);
      return;
    default:
      collect_vars(b.a(), out);
      collect_vars(b.b(), out);
  }
}

std::set<std::string> vars_of(const BExpr& b) {
  std::set<std::string> out;
  collect_vars(b, out);
  return out;
}

Expr substitute(const Expr& e, const std::string& var, const Expr& by) {
  switch (e.kind()) {
    case Expr::Kind::Lit:
      return e;
    case Expr::Kind::Var:
      return e.name() == var ? by : e;
    default:
      return Expr::binary(e.kind(), substitute(e.lhs(), var, by), substitute(e.rhs(), var, by));
  }
}

BExpr substitute(const BExpr& b, const std::string& var, const Expr& by) {
  switch (b.kind()) {
    case BExpr::Kind::True:
    case BExpr::Kind::False:
      return b;
    case BExpr::Kind::Cmp:
      return BExpr::cmp(b.op(), substitute(b.left(), var, by), substitute(b.right(), var, by));
    case BExpr::Kind::Not:
      return BExpr::negate(substitute(b.sub(), var, by));
    case BExpr::Kind::And:
      return BExpr::conj(substitute(b.a(), var, by), substitute(b.b(), var, by));
    case BExpr::Kind::Or:
      return BExpr::disj(substitute(b.a(), var, by), substitute(b.b(), var, by));
  }
  return b;
}

namespace {

Expr rename_expr(const Expr& e, const std::map<std::string, std::string>& names) {
  switch (e.kind()) {
    case Expr::Kind::Lit:
      return e;
    case Expr::Kind::Var: {
      auto it = names.find(e.name());
      return it == names.end() ? e : Expr::var(it->second);
    }
    default:
      return Expr::binary(e.kind(), rename_expr(e.lhs(), names), rename_expr(e.rhs(), names));
  }
}

}  // namespace

BExpr rename(const BExpr& b, const std::map<std::string, std::string>& names) {
  switch (b.kind()) {
    case BExpr::Kind::True:
    case BExpr::Kind::False:
      return b;
    case BExpr::Kind::Cmp:
      return BExpr::cmp(b.op(), rename_expr(b.left(), names), rename_expr(b.right(), names));
    case BExpr::Kind::Not:
      return BExpr::negate(rename(b.sub(), names));
    case BExpr::Kind::And:
      return BExpr::conj(rename(b.a(), names), rename(b.b(), names));
    case BExpr::Kind::Or:
      return BExpr::disj(rename(b.a(), names), rename(b.b(), names));
  }
  return b;
}

// ---------------------------------------------------------------- simplification

namespace {

/// sum(coef * var) + constant
struct Linear {
  std::map<std::string, Int> coef;
  Int constant = 0;
};

bool add_ok(Int a, Int b, Int& out) { return !__builtin_add_overflow(a, b, &out); }
bool mul_ok(Int a, Int b, Int& out) { return !__builtin_mul_overflow(a, b, &out); }

bool scale(Linear& l, Int k) {
  for (auto& [v, c] : l.coef)
    if (!mul_ok(c, k, c)) return false;
  return mul_ok(l.constant, k, l.constant);
}

bool merge(Linear& into, const Linear& from, Int sign) {
  for (const auto& [v, c] : from.coef) {
    Int term;
    if (!mul_ok(c, sign, term)) return false;
    if (!add_ok(into.coef[v], term, into.coef[v])) return false;
  }
  Int term;
  if (!mul_ok(from.constant, sign, term)) return false;
  return add_ok(into.constant, term, into.constant);
}

std::optional<Linear> linearize(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Lit: {
      Linear l;
      l.constant = e.value();
      return l;
    }
    case Expr::Kind::Var: {
      Linear l;
      l.coef[e.name()] = 1;
      return l;
    }
    case Expr::Kind::Add:
    case Expr::Kind::Sub: {
      auto a = linearize(e.lhs());
      auto b = linearize(e.rhs());
      if (!a || !b) return std::nullopt;
      if (!merge(*a, *b, e.kind() == Expr::Kind::Add ? 1 : -1)) return std::nullopt;
      return a;
    }
    case Expr::Kind::Mul: {
      auto a = linearize(e.lhs());
      auto b = linearize(e.rhs());
      if (!a || !b) return std::nullopt;
      auto is_const = [](const Linear& l) {
        return std::all_of(l.coef.begin(), l.coef.end(), [](const auto& kv) { return kv.second == 0; });
      };
      if (is_const(*a)) {
        if (!scale(*b, a->constant)) return std::nullopt;
        return b;
      }
      if (is_const(*b)) {
        if (!scale(*a, b->constant)) return std::nullopt;
        return a;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

void drop_zeros(Linear& l) {
  for (auto it = l.coef.begin(); it != l.coef.end();)
    it = it->second == 0 ? l.coef.erase(it) : std::next(it);
}

/// Rebuilds sum of terms; the constant is appended unless `with_constant` is
/// false. An empty sum yields literal 0.
Expr build_terms(const Linear& l, bool with_constant) {
  std::optional<Expr> acc;
  for (const auto& [v, c] : l.coef) {
    if (c == 0) continue;
    Int mag = c < 0 ? -c : c;
    Expr term = mag == 1 ? Expr::var(v) : Expr::lit(mag) * Expr::var(v);
    if (!acc) {
      acc = c < 0 ? (mag == 1 ? Expr::lit(-1) * Expr::var(v) : Expr::lit(c) * Expr::var(v)) : term;
    } else {
      acc = c < 0 ? *acc - term : *acc + term;
    }
  }
  if (with_constant && l.constant != 0) {
    if (!acc) return Expr::lit(l.constant);
    if (l.constant < 0 && l.constant != INT64_MIN) return *acc - Expr::lit(-l.constant);
    return *acc + Expr::lit(l.constant);
  }
  return acc ? *acc : Expr::lit(with_constant ? l.constant : 0);
}

CmpOp negate_op(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Le;
    case CmpOp::Ge: return CmpOp::Lt;
  }
  return op;
}

bool holds(CmpOp op, Int a, Int b) {
  switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
  }
  return false;
}

BExpr simplify_cmp(CmpOp op, const Expr& left, const Expr& right) {
  auto l = linearize(left);
  auto r = linearize(right);
  if (!l || !r) return BExpr::cmp(op, simplify(left), simplify(right));
  Linear diff = *l;
  if (!merge(diff, *r, -1)) return BExpr::cmp(op, simplify(left), simplify(right));
  drop_zeros(diff);
  if (diff.coef.empty()) return holds(op, diff.constant, 0) ? BExpr::top() : BExpr::bottom();
  // terms op -constant; leading coefficient made positive for a canonical form.
  Int k;
  if (!mul_ok(diff.constant, -1, k)) return BExpr::cmp(op, simplify(left), simplify(right));
  if (diff.coef.begin()->second < 0) {
    if (!scale(diff, -1) || !mul_ok(k, -1, k)) return BExpr::cmp(op, simplify(left), simplify(right));
    switch (op) {
      case CmpOp::Lt: op = CmpOp::Gt; break;
      case CmpOp::Le: op = CmpOp::Ge; break;
      case CmpOp::Gt: op = CmpOp::Lt; break;
      case CmpOp::Ge: op = CmpOp::Le; break;
      default: break;
    }
  }
  return BExpr::cmp(op, build_terms(diff, false), Expr::lit(k));
}

void flatten(const BExpr& b, BExpr::Kind kind, std::vector<BExpr>& out) {
  if (b.kind() == kind) {
    flatten(b.a(), kind, out);
    flatten(b.b(), kind, out);
  } else {
    out.push_back(b);
  }
}

BExpr nnf(const BExpr& b, bool negated);

BExpr simplify_junction(BExpr::Kind kind, const std::vector<BExpr>& raw) {
  const bool is_and = kind == BExpr::Kind::And;
  const BExpr unit = is_and ? BExpr::top() : BExpr::bottom();
  const BExpr absorbing = is_and ? BExpr::bottom() : BExpr::top();
  std::vector<BExpr> parts;
  for (const auto& p : raw) {
    std::vector<BExpr> flat;
    flatten(p, kind, flat);
    for (auto& f : flat) {
      if (f.kind() == absorbing.kind()) return absorbing;
      if (f.kind() == unit.kind()) continue;
      parts.push_back(f);
    }
  }
  std::sort(parts.begin(), parts.end(), [](const BExpr& x, const BExpr& y) { return compare(x, y) < 0; });
  parts.erase(std::unique(parts.begin(), parts.end(), [](const BExpr& x, const BExpr& y) { return compare(x, y) == 0; }),
              parts.end());
  // Complementary comparisons.
  for (const auto& p : parts) {
    if (p.kind() != BExpr::Kind::Cmp) continue;
    BExpr np = BExpr::cmp(negate_op(p.op()), p.left(), p.right());
    if (std::binary_search(parts.begin(), parts.end(), np, [](const BExpr& x, const BExpr& y) { return compare(x, y) < 0; }))
      return absorbing;
  }
  if (parts.empty()) return unit;
  return is_and ? BExpr::conj_all(parts) : BExpr::disj_all(parts);
}

BExpr nnf(const BExpr& b, bool negated) {
  switch (b.kind()) {
    case BExpr::Kind::True:
      return negated ? BExpr::bottom() : BExpr::top();
    case BExpr::Kind::False:
      return negated ? BExpr::top() : BExpr::bottom();
    case BExpr::Kind::Cmp:
      return simplify_cmp(negated ? negate_op(b.op()) : b.op(), b.left(), b.right());
    case BExpr::Kind::Not:
      return nnf(b.sub(), !negated);
    case BExpr::Kind::And:
    case BExpr::Kind::Or: {
      bool is_and = (b.kind() == BExpr::Kind::And) != negated;
      std::vector<BExpr> parts{nnf(b.a(), negated), nnf(b.b(), negated)};
      return simplify_junction(is_and ? BExpr::Kind::And : BExpr::Kind::Or, parts);
    }
  }
  return b;
}

}  // namespace

Expr simplify(const Expr& e) {
  auto l = linearize(e);
  if (!l) {
    if (!e.is_binary()) return e;
    return Expr::binary(e.kind(), simplify(e.lhs()), simplify(e.rhs()));
  }
  drop_zeros(*l);
  return build_terms(*l, true);
}

BExpr simplify(const BExpr& b) { return nnf(b, false); }

bool is_linear(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Lit:
    case Expr::Kind::Var:
      return true;
    case Expr::Kind::Mul: {
      std::set<std::string> a, b;
      collect_vars(e.lhs(), a);
      collect_vars(e.rhs(), b);
      return (a.empty() || b.empty()) && is_linear(e.lhs()) && is_linear(e.rhs());
    }
    default:
      return is_linear(e.lhs()) && is_linear(e.rhs());
  }
}

bool is_linear(const BExpr& b) {
  switch (b.kind()) {
    case BExpr::Kind::True:
    case BExpr::Kind::False:
      return true;
    case BExpr::Kind::Cmp:
      return is_linear(b.left()) && is_linear(b.right());
    case BExpr::Kind::Not:
      return is_linear(b.sub());
    default:
      return is_linear(b.a()) && is_linear(b.b());
  }
}

// ---------------------------------------------------------------- evaluation

Int eval(const Expr& e, const Valuation& v) {
  if (v.is_bottom()) throw std::logic_error("eval: expression evaluated on bottom");
  auto wrap = [](std::uint64_t x) { return static_cast<Int>(x); };
  switch (e.kind()) {
    case Expr::Kind::Lit:
      return e.value();
    case Expr::Kind::Var:
      return v.get(e.name());
    case Expr::Kind::Add:
      return wrap(static_cast<std::uint64_t>(eval(e.lhs(), v)) + static_cast<std::uint64_t>(eval(e.rhs(), v)));
    case Expr::Kind::Sub:
      return wrap(static_cast<std::uint64_t>(eval(e.lhs(), v)) - static_cast<std::uint64_t>(eval(e.rhs(), v)));
    case Expr::Kind::Mul:
      return wrap(static_cast<std::uint64_t>(eval(e.lhs(), v)) * static_cast<std::uint64_t>(eval(e.rhs(), v)));
  }
  return 0;
}

bool eval(const BExpr& b, const Valuation& v) {
  if (v.is_bottom()) return false;
  switch (b.kind()) {
    case BExpr::Kind::True:
      return true;
    case BExpr::Kind::False:
      return false;
    case BExpr::Kind::Cmp:
      return holds(b.op(), eval(b.left(), v), eval(b.right(), v));
    case BExpr::Kind::Not:
      return !eval(b.sub(), v);
    case BExpr::Kind::And:
      return eval(b.a(), v) && eval(b.b(), v);
    case BExpr::Kind::Or:
      return eval(b.a(), v) || eval(b.b(), v);
  }
  return false;
}

std::size_t size(const BExpr& b) {
  switch (b.kind()) {
    case BExpr::Kind::Not:
      return 1 + size(b.sub());
    case BExpr::Kind::And:
    case BExpr::Kind::Or:
      return 1 + size(b.a()) + size(b.b());
    default:
      return 1;
  }
}

}  // namespace tb
