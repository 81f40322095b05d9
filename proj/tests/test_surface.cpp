#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace tb;
using namespace tb::testing;

TEST_CASE("skip parses to skip") { CHECK(parse_program("skip") == Program::skip()); }

TEST_CASE("probabilistic choice after an assignment") {
  Program p = parse_program("x := 0; { c := 0 } <+> { skip }");
  Program want = Program::seq(Program::assign("x", Expr::lit(0)),
                              Program::prob(Program::assign("c", Expr::lit(0)), Program::skip()));
  CHECK(p == want);
}

TEST_CASE("loop with a coin in the body") {
  Program p = parse_program("while c > 0 do { { x := x + 1 } <+> { skip }; c := c - 1 }");
  Program body = Program::seq(Program::prob(Program::assign("x", Expr::var("x") + Expr::lit(1)), Program::skip()),
                              Program::assign("c", Expr::var("c") - Expr::lit(1)));
  CHECK(p == Program::loop(BExpr::cmp(CmpOp::Gt, Expr::var("c"), Expr::lit(0)), body));
}

TEST_CASE("nondeterministic choice and conditionals") {
  Program p = parse_program("{ x := 1 } [] { if x > 0 then { y := 1 } }");
  REQUIRE(p.kind() == Program::Kind::Nondet);
  CHECK(p.second().kind() == Program::Kind::Ite);
  CHECK(p.second().second() == Program::skip());
}

TEST_CASE("operator precedence") {
  CHECK(parse_expr("1 + 2 * x") == Expr::lit(1) + Expr::lit(2) * Expr::var("x"));
  CHECK(parse_expr("a - b - c") == (Expr::var("a") - Expr::var("b")) - Expr::var("c"));
  BExpr b = parse_bexpr("x > 0 || y > 0 && z > 0");
  CHECK(b.kind() == BExpr::Kind::Or);
  CHECK(b.b().kind() == BExpr::Kind::And);
  CHECK(parse_bexpr("x = 1") == parse_bexpr("x == 1"));
}

TEST_CASE("task file") {
  VerificationTask t = task_file("limit.task");
  CHECK(t.pre == BExpr::top());
  CHECK(t.post == BExpr::cmp(CmpOp::Eq, Expr::var("x"), Expr::lit(0)));
  CHECK(t.has_bound);
  CHECK(t.beta == Rational(1, 2));
}

TEST_CASE("decimal bound is exact") {
  VerificationTask t = parse_task("pre true; prog { skip } post true; bound 0.375;");
  CHECK(t.beta == Rational(3, 8));
  CHECK(parse_task("pre true; prog { skip } post true; bound 3/4;").beta == Rational(3, 4));
}

TEST_CASE("bound outside the unit interval is rejected") {
  CHECK_THROWS_AS(parse_task("pre true; prog { skip } post true; bound 1.5;"), ParseError);
}

TEST_CASE("bound is optional") { CHECK_FALSE(parse_task("pre true; prog { skip } post true;").has_bound); }

TEST_CASE("parse errors carry a position") {
  try {
    parse_program("x := ;");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() >= 6);
  }
  CHECK_THROWS_AS(parse_task("pre true; prog { skip }"), ParseError);
  CHECK_THROWS_AS(parse_program("x := 1 <+> y := 2"), ParseError);
}

namespace {

struct Gen {
  std::mt19937 rng;
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
  std::string var() { return std::string(1, "xyc"[pick(3)]); }
  Expr expr(int d) {
    if (d == 0 || pick(3) == 0) return pick(2) ? Expr::var(var()) : Expr::lit(pick(7) - 3);
    // Products need a literal factor; the language is linear.
    if (pick(3) == 0) return Expr::binary(Expr::Kind::Mul, expr(d - 1), Expr::lit(pick(5)));
    return Expr::binary(pick(2) ? Expr::Kind::Add : Expr::Kind::Sub, expr(d - 1), expr(d - 1));
  }
  BExpr bexpr(int d) {
    switch (d == 0 ? 0 : pick(4)) {
      case 1:
        return BExpr::negate(bexpr(d - 1));
      case 2:
        return BExpr::conj(bexpr(d - 1), bexpr(d - 1));
      case 3:
        return BExpr::disj(bexpr(d - 1), bexpr(d - 1));
      default:
        return BExpr::cmp(static_cast<CmpOp>(pick(6)), expr(1), expr(1));
    }
  }
  Program program(int d) {
    switch (d == 0 ? pick(2) : pick(7)) {
      case 0:
        return Program::skip();
      case 1:
        return Program::assign(var(), expr(2));
      case 2:
        return Program::prob(program(d - 1), program(d - 1));
      case 3:
        return Program::nondet(program(d - 1), program(d - 1));
      case 4:
        return Program::seq(program(d - 1), program(d - 1));
      case 5:
        return Program::ite(bexpr(2), program(d - 1), program(d - 1));
      default:
        return Program::loop(bexpr(2), program(d - 1));
    }
  }
};

// Sequencing is associative in the surface syntax; compare flattened shapes.
void flatten(const Program& p, std::vector<Program>& out) {
  if (p.kind() == Program::Kind::Seq) {
    flatten(p.first(), out);
    flatten(p.second(), out);
  } else {
    out.push_back(p);
  }
}

bool same_shape(const Program& a, const Program& b) {
  std::vector<Program> fa, fb;
  flatten(a, fa);
  flatten(b, fb);
  if (fa.size() != fb.size()) return false;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    const Program &x = fa[i], &y = fb[i];
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
      case Program::Kind::Skip:
        break;
      case Program::Kind::Assign:
        if (x.var() != y.var() || !(x.expr() == y.expr())) return false;
        break;
      case Program::Kind::While:
        if (!(x.cond() == y.cond()) || !same_shape(x.first(), y.first())) return false;
        break;
      case Program::Kind::Ite:
        if (!(x.cond() == y.cond())) return false;
        [[fallthrough]];
      default:
        if (!same_shape(x.first(), y.first()) || !same_shape(x.second(), y.second())) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("printing and parsing round-trips on random programs") {
  Gen g{std::mt19937(7)};
  for (int i = 0; i < 300; ++i) {
    Program p = g.program(4);
    std::string text = to_string(p);
    Program q = parse_program(text);
    INFO(text);
    CHECK(same_shape(p, q));
    CHECK(to_string(q) == text);
  }
}
