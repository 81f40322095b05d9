#include "support.hpp"

#include "tracebound/automata.hpp"
#include "tracebound/logic.hpp"

#include <doctest.h>

using namespace tb;
using namespace tb::testing;

TEST_CASE("skip compiles to one edge") {
  Pcfa a = program_to_pcfa(Program::skip());
  CHECK(a.num_locations() == 2);
  CHECK(a.init() == 0);
  CHECK(a.end() == 1);
  REQUIRE(a.out(0).size() == 1);
  CHECK(a.out(0).begin()->first == sym(Statement::skip()));
  CHECK(a.out(0).begin()->second == 1);
  CHECK(a.out(1).empty());
}

TEST_CASE("probabilistic choice gets a fresh tag and a shared exit") {
  Pcfa a = program_to_pcfa(parse_program("{ c := 0 } <+> { skip }"));
  check_invariants(a);
  const auto& out = a.out(a.init());
  REQUIRE(out.size() == 2);
  Location l = out.at(sym(Statement::prob_left(0)));
  Location r = out.at(sym(Statement::prob_right(0)));
  CHECK(a.out(l).at(sym(assign("c", "0"))) == a.end());
  CHECK(a.out(r).at(sym(Statement::skip())) == a.end());
}

TEST_CASE("counter-loop alphabet") {
  Pcfa a = limit_pcfa();
  check_invariants(a);
  Alphabet want;
  for (const Statement& s : {assign("x", "0"), Statement::prob_left(0), Statement::prob_right(0), assign("c", "0"),
                             Statement::skip(), assume("c > 0"), assume("!(c > 0)"), Statement::prob_left(1),
                             Statement::prob_right(1), assign("x", "x + 1"), assign("c", "c - 1")})
    want.insert(sym(s));
  CHECK(a.alphabet() == want);
  CHECK(is_valid_pcfa(GeneralPcfa::from_pcfa(a)));
  CHECK(a.accepts(limit_trace4().symbols()));
  CHECK(a.accepts(limit_trace5().symbols()));
  for (const auto& t : limit_c2_traces()) CHECK(a.accepts(t.symbols()));
}

TEST_CASE("nondeterministic choice") {
  Pcfa a = program_to_pcfa(parse_program("{ x := 1 } [] { x := 2 }"));
  check_invariants(a);
  const auto& out = a.out(a.init());
  REQUIRE(out.size() == 2);
  std::set<unsigned> tags;
  for (const auto& [s, l] : out) {
    CHECK(statement(s).kind() == Statement::Kind::Nondet);
    tags.insert(statement(s).tag());
    CHECK(a.out(l).size() == 1);
  }
  CHECK(tags.size() == 2);
}

TEST_CASE("statement evaluation") {
  Valuation c0({{"c", 0}});
  CHECK(eval_statement(assume("c > 0"), c0).is_bottom());
  CHECK(eval_statement(assume("c <= 0"), c0) == c0);
  Valuation x3({{"x", 3}});
  CHECK(eval_statement(Statement::prob_left(1), x3) == x3);
  CHECK(eval_statement(Statement::nondet(4), x3) == x3);
  CHECK(eval_statement(Statement::skip(), x3) == x3);
  CHECK(eval_statement(assign("x", "x + 1"), Valuation::bottom_value()).is_bottom());
  CHECK(eval_statement(assign("x", "x * 2 - 1"), x3).get("x") == 5);
}

TEST_CASE("trace evaluation") {
  for (Int x : {-3, 0, 4})
    for (Int c : {-1, 0, 7}) {
      Valuation v({{"x", x}, {"c", c}});
      Valuation out = eval_trace(limit_trace4(), v);
      REQUIRE_FALSE(out.is_bottom());
      CHECK(out.get("x") == 0);
      CHECK(out.get("c") == 0);
      CHECK(eval_trace(limit_trace5(), v).is_bottom());
    }
  Valuation v({{"x", 9}});
  CHECK(eval_trace(Trace{Statement::skip()}, v) == v);
}

TEST_CASE("trace weights") {
  CHECK(trace_weight(Trace{Statement::skip(), assign("x", "1")}) == 1);
  for (const auto& t : limit_c2_traces()) CHECK(trace_weight(t) == Rational(1, 8));
  Rational sum = 0;
  for (const auto& t : limit_c2_traces()) sum += trace_weight(t);
  CHECK(sum == Rational(3, 8));
  CHECK(trace_weight(Trace{Statement::prob_left(0), Statement::nondet(2), Statement::prob_right(1)}) == Rational(1, 4));
}

TEST_CASE("path conditions") {
  Logic logic;
  BExpr post = parse_bexpr("x == 0");
  BExpr joint = path_condition_set(limit_c2_traces(), BExpr::top(), post);
  CHECK(logic.equivalent(joint, parse_bexpr("c == 2")));
  SatAnswer m = logic.check_sat(joint);
  REQUIRE(m.sat);
  CHECK(m.model.get("c") == 2);
  for (const auto& t : limit_c2_traces())
    CHECK(logic.is_sat(path_condition(t, BExpr::top(), post)));
  CHECK_FALSE(logic.is_sat(path_condition(limit_trace5(), BExpr::top(), post)));
  CHECK_FALSE(logic.is_sat(path_condition(limit_trace4(), BExpr::top(), post)));
  CHECK(logic.equivalent(path_condition_set({limit_c2_traces()[0]}, BExpr::top(), post),
                         path_condition(limit_c2_traces()[0], BExpr::top(), post)));
}

TEST_CASE("path condition of trace 4 agrees with evaluation") {
  Logic logic;
  BExpr post = parse_bexpr("x == 0");
  BExpr pc = path_condition(limit_trace4(), BExpr::top(), post);
  for (Int x = -3; x <= 3; ++x)
    for (Int c = -3; c <= 3; ++c) {
      Valuation v({{"x", x}, {"c", c}});
      Valuation out = eval_trace(limit_trace4(), v);
      bool violating = !out.is_bottom() && !satisfies(out, post);
      CHECK(violating == satisfies(v, pc));
    }
}

TEST_CASE("incompatible sign-split traces have a contradictory joint condition") {
  Logic logic;
  Trace left{Statement::prob_left(0), assume("x > 0"), assign("y", "0")};
  Trace right{Statement::prob_right(0), assume("x > 0"), assign("y", "1")};
  Trace right_neg{Statement::prob_right(0), assume("!(x > 0)"), assign("y", "0")};
  Trace left_neg{Statement::prob_left(0), assume("!(x > 0)"), assign("y", "1")};
  BExpr post = parse_bexpr("y == 0");
  CHECK(logic.is_sat(path_condition(right, BExpr::top(), post)));
  CHECK(logic.is_sat(path_condition(left_neg, BExpr::top(), post)));
  CHECK_FALSE(logic.is_sat(path_condition_set({right, left_neg}, BExpr::top(), post)));
  CHECK_FALSE(logic.is_sat(path_condition(left, BExpr::top(), post)));
  CHECK_FALSE(logic.is_sat(path_condition(right_neg, BExpr::top(), post)));
}
