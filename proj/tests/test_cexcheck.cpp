#include "support.hpp"

#include "tracebound/cexcheck.hpp"

#include <doctest.h>

using namespace tb;
using namespace tb::testing;

namespace {

Pcfa fig5_chain() {
  Pcfa a;
  for (int i = 0; i < 5; ++i) a.add_location();
  a.add_transition(0, sym(assign("x", "0")), 2);
  a.add_transition(2, sym(Statement::prob_left(0)), 3);
  a.add_transition(2, sym(Statement::prob_right(0)), 4);
  a.add_transition(3, sym(assign("c", "0")), 5);
  a.add_transition(4, sym(Statement::skip()), 5);
  a.add_transition(5, sym(assume("!(c > 0)")), 1);
  return a;
}

// Counter loop unrolled for exactly two iterations on the skip branch.
Pcfa two_iteration_chain() {
  Pcfa a;
  Location cur = a.init();
  auto step = [&](const Statement& s) {
    Location n = a.add_location();
    a.add_transition(cur, sym(s), n);
    cur = n;
  };
  step(assign("x", "0"));
  Location fork = cur;
  Location left = a.add_location();
  a.add_transition(fork, sym(Statement::prob_left(0)), left);
  Location left2 = a.add_location();
  a.add_transition(left, sym(assign("c", "0")), left2);
  a.add_transition(left2, sym(assume("!(c > 0)")), a.end());
  step(Statement::prob_right(0));
  step(Statement::skip());
  for (int k = 0; k < 2; ++k) {
    step(assume("c > 0"));
    Location coin = cur;
    Location l = a.add_location(), r = a.add_location(), join = a.add_location();
    a.add_transition(coin, sym(Statement::prob_left(1)), l);
    a.add_transition(coin, sym(Statement::prob_right(1)), r);
    a.add_transition(l, sym(assign("x", "x + 1")), join);
    a.add_transition(r, sym(Statement::skip()), join);
    cur = join;
    step(assign("c", "c - 1"));
  }
  a.add_transition(cur, sym(assume("!(c > 0)")), a.end());
  return a;
}

}  // namespace

TEST_CASE("trace classification") {
  Logic logic;
  BExpr post = parse_bexpr("x == 0");
  TraceClass t4 = classify_trace(logic, limit_trace4(), BExpr::top(), post);
  CHECK_FALSE(t4.violating);
  CHECK_FALSE(t4.infeasible);
  TraceClass t5 = classify_trace(logic, limit_trace5(), BExpr::top(), post);
  CHECK_FALSE(t5.violating);
  CHECK(t5.infeasible);
  TraceClass v = classify_trace(logic, limit_c2_traces()[1], BExpr::top(), post);
  REQUIRE(v.violating);
  CHECK(v.witness.get("c") == 2);
  CHECK(logic.equivalent(v.path_cond, parse_bexpr("c == 2")));
}

TEST_CASE("structural compatibility") {
  Pcfa a = fig5_chain();
  Trace l{assign("x", "0"), Statement::prob_left(0), assign("c", "0"), assume("!(c > 0)")};
  Trace r{assign("x", "0"), Statement::prob_right(0), Statement::skip(), assume("!(c > 0)")};
  CHECK(structurally_compatible(l, r));
  CHECK(structurally_compatible(r, l));
  CHECK_FALSE(structurally_compatible(l, l));
  CHECK_FALSE(structurally_compatible(limit_trace4(), limit_trace5()));
  Trace r1{assign("x", "0"), Statement::prob_right(1), Statement::skip(), assume("!(c > 0)")};
  CHECK_FALSE(structurally_compatible(l, r1));
  auto c2 = limit_c2_traces();
  CHECK(structurally_compatible(c2[0], c2[1]));
  CHECK(structurally_compatible(c2[0], c2[2]));
  CHECK(structurally_compatible(c2[1], c2[2]));
}

TEST_CASE("maximum weight compatible subsets") {
  Logic logic;
  BExpr post = parse_bexpr("x == 0");
  CompatibleSubset s = max_weight_compatible_subset(logic, limit_c2_traces(), BExpr::top(), post);
  CHECK(s.traces.size() == 3);
  CHECK(s.weight == Rational(3, 8));
  CHECK(logic.equivalent(s.cond, parse_bexpr("c == 2")));

  Trace right{Statement::prob_right(0), assume("x > 0"), assign("y", "1")};
  Trace left_neg{Statement::prob_left(0), assume("!(x > 0)"), assign("y", "1")};
  CompatibleSubset one = max_weight_compatible_subset(logic, {right, left_neg}, BExpr::top(), parse_bexpr("y == 0"));
  CHECK(one.traces.size() == 1);
  CHECK(one.weight == Rational(1, 2));

  CompatibleSubset none = max_weight_compatible_subset(logic, {}, BExpr::top(), post);
  CHECK(none.traces.empty());
  CHECK(none.weight == 0);
  CHECK(none.cond == BExpr::top());
}

TEST_CASE("candidate verification") {
  Logic logic;
  BExpr post = parse_bexpr("x == 0");
  CandidateOutcome a = verify_candidate(logic, fig5_chain(), BExpr::top(), post, Rational(3, 10));
  REQUIRE(std::holds_alternative<SpuriousReport>(a));
  const auto& rep = std::get<SpuriousReport>(a);
  CHECK(rep.non_violating.size() == 2);
  CHECK(rep.violating.empty());
  CHECK(rep.remaining == 0);

  CandidateOutcome b = verify_candidate(logic, two_iteration_chain(), BExpr::top(), post, Rational(3, 10));
  REQUIRE(std::holds_alternative<Counterexample>(b));
  const auto& cex = std::get<Counterexample>(b);
  CHECK(cex.total_weight == Rational(3, 8));
  CHECK(cex.traces.size() == 3);
  CHECK(logic.equivalent(cex.joint_cond, parse_bexpr("c == 2")));
  CHECK_FALSE(check_counterexample(cex, BExpr::top(), post, Rational(3, 10)).has_value());

  CandidateOutcome c = verify_candidate(logic, two_iteration_chain(), BExpr::top(), post, Rational(1, 2));
  REQUIRE(std::holds_alternative<SpuriousReport>(c));
  const auto& half = std::get<SpuriousReport>(c);
  CHECK(half.best_weight + half.remaining <= Rational(1, 2));

  CandidateOutcome d = verify_candidate(logic, fig5_chain(), BExpr::top(), post, Rational(1));
  REQUIRE(std::holds_alternative<SpuriousReport>(d));
  CHECK(std::get<SpuriousReport>(d).enumerated == 0);
}

TEST_CASE("budget exhaustion") {
  Logic logic;
  CandidateBudget budget;
  budget.max_traces = 2;
  CHECK_THROWS_AS(verify_candidate(logic, two_iteration_chain(), BExpr::top(), parse_bexpr("x == 0"),
                                   Rational(3, 10), budget),
                  BudgetExhausted);
}

TEST_CASE("independent counterexample check") {
  BExpr post = parse_bexpr("x == 0");
  Counterexample cex;
  cex.traces = limit_c2_traces();
  cex.total_weight = Rational(3, 8);
  cex.witness = Valuation({{"x", 0}, {"c", 2}});
  CHECK_FALSE(check_counterexample(cex, BExpr::top(), post, Rational(3, 10)).has_value());
  CHECK(check_counterexample(cex, BExpr::top(), post, Rational(3, 8)).has_value());

  Counterexample wrong_weight = cex;
  wrong_weight.total_weight = Rational(1, 2);
  CHECK(check_counterexample(wrong_weight, BExpr::top(), post, Rational(3, 10)).has_value());

  Counterexample wrong_witness = cex;
  wrong_witness.witness = Valuation({{"x", 0}, {"c", 3}});
  CHECK(check_counterexample(wrong_witness, BExpr::top(), post, Rational(3, 10)).has_value());

  Counterexample clash = cex;
  clash.traces.push_back(limit_trace4());
  CHECK(check_counterexample(clash, BExpr::top(), post, Rational(3, 10)).has_value());

  CHECK(check_counterexample(Counterexample{}, BExpr::top(), post, Rational(0)).has_value());
}
