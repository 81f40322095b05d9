#include "support.hpp"

#include "tracebound/logic.hpp"
#include "tracebound/wp.hpp"

#include <doctest.h>

using namespace tb;
using namespace tb::testing;

TEST_CASE("satisfiability") {
  Logic logic;
  CHECK_FALSE(logic.is_sat(parse_bexpr("x > 0 && !(x > 0)")));
  CHECK(logic.is_sat(BExpr::top()));
  SatAnswer a = logic.check_sat(parse_bexpr("x > 3 && x < 5 && y == x * 2"));
  REQUIRE(a.sat);
  CHECK(a.model.get("x") == 4);
  CHECK(a.model.get("y") == 8);
  SatAnswer b = logic.check_sat(BExpr::top(), {"z"});
  REQUIRE(b.sat);
  CHECK(b.model.has("z"));
  CHECK(logic.valid(parse_bexpr("x > 0 || x <= 0")));
  CHECK(logic.implies(parse_bexpr("x == 2"), parse_bexpr("x > 1")));
  CHECK_FALSE(logic.implies(parse_bexpr("x > 1"), parse_bexpr("x == 2")));
}

TEST_CASE("missing solver is an error") {
  SolverConfig cfg;
  cfg.path = "/nonexistent/solver-binary";
  CHECK_THROWS_AS(
      {
        Logic logic(cfg);
        logic.is_sat(parse_bexpr("x > 0"));
      },
      SolverError);
}

TEST_CASE("s-expressions") {
  SExpr e = parse_sexpr("(and (> x 0) (let ((a 1)) a))");
  CHECK_FALSE(e.atom);
  CHECK(e.items.size() == 3);
  CHECK(e.items[0].text == "and");
  CHECK(e.str() == "(and (> x 0) (let ((a 1)) a))");
}

TEST_CASE("weakest preconditions") {
  Logic logic;
  CHECK(logic.equivalent(hoare_wp(assign("x", "x + 1"), parse_bexpr("x == 1")), parse_bexpr("x + 1 == 1")));
  CHECK(logic.equivalent(hoare_wp(assume("c > 0"), BExpr::bottom()), parse_bexpr("!(c > 0)")));
  BExpr phi = parse_bexpr("x == 3 && c < 2");
  CHECK(hoare_wp(Statement::prob_left(1), phi) == phi);
  CHECK(hoare_wp(Statement::nondet(1), phi) == phi);
}

TEST_CASE("path weakest preconditions") {
  Logic logic;
  CHECK(logic.equivalent(path_wp(assume("c > 0"), parse_bexpr("x == 0")), parse_bexpr("c > 0 && x == 0")));
  BExpr q = parse_bexpr("x == 7");
  CHECK(path_wp(Statement::skip(), q) == q);
  Trace t5 = limit_trace5();
  BExpr acc = BExpr::negate(parse_bexpr("x == 0"));
  for (std::size_t i = t5.size(); i-- > 0;) acc = path_wp(t5.at(i), acc);
  CHECK_FALSE(logic.is_sat(acc));
}

TEST_CASE("Hoare triples") {
  Logic logic;
  BExpr x0 = parse_bexpr("x == 0");
  CHECK(logic.hoare_valid(x0, Statement::skip(), x0));
  CHECK_FALSE(logic.hoare_valid(x0, assign("x", "x + 1"), x0));
  CHECK(logic.hoare_valid(x0, assign("c", "c - 1"), x0));
  CHECK(logic.hoare_valid(parse_bexpr("c <= 0"), assume("c > 0"), BExpr::bottom()));
  CHECK_FALSE(logic.hoare_valid(BExpr::top(), assume("c > 0"), BExpr::bottom()));
  CHECK(logic.hoare_valid(BExpr::top(), assign("c", "0"), parse_bexpr("c <= 0")));
}

TEST_CASE("normalization") {
  Logic logic;
  CHECK(logic.normalize(parse_bexpr("x > 0 || x <= 0")) == BExpr::top());
  CHECK(logic.normalize(parse_bexpr("x > 0 && x < 0")) == BExpr::bottom());
}

namespace {

void check_tagging(Logic& logic, const TaggedTrace& tt, const BExpr& pre, const BExpr& post) {
  REQUIRE(tt.predicates.size() == tt.trace.size() + 1);
  CHECK(logic.valid_tagging(tt, pre, post));
  CHECK(logic.implies(pre, tt.predicates.front()));
  CHECK(logic.implies(tt.predicates.back(), post));
  for (std::size_t i = 0; i < tt.trace.size(); ++i)
    CHECK(logic.hoare_valid(tt.predicates[i], tt.trace[i], tt.predicates[i + 1]));
}

const InterpolationStrategy kStrategies[] = {InterpolationStrategy::Auto, InterpolationStrategy::StrongestPost,
                                             InterpolationStrategy::CoreWeakestPre, InterpolationStrategy::WeakestPre};

}  // namespace

TEST_CASE("interpolants of the safe trace") {
  Logic logic;
  BExpr post = parse_bexpr("x == 0");
  TaggedTrace tt = logic.sequence_interpolants(limit_trace4(), BExpr::top(), post);
  check_tagging(logic, tt, BExpr::top(), post);
  CHECK(logic.equivalent(tt.predicates[0], BExpr::top()));
  for (std::size_t i = 1; i < tt.predicates.size(); ++i) CHECK(logic.equivalent(tt.predicates[i], post));
}

TEST_CASE("interpolants of the infeasible loop entry") {
  Logic logic;
  BExpr post = parse_bexpr("x == 0");
  TaggedTrace tt = logic.sequence_interpolants(limit_trace5(), BExpr::top(), post);
  check_tagging(logic, tt, BExpr::top(), post);
  CHECK_FALSE(logic.is_sat(tt.predicates.back()));
  CHECK(logic.implies(tt.predicates[3], parse_bexpr("c <= 0")));
  CHECK(logic.equivalent(tt.predicates[0], BExpr::top()));
}

TEST_CASE("interpolants of a contradictory pair of assumes") {
  Logic logic;
  Trace t{assume("x > 0"), assume("!(x > 0)")};
  BExpr post = parse_bexpr("y == 1");
  for (auto s : kStrategies) check_tagging(logic, logic.sequence_interpolants(t, BExpr::top(), post, s), BExpr::top(), post);
  // Path-formula interpolants: the middle one separates the two assumes.
  for (auto s : {InterpolationStrategy::Auto, InterpolationStrategy::CoreWeakestPre, InterpolationStrategy::StrongestPost}) {
    TaggedTrace tt = logic.sequence_interpolants(t, BExpr::top(), post, s);
    CHECK(logic.implies(tt.predicates[1], parse_bexpr("x > 0")));
    CHECK_FALSE(logic.is_sat(tt.predicates[2]));
  }
}

TEST_CASE("every strategy yields a valid tagging") {
  Logic logic;
  BExpr post = parse_bexpr("x == 0");
  std::vector<Trace> traces{limit_trace4(), limit_trace5(),
                            Trace{assign("x", "0"), Statement::prob_right(0), Statement::skip(), assume("c > 0"),
                                  Statement::prob_right(1), Statement::skip(), assign("c", "c - 1"),
                                  assume("!(c > 0)")}};
  for (const auto& t : traces)
    for (auto s : kStrategies) check_tagging(logic, logic.sequence_interpolants(t, BExpr::top(), post, s), BExpr::top(), post);
}

TEST_CASE("violating traces have no interpolants") {
  Logic logic;
  CHECK_THROWS_AS(logic.sequence_interpolants(limit_c2_traces()[0], BExpr::top(), parse_bexpr("x == 0")),
                  std::invalid_argument);
}

TEST_CASE("wp tagging from the negated postcondition") {
  Logic logic;
  BExpr post = parse_bexpr("x == 0");
  Trace t = limit_c2_traces()[0];
  TaggedTrace tt = logic.wp_tagging(t, BExpr::negate(post));
  REQUIRE(tt.predicates.size() == t.size() + 1);
  CHECK(logic.equivalent(tt.predicates.back(), BExpr::negate(post)));
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(logic.hoare_valid(tt.predicates[i], t[i], tt.predicates[i + 1]));
  CHECK(logic.implies(parse_bexpr("c == 2"), tt.predicates[0]));
}

TEST_CASE("incremental scopes") {
  Logic logic;
  logic.push();
  logic.add(parse_bexpr("x > 5"));
  CHECK(logic.check());
  logic.push();
  logic.add(parse_bexpr("x < 3"));
  CHECK_FALSE(logic.check());
  logic.pop();
  CHECK(logic.check());
  logic.pop();
}
