#include "random_automata.hpp"

#include "tracebound/automata.hpp"
#include "tracebound/cexcheck.hpp"
#include "tracebound/enumerate.hpp"
#include "tracebound/mdp.hpp"
#include "tracebound/refine.hpp"

#include <doctest.h>

using namespace tb;
using namespace tb::testing;

namespace {

const BExpr kPost = parse_bexpr("x == 0");

Trace with_split(const Trace& t, const BExpr& member = BExpr::top()) {
  std::vector<Symbol> w{sym(Statement::assume(member))};
  w.insert(w.end(), t.begin(), t.end());
  return Trace(w);
}

FloydHoareAutomaton generalize(Logic& logic, const Trace& t, const Alphabet& sigma) {
  return generalize_nonviolating(logic, logic.sequence_interpolants(t, BExpr::top(), kPost), sigma);
}
FloydHoareAutomaton q1(Logic& logic, const Alphabet& sigma) { return generalize(logic, limit_trace4(), sigma); }
FloydHoareAutomaton q2(Logic& logic, const Alphabet& sigma) { return generalize(logic, limit_trace5(), sigma); }

}  // namespace

TEST_CASE("initial refinement accepts every program trace") {
  Pcfa a = limit_pcfa();
  RefinementState s = initial_refinement(a.alphabet(), BExpr::top());
  REQUIRE(s.splits.members.size() == 1);
  CHECK(s.splits.members[0] == BExpr::top());
  Pcfa synced = sync_program(a, s.splits);
  Pcfa r = min_intersect(synced, s.v());
  CHECK(language_equivalent(GeneralPcfa::from_pcfa(r), GeneralPcfa::from_pcfa(synced)));
  CHECK(r.accepts(with_split(limit_trace4()).symbols()));
  CHECK(s.accepts(with_split(limit_trace4())));

  RefinementState p = initial_refinement(a.alphabet(), parse_bexpr("x > 0"));
  Pcfa ps = sync_program(a, p.splits);
  CHECK(ps.out(ps.init()).count(sym(assume("x > 0"))) == 1);
}

TEST_CASE("synchronizing with splits keeps a PCFA") {
  Pcfa a = limit_pcfa();
  SplitSet one{{BExpr::top()}};
  Pcfa s1 = sync_program(a, one);
  CHECK(s1.out(s1.init()).size() == 1);
  CHECK(is_valid_pcfa(GeneralPcfa::from_pcfa(s1)));

  Pcfa b = program_to_pcfa(task_file("split.task").program);
  SplitSet two{{parse_bexpr("x > 0"), parse_bexpr("!(x > 0)")}};
  Pcfa s2 = sync_program(b, two);
  CHECK(s2.out(s2.init()).size() == 2);
  CHECK(s2.out(s2.init()).at(sym(assume("x > 0"))) == b.init());
  CHECK(is_valid_pcfa(GeneralPcfa::from_pcfa(s2)));

  std::mt19937 rng(17);
  for (int i = 0; i < 50; ++i) {
    Pcfa r = random_pcfa(rng);
    SplitSet s{{parse_bexpr("y > " + std::to_string(i)), parse_bexpr("y <= " + std::to_string(i))}};
    CHECK(is_valid_pcfa(GeneralPcfa::from_pcfa(sync_program(r, s))));
  }
}

TEST_CASE("generalizing the safe trace") {
  Logic logic;
  Pcfa a = limit_pcfa();
  FloydHoareAutomaton q = q1(logic, a.alphabet());
  CHECK(q.base.accepts(limit_trace4().symbols()));
  for (const auto& t : limit_c2_traces()) CHECK_FALSE(q.base.accepts(t.symbols()));

  // True and x == 0, with every valid triple over the alphabet.
  GeneralPcfa want;
  Location t = want.add_location(false), z = want.add_location(true);
  want.set_init(t);
  Symbol inc = sym(assign("x", "x + 1")), zero = sym(assign("x", "0"));
  for (Symbol s : a.alphabet()) {
    want.add_transition(t, s, t);
    want.add_transition(z, s, t);
    if (s != inc) want.add_transition(z, s, z);
  }
  want.add_transition(t, zero, z);
  CHECK(language_equivalent(q.base, want));

  for (Location l = 0; l < q.base.num_locations(); ++l)
    for (const auto& [s, m] : q.base.out(l)) CHECK(logic.hoare_valid(q.labels[l], s, q.labels[m]));
}

TEST_CASE("generalizing the infeasible trace") {
  Logic logic;
  Pcfa a = limit_pcfa();
  FloydHoareAutomaton q = q2(logic, a.alphabet());
  CHECK(q.base.accepts(limit_trace5().symbols()));
  bool has_false = false, has_c = false;
  for (const auto& l : q.labels) {
    has_false = has_false || !logic.is_sat(l);
    has_c = has_c || logic.equivalent(l, parse_bexpr("c <= 0"));
  }
  CHECK(has_false);
  CHECK(has_c);
  Pcfa inside = min_intersect(a, q.base);
  for (const auto& [t, w] : enumerate_by_weight(inside, nullptr, 60)) {
    TraceClass c = classify_trace(logic, t, BExpr::top(), kPost);
    CHECK_FALSE(c.violating);
    CHECK(c.infeasible);
  }
}

TEST_CASE("refining with both automata halves the bound") {
  Logic logic;
  Pcfa a = limit_pcfa();
  RefinementState s = initial_refinement(a.alphabet(), BExpr::top());
  Pcfa synced = sync_program(a, s.splits);
  CHECK(structural_bound(min_intersect(synced, s.v())).bound == 1);

  RefinementState same = update_refinement(s, {});
  CHECK(language_equivalent(same.v(), s.v()));

  // The engine generalizes traces of the synchronized program, split edge included.
  const Alphabet& full = synced.alphabet();
  RefinementState r = update_refinement(
      s, {generalize(logic, with_split(limit_trace4()), full), generalize(logic, with_split(limit_trace5()), full)});
  CHECK(language_subset(r.v(), s.v()));
  Pcfa refined = min_intersect(synced, r.v());
  CHECK(structural_bound(refined).bound == Rational(1, 2));
  CHECK(is_valid_pcfa(GeneralPcfa::from_pcfa(refined)));
  for (const auto& t : limit_c2_traces()) {
    CHECK(refined.accepts(with_split(t).symbols()));
    CHECK(r.accepts(with_split(t)));
  }
  auto items = enumerate_by_weight(refined, nullptr, 60);
  REQUIRE_FALSE(items.empty());
  CHECK(items.front().second == Rational(1, 4));
  for (const auto& [t, w] : items) CHECK(t[2] == sym(Statement::prob_right(0)));
}

TEST_CASE("ordered automata from violating traces") {
  Logic logic;
  Pcfa a = limit_pcfa();
  Trace t = limit_c2_traces()[0];
  OrderedFloydHoareAutomaton o = generalize_violating_finite(logic, t, BExpr::top(), kPost, a.alphabet());
  CHECK(o.fh.base.num_locations() == t.size() + 1);
  CHECK(o.fh.base.accepts(t.symbols()));
  for (Location l = 0; l < o.fh.base.num_locations(); ++l) {
    CHECK(o.priority[l] == l);
    for (const auto& [s, m] : o.fh.base.out(l)) CHECK(o.priority[m] > o.priority[l]);
  }
  auto members = finite_language(o.fh.base, &a, 4096);
  CHECK(std::find(members.begin(), members.end(), t) != members.end());
  for (const auto& m : members) {
    TraceClass c = classify_trace(logic, m, BExpr::top(), kPost);
    CHECK((c.violating || c.infeasible));
  }
}

TEST_CASE("splitting the precondition") {
  Logic logic;
  Pcfa a = program_to_pcfa(task_file("split.task").program);
  RefinementState s = initial_refinement(a.alphabet(), BExpr::top());
  Pcfa cand = sync_program(a, s.splits);
  SpuriousReport rep;
  SplitOutcome out = apply_split(logic, s, BExpr::top(), parse_bexpr("x > 0"), rep, cand);
  REQUIRE_FALSE(out.vacuous);
  REQUIRE(out.state.splits.members.size() == 2);
  CHECK(logic.equivalent(out.state.splits.members[0], parse_bexpr("x > 0")));
  CHECK(logic.equivalent(out.state.splits.members[1], parse_bexpr("!(x > 0)")));
  CHECK(check_split_set(logic, out.state.splits, BExpr::top()));
  CHECK(out.cand.out(out.cand.init()).size() == 2);
  CHECK(is_valid_pcfa(GeneralPcfa::from_pcfa(out.cand)));

  CHECK(apply_split(logic, s, BExpr::top(), BExpr::top(), rep, cand).vacuous);
  CHECK(apply_split(logic, s, BExpr::top(), parse_bexpr("x > 0 && x < 0"), rep, cand).vacuous);
}

TEST_CASE("split relabels report traces by subset membership") {
  Logic logic;
  Pcfa a = limit_pcfa();
  RefinementState s = initial_refinement(a.alphabet(), BExpr::top());
  SpuriousReport rep;
  for (const auto& t : limit_c2_traces()) rep.violating.push_back(with_split(t));
  rep.max_subset = rep.violating;
  rep.non_violating.push_back(with_split(limit_trace4()));
  SplitOutcome out = apply_split(logic, s, BExpr::top(), parse_bexpr("c == 2"), rep, sync_program(a, s.splits));
  REQUIRE(out.relabeled.size() == 4);
  const BExpr& pos = out.state.splits.members[0];
  const BExpr& neg = out.state.splits.members[1];
  CHECK(logic.equivalent(pos, parse_bexpr("c == 2")));
  CHECK(logic.equivalent(neg, parse_bexpr("c != 2")));
  for (int i = 0; i < 3; ++i) CHECK(out.relabeled[i].at(0).cond() == pos);
  CHECK(out.relabeled[3].at(0).cond() == neg);
}

TEST_CASE("live variables") {
  Pcfa a = limit_pcfa();
  auto live = live_variables(a, kPost);
  CHECK(live[a.init()] == std::set<std::string>{"c"});
  CHECK(live[a.end()] == std::set<std::string>{"x"});
}

TEST_CASE("value analysis on a single coin") {
  Logic logic;
  VerificationTask t = parse_task("pre true; prog { { x := 0 } <+> { x := 1 } } post x == 0;");
  Pcfa a = program_to_pcfa(t.program);
  auto va = value_analysis_refine(logic, a, t.pre, t.post, 100);
  REQUIRE(va);
  CHECK(va->splits.members.size() == 1);
  Pcfa synced = sync_program(a, va->splits);
  Pcfa r = restrict_language(synced, {&va->automaton}, {});
  CHECK(structural_bound(r).bound == Rational(1, 2));
}

TEST_CASE("value analysis gives up on unbounded counters") {
  Logic logic;
  VerificationTask t = task_file("limit.task");
  CHECK_FALSE(value_analysis_refine(logic, program_to_pcfa(t.program), t.pre, t.post, 200).has_value());
}

TEST_CASE("value analysis seeds one split per initial valuation") {
  Logic logic;
  VerificationTask t = parse_task("pre n >= 0 && n <= 2 && x == 0; prog { while n > 0 do { { x := x + 1 } <+> { skip }; n := n - 1 } } post x <= 0;");
  Pcfa a = program_to_pcfa(t.program);
  auto va = value_analysis_refine(logic, a, t.pre, t.post, 1000);
  REQUIRE(va);
  CHECK(va->splits.members.size() == 3);
  CHECK(check_split_set(logic, va->splits, t.pre));
}
