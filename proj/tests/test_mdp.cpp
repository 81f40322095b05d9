#include "random_automata.hpp"

#include "tracebound/automata.hpp"
#include "tracebound/mdp.hpp"

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

// Counter loop restricted to runs that skip c := 0 and bump x at least once.
Pcfa refined_limit() {
  Pcfa a;
  enum { I, E, L2, L3, H0, B0, X0, S0, D0, D1, H1, B1, X1, S1, D2 };
  for (int i = 0; i <= D2; ++i) a.add_location();
  auto t = [&](int f, const Statement& s, int to) { a.add_transition(f, sym(s), to); };
  t(I, assign("x", "0"), L2);
  t(L2, Statement::prob_right(0), L3);
  t(L3, Statement::skip(), H0);
  t(H0, assume("c > 0"), B0);
  t(B0, Statement::prob_left(1), X0);
  t(B0, Statement::prob_right(1), S0);
  t(X0, assign("x", "x + 1"), D1);
  t(S0, Statement::skip(), D0);
  t(D0, assign("c", "c - 1"), H0);
  t(D1, assign("c", "c - 1"), H1);
  t(H1, assume("c > 0"), B1);
  t(H1, assume("!(c > 0)"), E);
  t(B1, Statement::prob_left(1), X1);
  t(B1, Statement::prob_right(1), S1);
  t(X1, assign("x", "x + 1"), D2);
  t(S1, Statement::skip(), D2);
  t(D2, assign("c", "c - 1"), H1);
  return a;
}

SimplePolicy prefer(const Mdp& m, Symbol s) {
  SimplePolicy p;
  for (Node n = 0; n < m.num_nodes(); ++n) {
    std::size_t pick = 0;
    for (std::size_t i = 0; i < m.actions(n).size(); ++i) {
      const Action& a = m.actions(n)[i].label;
      if (a.kind == Action::Kind::Statement && a.symbol == s) pick = i;
    }
    p.choice.push_back(pick);
  }
  return p;
}

}  // namespace

TEST_CASE("underlying MDP of a single edge") {
  Pcfa a = program_to_pcfa(Program::skip());
  Mdp m = underlying_mdp(a);
  CHECK(m.num_nodes() == 3);
  REQUIRE(m.actions(0).size() == 1);
  const MdpAction& act = m.actions(0)[0];
  CHECK(act.label.kind == Action::Kind::Statement);
  CHECK(act.label.symbol == sym(Statement::skip()));
  REQUIRE(act.dist.size() == 1);
  CHECK(act.dist[0] == std::pair<Node, Rational>{1, Rational(1)});
  CHECK(m.actions(1).at(0).label.kind == Action::Kind::Dummy);
}

TEST_CASE("underlying MDP of the counter loop") {
  Pcfa a = limit_pcfa();
  Mdp m = underlying_mdp(a);
  CHECK(m.num_nodes() == a.num_locations() + 1);
  bool head = false;
  for (Node n = 0; n < a.num_locations(); ++n) {
    const auto& out = a.out(n);
    if (out.count(sym(assume("c > 0")))) {
      head = true;
      CHECK(m.actions(n).size() == 2);
    }
    for (const auto& act : m.actions(n)) {
      Rational total = 0;
      for (const auto& [t, p] : act.dist) total += p;
      CHECK(total == 1);
    }
  }
  CHECK(head);
  REQUIRE(m.actions(a.end()).size() == 1);
  CHECK(m.actions(a.end())[0].label.kind == Action::Kind::Dummy);
  CHECK(m.actions(a.end())[0].dist[0].first == a.end());
}

TEST_CASE("missing branch goes to the dummy node") {
  Pcfa a = refined_limit();
  Mdp m = underlying_mdp(a);
  const MdpAction& coin = m.actions(2).at(0);
  CHECK(coin.label.kind == Action::Kind::Distribution);
  CHECK(coin.label.tag == 0);
  bool dummy = false;
  for (const auto& [t, p] : coin.dist)
    if (t == m.dummy) {
      dummy = true;
      CHECK(p == Rational(1, 2));
    }
  CHECK(dummy);
}

TEST_CASE("maximum reachability") {
  Pcfa a = limit_pcfa();
  Mdp m = underlying_mdp(a);
  CHECK(max_reachability(m, a.init(), a.end()).probability == 1);
  Pcfa r = refined_limit();
  CHECK(max_reachability(underlying_mdp(r), r.init(), r.end()).probability == Rational(1, 2));

  Mdp coin(3);
  Action d;
  d.kind = Action::Kind::Distribution;
  coin.add_action(0, d, {{1, Rational(1, 2)}, {2, Rational(1, 2)}});
  coin.add_action(1, Action{}, {{1, Rational(1)}});
  coin.add_action(2, Action{}, {{2, Rational(1)}});
  ReachResult res = max_reachability(coin, 0, 1);
  CHECK(res.probability == Rational(1, 2));
  CHECK(max_reachability(coin, 2, 1).probability == 0);
  CHECK_THROWS_AS(coin.add_action(0, d, {{1, Rational(1, 2)}}), std::invalid_argument);
}

TEST_CASE("structural bounds") {
  CHECK(structural_bound(limit_pcfa()).bound == 1);
  CHECK(structural_bound(refined_limit()).bound == Rational(1, 2));
  CHECK(structural_bound(empty_pcfa()).bound == 0);
}

TEST_CASE("policy application") {
  Pcfa a = limit_pcfa();
  Mdp m = underlying_mdp(a);
  Pcfa chain = apply_policy(a, prefer(m, sym(assume("!(c > 0)"))));
  CHECK(is_mc_shaped(chain));
  CHECK(language_equivalent(GeneralPcfa::from_pcfa(chain), GeneralPcfa::from_pcfa(fig5_chain())));

  Pcfa f = fig5_chain();
  Pcfa same = apply_policy(f, SimplePolicy{std::vector<std::size_t>(f.num_locations() + 1, 0)});
  CHECK(language_equivalent(GeneralPcfa::from_pcfa(same), GeneralPcfa::from_pcfa(f)));
}

TEST_CASE("accepting mass of chains") {
  CHECK(mc_accepting_mass(fig5_chain()) == 1);

  Pcfa loop;
  loop.add_location();
  loop.add_location();
  Location l = loop.add_location();
  loop.add_transition(0, sym(Statement::skip()), l);
  loop.add_transition(l, sym(Statement::skip()), l);
  CHECK(mc_accepting_mass(loop) == 0);

  Pcfa r = refined_limit();
  BoundResult b = structural_bound(r);
  Pcfa cand = apply_policy(r, b.reason);
  REQUIRE(is_mc_shaped(cand));
  CHECK(mc_accepting_mass(cand) == Rational(1, 2));
  CHECK_THROWS_AS(mc_accepting_mass(limit_pcfa()), std::invalid_argument);
}

TEST_CASE("value iteration agrees with rational policy iteration") {
  std::mt19937 rng(21);
  for (int i = 0; i < 30; ++i) {
    Mdp m = random_mdp(rng, 30);
    Node to = m.num_nodes() - 1;
    ReachResult vi = max_reachability(m, 0, to);
    ReachResult pi = policy_iteration(m, 0, to);
    CHECK(vi.probability == pi.probability);
    CHECK(vi.residual <= 1e-10);
    CHECK(policy_values(m, vi.policy, to)[0] == vi.probability);
  }
}
