#include "tracebound/mdp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace Eigen {

template <>
struct NumTraits<tb::Rational> : GenericNumTraits<tb::Rational> {
  using Real = tb::Rational;
  using NonInteger = tb::Rational;
  using Nested = tb::Rational;
  using Literal = tb::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 32,
    MulCost = 64
  };
  static Real epsilon() { return 0; }
  static Real dummy_precision() { return 0; }
  static int digits10() { return 0; }
};

}  // namespace Eigen

namespace tb {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

std::string to_string(const Action& a) {
  switch (a.kind) {
    case Action::Kind::Statement:
      return "<" + symbol_string(a.symbol) + ">";
    case Action::Kind::Distribution:
      return "<" + std::to_string(a.tag) + ">";
    case Action::Kind::Dummy:
      return "a_dmy";
  }
  return "?";
}

Node Mdp::add_node() {
  actions_.emplace_back();
  return actions_.size() - 1;
}

void Mdp::add_action(Node n, Action label, std::vector<std::pair<Node, Rational>> dist) {
  Rational total = 0;
  for (const auto& [t, p] : dist) {
    if (t >= actions_.size()) throw std::out_of_range("Mdp::add_action: target out of range");
    if (p <= 0) throw std::invalid_argument("Mdp::add_action: non-positive probability");
    total += p;
  }
  if (total != 1) throw std::invalid_argument("Mdp::add_action: distribution does not sum to 1");
  actions_.at(n).push_back(MdpAction{label, std::move(dist)});
}

Mdp underlying_mdp(const Pcfa& a) {
  const std::size_t n = a.num_locations();
  Mdp m(n + 1);
  m.dummy = n;
  const Rational half = Rational(1, 2);
  for (std::size_t l = 0; l < n; ++l) {
    const auto& out = a.out(static_cast<Location>(l));
    std::vector<Symbol> syms;
    for (const auto& [s, t] : out) syms.push_back(s);
    std::sort(syms.begin(), syms.end(), symbol_less);
    std::map<unsigned, bool> done_tags;
    for (Symbol s : syms) {
      const Statement& st = statement(s);
      if (!st.is_prob()) {
        m.add_action(l, Action{Action::Kind::Statement, s, 0}, {{out.at(s), Rational(1)}});
        continue;
      }
      if (done_tags[st.tag()]) continue;
      done_tags[st.tag()] = true;
      auto left = out.find(intern(Statement::prob_left(st.tag())));
      auto right = out.find(intern(Statement::prob_right(st.tag())));
      Action act{Action::Kind::Distribution, 0, st.tag()};
      if (left != out.end() && right != out.end()) {
        if (left->second == right->second)
          m.add_action(l, act, {{left->second, Rational(1)}});
        else
          m.add_action(l, act, {{left->second, half}, {right->second, half}});
      } else {
        Location t = left != out.end() ? left->second : right->second;
        m.add_action(l, act, {{t, half}, {m.dummy, half}});
      }
    }
    // The end location, and any location without transitions, idles.
    if (m.actions(l).empty()) m.add_action(l, Action{}, {{l, Rational(1)}});
  }
  m.add_action(m.dummy, Action{}, {{m.dummy, Rational(1)}});
  return m;
}

namespace {

/// Nodes from which `to` is reachable through positive-probability edges of
/// the given successor relation.
std::vector<bool> backward_reach(const std::vector<std::vector<Node>>& succ, Node to) {
  const std::size_t n = succ.size();
  std::vector<std::vector<Node>> pred(n);
  for (Node s = 0; s < n; ++s)
    for (Node t : succ[s]) pred[t].push_back(s);
  std::vector<bool> seen(n, false);
  std::vector<Node> stack{to};
  seen[to] = true;
  while (!stack.empty()) {
    Node t = stack.back();
    stack.pop_back();
    for (Node s : pred[t])
      if (!seen[s]) {
        seen[s] = true;
        stack.push_back(s);
      }
  }
  return seen;
}

/// Strongly connected components, each emitted after every component it can
/// reach (iterative Tarjan).
std::vector<std::vector<Node>> sccs(const std::vector<std::vector<Node>>& succ, const std::vector<bool>& active) {
  const std::size_t n = succ.size();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<Node> stack;
  std::vector<std::vector<Node>> out;
  int counter = 0;
  struct Frame {
    Node v;
    std::size_t next;
  };
  for (Node root = 0; root < n; ++root) {
    if (!active[root] || index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < succ[f.v].size()) {
        Node w = succ[f.v][f.next++];
        if (!active[w]) continue;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      Node v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<Node> comp;
        Node w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

/// Solves (I - P_CC) x = b by Gaussian elimination over the rationals.
RationalVector solve_exact(RationalMatrix a, RationalVector b) {
  const Eigen::Index k = a.rows();
  for (Eigen::Index col = 0; col < k; ++col) {
    Eigen::Index pivot = col;
    while (pivot < k && a(pivot, col) == 0) ++pivot;
    if (pivot == k) throw std::logic_error("solve_exact: singular system");
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      std::swap(b(pivot), b(col));
    }
    for (Eigen::Index r = 0; r < k; ++r) {
      if (r == col || a(r, col) == 0) continue;
      Rational f = a(r, col) / a(col, col);
      a.row(r) -= f * a.row(col);
      b(r) -= f * b(col);
    }
  }
  RationalVector x(k);
  for (Eigen::Index i = 0; i < k; ++i) x(i) = b(i) / a(i, i);
  return x;
}

Rational q_value(const MdpAction& act, const std::vector<Rational>& v) {
  Rational q = 0;
  for (const auto& [t, p] : act.dist) q += p * v[t];
  return q;
}

/// Exact policy improvement until no action strictly improves any node.
std::size_t improve(const Mdp& m, Node to, SimplePolicy& policy, std::vector<Rational>& values) {
  std::size_t rounds = 0;
  for (;;) {
    values = policy_values(m, policy, to);
    bool changed = false;
    for (Node s = 0; s < m.num_nodes(); ++s) {
      if (s == to) continue;
      const auto& acts = m.actions(s);
      std::size_t best = policy.choice[s];
      Rational best_q = values[s];
      for (std::size_t i = 0; i < acts.size(); ++i) {
        Rational q = q_value(acts[i], values);
        if (q > best_q) {
          best_q = q;
          best = i;
        }
      }
      if (best != policy.choice[s]) {
        policy.choice[s] = best;
        changed = true;
      }
    }
    if (!changed) return rounds;
    ++rounds;
  }
}

}  // namespace

std::vector<Rational> policy_values(const Mdp& m, const SimplePolicy& p, Node to) {
  const std::size_t n = m.num_nodes();
  std::vector<std::vector<Node>> succ(n);
  for (Node s = 0; s < n; ++s)
    for (const auto& [t, pr] : p.at(m, s).dist) succ[s].push_back(t);
  std::vector<bool> reach = backward_reach(succ, to);
  std::vector<Rational> v(n, Rational(0));
  v[to] = 1;
  std::vector<bool> active(n, false);
  for (Node s = 0; s < n; ++s) active[s] = reach[s] && s != to;
  std::vector<int> pos(n, -1);
  for (const auto& comp : sccs(succ, active)) {
    const Eigen::Index k = static_cast<Eigen::Index>(comp.size());
    for (Eigen::Index i = 0; i < k; ++i) pos[comp[i]] = static_cast<int>(i);
    RationalMatrix a = RationalMatrix::Identity(k, k);
    RationalVector b = RationalVector::Zero(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      for (const auto& [t, pr] : p.at(m, comp[i]).dist) {
        if (active[t] && pos[t] >= 0)
          a(i, pos[t]) -= pr;
        else
          b(i) += pr * v[t];
      }
    }
    RationalVector x = solve_exact(std::move(a), std::move(b));
    for (Eigen::Index i = 0; i < k; ++i) v[comp[i]] = x(i);
    for (Node s : comp) pos[s] = -1;
  }
  return v;
}

ReachResult max_reachability(const Mdp& m, Node from, Node to) {
  const std::size_t n = m.num_nodes();
  if (from >= n || to >= n) throw std::out_of_range("max_reachability: node out of range");
  std::vector<std::vector<Node>> any_succ(n);
  for (Node s = 0; s < n; ++s)
    for (const auto& act : m.actions(s))
      for (const auto& [t, p] : act.dist) any_succ[s].push_back(t);
  std::vector<bool> maybe = backward_reach(any_succ, to);

  // Value iteration in double precision (Gauss-Seidel sweeps).
  std::vector<std::vector<std::vector<std::pair<Node, double>>>> fdist(n);
  for (Node s = 0; s < n; ++s)
    for (const auto& act : m.actions(s)) {
      std::vector<std::pair<Node, double>> d;
      for (const auto& [t, p] : act.dist) d.emplace_back(t, to_double(p));
      fdist[s].push_back(std::move(d));
    }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  x(static_cast<Eigen::Index>(to)) = 1.0;
  auto qf = [&](Node s, std::size_t i) {
    double q = 0;
    for (const auto& [t, p] : fdist[s][i]) q += p * x(static_cast<Eigen::Index>(t));
    return q;
  };
  ReachResult res;
  constexpr double kTolerance = 1e-10;
  constexpr std::size_t kMaxSweeps = 1000000;
  for (;;) {
    double delta = 0;
    for (Node s = 0; s < n; ++s) {
      if (!maybe[s] || s == to) continue;
      double best = 0;
      for (std::size_t i = 0; i < fdist[s].size(); ++i) best = std::max(best, qf(s, i));
      delta = std::max(delta, std::abs(best - x(static_cast<Eigen::Index>(s))));
      x(static_cast<Eigen::Index>(s)) = best;
    }
    ++res.sweeps;
    res.residual = delta;
    if (delta < kTolerance || res.sweeps >= kMaxSweeps) break;
  }

  // Policy extraction: among near-optimal actions prefer those that make
  // progress towards the target (attractor order), which avoids choosing a
  // value-preserving cycle that never reaches it.
  SimplePolicy policy;
  policy.choice.assign(n, 0);
  std::vector<bool> assigned(n, false);
  assigned[to] = true;
  for (Node s = 0; s < n; ++s)
    if (!maybe[s]) assigned[s] = true;
  constexpr double kSlack = 1e-9;
  for (bool changed = true; changed;) {
    changed = false;
    for (Node s = 0; s < n; ++s) {
      if (assigned[s]) continue;
      double xs = x(static_cast<Eigen::Index>(s));
      int pick = -1;
      double pick_q = -1;
      for (std::size_t i = 0; i < fdist[s].size(); ++i) {
        double q = qf(s, i);
        if (q < xs - kSlack) continue;
        bool progress = false;
        for (const auto& [t, p] : fdist[s][i])
          if (assigned[t] && maybe[t]) progress = true;
        if (progress && q > pick_q) {
          pick = static_cast<int>(i);
          pick_q = q;
        }
      }
      if (pick >= 0) {
        policy.choice[s] = static_cast<std::size_t>(pick);
        assigned[s] = true;
        changed = true;
      }
    }
  }
  for (Node s = 0; s < n; ++s) {
    if (assigned[s]) continue;
    std::size_t best = 0;
    for (std::size_t i = 1; i < fdist[s].size(); ++i)
      if (qf(s, i) > qf(s, best)) best = i;
    policy.choice[s] = best;
  }

  // Exact certification: a policy whose exact value admits no strict local
  // improvement is a Bellman fixpoint, hence at least the least fixpoint,
  // which is the optimum.
  std::vector<Rational> values;
  res.improvements = improve(m, to, policy, values);
  res.policy = std::move(policy);
  res.probability = values[from];
  return res;
}

ReachResult policy_iteration(const Mdp& m, Node from, Node to) {
  ReachResult res;
  res.policy.choice.assign(m.num_nodes(), 0);
  std::vector<Rational> values;
  res.improvements = improve(m, to, res.policy, values);
  res.probability = values[from];
  return res;
}

Pcfa apply_policy(const Pcfa& a, const SimplePolicy& p) {
  Mdp m = underlying_mdp(a);
  Pcfa out;
  while (out.num_locations() < a.num_locations()) out.add_location();
  out.set_init(a.init());
  out.set_end(a.end());
  for (Symbol s : a.alphabet()) out.add_symbol(s);
  for (std::size_t l = 0; l < a.num_locations(); ++l) {
    if (l >= p.choice.size()) throw std::invalid_argument("apply_policy: policy too short");
    const Action& act = p.at(m, l).label;
    const auto& edges = a.out(static_cast<Location>(l));
    for (const auto& [s, t] : edges) {
      const Statement& st = statement(s);
      bool keep = (act.kind == Action::Kind::Statement && act.symbol == s) ||
                  (act.kind == Action::Kind::Distribution && st.is_prob() && st.tag() == act.tag);
      if (keep) out.add_transition(static_cast<Location>(l), s, t);
    }
  }
  return out;
}

BoundResult structural_bound(const Pcfa& a) {
  Mdp m = underlying_mdp(a);
  ReachResult r = max_reachability(m, a.init(), a.end());
  return BoundResult{r.probability, r.policy};
}

bool is_mc_shaped(const Pcfa& a) {
  Mdp m = underlying_mdp(a);
  for (Node s = 0; s < m.num_nodes(); ++s)
    if (m.actions(s).size() > 1) return false;
  return true;
}

Rational mc_accepting_mass(const Pcfa& a) {
  Mdp m = underlying_mdp(a);
  SimplePolicy p;
  p.choice.assign(m.num_nodes(), 0);
  for (Node s = 0; s < m.num_nodes(); ++s)
    if (m.actions(s).size() > 1) throw std::invalid_argument("mc_accepting_mass: automaton is not MC-shaped");
  return policy_values(m, p, a.end())[a.init()];
}

}  // namespace tb
