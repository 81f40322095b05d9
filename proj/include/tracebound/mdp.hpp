#pragma once

#include "tracebound/pcfa.hpp"
#include "tracebound/rational.hpp"

#include <string>
#include <utility>
#include <vector>

namespace tb {

using Node = std::size_t;

/// Action label: a non-probabilistic statement, a distribution tag, or the
/// dummy self-loop.
struct Action {
  enum class Kind { Statement, Distribution, Dummy };
  Kind kind = Kind::Dummy;
  Symbol symbol = 0;  // Statement
  unsigned tag = 0;   // Distribution

  friend bool operator==(const Action& a, const Action& b) {
    return a.kind == b.kind && a.symbol == b.symbol && a.tag == b.tag;
  }
};

std::string to_string(const Action& a);

struct MdpAction {
  Action label;
  std::vector<std::pair<Node, Rational>> dist;  // targets distinct, probabilities sum to 1
};

class Mdp {
 public:
  explicit Mdp(std::size_t nodes = 0) : actions_(nodes) {}

  Node add_node();
  /// Throws std::invalid_argument unless the distribution sums to exactly 1.
  void add_action(Node n, Action label, std::vector<std::pair<Node, Rational>> dist);

  std::size_t num_nodes() const { return actions_.size(); }
  const std::vector<MdpAction>& actions(Node n) const { return actions_.at(n); }

  /// Node added for missing branch halves (only set for PCFA-derived MDPs).
  Node dummy = 0;

 private:
  std::vector<std::vector<MdpAction>> actions_;
};

/// Memoryless policy: index of the chosen action at every node.
struct SimplePolicy {
  std::vector<std::size_t> choice;
  const MdpAction& at(const Mdp& m, Node n) const { return m.actions(n).at(choice.at(n)); }
};

struct ReachResult {
  Rational probability;
  SimplePolicy policy;
  double residual = 0;          // last value-iteration change
  std::size_t sweeps = 0;       // value-iteration sweeps
  std::size_t improvements = 0; // exact policy-improvement rounds after extraction
};

/// Nodes are the locations of `a` followed by the dummy node.
Mdp underlying_mdp(const Pcfa& a);

/// Maximum probability of reaching `to` from `from`, exact. Value iteration in
/// double (residual < 1e-10, at most 10^6 sweeps) yields a candidate policy
/// whose chain is solved over rationals; exact policy improvement runs until
/// no action improves any node, so the returned value is certified optimal.
ReachResult max_reachability(const Mdp& m, Node from, Node to);

/// Exact reachability probabilities of `to` for every node under a policy.
std::vector<Rational> policy_values(const Mdp& m, const SimplePolicy& p, Node to);

/// Pure rational policy iteration from a fixed initial policy (oracle).
ReachResult policy_iteration(const Mdp& m, Node from, Node to);

/// Keeps exactly the transitions selected by the policy on the underlying
/// MDP of `a` (a distribution action keeps both branches of its tag).
Pcfa apply_policy(const Pcfa& a, const SimplePolicy& p);

struct BoundResult {
  Rational bound;
  SimplePolicy reason;
};

/// Maximum probability of reaching end from init in the underlying MDP.
BoundResult structural_bound(const Pcfa& a);

/// Total weight of all accepted traces of an MC-shaped Pcfa. Throws
/// std::invalid_argument if some location enables two actions.
Rational mc_accepting_mass(const Pcfa& a);

/// True when every location enables at most one action.
bool is_mc_shaped(const Pcfa& a);

}  // namespace tb
