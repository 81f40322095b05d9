#pragma once

#include "tracebound/program.hpp"
#include "tracebound/statement.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tb {

using Location = std::uint32_t;
using Alphabet = std::set<Symbol>;

/// Deterministic control-flow automaton with a single exit location that has
/// no outgoing transitions.
class Pcfa {
 public:
  /// Two locations (init = 0, end = 1) and no transitions.
  Pcfa();

  Location add_location();
  /// Throws std::logic_error on nondeterminism or an edge leaving `end`.
  void add_transition(Location from, Symbol sym, Location to);

  std::size_t num_locations() const { return delta_.size(); }
  Location init() const { return init_; }
  Location end() const { return end_; }
  void set_init(Location l) { init_ = l; }
  void set_end(Location l);
  const std::map<Symbol, Location>& out(Location l) const { return delta_.at(l); }
  const Alphabet& alphabet() const { return alphabet_; }
  void add_symbol(Symbol s) { alphabet_.insert(s); }
  std::size_t num_transitions() const;
  /// True when the end location is unreachable (no accepted traces).
  bool empty_language() const;

  bool accepts(const std::vector<Symbol>& word) const;

 private:
  std::vector<std::map<Symbol, Location>> delta_;
  Location init_ = 0;
  Location end_ = 1;
  Alphabet alphabet_;
};

/// Unrestricted NFA over statements.
class GeneralPcfa {
 public:
  GeneralPcfa() = default;

  Location add_location(bool accepting = false);
  void add_transition(Location from, Symbol sym, Location to);
  std::size_t num_locations() const { return edges_.size(); }
  Location init() const { return init_; }
  void set_init(Location l) { init_ = l; }
  bool accepting(Location l) const { return accepting_.at(l); }
  void set_accepting(Location l, bool acc) { accepting_.at(l) = acc; }
  /// Outgoing edges, sorted by (symbol id, target), no duplicates.
  const std::vector<std::pair<Symbol, Location>>& out(Location l) const { return edges_.at(l); }
  const Alphabet& alphabet() const { return alphabet_; }
  void add_symbol(Symbol s) { alphabet_.insert(s); }
  std::size_t num_transitions() const;

  /// Accepts the non-empty word.
  bool accepts(const std::vector<Symbol>& word) const;

  static GeneralPcfa from_pcfa(const Pcfa& a);

 private:
  std::vector<std::vector<std::pair<Symbol, Location>>> edges_;
  std::vector<bool> accepting_;
  Location init_ = 0;
  Alphabet alphabet_;
};

/// Compiles a program; tags are assigned by threaded (distribution,
/// nondeterminism) counters, children converted before the parent's tag.
Pcfa program_to_pcfa(const Program& p);

/// Throws std::logic_error describing the first broken invariant.
void check_invariants(const Pcfa& a);

std::string to_dot(const Pcfa& a, const std::string& name = "pcfa");
std::string to_dot(const GeneralPcfa& g, const std::string& name = "automaton");

}  // namespace tb
