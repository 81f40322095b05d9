#pragma once

#include "tracebound/automata.hpp"
#include "tracebound/cexcheck.hpp"
#include "tracebound/logic.hpp"

#include <optional>
#include <vector>

namespace tb {

/// Automaton whose locations carry predicates; every transition is a valid
/// Hoare triple between its endpoint labels.
struct FloydHoareAutomaton {
  GeneralPcfa base;
  std::vector<BExpr> labels;
};

/// Floyd-Hoare automaton whose transitions strictly increase the location
/// priority, so its language is finite.
struct OrderedFloydHoareAutomaton {
  FloydHoareAutomaton fh;
  std::vector<unsigned> priority;
};

/// Partition of the precondition into pairwise disjoint cases.
struct SplitSet {
  std::vector<BExpr> members;
};

/// Pairwise unsatisfiable and jointly equivalent to pre.
bool check_split_set(Logic& logic, const SplitSet& s, const BExpr& pre);

/// The refinement automaton V is kept in factored form: words that start with
/// a split edge, avoid every certified automaton and (when present) are
/// accepted by the value-analysis automaton.
struct RefinementState {
  SplitSet splits;
  Alphabet sigma;                          // program alphabet, without split edges
  std::vector<GeneralPcfa> certified;      // automata with no violating trace
  std::optional<GeneralPcfa> value_automaton;

  /// Materializes V as a single automaton.
  GeneralPcfa v() const;
  /// Membership without materializing.
  bool accepts(const Trace& t) const;
};

RefinementState initial_refinement(const Alphabet& sigma, const BExpr& pre);

/// Fresh initial location with one assume(member) edge per split into the
/// old initial location.
Pcfa sync_program(const Pcfa& a, const SplitSet& splits);

/// Locations are the distinct predicates of the tagging; every valid triple
/// over sigma becomes a transition.
FloydHoareAutomaton generalize_nonviolating(Logic& logic, const TaggedTrace& tt, const Alphabet& sigma);

/// One location per trace position, labelled by the wp tagging anchored at
/// !post; transitions are valid triples that move to a later position.
OrderedFloydHoareAutomaton generalize_violating_finite(Logic& logic, const Trace& t, const BExpr& pre,
                                                       const BExpr& post, const Alphabet& sigma);

/// V := V minus the union of qs.
RefinementState update_refinement(RefinementState state, const std::vector<FloydHoareAutomaton>& qs);

struct SplitOutcome {
  bool vacuous = false;  // one side of the split is unsatisfiable
  RefinementState state;
  std::vector<Trace> relabeled;
  Pcfa cand;
};

/// Replaces split member `phi` by phi && E and phi && !E, duplicating the
/// matching edges in V and in `cand`. Subset traces move to the E side, the
/// others to the !E side.
SplitOutcome apply_split(Logic& logic, const RefinementState& state, const BExpr& phi, const BExpr& e,
                         const SpuriousReport& report, const Pcfa& cand);

/// Adds one edge per symbol in `to` beside every `from` edge; the Pcfa
/// version drops the `from` edge so the result stays deterministic.
GeneralPcfa relabel(const GeneralPcfa& g, Symbol from, const std::vector<Symbol>& to);
Pcfa relabel(const Pcfa& a, Symbol from, const std::vector<Symbol>& to);

/// Variables live on entry to each location (post's variables at the end).
std::vector<std::set<std::string>> live_variables(const Pcfa& a, const BExpr& post);

struct ValueAnalysisResult {
  SplitSet splits;         // one member per initial valuation
  GeneralPcfa automaton;   // starts with the split edges
  std::size_t states = 0;
};

/// Explicit-state data-flow analysis over sync_program(a, splits). Initial
/// valuations are the models of pre projected onto the variables live at the
/// initial location. nullopt when more than state_limit states appear.
std::optional<ValueAnalysisResult> value_analysis_refine(Logic& logic, const Pcfa& a, const BExpr& pre,
                                                         const BExpr& post, std::size_t state_limit);

}  // namespace tb
