#pragma once

#include "tracebound/logic.hpp"
#include "tracebound/mdp.hpp"

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tb {

/// Search or enumeration ran out of its trace, node or time allowance.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TraceClass {
  bool violating = false;
  BExpr path_cond = BExpr::bottom();  // Violating only
  Valuation witness;                  // Violating only
  bool infeasible = false;            // NonViolating only
};

/// Variables read or written by the trace.
std::set<std::string> trace_vars(const Trace& t);

TraceClass classify_trace(Logic& logic, const Trace& t, const BExpr& pre, const BExpr& post);

/// After the longest common prefix the traces continue with probL(i) and
/// probR(i) (in either order) for the same tag i.
bool structurally_compatible(const Trace& a, const Trace& b);

struct CompatibleSubset {
  std::vector<Trace> traces;
  Rational weight = 0;
  BExpr cond = BExpr::top();
};

/// Maximum total weight over subsets that are pairwise structurally
/// compatible and have a satisfiable joint path condition. Branch and bound
/// with a precomputed conflict graph and incremental solver scopes.
/// Throws BudgetExhausted after `node_limit` search nodes.
CompatibleSubset max_weight_compatible_subset(Logic& logic, const std::vector<Trace>& ts, const BExpr& pre,
                                              const BExpr& post, std::size_t node_limit = 2000000);

struct Counterexample {
  std::vector<Trace> traces;
  Rational total_weight = 0;
  BExpr joint_cond = BExpr::top();
  Valuation witness;
};

struct SpuriousReport {
  std::vector<Trace> violating;
  std::vector<Trace> non_violating;
  std::vector<Trace> max_subset;
  BExpr split = BExpr::top();
  Rational best_weight = 0;
  Rational remaining = 0;
  std::size_t enumerated = 0;
  /// Undecided: returned early so the caller can refine with the
  /// non-violating traces seen so far; max_subset is empty.
  bool partial = false;
};

struct CandidateBudget {
  std::size_t max_traces = 20000;
  std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
  /// Re-run the subset search after this many new violating traces.
  std::size_t batch = 8;
  /// When nonzero, give up on a decision after this many traces and return a
  /// partial report if some non-violating trace was seen.
  std::size_t partial_after = 0;
};

using CandidateOutcome = std::variant<Counterexample, SpuriousReport>;

/// Enumerates the traces of an MC-shaped candidate by decreasing weight until
/// a compatible violating subset heavier than beta appears or the best
/// subset plus the unexplored mass is at most beta. Throws BudgetExhausted
/// otherwise, unless budget.partial_after allows a partial report.
CandidateOutcome verify_candidate(Logic& logic, const Pcfa& cand, const BExpr& pre, const BExpr& post,
                                  const Rational& beta, const CandidateBudget& budget = {});

/// Solver-free re-check: pairwise compatibility, the witness satisfies pre
/// and drives every trace to a non-bottom state violating post, the recorded
/// weight matches and exceeds beta. Returns the first problem found.
std::optional<std::string> check_counterexample(const Counterexample& cex, const BExpr& pre, const BExpr& post,
                                                const Rational& beta);

}  // namespace tb
