#pragma once

#include "tracebound/smt.hpp"
#include "tracebound/trace.hpp"
#include "tracebound/wp.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace tb {

/// phi_0 s_1 phi_1 ... s_n phi_n; predicates.size() == trace.size() + 1.
struct TaggedTrace {
  Trace trace;
  std::vector<BExpr> predicates;
};

enum class InterpolationStrategy {
  Auto,            // solver interpolants when enabled, then unsat-core guided wp
  Solver,          // get-interpolants over the SSA path formula
  StrongestPost,   // forward strongest postconditions (over-approximated)
  CoreWeakestPre,  // wp over the statements in an unsat core
  WeakestPre,      // plain wp from the postcondition
};

struct SatAnswer {
  bool sat = false;
  Valuation model;  // all free variables plus the requested extras
};

struct LogicStats {
  std::size_t sat_queries = 0;
  std::size_t cache_hits = 0;
  std::size_t hoare_queries = 0;
  std::size_t hoare_cache_hits = 0;
  std::size_t interpolation_fallbacks = 0;
};

/// Predicate reasoning backed by one solver session, with caches keyed by
/// canonical predicate text.
class Logic {
 public:
  explicit Logic(SolverConfig cfg = {});

  SatAnswer check_sat(const BExpr& p, const std::set<std::string>& extra_vars = {});
  bool is_sat(const BExpr& p);
  bool valid(const BExpr& p) { return !is_sat(BExpr::negate(p)); }
  bool implies(const BExpr& a, const BExpr& b) { return !is_sat(BExpr::conj(a, BExpr::negate(b))); }
  bool equivalent(const BExpr& a, const BExpr& b) { return implies(a, b) && implies(b, a); }

  /// Every state of p either blocks under s or lands in q.
  bool hoare_valid(const BExpr& p, Symbol s, const BExpr& q);
  bool hoare_valid(const BExpr& p, const Statement& s, const BExpr& q) { return hoare_valid(p, intern(s), q); }

  /// Syntactic simplification, then True/False when the predicate is valid or
  /// unsatisfiable.
  BExpr normalize(const BExpr& p);

  /// Tagging of a non-violating trace. Throws std::invalid_argument when the
  /// trace is violating.
  TaggedTrace sequence_interpolants(const Trace& t, const BExpr& pre, const BExpr& post,
                                    InterpolationStrategy strategy = InterpolationStrategy::Auto);

  /// Backward hoare_wp tagging from `anchor` (used for violating traces with
  /// anchor = !post).
  TaggedTrace wp_tagging(const Trace& t, const BExpr& anchor);

  /// Checks all segment triples plus pre => phi_0 and phi_n => post.
  bool valid_tagging(const TaggedTrace& tt, const BExpr& pre, const BExpr& post);

  // Incremental scope for optimisation searches.
  void push();
  void pop();
  void add(const BExpr& p);
  bool check();

  const LogicStats& stats() const { return stats_; }
  SmtSession& session() { return *session_; }

 private:
  void declare(const std::set<std::string>& vars);
  bool raw_check(const std::string& assertion);
  std::optional<TaggedTrace> solver_interpolants(const Trace& t, const BExpr& pre, const BExpr& post);
  std::optional<TaggedTrace> strongest_post(const Trace& t, const BExpr& pre, const BExpr& post);
  std::optional<TaggedTrace> core_wp(const Trace& t, const BExpr& pre, const BExpr& post);

  std::unique_ptr<SmtSession> session_;
  std::set<std::string> declared_;
  std::unordered_map<std::string, bool> sat_cache_;
  std::unordered_map<std::string, bool> hoare_cache_;
  std::unordered_map<std::string, BExpr> normal_cache_;
  int depth_ = 0;
  LogicStats stats_;
};

/// SMT name of a program variable.
std::string smt_var(const std::string& v);

}  // namespace tb
