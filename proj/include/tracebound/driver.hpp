#pragma once

#include "tracebound/cexcheck.hpp"
#include "tracebound/program.hpp"
#include "tracebound/refine.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace tb {

enum class Engine { General, RefutationallyComplete };

struct EngineConfig {
  Engine engine = Engine::General;
  double timeout_s = 500;
  std::size_t max_iterations = 100000;
  std::size_t max_traces_per_candidate = 20000;
  /// Undecided candidates are refined with their non-violating traces after
  /// this many traces (0 disables).
  std::size_t partial_refinement_after = 32;
  /// Largest finite language harvested from one ordered automaton.
  std::size_t harvest_limit = 4096;
  std::optional<std::size_t> value_analysis_limit;
  InterpolationStrategy interpolation = InterpolationStrategy::Auto;
  SolverConfig solver;
  /// Monotonicity and V-membership assertions; a failure throws
  /// std::logic_error.
  bool runtime_checks = true;
  /// Receives one JSON object per iteration.
  std::function<void(const nlohmann::json&)> log;
  /// Receives (name, DOT text) for the program, every certified automaton
  /// and the final product.
  std::function<void(const std::string&, const std::string&)> dot;
};

struct EngineStats {
  std::size_t iterations = 0;
  std::size_t splits = 0;
  std::size_t vacuous_splits = 0;
  std::size_t refinements = 0;          // certified automata added to V
  std::size_t traces_enumerated = 0;
  std::size_t violating_seen = 0;
  std::size_t membership_checks = 0;
  std::optional<Rational> initial_bound;
  std::vector<Rational> bounds;          // bound after every refinement step
  bool value_analysis_used = false;
  std::vector<BExpr> final_splits;
  double seconds = 0;
  std::size_t solver_queries = 0;
};

struct Verdict {
  enum class Kind { Safe, Violation, Unknown };
  Kind kind = Kind::Unknown;
  Rational bound = 1;                    // Safe: certified bound; Unknown: best bound seen
  std::optional<Counterexample> cex;
  std::string reason;                    // Unknown only
  EngineStats stats;
};

std::string to_string(Verdict::Kind k);

Verdict verify_general(const VerificationTask& task, const EngineConfig& cfg);
Verdict verify_rc(const VerificationTask& task, const EngineConfig& cfg);
/// Dispatches on cfg.engine.
Verdict verify(const VerificationTask& task, const EngineConfig& cfg);

}  // namespace tb
