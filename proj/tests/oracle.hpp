#pragma once

#include "tracebound/program.hpp"
#include "tracebound/valuation.hpp"

#include <vector>

namespace tb::testing {

struct OracleResult {
  Rational probability = 0;
  Valuation worst;            // initial state attaining the maximum
  std::size_t initial_states = 0;
};

/// Exact violation probability by exhaustive interpretation of the AST: all
/// coin outcomes, nondeterminism resolved with full knowledge of the state.
/// Variables constrained by pre range over [lo, hi]; all others start at 0.
/// Throws std::runtime_error when a path exceeds max_steps.
OracleResult brute_force(const VerificationTask& task, Int lo = -5, Int hi = 10, std::size_t max_steps = 2000);

/// Program variables (assigned or read), sorted.
std::vector<std::string> program_vars(const Program& p);

}  // namespace tb::testing
