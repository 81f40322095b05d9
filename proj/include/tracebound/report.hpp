#pragma once

#include "tracebound/driver.hpp"
#include "tracebound/mdp.hpp"

#include <json.hpp>
#include <string>

namespace tb {

/// "SAT" (bound holds), "UnSAT" (violation), "TO" (time limit) or "Unknown".
std::string result_label(const Verdict& v);

nlohmann::json counterexample_json(const Counterexample& cex);

/// One run: task path, verdict, bounds, timing and counterexample summary.
nlohmann::json run_report(const std::string& task_path, const Rational& beta, const Verdict& v);

nlohmann::json mdp_json(const Mdp& m);

}  // namespace tb
