#include "tracebound/report.hpp"

namespace tb {

std::string result_label(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::Safe:
      return "SAT";
    case Verdict::Kind::Violation:
      return "UnSAT";
    case Verdict::Kind::Unknown:
      return v.reason == "time limit reached" ? "TO" : "Unknown";
  }
  return "Unknown";
}

nlohmann::json counterexample_json(const Counterexample& cex) {
  nlohmann::json j;
  j["traces"] = nlohmann::json::array();
  j["weights"] = nlohmann::json::array();
  for (const auto& t : cex.traces) {
    j["traces"].push_back(statement_strings(t));
    j["weights"].push_back(to_fraction_string(trace_weight(t)));
  }
  j["totalWeight"] = to_fraction_string(cex.total_weight);
  j["condition"] = to_string(cex.joint_cond);
  j["witness"] = nlohmann::json::object();
  for (const auto& [k, v] : cex.witness.values()) j["witness"][k] = v;
  return j;
}

nlohmann::json run_report(const std::string& task_path, const Rational& beta, const Verdict& v) {
  nlohmann::json j;
  j["task"] = task_path;
  j["verdict"] = to_string(v.kind);
  j["result"] = result_label(v);
  j["beta"] = to_fraction_string(beta);
  j["bound"] = to_fraction_string(v.bound);
  j["initialBound"] = v.stats.initial_bound ? nlohmann::json(to_fraction_string(*v.stats.initial_bound)) : nullptr;
  j["time"] = v.stats.seconds;
  j["iterations"] = v.stats.iterations;
  j["splits"] = v.stats.splits;
  j["refinements"] = v.stats.refinements;
  j["tracesEnumerated"] = v.stats.traces_enumerated;
  j["solverCommands"] = v.stats.solver_queries;
  if (v.kind == Verdict::Kind::Unknown) j["reason"] = v.reason;
  if (v.cex) {
    j["counterexample"] = counterexample_json(*v.cex);
    j["traceCount"] = v.cex->traces.size();
    j["totalWeight"] = to_fraction_string(v.cex->total_weight);
  }
  return j;
}

nlohmann::json mdp_json(const Mdp& m) {
  nlohmann::json j;
  j["nodes"] = m.num_nodes();
  j["dummy"] = m.dummy;
  j["actions"] = nlohmann::json::array();
  for (Node n = 0; n < m.num_nodes(); ++n)
    for (const auto& a : m.actions(n)) {
      nlohmann::json aj;
      aj["from"] = n;
      aj["label"] = to_string(a.label);
      aj["dist"] = nlohmann::json::array();
      for (const auto& [to, p] : a.dist) aj["dist"].push_back({{"to", to}, {"p", to_fraction_string(p)}});
      j["actions"].push_back(aj);
    }
  return j;
}

}  // namespace tb
