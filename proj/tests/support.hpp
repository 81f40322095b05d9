#pragma once

#include "tracebound/parser.hpp"
#include "tracebound/pcfa.hpp"
#include "tracebound/trace.hpp"

#include <string>

namespace tb::testing {

inline std::string task_path(const std::string& name) { return std::string(TB_TASKS_DIR) + "/" + name; }
inline VerificationTask task_file(const std::string& name) { return load_task(task_path(name)); }

inline Statement assign(const std::string& v, const std::string& e) { return Statement::assign(v, parse_expr(e)); }
inline Statement assume(const std::string& c) { return Statement::assume(parse_bexpr(c)); }
inline Symbol sym(const Statement& s) { return intern(s); }

inline Pcfa limit_pcfa() { return program_to_pcfa(task_file("limit.task").program); }

// Traces of the counter-loop program, named after the walkthrough.
inline Trace limit_trace4() {
  return Trace{assign("x", "0"), Statement::prob_left(0), assign("c", "0"), assume("!(c > 0)")};
}
inline Trace limit_trace5() {
  return Trace{assign("x", "0"), Statement::prob_left(0), assign("c", "0"), assume("c > 0"),
               Statement::prob_right(1), Statement::skip(), assign("c", "c - 1"), assume("!(c > 0)")};
}

// The three weight-1/8 traces with two loop iterations that bump x at least once.
inline std::vector<Trace> limit_c2_traces() {
  auto iter = [](bool bump) {
    return bump ? std::vector<Statement>{assume("c > 0"), Statement::prob_left(1), assign("x", "x + 1"), assign("c", "c - 1")}
                : std::vector<Statement>{assume("c > 0"), Statement::prob_right(1), Statement::skip(), assign("c", "c - 1")};
  };
  std::vector<Trace> out;
  for (auto [a, b] : {std::pair{true, true}, std::pair{true, false}, std::pair{false, true}}) {
    std::vector<Symbol> w{sym(assign("x", "0")), sym(Statement::prob_right(0)), sym(Statement::skip())};
    for (const auto& s : iter(a)) w.push_back(sym(s));
    for (const auto& s : iter(b)) w.push_back(sym(s));
    w.push_back(sym(assume("!(c > 0)")));
    out.emplace_back(std::move(w));
  }
  return out;
}

}  // namespace tb::testing
