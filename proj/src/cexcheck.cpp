#include "tracebound/cexcheck.hpp"

#include "tracebound/enumerate.hpp"

#include <algorithm>
#include <numeric>

namespace tb {

std::set<std::string> trace_vars(const Trace& t) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Statement& s = t.at(i);
    if (s.kind() == Statement::Kind::Assign) {
      out.insert(s.var());
      collect_vars(s.expr(), out);
    } else if (s.kind() == Statement::Kind::Assume) {
      collect_vars(s.cond(), out);
    }
  }
  return out;
}

namespace {

std::set<std::string> all_vars(const std::vector<Trace>& ts, const BExpr& pre, const BExpr& post) {
  std::set<std::string> vars = vars_of(pre);
  for (const auto& v : vars_of(post)) vars.insert(v);
  for (const auto& t : ts)
    for (const auto& v : trace_vars(t)) vars.insert(v);
  return vars;
}

}  // namespace

TraceClass classify_trace(Logic& logic, const Trace& t, const BExpr& pre, const BExpr& post) {
  TraceClass c;
  BExpr pc = simplify(path_condition(t, pre, post));
  SatAnswer ans = logic.check_sat(pc, all_vars({t}, pre, post));
  if (ans.sat) {
    c.violating = true;
    c.path_cond = pc;
    c.witness = ans.model;
    return c;
  }
  c.infeasible = !logic.is_sat(path_condition(t, pre, BExpr::bottom()));
  return c;
}

bool structurally_compatible(const Trace& a, const Trace& b) {
  std::size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
  if (i == a.size() || i == b.size()) return false;
  const Statement& x = a.at(i);
  const Statement& y = b.at(i);
  if (!x.is_prob() || !y.is_prob() || x.tag() != y.tag()) return false;
  return x.kind() != y.kind();
}

CompatibleSubset max_weight_compatible_subset(Logic& logic, const std::vector<Trace>& ts, const BExpr& pre,
                                              const BExpr& post, std::size_t node_limit) {
  CompatibleSubset best;
  if (ts.empty()) return best;
  const std::size_t n = ts.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Rational> weight(n);
  for (std::size_t i = 0; i < n; ++i) weight[i] = trace_weight(ts[i]);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (weight[a] != weight[b]) return weight[a] > weight[b];
    return ts[a] < ts[b];
  });
  std::vector<BExpr> pc(n, BExpr::top());
  for (std::size_t i = 0; i < n; ++i) pc[i] = simplify(path_condition(ts[i], pre, post));
  std::vector<std::vector<bool>> conflict(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      conflict[i][j] = conflict[j][i] = ts[i] == ts[j] || !structurally_compatible(ts[i], ts[j]);

  std::vector<std::size_t> chosen, best_set;
  Rational best_weight = 0;
  std::size_t nodes = 0;

  std::function<void(const std::vector<std::size_t>&, const Rational&)> search =
      [&](const std::vector<std::size_t>& cands, const Rational& cur) {
        if (++nodes > node_limit) throw BudgetExhausted("subset search node limit reached");
        if (cur > best_weight) {
          best_weight = cur;
          best_set = chosen;
        }
        std::vector<Rational> suffix(cands.size() + 1, Rational(0));
        for (std::size_t k = cands.size(); k-- > 0;) suffix[k] = suffix[k + 1] + weight[cands[k]];
        for (std::size_t k = 0; k < cands.size(); ++k) {
          if (cur + suffix[k] <= best_weight) return;
          std::size_t i = cands[k];
          logic.push();
          try {
            logic.add(pc[i]);
            if (logic.check()) {
              std::vector<std::size_t> next;
              for (std::size_t m = k + 1; m < cands.size(); ++m)
                if (!conflict[i][cands[m]]) next.push_back(cands[m]);
              chosen.push_back(i);
              search(next, cur + weight[i]);
              chosen.pop_back();
            }
          } catch (...) {
            logic.pop();
            throw;
          }
          logic.pop();
        }
      };
  search(order, Rational(0));

  std::sort(best_set.begin(), best_set.end(), [&](std::size_t a, std::size_t b) { return ts[a] < ts[b]; });
  std::vector<BExpr> conds;
  for (std::size_t i : best_set) {
    best.traces.push_back(ts[i]);
    conds.push_back(pc[i]);
  }
  best.weight = best_weight;
  best.cond = simplify(BExpr::conj_all(conds));
  return best;
}

CandidateOutcome verify_candidate(Logic& logic, const Pcfa& cand, const BExpr& pre, const BExpr& post,
                                  const Rational& beta, const CandidateBudget& budget) {
  const Rational mass = mc_accepting_mass(cand);
  SpuriousReport rep;
  rep.remaining = mass;
  if (mass <= beta) return rep;

  TraceEnumerator stream(cand);
  Rational enumerated = 0, violating_sum = 0;
  std::size_t pending = 0;
  CompatibleSubset best;
  auto recompute = [&] {
    best = max_weight_compatible_subset(logic, rep.violating, pre, post);
    pending = 0;
  };
  auto counterexample = [&] {
    Counterexample cex;
    cex.traces = best.traces;
    cex.total_weight = best.weight;
    cex.joint_cond = best.cond;
    cex.witness = logic.check_sat(best.cond, all_vars(best.traces, pre, post)).model;
    return cex;
  };
  auto spurious = [&] {
    rep.max_subset = best.traces;
    rep.split = best.cond;
    rep.best_weight = best.weight;
    return rep;
  };

  for (;;) {
    if (std::chrono::steady_clock::now() > budget.deadline) throw BudgetExhausted("time limit reached");
    auto item = stream.next();
    if (!item) {
      if (pending) recompute();
      rep.remaining = mass - enumerated;
      if (best.weight > beta) return counterexample();
      return spurious();
    }
    if (stream.produced() > budget.max_traces) throw BudgetExhausted("candidate trace limit reached");
    ++rep.enumerated;
    const Trace& t = item->first;
    enumerated += item->second;
    TraceClass c = classify_trace(logic, t, pre, post);
    if (c.violating) {
      rep.violating.push_back(t);
      violating_sum += item->second;
      ++pending;
    } else {
      rep.non_violating.push_back(t);
    }
    rep.remaining = mass - enumerated;

    bool decide = pending >= budget.batch || (pending && rep.remaining < beta) ||
                  (pending && violating_sum + rep.remaining <= beta);
    if (decide) {
      recompute();
      if (best.weight > beta) return counterexample();
    }
    if (!pending && best.weight + rep.remaining <= beta) return spurious();
    if (budget.partial_after && rep.enumerated >= budget.partial_after && !rep.non_violating.empty()) {
      if (pending) {
        recompute();
        if (best.weight > beta) return counterexample();
      }
      rep.best_weight = best.weight;
      rep.partial = true;
      return rep;
    }
  }
}

std::optional<std::string> check_counterexample(const Counterexample& cex, const BExpr& pre, const BExpr& post,
                                                const Rational& beta) {
  if (cex.traces.empty()) return "counterexample has no traces";
  for (std::size_t i = 0; i < cex.traces.size(); ++i)
    for (std::size_t j = i + 1; j < cex.traces.size(); ++j)
      if (!structurally_compatible(cex.traces[i], cex.traces[j]))
        return "traces " + std::to_string(i) + " and " + std::to_string(j) + " are not compatible";
  try {
    if (!satisfies(cex.witness, pre)) return "witness violates the precondition";
    Rational total = 0;
    for (const auto& t : cex.traces) {
      Valuation out = eval_trace(t, cex.witness);
      if (out.is_bottom()) return "trace blocks from the witness: " + to_string(t);
      if (satisfies(out, post)) return "trace satisfies the postcondition from the witness: " + to_string(t);
      total += trace_weight(t);
    }
    if (total != cex.total_weight) return "recorded weight differs from the trace weights";
    if (!(total > beta)) return "weight does not exceed the threshold";
  } catch (const std::out_of_range& e) {
    return std::string("witness misses a variable: ") + e.what();
  }
  return std::nullopt;
}

}  // namespace tb
