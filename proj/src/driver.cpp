#include "tracebound/driver.hpp"

#include <algorithm>
#include <chrono>
#include <set>

namespace tb {

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Safe:
      return "Safe";
    case Verdict::Kind::Violation:
      return "Violation";
    case Verdict::Kind::Unknown:
      return "Unknown";
  }
  return "Unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

/// State shared by both engines.
class Run {
 public:
  Run(const VerificationTask& task, const EngineConfig& cfg)
      : task_(task), cfg_(cfg), logic_(cfg.solver), start_(Clock::now()) {
    auto limit = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.timeout_s));
    deadline_ = start_ + limit;
    program_ = program_to_pcfa(task.program);
    if (cfg.dot) cfg.dot("program", to_dot(program_, "program"));
    state_ = initial_refinement(program_.alphabet(), task.pre);
    if (cfg.value_analysis_limit) {
      auto va = value_analysis_refine(logic_, program_, task.pre, task.post, *cfg.value_analysis_limit);
      if (va) {
        state_.splits = va->splits;
        state_.value_automaton = std::move(va->automaton);
        stats_.value_analysis_used = true;
      }
    }
  }

  Logic& logic() { return logic_; }
  EngineStats& stats() { return stats_; }
  RefinementState& state() { return state_; }
  const VerificationTask& task() const { return task_; }
  const EngineConfig& cfg() const { return cfg_; }
  Clock::time_point deadline() const { return deadline_; }
  bool timed_out() const { return Clock::now() > deadline_; }

  Pcfa synced() const { return sync_program(program_, state_.splits); }

  /// sync(A) intersected with V.
  Pcfa product() const {
    std::vector<const GeneralPcfa*> require, exclude;
    if (state_.value_automaton) require.push_back(&*state_.value_automaton);
    for (const auto& c : state_.certified) exclude.push_back(&c);
    return restrict_language(synced(), require, exclude);
  }

  void record_bound(const Rational& b) {
    if (!stats_.initial_bound) {
      stats_.initial_bound = stats_.value_analysis_used
                                 ? structural_bound(sync_program(program_, SplitSet{{simplify(task_.pre)}})).bound
                                 : b;
    }
    if (cfg_.runtime_checks && !stats_.bounds.empty() && b > stats_.bounds.back())
      throw std::logic_error("refined bound increased from " + to_fraction_string(stats_.bounds.back()) + " to " +
                             to_fraction_string(b));
    stats_.bounds.push_back(b);
  }

  /// Every violating trace seen so far (under a current split edge) is still
  /// accepted by the product.
  void check_membership(const Pcfa& r, const std::vector<Trace>& violating) {
    if (!cfg_.runtime_checks) return;
    std::set<Symbol> split_syms;
    for (const auto& m : state_.splits.members) split_syms.insert(intern(Statement::assume(m)));
    for (const auto& t : violating) {
      if (!split_syms.count(t[0])) continue;
      ++stats_.membership_checks;
      if (!r.accepts(t.symbols()) || !state_.accepts(t))
        throw std::logic_error("violating trace excluded by the refinement: " + to_string(t));
    }
  }

  FloydHoareAutomaton generalize(const Trace& t, const Alphabet& sigma) {
    TaggedTrace tt = logic_.sequence_interpolants(t, task_.pre, task_.post, cfg_.interpolation);
    FloydHoareAutomaton q = generalize_nonviolating(logic_, tt, sigma);
    if (cfg_.dot) cfg_.dot("certified_" + std::to_string(dot_count_++), to_dot(q.base, "certified"));
    return q;
  }

  void dump_product(const Pcfa& r) {
    if (cfg_.dot) cfg_.dot("product", to_dot(r, "product"));
  }

  Verdict finish(Verdict v) {
    stats_.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    stats_.solver_queries = logic_.session().commands_sent();
    stats_.final_splits = state_.splits.members;
    v.stats = stats_;
    return v;
  }

  Verdict safe(const Rational& b) {
    Verdict v;
    v.kind = Verdict::Kind::Safe;
    v.bound = b;
    return finish(v);
  }

  Verdict unknown(const std::string& why) {
    Verdict v;
    v.kind = Verdict::Kind::Unknown;
    v.reason = why;
    v.bound = stats_.bounds.empty() ? Rational(1) : stats_.bounds.back();
    return finish(v);
  }

  Verdict violation(Counterexample cex) {
    if (auto problem = check_counterexample(cex, task_.pre, task_.post, task_.beta))
      throw std::logic_error("counterexample failed the independent check: " + *problem);
    Verdict v;
    v.kind = Verdict::Kind::Violation;
    v.bound = stats_.bounds.empty() ? Rational(1) : stats_.bounds.back();
    v.cex = std::move(cex);
    return finish(v);
  }

  Counterexample single(const Trace& t, const TraceClass& c) {
    Counterexample cex;
    cex.traces = {t};
    cex.total_weight = trace_weight(t);
    cex.joint_cond = c.path_cond;
    cex.witness = c.witness;
    return cex;
  }

  Counterexample from_subset(const CompatibleSubset& s) {
    Counterexample cex;
    cex.traces = s.traces;
    cex.total_weight = s.weight;
    cex.joint_cond = s.cond;
    std::set<std::string> vars = vars_of(task_.pre);
    for (const auto& v : vars_of(task_.post)) vars.insert(v);
    for (const auto& t : s.traces)
      for (const auto& v : trace_vars(t)) vars.insert(v);
    cex.witness = logic_.check_sat(s.cond, vars).model;
    return cex;
  }

  void log(nlohmann::json j) {
    if (!cfg_.log) return;
    j["iteration"] = stats_.iterations;
    j["bound"] = stats_.bounds.empty() ? "1" : to_fraction_string(stats_.bounds.back());
    j["refinements"] = stats_.refinements;
    j["splits"] = stats_.splits;
    j["elapsed"] = std::chrono::duration<double>(Clock::now() - start_).count();
    cfg_.log(j);
  }

 private:
  const VerificationTask& task_;
  const EngineConfig& cfg_;
  Logic logic_;
  Clock::time_point start_, deadline_;
  Pcfa program_;
  RefinementState state_;
  EngineStats stats_;
  std::size_t dot_count_ = 0;
};

std::vector<const GeneralPcfa*> pointers(const std::vector<FloydHoareAutomaton>& qs) {
  std::vector<const GeneralPcfa*> out;
  for (const auto& q : qs) out.push_back(&q.base);
  return out;
}

Verdict general_loop(Run& run) {
  const auto& task = run.task();
  const auto& cfg = run.cfg();
  Pcfa r = run.product();
  std::vector<Trace> violating_seen;

  for (;;) {
    if (run.timed_out()) return run.unknown("time limit reached");
    if (run.stats().iterations >= cfg.max_iterations) return run.unknown("iteration limit reached");
    ++run.stats().iterations;

    BoundResult b = structural_bound(r);
    run.record_bound(b.bound);
    if (b.bound <= task.beta) {
      run.log({{"event", "safe"}, {"product_locations", r.num_locations()}});
      run.dump_product(r);
      return run.safe(b.bound);
    }
    Pcfa cand = apply_policy(r, b.reason);
    CandidateBudget budget;
    budget.max_traces = cfg.max_traces_per_candidate;
    budget.deadline = run.deadline();
    budget.partial_after = cfg.partial_refinement_after;
    CandidateOutcome outcome;
    try {
      outcome = verify_candidate(run.logic(), cand, task.pre, task.post, task.beta, budget);
    } catch (const BudgetExhausted& e) {
      return run.unknown(e.what());
    }
    if (auto* cex = std::get_if<Counterexample>(&outcome)) {
      run.log({{"event", "counterexample"}, {"traces", cex->traces.size()},
               {"weight", to_fraction_string(cex->total_weight)}});
      return run.violation(std::move(*cex));
    }
    auto& rep = std::get<SpuriousReport>(outcome);
    run.stats().traces_enumerated += rep.enumerated;
    run.stats().violating_seen += rep.violating.size();
    violating_seen.insert(violating_seen.end(), rep.violating.begin(), rep.violating.end());

    std::vector<Trace> to_generalize = rep.non_violating;
    bool rebuild = false;
    if (!rep.max_subset.empty()) {
      const auto& init_edges = cand.out(cand.init());
      if (init_edges.size() != 1) throw std::logic_error("candidate does not start with one split edge");
      BExpr phi = statement(init_edges.begin()->first).cond();
      SplitOutcome split = apply_split(run.logic(), run.state(), phi, rep.split, rep, cand);
      if (split.vacuous) {
        ++run.stats().vacuous_splits;
      } else {
        run.state() = std::move(split.state);
        ++run.stats().splits;
        rebuild = true;
        if (cfg.runtime_checks && !check_split_set(run.logic(), run.state().splits, task.pre))
          throw std::logic_error("split set no longer partitions the precondition");
        for (const auto& t : split.relabeled) {
          if (classify_trace(run.logic(), t, task.pre, task.post).violating)
            violating_seen.push_back(t);
          else
            to_generalize.push_back(t);
        }
      }
    }

    Alphabet sigma = run.synced().alphabet();
    std::vector<FloydHoareAutomaton> qs;
    for (const auto& t : to_generalize) {
      if (run.timed_out()) return run.unknown("time limit reached");
      bool covered = false;
      for (const auto& q : qs) covered = covered || q.base.accepts(t.symbols());
      for (const auto& c : run.state().certified) covered = covered || c.accepts(t.symbols());
      if (covered) continue;
      try {
        qs.push_back(run.generalize(t, sigma));
      } catch (const SolverUnknown& e) {
        return run.unknown(e.what());
      }
    }
    run.log({{"event", "spurious"}, {"candidate_locations", cand.num_locations()}, {"enumerated", rep.enumerated},
             {"violating", rep.violating.size()}, {"non_violating", rep.non_violating.size()},
             {"best_weight", to_fraction_string(rep.best_weight)}, {"new_automata", qs.size()}, {"split", rebuild},
             {"partial", rep.partial}});
    if (qs.empty() && !rebuild) return run.unknown("no refinement progress");
    run.stats().refinements += qs.size();
    run.state() = update_refinement(std::move(run.state()), qs);
    r = rebuild ? run.product() : restrict_language(r, {}, pointers(qs));
    run.check_membership(r, violating_seen);
  }
}

Verdict rc_loop(Run& run) {
  const auto& task = run.task();
  const auto& cfg = run.cfg();
  const Pcfa synced = run.synced();
  const Alphabet sigma = synced.alphabet();
  Pcfa r = run.product();
  Pcfa frontier = r;
  std::vector<GeneralPcfa> storage;
  std::vector<Trace> theta;
  Rational theta_weight = 0;
  std::map<Trace, TraceClass> classified;

  auto classify = [&](const Trace& t) -> const TraceClass& {
    auto it = classified.find(t);
    if (it == classified.end()) it = classified.emplace(t, classify_trace(run.logic(), t, task.pre, task.post)).first;
    return it->second;
  };
  auto add_violating = [&](const Trace& t) {
    if (std::find(theta.begin(), theta.end(), t) != theta.end()) return;
    theta.push_back(t);
    theta_weight += trace_weight(t);
    ++run.stats().violating_seen;
  };
  // Refines V with the given non-violating traces; returns true when the
  // bound dropped to beta or below.
  auto refine_with = [&](const std::vector<Trace>& ts) {
    std::vector<FloydHoareAutomaton> qs;
    for (const auto& t : ts) {
      if (!r.accepts(t.symbols())) continue;
      bool covered = false;
      for (const auto& q : qs) covered = covered || q.base.accepts(t.symbols());
      if (covered) continue;
      qs.push_back(run.generalize(t, sigma));
    }
    if (qs.empty()) return false;
    run.stats().refinements += qs.size();
    run.state() = update_refinement(std::move(run.state()), qs);
    r = restrict_language(r, {}, pointers(qs));
    frontier = restrict_language(frontier, {}, pointers(qs));
    run.record_bound(structural_bound(r).bound);
    run.check_membership(r, theta);
    return run.stats().bounds.back() <= task.beta;
  };

  run.record_bound(structural_bound(r).bound);
  if (run.stats().bounds.back() <= task.beta) return run.safe(run.stats().bounds.back());

  for (;;) {
    if (run.timed_out()) return run.unknown("time limit reached");
    if (run.stats().iterations >= cfg.max_iterations) return run.unknown("iteration limit reached");
    ++run.stats().iterations;

    std::optional<Trace> tau = shortest_trace(frontier, {}, {});
    if (!tau) return run.unknown("every remaining trace is stored; violating traces are incompatible");
    if (cfg.runtime_checks)
      for (const auto& s : storage)
        if (s.accepts(tau->symbols())) throw std::logic_error("picked a stored trace: " + to_string(*tau));
    ++run.stats().traces_enumerated;

    const TraceClass c = classify(*tau);
    if (!c.violating) {
      run.log({{"event", "non_violating"}, {"length", tau->size()}});
      if (refine_with({*tau})) return run.safe(run.stats().bounds.back());
      continue;
    }
    add_violating(*tau);
    if (trace_weight(*tau) > task.beta) {
      run.log({{"event", "counterexample"}, {"traces", 1}});
      return run.violation(run.single(*tau, c));
    }
    OrderedFloydHoareAutomaton o = generalize_violating_finite(run.logic(), *tau, task.pre, task.post, sigma);
    storage.push_back(std::move(o.fh.base));
    frontier = restrict_language(frontier, {}, {&storage.back()});

    std::vector<Trace> members;
    try {
      members = finite_language(storage.back(), &r, cfg.harvest_limit);
    } catch (const std::length_error&) {
      members = {*tau};
    }
    std::vector<Trace> harmless;
    for (const auto& m : members) {
      if (m == *tau) continue;
      if (classify(m).violating)
        add_violating(m);
      else
        harmless.push_back(m);
    }
    run.log({{"event", "violating"}, {"length", tau->size()}, {"harvested", members.size()},
             {"theta", theta.size()}, {"theta_weight", to_fraction_string(theta_weight)}});
    if (refine_with(harmless)) return run.safe(run.stats().bounds.back());
    run.check_membership(r, theta);

    if (theta_weight > task.beta) {
      CompatibleSubset best;
      try {
        best = max_weight_compatible_subset(run.logic(), theta, task.pre, task.post);
      } catch (const BudgetExhausted& e) {
        return run.unknown(e.what());
      }
      if (best.weight > task.beta) {
        run.log({{"event", "counterexample"}, {"traces", best.traces.size()}});
        return run.violation(run.from_subset(best));
      }
    }
  }
}

}  // namespace

Verdict verify_general(const VerificationTask& task, const EngineConfig& cfg) {
  Run run(task, cfg);
  try {
    return general_loop(run);
  } catch (const SolverUnknown& e) {
    return run.unknown(e.what());
  }
}

Verdict verify_rc(const VerificationTask& task, const EngineConfig& cfg) {
  Run run(task, cfg);
  try {
    return rc_loop(run);
  } catch (const SolverUnknown& e) {
    return run.unknown(e.what());
  }
}

Verdict verify(const VerificationTask& task, const EngineConfig& cfg) {
  return cfg.engine == Engine::General ? verify_general(task, cfg) : verify_rc(task, cfg);
}

}  // namespace tb
