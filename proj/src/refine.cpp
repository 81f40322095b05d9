#include "tracebound/refine.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace tb {

bool check_split_set(Logic& logic, const SplitSet& s, const BExpr& pre) {
  for (std::size_t i = 0; i < s.members.size(); ++i)
    for (std::size_t j = i + 1; j < s.members.size(); ++j)
      if (logic.is_sat(BExpr::conj(s.members[i], s.members[j]))) return false;
  return logic.equivalent(BExpr::disj_all(s.members), pre);
}

GeneralPcfa RefinementState::v() const {
  GeneralPcfa prefix;
  Location init = prefix.add_location(false);
  Location body = prefix.add_location(true);
  prefix.set_init(init);
  Alphabet all = sigma;
  for (const auto& m : splits.members) {
    Symbol s = intern(Statement::assume(m));
    prefix.add_transition(init, s, body);
    all.insert(s);
  }
  for (Symbol s : sigma) prefix.add_transition(body, s, body);
  for (Symbol s : all) prefix.add_symbol(s);
  GeneralPcfa out = prefix;
  if (!certified.empty()) {
    GeneralPcfa u = certified.front();
    for (std::size_t i = 1; i < certified.size(); ++i) u = union_of(u, certified[i]);
    out = intersect(out, complement(u, all));
  }
  if (value_automaton) out = intersect(out, *value_automaton);
  return out;
}

bool RefinementState::accepts(const Trace& t) const {
  const Statement& first = t.at(0);
  if (first.kind() != Statement::Kind::Assume) return false;
  if (std::find(splits.members.begin(), splits.members.end(), first.cond()) == splits.members.end()) return false;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!sigma.count(t[i])) return false;
  for (const auto& c : certified)
    if (c.accepts(t.symbols())) return false;
  return !value_automaton || value_automaton->accepts(t.symbols());
}

RefinementState initial_refinement(const Alphabet& sigma, const BExpr& pre) {
  RefinementState s;
  s.sigma = sigma;
  s.splits.members.push_back(simplify(pre));
  return s;
}

Pcfa sync_program(const Pcfa& a, const SplitSet& splits) {
  Pcfa out = a;
  Location fresh = out.add_location();
  for (const auto& m : splits.members) out.add_transition(fresh, intern(Statement::assume(m)), a.init());
  out.set_init(fresh);
  return out;
}

FloydHoareAutomaton generalize_nonviolating(Logic& logic, const TaggedTrace& tt, const Alphabet& sigma) {
  FloydHoareAutomaton fh;
  std::vector<Location> at(tt.predicates.size());
  for (std::size_t i = 0; i < tt.predicates.size(); ++i) {
    BExpr p = logic.normalize(tt.predicates[i]);
    std::size_t found = fh.labels.size();
    for (std::size_t k = 0; k < fh.labels.size(); ++k)
      if (fh.labels[k] == p || logic.equivalent(fh.labels[k], p)) {
        found = k;
        break;
      }
    if (found == fh.labels.size()) {
      fh.labels.push_back(p);
      fh.base.add_location(false);
    }
    at[i] = static_cast<Location>(found);
  }
  fh.base.set_init(at.front());
  fh.base.set_accepting(at.back(), true);
  for (Symbol s : sigma) fh.base.add_symbol(s);
  for (Symbol s : tt.trace) fh.base.add_symbol(s);
  const Alphabet& all = fh.base.alphabet();
  for (Location l = 0; l < fh.labels.size(); ++l)
    for (Symbol s : all)
      for (Location m = 0; m < fh.labels.size(); ++m)
        if (logic.hoare_valid(fh.labels[l], s, fh.labels[m])) fh.base.add_transition(l, s, m);
  return fh;
}

OrderedFloydHoareAutomaton generalize_violating_finite(Logic& logic, const Trace& t, const BExpr& pre,
                                                       const BExpr& post, const Alphabet& sigma) {
  (void)pre;
  OrderedFloydHoareAutomaton o;
  TaggedTrace tt = logic.wp_tagging(t, BExpr::negate(post));
  for (const auto& p : tt.predicates) {
    o.fh.labels.push_back(logic.normalize(p));
    o.priority.push_back(static_cast<unsigned>(o.fh.base.num_locations()));
    o.fh.base.add_location(false);
  }
  o.fh.base.set_init(0);
  o.fh.base.set_accepting(static_cast<Location>(t.size()), true);
  for (Symbol s : sigma) o.fh.base.add_symbol(s);
  for (Symbol s : t) o.fh.base.add_symbol(s);
  const Alphabet& all = o.fh.base.alphabet();
  const auto n = static_cast<Location>(o.fh.labels.size());
  for (Location l = 0; l < n; ++l)
    for (Symbol s : all)
      for (Location m = l + 1; m < n; ++m)
        if (logic.hoare_valid(o.fh.labels[l], s, o.fh.labels[m])) o.fh.base.add_transition(l, s, m);
  return o;
}

RefinementState update_refinement(RefinementState state, const std::vector<FloydHoareAutomaton>& qs) {
  for (const auto& q : qs) state.certified.push_back(q.base);
  return state;
}

GeneralPcfa relabel(const GeneralPcfa& g, Symbol from, const std::vector<Symbol>& to) {
  GeneralPcfa out;
  for (Location l = 0; l < g.num_locations(); ++l) out.add_location(g.accepting(l));
  out.set_init(g.init());
  for (Symbol s : g.alphabet()) out.add_symbol(s);
  bool present = g.alphabet().count(from) != 0;
  for (Location l = 0; l < g.num_locations(); ++l)
    for (const auto& [s, m] : g.out(l)) {
      out.add_transition(l, s, m);
      if (s == from)
        for (Symbol t : to) out.add_transition(l, t, m);
    }
  if (present)
    for (Symbol t : to) out.add_symbol(t);
  return out;
}

Pcfa relabel(const Pcfa& a, Symbol from, const std::vector<Symbol>& to) {
  Pcfa out;
  while (out.num_locations() < a.num_locations()) out.add_location();
  out.set_init(a.init());
  out.set_end(a.end());
  for (Symbol s : a.alphabet())
    if (s != from) out.add_symbol(s);
  for (Location l = 0; l < a.num_locations(); ++l)
    for (const auto& [s, m] : a.out(l)) {
      if (s == from) {
        for (Symbol t : to) out.add_transition(l, t, m);
      } else {
        out.add_transition(l, s, m);
      }
    }
  return out;
}

SplitOutcome apply_split(Logic& logic, const RefinementState& state, const BExpr& phi, const BExpr& e,
                         const SpuriousReport& report, const Pcfa& cand) {
  SplitOutcome out{false, state, {}, cand};
  BExpr pos = simplify(BExpr::conj(phi, e));
  BExpr neg = simplify(BExpr::conj(phi, BExpr::negate(e)));
  if (!logic.is_sat(pos) || !logic.is_sat(neg)) {
    out.vacuous = true;
    return out;
  }
  auto it = std::find(out.state.splits.members.begin(), out.state.splits.members.end(), phi);
  if (it == out.state.splits.members.end()) throw std::invalid_argument("apply_split: not a split member");
  *it = pos;
  out.state.splits.members.insert(it + 1, neg);

  const Symbol old_sym = intern(Statement::assume(phi));
  const Symbol pos_sym = intern(Statement::assume(pos));
  const Symbol neg_sym = intern(Statement::assume(neg));
  for (auto& c : out.state.certified) c = relabel(c, old_sym, {pos_sym, neg_sym});
  if (out.state.value_automaton) out.state.value_automaton = relabel(*out.state.value_automaton, old_sym, {pos_sym, neg_sym});
  out.cand = relabel(cand, old_sym, {pos_sym, neg_sym});

  auto in_subset = [&](const Trace& t) {
    return std::find(report.max_subset.begin(), report.max_subset.end(), t) != report.max_subset.end();
  };
  auto move = [&](const Trace& t) {
    if (t[0] != old_sym) return;
    std::vector<Symbol> w = t.symbols();
    w[0] = in_subset(t) ? pos_sym : neg_sym;
    out.relabeled.emplace_back(std::move(w));
  };
  for (const auto& t : report.violating) move(t);
  for (const auto& t : report.non_violating) move(t);
  return out;
}

std::vector<std::set<std::string>> live_variables(const Pcfa& a, const BExpr& post) {
  std::vector<std::set<std::string>> live(a.num_locations());
  live[a.end()] = vars_of(post);
  for (bool changed = true; changed;) {
    changed = false;
    for (Location l = a.num_locations(); l-- > 0;) {
      std::set<std::string> in = l == a.end() ? live[l] : std::set<std::string>{};
      for (const auto& [sym, m] : a.out(l)) {
        const Statement& s = statement(sym);
        std::set<std::string> after = live[m];
        if (s.kind() == Statement::Kind::Assign) {
          after.erase(s.var());
          collect_vars(s.expr(), after);
        } else if (s.kind() == Statement::Kind::Assume) {
          collect_vars(s.cond(), after);
        }
        in.insert(after.begin(), after.end());
      }
      if (in != live[l]) {
        live[l] = std::move(in);
        changed = true;
      }
    }
  }
  return live;
}

namespace {

Valuation project(const Valuation& v, const std::set<std::string>& keep) {
  std::map<std::string, Int> vals;
  for (const auto& [k, x] : v.values())
    if (keep.count(k)) vals.emplace(k, x);
  return Valuation(std::move(vals));
}

}  // namespace

std::optional<ValueAnalysisResult> value_analysis_refine(Logic& logic, const Pcfa& a, const BExpr& pre,
                                                         const BExpr& post, std::size_t state_limit) {
  const auto live = live_variables(a, post);
  const std::set<std::string>& inputs = live[a.init()];

  ValueAnalysisResult res;
  std::vector<Valuation> initial;
  BExpr remaining = simplify(pre);
  for (;;) {
    SatAnswer ans = logic.check_sat(remaining, inputs);
    if (!ans.sat) break;
    initial.push_back(project(ans.model, inputs));
    if (initial.size() > state_limit) return std::nullopt;
    if (inputs.empty()) break;
    std::vector<BExpr> differs;
    for (const auto& [x, val] : initial.back().values())
      differs.push_back(BExpr::cmp(CmpOp::Ne, Expr::var(x), Expr::lit(val)));
    remaining = simplify(BExpr::conj(remaining, BExpr::disj_all(differs)));
  }

  GeneralPcfa& g = res.automaton;
  Location init = g.add_location(false);
  g.set_init(init);
  for (Symbol s : a.alphabet()) g.add_symbol(s);
  std::map<std::pair<Location, Valuation>, Location> node;
  std::deque<std::pair<Location, Valuation>> work;
  auto node_of = [&](Location l, const Valuation& v) -> std::optional<Location> {
    auto key = std::make_pair(l, v);
    auto it = node.find(key);
    if (it != node.end()) return it->second;
    if (node.size() >= state_limit) return std::nullopt;
    Location n = g.add_location(l == a.end() && !satisfies(v, post));
    node.emplace(key, n);
    work.push_back(key);
    return n;
  };

  for (const auto& v0 : initial) {
    std::vector<BExpr> eqs{simplify(pre)};
    for (const auto& [x, val] : v0.values()) eqs.push_back(BExpr::cmp(CmpOp::Eq, Expr::var(x), Expr::lit(val)));
    BExpr member = inputs.empty() ? simplify(pre) : simplify(BExpr::conj_all(eqs));
    res.splits.members.push_back(member);
    Symbol s = intern(Statement::assume(member));
    g.add_symbol(s);
    auto n = node_of(a.init(), v0);
    if (!n) return std::nullopt;
    g.add_transition(init, s, *n);
  }

  while (!work.empty()) {
    auto [l, v] = work.front();
    work.pop_front();
    Location from = node.at({l, v});
    for (const auto& [sym, m] : a.out(l)) {
      Valuation next = eval_statement(statement(sym), v);
      if (next.is_bottom()) continue;
      auto n = node_of(m, project(next, live[m]));
      if (!n) return std::nullopt;
      g.add_transition(from, sym, *n);
    }
  }
  res.states = node.size();
  return res;
}

}  // namespace tb
