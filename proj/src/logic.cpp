#include "tracebound/logic.hpp"

#include <algorithm>
#include <functional>

namespace tb {

std::string smt_var(const std::string& v) { return "v_" + v; }

namespace {

std::string ssa_name(const std::string& v, int version) { return "s" + std::to_string(version) + "_" + v; }

void expect_success(const std::string& response, const std::string& what) {
  if (response != "success") throw SolverError(what + ": " + response);
}

Int parse_int_value(const SExpr& e) {
  if (e.atom) return std::stoll(e.text);
  if (e.items.size() == 2 && e.items[0].atom && e.items[0].text == "-") return -parse_int_value(e.items[1]);
  throw SolverError("unexpected model value: " + e.str());
}

// ---- SMT-LIB term to BExpr (for solver-produced interpolants)

using Env = std::map<std::string, SExpr>;
using VarMap = std::function<std::optional<std::string>(const std::string&)>;

Expr term_from_smt(const SExpr& e, const Env& env, const VarMap& vars);

BExpr formula_from_smt(const SExpr& e, const Env& env, const VarMap& vars) {
  if (e.atom) {
    if (e.text == "true") return BExpr::top();
    if (e.text == "false") return BExpr::bottom();
    auto it = env.find(e.text);
    if (it != env.end()) return formula_from_smt(it->second, env, vars);
    throw SolverError("unsupported boolean atom " + e.text);
  }
  if (e.items.empty() || !e.items[0].atom) throw SolverError("unsupported formula " + e.str());
  const std::string& head = e.items[0].text;
  auto arg = [&](std::size_t i) { return formula_from_smt(e.items.at(i), env, vars); };
  auto targ = [&](std::size_t i) { return term_from_smt(e.items.at(i), env, vars); };
  if (head == "let") {
    Env inner = env;
    for (const auto& binding : e.items.at(1).items) inner[binding.items.at(0).text] = binding.items.at(1);
    return formula_from_smt(e.items.at(2), inner, vars);
  }
  if (head == "and" || head == "or") {
    std::vector<BExpr> parts;
    for (std::size_t i = 1; i < e.items.size(); ++i) parts.push_back(arg(i));
    return head == "and" ? BExpr::conj_all(parts) : BExpr::disj_all(parts);
  }
  if (head == "not") return BExpr::negate(arg(1));
  if (head == "=>") return BExpr::implies(arg(1), arg(2));
  static const std::map<std::string, CmpOp> cmps = {{"=", CmpOp::Eq}, {"<=", CmpOp::Le}, {"<", CmpOp::Lt},
                                                    {">=", CmpOp::Ge}, {">", CmpOp::Gt}, {"distinct", CmpOp::Ne}};
  auto c = cmps.find(head);
  if (c != cmps.end() && e.items.size() == 3) return BExpr::cmp(c->second, targ(1), targ(2));
  throw SolverError("unsupported formula " + e.str());
}

Expr term_from_smt(const SExpr& e, const Env& env, const VarMap& vars) {
  if (e.atom) {
    if (!e.text.empty() && std::isdigit(static_cast<unsigned char>(e.text[0]))) return Expr::lit(std::stoll(e.text));
    auto it = env.find(e.text);
    if (it != env.end()) return term_from_smt(it->second, env, vars);
    auto v = vars(e.text);
    if (!v) throw SolverError("unknown symbol " + e.text);
    return Expr::var(*v);
  }
  if (e.items.empty() || !e.items[0].atom) throw SolverError("unsupported term " + e.str());
  const std::string& head = e.items[0].text;
  if (head == "let") {
    Env inner = env;
    for (const auto& binding : e.items.at(1).items) inner[binding.items.at(0).text] = binding.items.at(1);
    return term_from_smt(e.items.at(2), inner, vars);
  }
  std::vector<Expr> args;
  for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(term_from_smt(e.items[i], env, vars));
  if (args.empty()) throw SolverError("unsupported term " + e.str());
  if (head == "-" && args.size() == 1) return Expr::lit(0) - args[0];
  Expr acc = args[0];
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (head == "+") acc = acc + args[i];
    else if (head == "-") acc = acc - args[i];
    else if (head == "*") acc = acc * args[i];
    else throw SolverError("unsupported term " + e.str());
  }
  return acc;
}

/// Top-level conjuncts.
void conjuncts(const BExpr& b, std::vector<BExpr>& out) {
  if (b.kind() == BExpr::Kind::And) {
    conjuncts(b.a(), out);
    conjuncts(b.b(), out);
  } else if (b.kind() != BExpr::Kind::True) {
    out.push_back(b);
  }
}

/// Splits e into c*x + rest when x occurs linearly with coefficient +-1.
std::optional<std::pair<Int, Expr>> unit_coefficient(const Expr& e, const std::string& x) {
  // Coefficient of x: difference of e at x=1 and x=0 after simplification,
  // valid because expressions are linear.
  Expr at1 = simplify(substitute(e, x, Expr::lit(1)));
  Expr at0 = simplify(substitute(e, x, Expr::lit(0)));
  Expr diff = simplify(at1 - at0);
  if (diff.kind() != Expr::Kind::Lit) return std::nullopt;
  if (diff.value() != 1 && diff.value() != -1) return std::nullopt;
  return std::make_pair(diff.value(), at0);
}

}  // namespace

Logic::Logic(SolverConfig cfg) : session_(std::make_unique<SmtSession>(std::move(cfg))) {}

void Logic::declare(const std::set<std::string>& names) {
  std::vector<std::string> cmds;
  for (const auto& n : names)
    if (declared_.insert(n).second) cmds.push_back("(declare-fun " + n + " () Int)");
  if (cmds.empty()) return;
  for (const auto& r : session_->batch(cmds)) expect_success(r, "declare-fun");
}

bool Logic::raw_check(const std::string& assertion) {
  auto r = session_->batch({"(push 1)", "(assert " + assertion + ")", "(check-sat)", "(pop 1)"});
  expect_success(r[0], "push");
  expect_success(r[1], "assert");
  expect_success(r[3], "pop");
  if (r[2] == "sat") return true;
  if (r[2] == "unsat") return false;
  if (r[2] == "unknown") throw SolverUnknown("solver returned unknown");
  throw SolverError("check-sat: " + r[2]);
}

bool Logic::is_sat(const BExpr& p_in) {
  BExpr p = simplify(p_in);
  if (p.kind() == BExpr::Kind::True) return true;
  if (p.kind() == BExpr::Kind::False) return false;
  std::string key = to_smt(p, smt_var);
  if (depth_ == 0) {
    auto it = sat_cache_.find(key);
    if (it != sat_cache_.end()) {
      ++stats_.cache_hits;
      return it->second;
    }
  }
  ++stats_.sat_queries;
  std::set<std::string> names;
  for (const auto& v : vars_of(p)) names.insert(smt_var(v));
  declare(names);
  bool sat = raw_check(key);
  if (depth_ == 0) sat_cache_.emplace(std::move(key), sat);
  return sat;
}

SatAnswer Logic::check_sat(const BExpr& p_in, const std::set<std::string>& extra_vars) {
  BExpr p = simplify(p_in);
  std::set<std::string> vars = vars_of(p);
  vars.insert(extra_vars.begin(), extra_vars.end());
  SatAnswer ans;
  if (!is_sat(p)) return ans;
  ans.sat = true;
  if (vars.empty()) return ans;
  std::set<std::string> names;
  for (const auto& v : vars) names.insert(smt_var(v));
  declare(names);
  std::string list;
  for (const auto& v : vars) list += " " + smt_var(v);
  auto r = session_->batch({"(push 1)", "(assert " + to_smt(p, smt_var) + ")", "(check-sat)",
                            "(get-value (" + list.substr(1) + "))", "(pop 1)"});
  expect_success(r[0], "push");
  expect_success(r[1], "assert");
  if (r[2] != "sat") throw SolverUnknown("model query did not return sat: " + r[2]);
  expect_success(r[4], "pop");
  SExpr values = parse_sexpr(r[3]);
  std::map<std::string, Int> model;
  for (const auto& pair : values.items) {
    if (pair.atom || pair.items.size() != 2) throw SolverError("bad get-value response: " + r[3]);
    const std::string& name = pair.items[0].text;
    if (name.rfind("v_", 0) != 0) continue;
    model[name.substr(2)] = parse_int_value(pair.items[1]);
  }
  ans.model = Valuation(std::move(model));
  return ans;
}

bool Logic::hoare_valid(const BExpr& p_in, Symbol s, const BExpr& q_in) {
  BExpr p = simplify(p_in), q = simplify(q_in);
  if (p.kind() == BExpr::Kind::False || q.kind() == BExpr::Kind::True) return true;
  const Statement& st = statement(s);
  if (p == q) {
    if (st.kind() != Statement::Kind::Assign) return true;
    std::set<std::string> vars = vars_of(p);
    if (!vars.count(st.var())) return true;
  }
  std::string key = to_smt(p, smt_var) + "|" + std::to_string(s) + "|" + to_smt(q, smt_var);
  if (depth_ == 0) {
    auto it = hoare_cache_.find(key);
    if (it != hoare_cache_.end()) {
      ++stats_.hoare_cache_hits;
      return it->second;
    }
  }
  ++stats_.hoare_queries;
  bool ok = !is_sat(BExpr::conj(p, BExpr::negate(hoare_wp(st, q))));
  if (depth_ == 0) hoare_cache_.emplace(std::move(key), ok);
  return ok;
}

BExpr Logic::normalize(const BExpr& p_in) {
  BExpr p = simplify(p_in);
  if (p.kind() == BExpr::Kind::True || p.kind() == BExpr::Kind::False) return p;
  std::string key = to_smt(p, smt_var);
  auto it = normal_cache_.find(key);
  if (it != normal_cache_.end()) return it->second;
  BExpr out = p;
  if (!is_sat(p))
    out = BExpr::bottom();
  else if (!is_sat(BExpr::negate(p)))
    out = BExpr::top();
  normal_cache_.emplace(std::move(key), out);
  return out;
}

bool Logic::valid_tagging(const TaggedTrace& tt, const BExpr& pre, const BExpr& post) {
  if (tt.predicates.size() != tt.trace.size() + 1) return false;
  if (!implies(pre, tt.predicates.front())) return false;
  if (!implies(tt.predicates.back(), post)) return false;
  for (std::size_t i = 0; i < tt.trace.size(); ++i)
    if (!hoare_valid(tt.predicates[i], tt.trace[i], tt.predicates[i + 1])) return false;
  return true;
}

TaggedTrace Logic::wp_tagging(const Trace& t, const BExpr& anchor) {
  TaggedTrace tt{t, std::vector<BExpr>(t.size() + 1, BExpr::top())};
  tt.predicates[t.size()] = simplify(anchor);
  for (std::size_t i = t.size(); i-- > 0;) tt.predicates[i] = hoare_wp(t.at(i), tt.predicates[i + 1]);
  return tt;
}


TaggedTrace Logic::sequence_interpolants(const Trace& t, const BExpr& pre, const BExpr& post,
                                         InterpolationStrategy strategy) {
  if (is_sat(path_condition(t, pre, post)))
    throw std::invalid_argument("sequence_interpolants: trace is violating: " + to_string(t));
  std::vector<std::function<std::optional<TaggedTrace>()>> chain;
  auto solver = [&] { return solver_interpolants(t, pre, post); };
  auto sp = [&] { return strongest_post(t, pre, post); };
  auto core = [&] { return core_wp(t, pre, post); };
  switch (strategy) {
    case InterpolationStrategy::Auto:
      if (session_->config().interpolation) chain.push_back(solver);
      chain.push_back(core);
      break;
    case InterpolationStrategy::Solver:
      chain.push_back(solver);
      break;
    case InterpolationStrategy::StrongestPost:
      chain.push_back(sp);
      break;
    case InterpolationStrategy::CoreWeakestPre:
      chain.push_back(core);
      break;
    case InterpolationStrategy::WeakestPre:
      break;
  }
  for (auto& attempt : chain) {
    std::optional<TaggedTrace> tt;
    try {
      tt = attempt();
    } catch (const SolverUnknown&) {
      throw;
    } catch (const SolverError&) {
      tt.reset();
    }
    if (tt && valid_tagging(*tt, pre, post)) return *tt;
    ++stats_.interpolation_fallbacks;
  }
  // Total fallback: backward wp from the postcondition.
  TaggedTrace tt = wp_tagging(t, post);
  for (auto& p : tt.predicates) p = normalize(p);
  return tt;
}

std::optional<TaggedTrace> Logic::core_wp(const Trace& t, const BExpr& pre, const BExpr& post) {
  std::map<std::string, int> version;
  std::set<std::string> names;
  auto current = [&](const std::string& v) {
    std::string n = ssa_name(v, version[v]);
    names.insert(n);
    return n;
  };
  // Assignments are background facts; pre, assumes and !post are the
  // candidates for the core, listed in the order deletion is attempted.
  std::vector<std::string> background;
  std::vector<std::pair<std::string, std::string>> named;
  named.emplace_back("g_pre", to_smt(pre, current));
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Statement& s = t.at(i);
    if (s.kind() == Statement::Kind::Assume) {
      named.emplace_back("g_" + std::to_string(i), to_smt(s.cond(), current));
    } else if (s.kind() == Statement::Kind::Assign) {
      std::string rhs = to_smt(s.expr(), current);
      ++version[s.var()];
      background.push_back("(assert (= " + current(s.var()) + " " + rhs + "))");
    }
  }
  named.insert(named.begin(), {"g_post", to_smt(BExpr::negate(post), current)});
  declare(names);

  auto unsat_with = [&](const std::set<std::string>& keep) {
    std::vector<std::string> cmds{"(push 1)"};
    cmds.insert(cmds.end(), background.begin(), background.end());
    for (const auto& [n, f] : named)
      if (keep.count(n)) cmds.push_back("(assert " + f + ")");
    cmds.push_back("(check-sat)");
    cmds.push_back("(pop 1)");
    auto r = session_->batch(cmds);
    for (std::size_t i = 0; i + 2 < r.size(); ++i) expect_success(r[i], "core query");
    expect_success(r.back(), "pop");
    const std::string& verdict = r[r.size() - 2];
    if (verdict == "unknown") throw SolverUnknown("unknown during core computation");
    return verdict == "unsat";
  };

  std::set<std::string> in_core;
  for (const auto& [n, f] : named) in_core.insert(n);
  if (!unsat_with(in_core)) return std::nullopt;
  for (const auto& [n, f] : named) {
    in_core.erase(n);
    if (!unsat_with(in_core)) in_core.insert(n);
  }

  TaggedTrace tt{t, std::vector<BExpr>(t.size() + 1, BExpr::top())};
  tt.predicates[t.size()] = in_core.count("g_post") ? simplify(post) : BExpr::bottom();
  for (std::size_t i = t.size(); i-- > 0;) {
    const Statement& s = t.at(i);
    bool relevant = s.kind() != Statement::Kind::Assume || in_core.count("g_" + std::to_string(i));
    tt.predicates[i] = relevant ? hoare_wp(s, tt.predicates[i + 1]) : tt.predicates[i + 1];
  }
  for (auto& p : tt.predicates) p = normalize(p);
  return tt;
}

std::optional<TaggedTrace> Logic::strongest_post(const Trace& t, const BExpr& pre, const BExpr& post) {
  TaggedTrace tt{t, {simplify(pre)}};
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Statement& s = t.at(i);
    BExpr cur = tt.predicates.back();
    switch (s.kind()) {
      case Statement::Kind::Assume:
        cur = simplify(BExpr::conj(cur, s.cond()));
        break;
      case Statement::Kind::Assign: {
        std::set<std::string> rhs_vars;
        collect_vars(s.expr(), rhs_vars);
        auto unit = rhs_vars.count(s.var()) ? unit_coefficient(s.expr(), s.var()) : std::nullopt;
        if (unit) {
          // x := c*x + r with c = +-1: the old value is c*(x - r).
          Expr old = simplify(Expr::lit(unit->first) * (Expr::var(s.var()) - unit->second));
          cur = simplify(substitute(cur, s.var(), old));
        } else {
          std::vector<BExpr> parts, kept;
          conjuncts(cur, parts);
          for (const auto& p : parts)
            if (!vars_of(p).count(s.var())) kept.push_back(p);
          if (!rhs_vars.count(s.var())) kept.push_back(BExpr::cmp(CmpOp::Eq, Expr::var(s.var()), s.expr()));
          cur = simplify(BExpr::conj_all(kept));
        }
        break;
      }
      default:
        break;
    }
    tt.predicates.push_back(normalize(cur));
  }
  if (!implies(tt.predicates.back(), post)) return std::nullopt;
  return tt;
}

std::optional<TaggedTrace> Logic::solver_interpolants(const Trace& t, const BExpr& pre, const BExpr& post) {
  std::map<std::string, int> version;
  std::set<std::string> names;
  std::map<std::string, std::pair<std::string, int>> origin;
  auto current = [&](const std::string& v) {
    std::string n = ssa_name(v, version[v]);
    names.insert(n);
    origin[n] = {v, version[v]};
    return n;
  };
  std::vector<std::string> groups;
  std::vector<std::map<std::string, int>> versions_at;
  groups.push_back(to_smt(pre, current));
  versions_at.push_back(version);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Statement& s = t.at(i);
    if (s.kind() == Statement::Kind::Assume) {
      groups.push_back(to_smt(s.cond(), current));
    } else if (s.kind() == Statement::Kind::Assign) {
      std::string rhs = to_smt(s.expr(), current);
      ++version[s.var()];
      groups.push_back("(= " + current(s.var()) + " " + rhs + ")");
    } else {
      groups.push_back("true");
    }
    versions_at.push_back(version);
  }
  groups.push_back(to_smt(BExpr::negate(post), current));
  declare(names);
  std::vector<std::string> cmds{"(push 1)"};
  std::string list;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    cmds.push_back("(assert (! " + groups[i] + " :named ip_" + std::to_string(i) + "))");
    list += " ip_" + std::to_string(i);
  }
  cmds.push_back("(check-sat)");
  auto r = session_->batch(cmds);
  std::optional<SExpr> answer;
  bool ok = r.back() == "unsat";
  for (std::size_t i = 0; i + 1 < r.size(); ++i) ok = ok && r[i] == "success";
  if (ok) {
    std::string resp = session_->command("(get-interpolants" + list + ")");
    if (resp.rfind("(error", 0) != 0 && resp != "unsupported") answer = parse_sexpr(resp);
  }
  expect_success(session_->command("(pop 1)"), "pop");
  if (!answer || answer->atom || answer->items.size() != t.size() + 1) return std::nullopt;
  TaggedTrace tt{t, {}};
  for (std::size_t i = 0; i <= t.size(); ++i) {
    const auto& at = versions_at[i];
    VarMap map = [&](const std::string& n) -> std::optional<std::string> {
      auto o = origin.find(n);
      if (o == origin.end()) return std::nullopt;
      auto v = at.find(o->second.first);
      int ver = v == at.end() ? 0 : v->second;
      if (ver != o->second.second) return std::nullopt;
      return o->second.first;
    };
    tt.predicates.push_back(normalize(formula_from_smt(answer->items[i], {}, map)));
  }
  return tt;
}

void Logic::push() {
  expect_success(session_->command("(push 1)"), "push");
  ++depth_;
}

void Logic::pop() {
  if (depth_ == 0) throw std::logic_error("Logic::pop without push");
  expect_success(session_->command("(pop 1)"), "pop");
  --depth_;
}

void Logic::add(const BExpr& p) {
  std::set<std::string> names;
  for (const auto& v : vars_of(p)) names.insert(smt_var(v));
  declare(names);
  expect_success(session_->command("(assert " + to_smt(simplify(p), smt_var) + ")"), "assert");
}

bool Logic::check() {
  ++stats_.sat_queries;
  std::string r = session_->command("(check-sat)");
  if (r == "sat") return true;
  if (r == "unsat") return false;
  if (r == "unknown") throw SolverUnknown("solver returned unknown");
  throw SolverError("check-sat: " + r);
}

}  // namespace tb
