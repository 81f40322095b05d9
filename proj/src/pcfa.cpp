#include "tracebound/pcfa.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tb {

Pcfa::Pcfa() : delta_(2) {}

Location Pcfa::add_location() {
  delta_.emplace_back();
  return static_cast<Location>(delta_.size() - 1);
}

void Pcfa::set_end(Location l) {
  if (l >= delta_.size()) throw std::out_of_range("Pcfa::set_end");
  end_ = l;
}

void Pcfa::add_transition(Location from, Symbol sym, Location to) {
  if (from >= delta_.size() || to >= delta_.size()) throw std::out_of_range("Pcfa::add_transition");
  if (from == end_) throw std::logic_error("Pcfa: transition leaving the end location");
  auto [it, inserted] = delta_[from].emplace(sym, to);
  if (!inserted && it->second != to)
    throw std::logic_error("Pcfa: nondeterministic transition on '" + symbol_string(sym) + "'");
  alphabet_.insert(sym);
}

std::size_t Pcfa::num_transitions() const {
  std::size_t n = 0;
  for (const auto& m : delta_) n += m.size();
  return n;
}

bool Pcfa::empty_language() const {
  std::vector<bool> seen(delta_.size(), false);
  std::vector<Location> stack{init_};
  seen[init_] = true;
  while (!stack.empty()) {
    Location l = stack.back();
    stack.pop_back();
    for (const auto& [s, t] : delta_[l]) {
      if (t == end_) return false;
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  return true;
}

bool Pcfa::accepts(const std::vector<Symbol>& word) const {
  if (word.empty()) return false;
  Location l = init_;
  for (Symbol s : word) {
    auto it = delta_[l].find(s);
    if (it == delta_[l].end()) return false;
    l = it->second;
  }
  return l == end_;
}

Location GeneralPcfa::add_location(bool accepting) {
  edges_.emplace_back();
  accepting_.push_back(accepting);
  return static_cast<Location>(edges_.size() - 1);
}

void GeneralPcfa::add_transition(Location from, Symbol sym, Location to) {
  if (from >= edges_.size() || to >= edges_.size()) throw std::out_of_range("GeneralPcfa::add_transition");
  auto& out = edges_[from];
  std::pair<Symbol, Location> e{sym, to};
  auto it = std::lower_bound(out.begin(), out.end(), e);
  if (it == out.end() || *it != e) out.insert(it, e);
  alphabet_.insert(sym);
}

std::size_t GeneralPcfa::num_transitions() const {
  std::size_t n = 0;
  for (const auto& e : edges_) n += e.size();
  return n;
}

bool GeneralPcfa::accepts(const std::vector<Symbol>& word) const {
  if (word.empty() || edges_.empty()) return false;
  std::vector<Location> cur{init_}, next;
  std::vector<bool> mark(edges_.size());
  for (Symbol s : word) {
    next.clear();
    std::fill(mark.begin(), mark.end(), false);
    for (Location l : cur) {
      const auto& out = edges_[l];
      auto it = std::lower_bound(out.begin(), out.end(), std::pair<Symbol, Location>{s, 0});
      for (; it != out.end() && it->first == s; ++it) {
        if (!mark[it->second]) {
          mark[it->second] = true;
          next.push_back(it->second);
        }
      }
    }
    cur.swap(next);
    if (cur.empty()) return false;
  }
  return std::any_of(cur.begin(), cur.end(), [&](Location l) { return accepting_[l]; });
}

GeneralPcfa GeneralPcfa::from_pcfa(const Pcfa& a) {
  GeneralPcfa g;
  for (std::size_t l = 0; l < a.num_locations(); ++l) g.add_location(l == a.end());
  g.set_init(a.init());
  for (std::size_t l = 0; l < a.num_locations(); ++l)
    for (const auto& [s, t] : a.out(static_cast<Location>(l))) g.add_transition(static_cast<Location>(l), s, t);
  for (Symbol s : a.alphabet()) g.add_symbol(s);
  return g;
}

// ---------------------------------------------------------------- compilation

namespace {

struct Counters {
  unsigned dist = 0;
  unsigned nondet = 0;
};

Counters convert(const Program& p, Pcfa& a, Location from, Location to, Counters c) {
  switch (p.kind()) {
    case Program::Kind::Skip:
      a.add_transition(from, intern(Statement::skip()), to);
      return c;
    case Program::Kind::Assign:
      a.add_transition(from, intern(Statement::assign(p.var(), p.expr())), to);
      return c;
    case Program::Kind::Prob: {
      Location l1 = a.add_location(), l2 = a.add_location();
      c = convert(p.first(), a, l1, to, c);
      c = convert(p.second(), a, l2, to, c);
      a.add_transition(from, intern(Statement::prob_left(c.dist)), l1);
      a.add_transition(from, intern(Statement::prob_right(c.dist)), l2);
      ++c.dist;
      return c;
    }
    case Program::Kind::Nondet: {
      Location l1 = a.add_location(), l2 = a.add_location();
      c = convert(p.first(), a, l1, to, c);
      c = convert(p.second(), a, l2, to, c);
      a.add_transition(from, intern(Statement::nondet(c.nondet)), l1);
      a.add_transition(from, intern(Statement::nondet(c.nondet + 1)), l2);
      c.nondet += 2;
      return c;
    }
    case Program::Kind::Seq: {
      Location mid = a.add_location();
      c = convert(p.first(), a, from, mid, c);
      return convert(p.second(), a, mid, to, c);
    }
    case Program::Kind::Ite: {
      Location l1 = a.add_location(), l2 = a.add_location();
      a.add_transition(from, intern(Statement::assume(p.cond())), l1);
      a.add_transition(from, intern(Statement::assume(BExpr::negate(p.cond()))), l2);
      c = convert(p.first(), a, l1, to, c);
      return convert(p.second(), a, l2, to, c);
    }
    case Program::Kind::While: {
      Location body = a.add_location();
      a.add_transition(from, intern(Statement::assume(p.cond())), body);
      a.add_transition(from, intern(Statement::assume(BExpr::negate(p.cond()))), to);
      return convert(p.first(), a, body, from, c);
    }
  }
  return c;
}

}  // namespace

Pcfa program_to_pcfa(const Program& p) {
  Pcfa a;
  convert(p, a, a.init(), a.end(), Counters{});
  return a;
}

void check_invariants(const Pcfa& a) {
  if (a.init() >= a.num_locations() || a.end() >= a.num_locations())
    throw std::logic_error("Pcfa: init or end location out of range");
  if (!a.out(a.end()).empty()) throw std::logic_error("Pcfa: end location has outgoing transitions");
  for (std::size_t l = 0; l < a.num_locations(); ++l)
    for (const auto& [s, t] : a.out(static_cast<Location>(l))) {
      if (t >= a.num_locations()) throw std::logic_error("Pcfa: transition target out of range");
      if (!a.alphabet().count(s)) throw std::logic_error("Pcfa: transition symbol outside alphabet");
    }
}

// ---------------------------------------------------------------- DOT

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const Pcfa& a, const std::string& name) {
  std::ostringstream os;
  os << "digraph \"" << escape(name) << "\" {\n  rankdir=TB;\n";
  for (std::size_t l = 0; l < a.num_locations(); ++l) {
    os << "  n" << l << " [label=\"" << l << "\"";
    if (l == a.end()) os << ", shape=doublecircle";
    if (l == a.init()) os << ", style=bold";
    os << "];\n";
  }
  for (std::size_t l = 0; l < a.num_locations(); ++l)
    for (const auto& [s, t] : a.out(static_cast<Location>(l)))
      os << "  n" << l << " -> n" << t << " [label=\"" << escape(symbol_string(s)) << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string to_dot(const GeneralPcfa& g, const std::string& name) {
  std::ostringstream os;
  os << "digraph \"" << escape(name) << "\" {\n";
  for (std::size_t l = 0; l < g.num_locations(); ++l) {
    os << "  n" << l << " [label=\"" << l << "\"";
    if (g.accepting(static_cast<Location>(l))) os << ", shape=doublecircle";
    if (l == g.init()) os << ", style=bold";
    os << "];\n";
  }
  for (std::size_t l = 0; l < g.num_locations(); ++l)
    for (const auto& [s, t] : g.out(static_cast<Location>(l)))
      os << "  n" << l << " -> n" << t << " [label=\"" << escape(symbol_string(s)) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace tb
