#include "tracebound/automata.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace tb {

namespace {

using Subset = std::vector<Location>;

/// Symbols sorted by statement order.
std::vector<Symbol> ordered(std::vector<Symbol> syms) {
  std::sort(syms.begin(), syms.end(), symbol_less);
  syms.erase(std::unique(syms.begin(), syms.end()), syms.end());
  return syms;
}

Subset step(const GeneralPcfa& g, const Subset& from, Symbol s) {
  Subset out;
  for (Location l : from) {
    const auto& edges = g.out(l);
    auto it = std::lower_bound(edges.begin(), edges.end(), std::pair<Symbol, Location>{s, 0});
    for (; it != edges.end() && it->first == s; ++it) out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool any_accepting(const GeneralPcfa& g, const Subset& s) {
  return std::any_of(s.begin(), s.end(), [&](Location l) { return g.accepting(l); });
}

struct VecHash {
  std::size_t operator()(const std::vector<Location>& v) const {
    std::size_t h = 1469598103934665603ULL;
    for (Location x : v) {
      h ^= x + 0x9e3779b97f4a7c15ULL;
      h *= 1099511628211ULL;
    }
    return h;
  }
};

/// Deterministic view of a Pcfa synchronized with subset constructions of
/// the required and excluded automata.
class Product {
 public:
  Product(const Pcfa& a, const std::vector<const GeneralPcfa*>& require,
          const std::vector<const GeneralPcfa*>& exclude)
      : a_(a), require_(require), exclude_(exclude) {
    order_.resize(a.num_locations());
    for (std::size_t l = 0; l < a.num_locations(); ++l) {
      std::vector<Symbol> syms;
      for (const auto& [s, t] : a.out(static_cast<Location>(l))) syms.push_back(s);
      order_[l] = ordered(std::move(syms));
    }
  }

  struct State {
    Location loc;
    std::vector<Subset> req;
    std::vector<Subset> exc;
  };

  /// nullopt when the initial state is already dead.
  std::optional<State> initial() const {
    State s{a_.init(), {}, {}};
    for (const auto* g : require_) {
      if (g->num_locations() == 0) return std::nullopt;
      s.req.push_back({g->init()});
    }
    for (const auto* g : exclude_) s.exc.push_back(g->num_locations() ? Subset{g->init()} : Subset{});
    return s;
  }

  const std::vector<Symbol>& symbols(Location l) const { return order_[l]; }

  std::optional<State> next(const State& s, Symbol sym) const {
    const auto& out = a_.out(s.loc);
    auto it = out.find(sym);
    if (it == out.end()) return std::nullopt;
    State n{it->second, {}, {}};
    n.req.reserve(require_.size());
    for (std::size_t i = 0; i < require_.size(); ++i) {
      Subset t = step(*require_[i], s.req[i], sym);
      if (t.empty()) return std::nullopt;
      n.req.push_back(std::move(t));
    }
    n.exc.reserve(exclude_.size());
    for (std::size_t i = 0; i < exclude_.size(); ++i) n.exc.push_back(step(*exclude_[i], s.exc[i], sym));
    return n;
  }

  bool accepting(const State& s) const {
    if (s.loc != a_.end()) return false;
    for (std::size_t i = 0; i < require_.size(); ++i)
      if (!any_accepting(*require_[i], s.req[i])) return false;
    for (std::size_t i = 0; i < exclude_.size(); ++i)
      if (any_accepting(*exclude_[i], s.exc[i])) return false;
    return true;
  }

  static std::vector<Location> key(const State& s) {
    std::vector<Location> k{s.loc};
    for (const auto& v : s.req) {
      k.push_back(static_cast<Location>(v.size()));
      k.insert(k.end(), v.begin(), v.end());
    }
    for (const auto& v : s.exc) {
      k.push_back(static_cast<Location>(v.size()));
      k.insert(k.end(), v.begin(), v.end());
    }
    return k;
  }

 private:
  const Pcfa& a_;
  std::vector<const GeneralPcfa*> require_;
  std::vector<const GeneralPcfa*> exclude_;
  std::vector<std::vector<Symbol>> order_;
};

/// Complete deterministic view used for language comparisons; -1 is the sink.
struct CompleteView {
  Dfa d;
  int next(int q, Symbol s) const {
    if (q < 0) return -1;
    auto it = d.delta[q].find(s);
    return it == d.delta[q].end() ? -1 : static_cast<int>(it->second);
  }
  bool accepting(int q) const { return q >= 0 && d.accepting[q]; }
};

/// Visits every pair of states reachable by a non-empty word; stops early
/// when `visit` returns false.
bool for_each_pair(const GeneralPcfa& a, const GeneralPcfa& b, const std::function<bool(bool, bool)>& visit) {
  CompleteView va{determinize(a)}, vb{determinize(b)};
  Alphabet sigma = a.alphabet();
  sigma.insert(b.alphabet().begin(), b.alphabet().end());
  for (const auto& m : va.d.delta)
    for (const auto& [s, t] : m) sigma.insert(s);
  for (const auto& m : vb.d.delta)
    for (const auto& [s, t] : m) sigma.insert(s);
  std::map<std::pair<int, int>, bool> seen;
  std::deque<std::pair<int, int>> queue;
  int ia = va.d.size() ? static_cast<int>(va.d.init) : -1;
  int ib = vb.d.size() ? static_cast<int>(vb.d.init) : -1;
  auto push_successors = [&](int p, int q) {
    for (Symbol s : sigma) {
      std::pair<int, int> n{va.next(p, s), vb.next(q, s)};
      if (n.first < 0 && n.second < 0) continue;
      if (seen.emplace(n, true).second) queue.push_back(n);
    }
  };
  push_successors(ia, ib);
  while (!queue.empty()) {
    auto [p, q] = queue.front();
    queue.pop_front();
    if (!visit(va.accepting(p), vb.accepting(q))) return false;
    push_successors(p, q);
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------- DFA basics

Dfa determinize(const GeneralPcfa& g) {
  Dfa d;
  if (g.num_locations() == 0) {
    d.delta.emplace_back();
    d.accepting.push_back(false);
    return d;
  }
  std::unordered_map<Subset, Location, VecHash> ids;
  std::vector<Subset> subsets;
  auto intern_subset = [&](Subset s) -> Location {
    auto it = ids.find(s);
    if (it != ids.end()) return it->second;
    Location id = static_cast<Location>(subsets.size());
    ids.emplace(s, id);
    d.accepting.push_back(any_accepting(g, s));
    d.delta.emplace_back();
    subsets.push_back(std::move(s));
    return id;
  };
  d.init = intern_subset({g.init()});
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    std::vector<Symbol> syms;
    for (Location l : subsets[i])
      for (const auto& [s, t] : g.out(l)) syms.push_back(s);
    std::sort(syms.begin(), syms.end());
    syms.erase(std::unique(syms.begin(), syms.end()), syms.end());
    for (Symbol s : syms) {
      Subset t = step(g, subsets[i], s);
      Location id = intern_subset(std::move(t));
      d.delta[i][s] = id;
    }
  }
  return d;
}

Dfa minimize(const Dfa& in) {
  // Reachable part.
  std::vector<int> reach_id(in.size(), -1);
  std::vector<Location> states;
  reach_id[in.init] = 0;
  states.push_back(in.init);
  for (std::size_t i = 0; i < states.size(); ++i)
    for (const auto& [s, t] : in.delta[states[i]])
      if (reach_id[t] < 0) {
        reach_id[t] = static_cast<int>(states.size());
        states.push_back(t);
      }
  std::vector<Symbol> sigma;
  for (Location q : states)
    for (const auto& [s, t] : in.delta[q]) sigma.push_back(s);
  std::sort(sigma.begin(), sigma.end());
  sigma.erase(std::unique(sigma.begin(), sigma.end()), sigma.end());
  const std::size_t k = sigma.size();
  const std::size_t n = states.size() + 1;  // + sink
  const std::size_t sink = n - 1;
  std::vector<std::size_t> trans(n * k, sink);
  std::vector<bool> acc(n, false);
  for (std::size_t i = 0; i < states.size(); ++i) {
    acc[i] = in.accepting[states[i]];
    for (const auto& [s, t] : in.delta[states[i]]) {
      std::size_t c = static_cast<std::size_t>(std::lower_bound(sigma.begin(), sigma.end(), s) - sigma.begin());
      trans[i * k + c] = static_cast<std::size_t>(reach_id[t]);
    }
  }
  // Inverse transitions (CSR per symbol).
  std::vector<std::vector<std::size_t>> inv_start(k, std::vector<std::size_t>(n + 1, 0));
  std::vector<std::vector<std::size_t>> inv(k, std::vector<std::size_t>(n));
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t q = 0; q < n; ++q) ++inv_start[c][trans[q * k + c] + 1];
    for (std::size_t q = 0; q < n; ++q) inv_start[c][q + 1] += inv_start[c][q];
    std::vector<std::size_t> fill(inv_start[c].begin(), inv_start[c].end() - 1);
    for (std::size_t q = 0; q < n; ++q) inv[c][fill[trans[q * k + c]]++] = q;
  }

  // Hopcroft partition refinement.
  std::vector<std::size_t> block(n);
  std::vector<std::vector<std::size_t>> blocks;
  {
    std::vector<std::size_t> f, nf;
    for (std::size_t q = 0; q < n; ++q) (acc[q] ? f : nf).push_back(q);
    for (auto* part : {&f, &nf}) {
      if (part->empty()) continue;
      for (std::size_t q : *part) block[q] = blocks.size();
      blocks.push_back(std::move(*part));
    }
  }
  std::vector<std::vector<char>> in_work;
  std::deque<std::pair<std::size_t, std::size_t>> work;
  in_work.assign(blocks.size(), std::vector<char>(k, 0));
  if (blocks.size() == 2) {
    std::size_t smaller = blocks[0].size() <= blocks[1].size() ? 0 : 1;
    for (std::size_t c = 0; c < k; ++c) {
      work.emplace_back(smaller, c);
      in_work[smaller][c] = 1;
    }
  }
  std::vector<char> marked(n, 0);
  std::vector<std::size_t> marked_count;
  while (!work.empty()) {
    auto [a, c] = work.front();
    work.pop_front();
    in_work[a][c] = 0;
    std::vector<std::size_t> x;
    for (std::size_t q : blocks[a])
      for (std::size_t i = inv_start[c][q]; i < inv_start[c][q + 1]; ++i) x.push_back(inv[c][i]);
    std::vector<std::size_t> touched;
    marked_count.resize(blocks.size(), 0);
    for (std::size_t p : x) {
      if (marked[p]) continue;
      marked[p] = 1;
      std::size_t b = block[p];
      if (marked_count[b]++ == 0) touched.push_back(b);
    }
    for (std::size_t y : touched) {
      if (marked_count[y] < blocks[y].size()) {
        std::vector<std::size_t> keep, moved;
        for (std::size_t q : blocks[y]) (marked[q] ? moved : keep).push_back(q);
        std::size_t z = blocks.size();
        for (std::size_t q : moved) block[q] = z;
        blocks[y] = std::move(keep);
        blocks.push_back(std::move(moved));
        in_work.emplace_back(k, 0);
        marked_count.push_back(0);
        for (std::size_t cc = 0; cc < k; ++cc) {
          if (in_work[y][cc]) {
            work.emplace_back(z, cc);
            in_work[z][cc] = 1;
          } else {
            std::size_t pick = blocks[y].size() <= blocks[z].size() ? y : z;
            work.emplace_back(pick, cc);
            in_work[pick][cc] = 1;
          }
        }
      }
      marked_count[y] = 0;
    }
    for (std::size_t p : x) marked[p] = 0;
  }

  // Quotient, dead-block removal, breadth-first renumbering.
  const std::size_t nb = blocks.size();
  std::vector<std::vector<std::size_t>> qtrans(nb, std::vector<std::size_t>(k));
  std::vector<bool> qacc(nb, false);
  for (std::size_t b = 0; b < nb; ++b) {
    std::size_t rep = blocks[b].front();
    qacc[b] = acc[rep];
    for (std::size_t c = 0; c < k; ++c) qtrans[b][c] = block[trans[rep * k + c]];
  }
  std::vector<bool> live(nb, false);
  for (std::size_t b = 0; b < nb; ++b) live[b] = qacc[b];
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t b = 0; b < nb; ++b) {
      if (live[b]) continue;
      for (std::size_t c = 0; c < k; ++c)
        if (live[qtrans[b][c]]) {
          live[b] = true;
          changed = true;
          break;
        }
    }
  }
  std::vector<std::size_t> sym_order(k);
  for (std::size_t c = 0; c < k; ++c) sym_order[c] = c;
  std::sort(sym_order.begin(), sym_order.end(), [&](std::size_t x, std::size_t y) { return symbol_less(sigma[x], sigma[y]); });
  Dfa out;
  std::size_t b0 = block[0];
  std::vector<int> id(nb, -1);
  std::vector<std::size_t> order;
  id[b0] = 0;
  order.push_back(b0);
  out.delta.emplace_back();
  out.accepting.push_back(qacc[b0]);
  if (!live[b0]) return out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::size_t b = order[i];
    for (std::size_t c : sym_order) {
      std::size_t t = qtrans[b][c];
      if (!live[t]) continue;
      if (id[t] < 0) {
        id[t] = static_cast<int>(order.size());
        order.push_back(t);
        out.delta.emplace_back();
        out.accepting.push_back(qacc[t]);
      }
      out.delta[i][sigma[c]] = static_cast<Location>(id[t]);
    }
  }
  return out;
}

GeneralPcfa to_general(const Dfa& d, const Alphabet& alphabet) {
  GeneralPcfa g;
  for (std::size_t q = 0; q < d.size(); ++q) g.add_location(d.accepting[q]);
  g.set_init(d.init);
  for (std::size_t q = 0; q < d.size(); ++q)
    for (const auto& [s, t] : d.delta[q]) g.add_transition(static_cast<Location>(q), s, t);
  for (Symbol s : alphabet) g.add_symbol(s);
  return g;
}

// ---------------------------------------------------------------- algebra

GeneralPcfa universal(const Alphabet& sigma) {
  GeneralPcfa g;
  Location i = g.add_location(false), f = g.add_location(true);
  for (Symbol s : sigma) {
    g.add_transition(i, s, f);
    g.add_transition(f, s, f);
  }
  g.set_init(i);
  return g;
}

GeneralPcfa empty_automaton() {
  GeneralPcfa g;
  g.add_location(false);
  return g;
}

GeneralPcfa complement(const GeneralPcfa& g, const Alphabet& sigma_in) {
  Alphabet sigma = sigma_in;
  sigma.insert(g.alphabet().begin(), g.alphabet().end());
  Dfa d = determinize(g);
  GeneralPcfa out;
  for (std::size_t q = 0; q < d.size(); ++q) out.add_location(!d.accepting[q]);
  Location sink = out.add_location(true);
  for (Symbol s : sigma) out.add_transition(sink, s, sink);
  for (std::size_t q = 0; q < d.size(); ++q)
    for (Symbol s : sigma) {
      auto it = d.delta[q].find(s);
      out.add_transition(static_cast<Location>(q), s, it == d.delta[q].end() ? sink : it->second);
    }
  // The empty word is never in a language; a fresh rejecting copy of an
  // accepting initial state keeps acceptance of revisits intact.
  Location init = d.init;
  if (out.accepting(init)) {
    Location fresh = out.add_location(false);
    for (const auto& [s, t] : std::vector<std::pair<Symbol, Location>>(out.out(init))) out.add_transition(fresh, s, t);
    init = fresh;
  }
  out.set_init(init);
  for (Symbol s : sigma) out.add_symbol(s);
  return out;
}

GeneralPcfa complement(const GeneralPcfa& g) { return complement(g, g.alphabet()); }

GeneralPcfa union_of(const GeneralPcfa& a, const GeneralPcfa& b) {
  GeneralPcfa out;
  Location init = out.add_location(false);
  const Location off_a = 1;
  const Location off_b = static_cast<Location>(1 + a.num_locations());
  for (std::size_t l = 0; l < a.num_locations(); ++l) out.add_location(a.accepting(static_cast<Location>(l)));
  for (std::size_t l = 0; l < b.num_locations(); ++l) out.add_location(b.accepting(static_cast<Location>(l)));
  for (std::size_t l = 0; l < a.num_locations(); ++l)
    for (const auto& [s, t] : a.out(static_cast<Location>(l))) out.add_transition(static_cast<Location>(l) + off_a, s, t + off_a);
  for (std::size_t l = 0; l < b.num_locations(); ++l)
    for (const auto& [s, t] : b.out(static_cast<Location>(l))) out.add_transition(static_cast<Location>(l) + off_b, s, t + off_b);
  if (a.num_locations())
    for (const auto& [s, t] : a.out(a.init())) out.add_transition(init, s, t + off_a);
  if (b.num_locations())
    for (const auto& [s, t] : b.out(b.init())) out.add_transition(init, s, t + off_b);
  out.set_init(init);
  for (Symbol s : a.alphabet()) out.add_symbol(s);
  for (Symbol s : b.alphabet()) out.add_symbol(s);
  return out;
}

GeneralPcfa intersect(const GeneralPcfa& a, const GeneralPcfa& b) {
  GeneralPcfa out;
  for (Symbol s : a.alphabet()) out.add_symbol(s);
  for (Symbol s : b.alphabet()) out.add_symbol(s);
  if (a.num_locations() == 0 || b.num_locations() == 0) {
    out.add_location(false);
    return out;
  }
  std::map<std::pair<Location, Location>, Location> ids;
  std::vector<std::pair<Location, Location>> pairs;
  auto id_of = [&](Location p, Location q) {
    auto [it, inserted] = ids.emplace(std::make_pair(p, q), static_cast<Location>(pairs.size()));
    if (inserted) {
      pairs.emplace_back(p, q);
      out.add_location(a.accepting(p) && b.accepting(q));
    }
    return it->second;
  };
  out.set_init(id_of(a.init(), b.init()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [p, q] = pairs[i];
    for (const auto& [s, t] : a.out(p)) {
      const auto& bo = b.out(q);
      auto it = std::lower_bound(bo.begin(), bo.end(), std::pair<Symbol, Location>{s, 0});
      for (; it != bo.end() && it->first == s; ++it) {
        Location to = id_of(t, it->second);
        out.add_transition(static_cast<Location>(i), s, to);
      }
    }
  }
  return out;
}

bool is_valid_pcfa(const GeneralPcfa& g) {
  std::size_t accepting = 0;
  for (std::size_t l = 0; l < g.num_locations(); ++l) {
    const auto& out = g.out(static_cast<Location>(l));
    for (std::size_t i = 1; i < out.size(); ++i)
      if (out[i].first == out[i - 1].first) return false;
    if (g.accepting(static_cast<Location>(l))) {
      ++accepting;
      if (!out.empty()) return false;
    }
  }
  return accepting == 1;
}

Pcfa empty_pcfa() { return Pcfa(); }

Pcfa restrict_language(const Pcfa& a, const std::vector<const GeneralPcfa*>& require,
                       const std::vector<const GeneralPcfa*>& exclude) {
  Product prod(a, require, exclude);
  auto start = prod.initial();
  Pcfa result;
  for (Symbol s : a.alphabet()) result.add_symbol(s);
  if (!start) return result;
  Dfa d;
  std::unordered_map<std::vector<Location>, Location, VecHash> ids;
  std::vector<Product::State> states;
  auto intern_state = [&](Product::State s) -> Location {
    auto key = Product::key(s);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    Location id = static_cast<Location>(states.size());
    ids.emplace(std::move(key), id);
    d.delta.emplace_back();
    d.accepting.push_back(prod.accepting(s));
    states.push_back(std::move(s));
    return id;
  };
  d.init = intern_state(*start);
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (Symbol sym : prod.symbols(states[i].loc)) {
      auto n = prod.next(states[i], sym);
      if (!n) continue;
      Location t = intern_state(std::move(*n));
      d.delta[i][sym] = t;
    }
  }
  Dfa m = minimize(d);
  std::vector<Location> acc;
  for (std::size_t q = 0; q < m.size(); ++q)
    if (m.accepting[q]) acc.push_back(static_cast<Location>(q));
  if (acc.empty()) return result;
  if (acc.size() != 1 || !m.delta[acc[0]].empty() || acc[0] == m.init)
    throw std::logic_error("restrict_language: result is not a single-exit automaton");
  // Location numbering: init 0, end 1, the rest in breadth-first order.
  std::vector<Location> map(m.size(), 0);
  map[m.init] = 0;
  map[acc[0]] = 1;
  for (std::size_t q = 0; q < m.size(); ++q) {
    if (q == m.init || q == acc[0]) continue;
    map[q] = result.add_location();
  }
  for (std::size_t q = 0; q < m.size(); ++q)
    for (const auto& [s, t] : m.delta[q]) result.add_transition(map[q], s, map[t]);
  return result;
}

Pcfa min_intersect(const Pcfa& a, const GeneralPcfa& v) { return restrict_language(a, {&v}, {}); }

std::optional<Trace> shortest_trace(const Pcfa& a, const std::vector<const GeneralPcfa*>& require,
                                    const std::vector<const GeneralPcfa*>& exclude) {
  Product prod(a, require, exclude);
  auto start = prod.initial();
  if (!start) return std::nullopt;
  struct Node {
    Product::State state;
    std::size_t parent;
    Symbol sym;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::vector<Location>, bool, VecHash> seen;
  seen.emplace(Product::key(*start), true);
  nodes.push_back({*start, 0, 0});
  // Breadth-first with successors expanded in statement order: the first
  // accepting node reached carries the lexicographically least shortest word.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (Symbol sym : prod.symbols(nodes[i].state.loc)) {
      auto n = prod.next(nodes[i].state, sym);
      if (!n) continue;
      bool acc = prod.accepting(*n);
      if (!seen.emplace(Product::key(*n), true).second) continue;
      nodes.push_back({std::move(*n), i, sym});
      if (acc) {
        std::vector<Symbol> word;
        for (std::size_t j = nodes.size() - 1; j != 0; j = nodes[j].parent) word.push_back(nodes[j].sym);
        std::reverse(word.begin(), word.end());
        return Trace(std::move(word));
      }
    }
  }
  return std::nullopt;
}

std::optional<Trace> shortest_excluded_trace(const Pcfa& a, const GeneralPcfa& v, const GeneralPcfa& storage) {
  return shortest_trace(a, {&v}, {&storage});
}

bool language_equivalent(const GeneralPcfa& a, const GeneralPcfa& b) {
  return for_each_pair(a, b, [](bool x, bool y) { return x == y; });
}

bool language_subset(const GeneralPcfa& a, const GeneralPcfa& b) {
  return for_each_pair(a, b, [](bool x, bool y) { return !x || y; });
}

bool language_empty(const GeneralPcfa& g) { return language_subset(g, empty_automaton()); }

std::vector<Trace> finite_language(const GeneralPcfa& g, const Pcfa* within, std::size_t limit) {
  std::vector<Trace> out;
  if (g.num_locations() == 0) return out;
  const std::size_t max_depth = g.num_locations() + 1;
  std::vector<Symbol> word;
  std::function<void(const Subset&, Location)> dfs = [&](const Subset& cur, Location loc) {
    if (word.size() > max_depth) throw std::length_error("finite_language: language is infinite");
    if (!word.empty() && any_accepting(g, cur) && (!within || loc == within->end())) {
      if (out.size() >= limit) throw std::length_error("finite_language: too many words");
      out.emplace_back(word);
    }
    std::vector<Symbol> syms;
    for (Location l : cur)
      for (const auto& [s, t] : g.out(l)) syms.push_back(s);
    for (Symbol s : ordered(std::move(syms))) {
      Location nloc = 0;
      if (within) {
        if (loc == within->end()) return;
        const auto& o = within->out(loc);
        auto it = o.find(s);
        if (it == o.end()) continue;
        nloc = it->second;
      }
      Subset next = step(g, cur, s);
      word.push_back(s);
      dfs(next, nloc);
      word.pop_back();
    }
  };
  dfs(Subset{g.init()}, within ? within->init() : 0);
  return out;
}

}  // namespace tb
