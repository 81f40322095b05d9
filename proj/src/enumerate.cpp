#include "tracebound/enumerate.hpp"

#include <algorithm>

namespace tb {

bool TraceEnumerator::Later::operator()(const Item& a, const Item& b) const {
  if (a.coins != b.coins) return a.coins > b.coins;
  if (a.ranks.size() != b.ranks.size()) return a.ranks.size() > b.ranks.size();
  return a.ranks > b.ranks;
}

TraceEnumerator::TraceEnumerator(const Pcfa& g, const GeneralPcfa* exclude)
    : g_(exclude ? restrict_language(g, {}, {exclude}) : restrict_language(g, {}, {})) {
  // restrict_language minimizes and trims, so every remaining location can
  // reach the end.
  std::vector<Symbol> syms(g_.alphabet().begin(), g_.alphabet().end());
  std::sort(syms.begin(), syms.end(), symbol_less);
  for (unsigned i = 0; i < syms.size(); ++i) rank_[syms[i]] = i;
  if (!g_.empty_language()) queue_.push(Item{0, {}, {}, g_.init()});
}

std::optional<std::pair<Trace, Rational>> TraceEnumerator::next() {
  while (!queue_.empty()) {
    Item it = queue_.top();
    queue_.pop();
    if (it.loc == g_.end()) {
      ++produced_;
      Rational w = dyadic(it.coins);
      return std::make_pair(Trace(std::move(it.word)), w);
    }
    for (const auto& [s, t] : g_.out(it.loc)) {
      Item n = it;
      n.word.push_back(s);
      n.ranks.push_back(rank_.at(s));
      n.loc = t;
      if (statement(s).is_prob()) ++n.coins;
      queue_.push(std::move(n));
    }
  }
  return std::nullopt;
}

std::vector<std::pair<Trace, Rational>> enumerate_by_weight(const Pcfa& g, const GeneralPcfa* exclude,
                                                            std::size_t limit) {
  TraceEnumerator e(g, exclude);
  std::vector<std::pair<Trace, Rational>> out;
  while (out.size() < limit) {
    auto n = e.next();
    if (!n) break;
    out.push_back(std::move(*n));
  }
  return out;
}

}  // namespace tb
