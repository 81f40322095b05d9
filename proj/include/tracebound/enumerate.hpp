#pragma once

#include "tracebound/automata.hpp"

#include <memory>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

namespace tb {

/// Lazy best-first stream over the accepted traces of a Pcfa that an
/// optional exclusion automaton rejects. Order: fewer coins (higher weight)
/// first, then shorter, then lexicographic by statement order. Locations
/// that cannot reach the end are pruned up front, so every trace of a given
/// weight is produced after finitely many steps when the input is MC-shaped.
class TraceEnumerator {
 public:
  explicit TraceEnumerator(const Pcfa& g, const GeneralPcfa* exclude = nullptr);

  std::optional<std::pair<Trace, Rational>> next();
  std::size_t produced() const { return produced_; }

 private:
  struct Item {
    unsigned coins;
    std::vector<Symbol> word;
    std::vector<unsigned> ranks;
    Location loc;
  };
  struct Later {
    bool operator()(const Item& a, const Item& b) const;
  };

  Pcfa g_;
  std::map<Symbol, unsigned> rank_;
  std::priority_queue<Item, std::vector<Item>, Later> queue_;
  std::size_t produced_ = 0;
};

/// Convenience: the first `limit` items of the stream.
std::vector<std::pair<Trace, Rational>> enumerate_by_weight(const Pcfa& g, const GeneralPcfa* exclude,
                                                            std::size_t limit);

}  // namespace tb
