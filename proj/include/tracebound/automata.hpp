#pragma once

#include "tracebound/pcfa.hpp"
#include "tracebound/trace.hpp"

#include <optional>
#include <vector>

namespace tb {

/// Deterministic automaton with a partial transition function; a missing
/// transition rejects.
struct Dfa {
  std::vector<std::map<Symbol, Location>> delta;
  std::vector<bool> accepting;
  Location init = 0;
  std::size_t size() const { return delta.size(); }
};

/// Subset construction over the symbols on g's edges.
Dfa determinize(const GeneralPcfa& g);

/// Minimal trimmed DFA for the same non-empty-word language (Hopcroft on the
/// sink-completed automaton, then removal of the sink and dead states). The
/// result has a single dead-free component; an empty language yields one
/// rejecting state without transitions.
Dfa minimize(const Dfa& d);

GeneralPcfa to_general(const Dfa& d, const Alphabet& alphabet);

/// Accepts exactly the non-empty words over sigma.
GeneralPcfa universal(const Alphabet& sigma);
/// Accepts nothing.
GeneralPcfa empty_automaton();

/// Non-empty words over (sigma U alphabet(g)) not accepted by g.
GeneralPcfa complement(const GeneralPcfa& g, const Alphabet& sigma);
GeneralPcfa complement(const GeneralPcfa& g);

GeneralPcfa union_of(const GeneralPcfa& a, const GeneralPcfa& b);
/// Synchronous product.
GeneralPcfa intersect(const GeneralPcfa& a, const GeneralPcfa& b);

/// Deterministic, exactly one accepting location, and that location has no
/// outgoing transitions.
bool is_valid_pcfa(const GeneralPcfa& g);

/// Two locations, no transitions.
Pcfa empty_pcfa();

/// Minimal Pcfa for L(a) intersected with every L(p) for p in `require` and
/// with the complement of every L(n) for n in `exclude`. Subsets of the
/// nondeterministic operands are built on the fly. Locations are numbered
/// breadth-first from init (0) with end fixed at 1; the alphabet of `a` is kept.
Pcfa restrict_language(const Pcfa& a, const std::vector<const GeneralPcfa*>& require,
                       const std::vector<const GeneralPcfa*>& exclude);

/// min(a intersected with v).
Pcfa min_intersect(const Pcfa& a, const GeneralPcfa& v);

/// Minimal-length member of L(a) n L(require...) \ L(exclude...), ties broken
/// lexicographically by statement order; nullopt when the language is empty.
std::optional<Trace> shortest_trace(const Pcfa& a, const std::vector<const GeneralPcfa*>& require,
                                    const std::vector<const GeneralPcfa*>& exclude);
std::optional<Trace> shortest_excluded_trace(const Pcfa& a, const GeneralPcfa& v, const GeneralPcfa& storage);

/// Language comparisons over non-empty words.
bool language_equivalent(const GeneralPcfa& a, const GeneralPcfa& b);
bool language_subset(const GeneralPcfa& a, const GeneralPcfa& b);
bool language_empty(const GeneralPcfa& g);

/// Accepted words of g that `within` also accepts (all of L(g) when null).
/// The intersection must be finite; throws std::length_error when more than
/// `limit` words exist or a cycle is reachable on the joint paths.
std::vector<Trace> finite_language(const GeneralPcfa& g, const Pcfa* within, std::size_t limit);

}  // namespace tb
