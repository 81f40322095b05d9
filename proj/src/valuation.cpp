#include "tracebound/valuation.hpp"

#include <stdexcept>

namespace tb {

Valuation Valuation::bottom_value() {
  Valuation v;
  v.bottom_ = true;
  return v;
}

Int Valuation::get(const std::string& var) const {
  if (bottom_) throw std::logic_error("Valuation::get on bottom");
  auto it = values_.find(var);
  if (it == values_.end()) throw std::out_of_range("unassigned variable '" + var + "'");
  return it->second;
}

Valuation Valuation::with(const std::string& var, Int value) const {
  if (bottom_) return *this;
  Valuation v = *this;
  v.values_[var] = value;
  return v;
}

bool satisfies(const Valuation& v, const BExpr& phi) { return eval(phi, v); }

std::string to_string(const Valuation& v) {
  if (v.is_bottom()) return "bottom";
  std::string s = "{";
  bool first = true;
  for (const auto& [k, x] : v.values()) {
    if (!first) s += ", ";
    first = false;
    s += k + " = " + std::to_string(x);
  }
  return s + "}";
}

}  // namespace tb
