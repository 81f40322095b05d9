#pragma once

#include "tracebound/expr.hpp"

#include <map>
#include <string>

namespace tb {

/// Total map from program variables to integers, or the single absorbing
/// non-sense state Bottom.
class Valuation {
 public:
  Valuation() = default;
  explicit Valuation(std::map<std::string, Int> values) : values_(std::move(values)) {}

  static Valuation bottom_value();

  bool is_bottom() const { return bottom_; }
  Int get(const std::string& var) const;  // throws std::out_of_range
  bool has(const std::string& var) const { return values_.count(var) != 0; }
  Valuation with(const std::string& var, Int value) const;
  const std::map<std::string, Int>& values() const { return values_; }

  friend bool operator==(const Valuation& a, const Valuation& b) {
    return a.bottom_ == b.bottom_ && a.values_ == b.values_;
  }
  friend bool operator<(const Valuation& a, const Valuation& b) {
    if (a.bottom_ != b.bottom_) return a.bottom_ < b.bottom_;
    return a.values_ < b.values_;
  }

 private:
  std::map<std::string, Int> values_;
  bool bottom_ = false;
};

/// Predicate satisfaction; Bottom satisfies nothing.
bool satisfies(const Valuation& v, const BExpr& phi);

std::string to_string(const Valuation& v);

}  // namespace tb
