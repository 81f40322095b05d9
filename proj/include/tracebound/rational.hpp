#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace tb {

/// Exact rational arithmetic backed by GMP. Expression templates are off so
/// the type behaves like a plain value in generic code (Eigen, std algorithms).
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// (1/2)^n
Rational dyadic(unsigned n);

/// "num/den" (or "num" when den == 1).
std::string to_fraction_string(const Rational& r);

/// Parses "0.375", "3/8", "1", ".5" into an exact rational. Throws
/// std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

}  // namespace tb
