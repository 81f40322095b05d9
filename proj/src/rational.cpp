#include "tracebound/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace tb {

Rational dyadic(unsigned n) {
  boost::multiprecision::mpz_int den = 1;
  den <<= n;
  return Rational(boost::multiprecision::mpz_int(1), den);
}

std::string to_fraction_string(const Rational& r) {
  auto num = boost::multiprecision::numerator(r);
  auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

boost::multiprecision::mpz_int parse_digits(std::string_view s, std::string_view whole) {
  if (s.empty()) return 0;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
  return boost::multiprecision::mpz_int(std::string(s));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty number");
  bool negative = false;
  std::string_view body = text;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = parse_digits(body.substr(0, slash), text);
    auto den = parse_digits(body.substr(slash + 1), text);
    if (body.substr(0, slash).empty() || body.substr(slash + 1).empty() || den == 0)
      throw std::invalid_argument("malformed fraction: '" + std::string(text) + "'");
    value = Rational(num, den);
  } else {
    auto dot = body.find('.');
    std::string_view ip = body.substr(0, dot);
    std::string_view fp = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw std::invalid_argument("malformed number: '" + std::string(text) + "'");
    if (dot != std::string_view::npos && fp.empty() && ip.empty())
      throw std::invalid_argument("malformed number: '" + std::string(text) + "'");
    boost::multiprecision::mpz_int scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
    value = Rational(parse_digits(ip, text) * scale + parse_digits(fp, text), scale);
  }
  return negative ? Rational(-value) : value;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace tb
