#include "hetsim/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace hetsim {

namespace {

boost::multiprecision::cpp_int parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
  boost::multiprecision::cpp_int n = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
    n = n * 10 + (c - '0');
  }
  return n;
}

}  // namespace

Rational::Rational(long long num, long long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  value_ = boost::multiprecision::cpp_rational(num, den);
}

Rational Rational::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  boost::multiprecision::cpp_int num;
  boost::multiprecision::cpp_int den = 1;
  if (slash == std::string_view::npos) {
    num = parse_integer(body, text);
  } else {
    num = parse_integer(body.substr(0, slash), text);
    den = parse_integer(body.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  }
  if (negative) num = -num;
  return Rational(boost::multiprecision::cpp_rational(num, den));
}

std::string Rational::str() const {
  auto num = boost::multiprecision::numerator(value_);
  auto den = boost::multiprecision::denominator(value_);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace hetsim
