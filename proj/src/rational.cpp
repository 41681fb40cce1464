#include "subsym/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace subsym {

namespace {

using boost::multiprecision::cpp_int;

cpp_int parse_integer(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  std::size_t pos = 0;
  if (text[0] == '+' || text[0] == '-') pos = 1;
  if (pos == text.size()) throw std::invalid_argument("malformed number");
  for (std::size_t i = pos; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw std::invalid_argument("malformed number: " + std::string(text));
    }
  }
  return cpp_int(std::string(text));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const cpp_int num = parse_integer(text.substr(0, slash));
    const cpp_int den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    const std::string_view frac = text.substr(dot + 1);
    digits += frac;
    if (digits == "-" || digits == "+" || digits.empty()) {
      throw std::invalid_argument("malformed number: " + std::string(text));
    }
    cpp_int den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    return Rational(parse_integer(digits), den);
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& value) {
  const auto num = boost::multiprecision::numerator(value);
  const auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

bool is_integral(const Rational& value) {
  return boost::multiprecision::denominator(value) == 1;
}

Rational approximate(double value, long long max_denominator) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value");
  // Exact binary value of the double, then best rational approximation.
  const Rational exact(value);
  cpp_int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Rational rest = exact;
  for (int iter = 0; iter < 64; ++iter) {
    const cpp_int num = boost::multiprecision::numerator(rest);
    const cpp_int den = boost::multiprecision::denominator(rest);
    cpp_int a = num / den;
    if (num < 0 && a * den != num) a -= 1;  // floor
    const cpp_int p2 = a * p1 + p0;
    const cpp_int q2 = a * q1 + q0;
    if (q2 > max_denominator) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const Rational frac = rest - Rational(a);
    if (frac == 0) break;
    rest = 1 / frac;
  }
  if (q1 == 0) return exact;
  return Rational(p1, q1);
}

}  // namespace subsym
