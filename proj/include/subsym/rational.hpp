#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace subsym {

/// Exact rational used by the model layer and the exact LP path.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "7", "-3/4" or a finite decimal such as "2.5".
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

bool is_integral(const Rational& value);

/// Closest fraction with denominator at most `max_denominator`
/// (continued-fraction expansion of the exact binary value of `value`).
Rational approximate(double value, long long max_denominator = 1000000);

/// A rational or an infinite bound. Absent means unbounded in the
/// direction of the field it is stored in.
using Bound = std::optional<Rational>;

}  // namespace subsym
