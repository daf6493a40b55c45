#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace vrm {

using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

// Parses "-12.375", "7" or "22/7" exactly. Scientific notation and binary
// floating point never enter the value. Throws ParseError.
Rational parse_rational(std::string_view text);

// Always "p/q" (q >= 1), e.g. "4/1", "-1/3".
std::string to_fraction_string(const Rational& value);

// Terminating decimal expansion ("12", "0.125"), or nullopt for values such as 1/3.
std::optional<std::string> to_exact_decimal(const Rational& value);

// Fixed number of fractional digits, rounded half away from zero.
std::string to_decimal_string(const Rational& value, int digits);

// "p/q" unless decimal_digits is set.
std::string format_rational(const Rational& value, std::optional<int> decimal_digits);

inline Rational make_rational(const BigInt& num, const BigInt& den) { return Rational(num, den); }

}  // namespace vrm
