#include "vrm/rational.hpp"

#include <cctype>
#include <string>

#include "vrm/errors.hpp"

namespace vrm {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// BigInt's string constructor treats a leading 0 as an octal prefix.
BigInt from_digits(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return BigInt(std::string(digits));
}

BigInt pow10(unsigned n) {
  BigInt r(1);
  for (unsigned i = 0; i < n; ++i) r *= 10;
  return r;
}

std::string with_point(const BigInt& magnitude, unsigned digits, bool negative) {
  std::string s = magnitude.str();
  if (digits > 0) {
    if (s.size() <= digits) s.insert(0, digits - s.size() + 1, '0');
    s.insert(s.size() - digits, 1, '.');
  }
  if (negative) s.insert(0, 1, '-');
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string original(text);
  auto fail = [&](const char* why) -> Rational {
    throw ParseError("", "invalid number \"" + original + "\": " + why);
  };
  if (text.empty()) return fail("empty");

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  Rational value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return fail("expected p/q with integer parts");
    const BigInt d = from_digits(den);
    if (d == 0) return fail("zero denominator");
    value = Rational(from_digits(num), d);
  } else {
    const auto dot = text.find('.');
    const auto whole = text.substr(0, dot);
    const auto frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (dot != std::string_view::npos && frac.empty()) return fail("missing digits after '.'");
    if (whole.empty() && frac.empty()) return fail("no digits");
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) {
      return fail("expected a plain decimal (no exponent)");
    }
    const std::string digits = std::string(whole) + std::string(frac);
    value = Rational(from_digits(digits), pow10(static_cast<unsigned>(frac.size())));
  }
  return negative ? Rational(-value) : value;
}

std::string to_fraction_string(const Rational& value) {
  return numerator(value).str() + "/" + denominator(value).str();
}

std::optional<std::string> to_exact_decimal(const Rational& value) {
  BigInt den = denominator(value);
  unsigned twos = 0;
  unsigned fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return std::nullopt;
  const unsigned digits = std::max(twos, fives);
  const BigInt scaled = numerator(value) * pow10(digits) / denominator(value);
  return with_point(abs(scaled), digits, scaled < 0);
}

std::string to_decimal_string(const Rational& value, int digits) {
  if (digits < 0) throw PreconditionError("negative decimal digit count");
  const auto d = static_cast<unsigned>(digits);
  const Rational scaled = abs(value) * Rational(pow10(d));
  const Rational shifted = scaled + Rational(1, 2);
  const BigInt rounded = numerator(shifted) / denominator(shifted);
  return with_point(rounded, d, value < 0 && rounded != 0);
}

std::string format_rational(const Rational& value, std::optional<int> decimal_digits) {
  return decimal_digits ? to_decimal_string(value, *decimal_digits) : to_fraction_string(value);
}

}  // namespace vrm
