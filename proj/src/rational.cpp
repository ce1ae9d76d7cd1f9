#include "pdmn/rational.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace pdmn {

namespace {

using boost::multiprecision::cpp_int;

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

// Boost reads a leading zero as an octal prefix.
cpp_int from_digits(std::string digits) {
  auto nz = digits.find_first_not_of('0');
  return nz == std::string::npos ? cpp_int{0} : cpp_int{digits.substr(nz)};
}

cpp_int pow10(std::size_t n) {
  cpp_int r = 1;
  for (std::size_t i = 0; i < n; ++i) r *= 10;
  return r;
}

// Number of decimal places needed to write |value| exactly, if finite.
std::optional<std::size_t> decimal_places(const Rational& value) {
  cpp_int den = boost::multiprecision::denominator(value);
  std::size_t twos = 0;
  std::size_t fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return std::nullopt;
  return std::max(twos, fives);
}

// Writes |scaled| / 10^places as a decimal string, trimming trailing zeros.
std::string format_scaled(cpp_int scaled, std::size_t places) {
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.str();
  if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
  std::string whole = digits.substr(0, digits.size() - places);
  std::string frac = digits.substr(digits.size() - places);
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  std::string out = negative && (whole != "0" || !frac.empty()) ? "-" : "";
  out += whole;
  if (!frac.empty()) out += "." + frac;
  return out;
}

}  // namespace

std::optional<Rational> parse_decimal(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (!all_digits(whole)) return std::nullopt;
  if (dot != std::string_view::npos && !all_digits(frac)) return std::nullopt;
  cpp_int num = from_digits(std::string(whole) + std::string(frac));
  Rational r{num, pow10(frac.size())};
  return negative ? Rational{-r} : r;
}

std::optional<Rational> parse_number(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  std::string_view num = text.substr(0, slash);
  std::string_view den = text.substr(slash + 1);
  bool negative = false;
  if (!num.empty() && num.front() == '-') {
    negative = true;
    num.remove_prefix(1);
  }
  if (!all_digits(num) || !all_digits(den)) return std::nullopt;
  cpp_int d = from_digits(std::string(den));
  if (d == 0) return std::nullopt;
  Rational r{from_digits(std::string(num)), d};
  return negative ? Rational{-r} : r;
}

bool is_terminating_decimal(const Rational& value) {
  return decimal_places(value).has_value();
}

std::optional<std::string> to_exact_decimal(const Rational& value) {
  auto places = decimal_places(value);
  if (!places) return std::nullopt;
  cpp_int scaled = boost::multiprecision::numerator(value) * pow10(*places) /
                   boost::multiprecision::denominator(value);
  return format_scaled(scaled, *places);
}

std::string to_fraction(const Rational& value) {
  const auto& den = boost::multiprecision::denominator(value);
  if (den == 1) return boost::multiprecision::numerator(value).str();
  return boost::multiprecision::numerator(value).str() + "/" + den.str();
}

std::string to_rounded_decimal(const Rational& value, unsigned digits) {
  cpp_int num = boost::multiprecision::numerator(value) * pow10(digits);
  cpp_int den = boost::multiprecision::denominator(value);
  bool negative = num < 0;
  if (negative) num = -num;
  cpp_int q = num / den;
  cpp_int r = num % den;
  if (2 * r >= den) ++q;
  return format_scaled(negative ? cpp_int{-q} : q, digits);
}

std::string to_display(const Rational& value) {
  if (auto dec = to_exact_decimal(value)) return *dec;
  return to_fraction(value);
}

Probability::Probability(Rational value, Notation notation)
    : value_(std::move(value)), notation_(notation) {
  if (value_ < 0 || value_ > 1) {
    throw std::invalid_argument("probability " + to_fraction(value_) + " outside [0, 1]");
  }
}

std::optional<Probability> Probability::parse(std::string_view text) {
  auto value = parse_number(text);
  if (!value || *value < 0 || *value > 1) return std::nullopt;
  auto notation = text.find('/') == std::string_view::npos ? Notation::Decimal : Notation::Fraction;
  return Probability{*value, notation};
}

std::string Probability::str() const {
  if (notation_ == Notation::Decimal) {
    if (auto dec = to_exact_decimal(value_)) return *dec;
  }
  return to_fraction(value_);
}

}  // namespace pdmn
