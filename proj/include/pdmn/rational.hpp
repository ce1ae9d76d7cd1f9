#pragma once

// Exact rational numbers and probability literals.
//
// All probability arithmetic in pdmn is exact; decimal strings only appear at
// the input and output boundaries.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace pdmn {

using Rational = boost::multiprecision::cpp_rational;

/// Parses `[-]digits[.digits]` into an exact rational (0.63 -> 63/100).
std::optional<Rational> parse_decimal(std::string_view text);

/// Parses either a decimal or a `p/q` fraction. Surrounding whitespace is not
/// accepted; callers trim.
std::optional<Rational> parse_number(std::string_view text);

/// True iff the value has a finite base-10 expansion.
bool is_terminating_decimal(const Rational& value);

/// Shortest exact decimal ("0.501765", "3", "-0.5"), or nullopt when the
/// expansion does not terminate.
std::optional<std::string> to_exact_decimal(const Rational& value);

/// "p/q" in lowest terms, or "p" for integers.
std::string to_fraction(const Rational& value);

/// Rounds half away from zero to `digits` fractional digits, then drops
/// trailing zeros.
std::string to_rounded_decimal(const Rational& value, unsigned digits);

/// Exact decimal when it exists, otherwise the fraction.
std::string to_display(const Rational& value);

/// A probability annotation. Keeps the notation the author used so that
/// `1/6` is printed back as `1/6` and `0.7` as `0.7`.
class Probability {
 public:
  enum class Notation { Decimal, Fraction };

  Probability() = default;

  /// Throws std::invalid_argument unless 0 <= value <= 1.
  explicit Probability(Rational value, Notation notation = Notation::Decimal);

  /// Parses a decimal or fraction literal; nullopt if malformed or outside
  /// [0, 1].
  static std::optional<Probability> parse(std::string_view text);

  const Rational& value() const noexcept { return value_; }
  Notation notation() const noexcept { return notation_; }

  bool is_zero() const { return value_ == 0; }
  bool is_one() const { return value_ == 1; }

  /// Renders in the original notation. Decimal-notation values that do not
  /// terminate (only possible for computed values) fall back to a fraction.
  std::string str() const;

  friend bool operator==(const Probability& a, const Probability& b) {
    return a.value_ == b.value_;
  }

 private:
  Rational value_{0};
  Notation notation_ = Notation::Decimal;
};

}  // namespace pdmn
