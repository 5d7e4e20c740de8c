#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace stackres {

using Rational = boost::multiprecision::cpp_rational;

// Exact rational extended with -inf and +inf. Infinities take part in
// comparisons and negation only; any other arithmetic touching them throws
// InfiniteArithmetic.
class ExtendedRational {
 public:
  enum class Kind : std::uint8_t { kNegInf, kFinite, kPosInf };

  ExtendedRational() = default;
  ExtendedRational(Rational value) : value_(std::move(value)) {}  // NOLINT
  ExtendedRational(long long value) : value_(value) {}            // NOLINT
  ExtendedRational(int value) : value_(value) {}                  // NOLINT

  static ExtendedRational neg_inf() { return ExtendedRational(Kind::kNegInf); }
  static ExtendedRational pos_inf() { return ExtendedRational(Kind::kPosInf); }

  // Accepts "7", "-3", "2/6", "0.125", "-inf", "inf". Decimals are converted
  // exactly. Throws std::invalid_argument on anything else.
  static ExtendedRational parse(std::string_view text);

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::kFinite; }
  const Rational& value() const;

  // Canonical text: integer, "p/q" in lowest terms, "-inf" or "inf".
  std::string to_string() const;

  ExtendedRational operator-() const;
  friend ExtendedRational operator+(const ExtendedRational& a, const ExtendedRational& b);
  friend ExtendedRational operator-(const ExtendedRational& a, const ExtendedRational& b);
  friend ExtendedRational operator*(const ExtendedRational& a, const ExtendedRational& b);
  friend ExtendedRational operator/(const ExtendedRational& a, const ExtendedRational& b);

  friend std::strong_ordering operator<=>(const ExtendedRational& a,
                                          const ExtendedRational& b);
  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  explicit ExtendedRational(Kind kind) : kind_(kind) {}

  Kind kind_ = Kind::kFinite;
  Rational value_{0};
};

std::ostream& operator<<(std::ostream& os, const ExtendedRational& v);

}  // namespace stackres
