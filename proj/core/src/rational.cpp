#include "stackres/rational.hpp"

#include <cctype>
#include <stdexcept>

#include "stackres/errors.hpp"

namespace stackres {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

boost::multiprecision::cpp_int parse_integer(std::string_view digits) {
  return boost::multiprecision::cpp_int(std::string(digits));
}

[[noreturn]] void bad_number(std::string_view text) {
  throw std::invalid_argument("not a number: '" + std::string(text) + "'");
}

}  // namespace

ExtendedRational ExtendedRational::parse(std::string_view text) {
  if (text == "-inf") return neg_inf();
  if (text == "inf" || text == "+inf") return pos_inf();

  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad_number(text);
    auto d = parse_integer(den);
    if (d == 0) bad_number(text);
    value = Rational(parse_integer(num), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if (!all_digits(whole) || !all_digits(frac)) bad_number(text);
    boost::multiprecision::cpp_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    value = Rational(parse_integer(whole) * scale + parse_integer(frac), scale);
  } else {
    if (!all_digits(body)) bad_number(text);
    value = Rational(parse_integer(body));
  }
  return ExtendedRational(negative ? Rational(-value) : value);
}

const Rational& ExtendedRational::value() const {
  if (!is_finite()) throw InfiniteArithmetic("value() of an infinite payoff");
  return value_;
}

std::string ExtendedRational::to_string() const {
  switch (kind_) {
    case Kind::kNegInf:
      return "-inf";
    case Kind::kPosInf:
      return "inf";
    case Kind::kFinite:
      break;
  }
  const auto num = boost::multiprecision::numerator(value_);
  const auto den = boost::multiprecision::denominator(value_);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

ExtendedRational ExtendedRational::operator-() const {
  switch (kind_) {
    case Kind::kNegInf:
      return pos_inf();
    case Kind::kPosInf:
      return neg_inf();
    case Kind::kFinite:
      break;
  }
  return ExtendedRational(Rational(-value_));
}

ExtendedRational operator+(const ExtendedRational& a, const ExtendedRational& b) {
  return ExtendedRational(Rational(a.value() + b.value()));
}

ExtendedRational operator-(const ExtendedRational& a, const ExtendedRational& b) {
  return ExtendedRational(Rational(a.value() - b.value()));
}

ExtendedRational operator*(const ExtendedRational& a, const ExtendedRational& b) {
  return ExtendedRational(Rational(a.value() * b.value()));
}

ExtendedRational operator/(const ExtendedRational& a, const ExtendedRational& b) {
  if (b.value() == 0) throw std::domain_error("division by zero");
  return ExtendedRational(Rational(a.value() / b.value()));
}

std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b) {
  if (a.kind_ != b.kind_ || !a.is_finite()) return a.kind_ <=> b.kind_;
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (a.value_ > b.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const ExtendedRational& v) {
  return os << v.to_string();
}

}  // namespace stackres
