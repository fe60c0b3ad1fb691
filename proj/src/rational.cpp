#include "finmeas/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

#include "finmeas/errors.hpp"

namespace finmeas {

namespace {

bool is_integer_literal(std::string_view text) {
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    ++i;
  }
  if (i == text.size()) {
    return false;
  }
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      return false;
    }
  }
  return true;
}

mpz_class parse_integer(std::string_view text) {
  if (!is_integer_literal(text)) {
    throw InputError("not an integer: '" + std::string(text) + "'");
  }
  if (text.front() == '+') {
    text.remove_prefix(1);
  }
  return mpz_class(std::string(text), 10);
}

}  // namespace

Rational::Rational(long numerator, long denominator)
    : Rational(mpz_class(numerator), mpz_class(denominator)) {}

Rational::Rational(const mpz_class& numerator, const mpz_class& denominator) {
  if (denominator == 0) {
    throw std::domain_error("rational with zero denominator");
  }
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational::Rational(const mpq_class& value) : value_(value) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_integer(text), mpz_class(1));
  }
  const mpz_class num = parse_integer(text.substr(0, slash));
  const std::string_view den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text.front() == '-' || den_text.front() == '+')) {
    throw InputError("denominator must be unsigned: '" + std::string(text) + "'");
  }
  const mpz_class den = parse_integer(den_text);
  if (den == 0) {
    throw InputError("zero denominator: '" + std::string(text) + "'");
  }
  return Rational(num, den);
}

Rational Rational::pow2(long exponent) {
  mpz_class power = 1;
  const unsigned long magnitude = exponent < 0 ? static_cast<unsigned long>(-exponent)
                                               : static_cast<unsigned long>(exponent);
  mpz_mul_2exp(power.get_mpz_t(), power.get_mpz_t(), magnitude);
  return exponent < 0 ? Rational(mpz_class(1), power) : Rational(power, mpz_class(1));
}

std::string Rational::str() const {
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::decimal(unsigned places) const {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
  mpz_class num = abs(value_.get_num()) * scale * 2 + value_.get_den();
  mpz_class den = value_.get_den() * 2;
  mpz_class scaled;
  mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());

  std::string digits = scaled.get_str();
  if (digits.size() <= places) {
    digits.insert(0, places + 1 - digits.size(), '0');
  }
  std::string out = sign() < 0 && scaled != 0 ? "-" : "";
  out += digits.substr(0, digits.size() - places);
  if (places > 0) {
    out += "." + digits.substr(digits.size() - places);
  }
  return out;
}

Rational& Rational::operator+=(const Rational& other) {
  value_ += other.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& other) {
  value_ -= other.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& other) {
  value_ *= other.value_;
  return *this;
}

Rational& Rational::operator/=(const Rational& other) {
  if (other.is_zero()) {
    throw std::domain_error("rational division by zero");
  }
  value_ /= other.value_;
  return *this;
}

Rational Rational::operator-() const { return Rational(mpq_class(-value_)); }

std::ostream& operator<<(std::ostream& os, const Rational& value) { return os << value.str(); }

}  // namespace finmeas
