#include "obsgame/rational.hpp"

#include <cctype>

#include "obsgame/errors.hpp"

namespace obsgame {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view original) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw ParseError("invalid rational literal '" + std::string(original) + "'");
  }
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mpz_class ez = parse_integer(s.substr(e + 1), text);
    if (!ez.fits_slong_p() || abs(ez) > 4096) {
      throw ParseError("exponent out of range in '" + std::string(text) + "'");
    }
    exponent = ez.get_si();
    s = s.substr(0, e);
  }
  std::string digits;
  long frac_len = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
        (!fp.empty() && !all_digits(fp))) {
      throw ParseError("invalid rational literal '" + std::string(text) + "'");
    }
    digits = std::string(ip) + std::string(fp);
    frac_len = static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) throw ParseError("invalid rational literal '" + std::string(text) + "'");
    digits = std::string(s);
  }
  mpz_class mantissa(digits.empty() ? std::string("0") : digits, 10);
  if (negative) mantissa = -mantissa;
  long shift = exponent - frac_len;
  if (shift >= 0) return Rational::from_integers(mantissa * pow10(static_cast<unsigned long>(shift)), 1);
  return Rational::from_integers(mantissa, pow10(static_cast<unsigned long>(-shift)));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("zero denominator");
  value_ = mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  value_.canonicalize();
}

Rational Rational::from_integers(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::domain_error("zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return Rational(std::move(q));
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw ParseError("empty rational literal");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(s.substr(0, slash), text);
    std::string_view den_text = s.substr(slash + 1);
    if (!all_digits(den_text)) {
      throw ParseError("invalid denominator in '" + std::string(text) + "'");
    }
    mpz_class den(std::string(den_text), 10);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return from_integers(num, den);
  }
  if (s.find_first_of(".eE") != std::string_view::npos) return parse_decimal(s);
  return from_integers(parse_integer(s, text), 1);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  value_ /= o.value_;
  return *this;
}

std::string Rational::to_string() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

}  // namespace obsgame
