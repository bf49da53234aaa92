#include "imdyn/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace imdyn {

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') {
    neg = text[i] == '-';
    ++i;
  }
  if (i == text.size()) return std::nullopt;

  BigInt intpart = 0;
  bool any_digit = false;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    intpart = intpart * 10 + (text[i] - '0');
    any_digit = true;
    ++i;
  }

  Rational value;
  if (i < text.size() && text[i] == '/') {
    ++i;
    if (!any_digit || i == text.size()) return std::nullopt;
    BigInt den = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      den = den * 10 + (text[i] - '0');
      ++i;
    }
    if (i != text.size() || den == 0) return std::nullopt;
    value = Rational(intpart, den);
  } else if (i < text.size() && text[i] == '.') {
    ++i;
    BigInt frac = 0;
    BigInt scale = 1;
    bool frac_digit = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      frac = frac * 10 + (text[i] - '0');
      scale *= 10;
      frac_digit = true;
      ++i;
    }
    if (i != text.size() || (!any_digit && !frac_digit)) return std::nullopt;
    value = Rational(intpart) + Rational(frac, scale);
  } else {
    if (!any_digit || i != text.size()) return std::nullopt;
    value = Rational(intpart);
  }
  return neg ? Rational(-value) : value;
}

std::string to_string(const Rational& r) {
  const BigInt num = numerator(r);
  const BigInt den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational pow_rational(const Rational& r, long e) {
  if (e < 0) {
    if (r == 0) throw std::domain_error("pow_rational: zero base, negative exponent");
    return pow_rational(Rational(1) / r, -e);
  }
  Rational acc(1);
  Rational base = r;
  unsigned long n = static_cast<unsigned long>(e);
  while (n > 0) {
    if (n & 1ul) acc *= base;
    base *= base;
    n >>= 1;
  }
  return acc;
}

}  // namespace imdyn
