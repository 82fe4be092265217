// SPDX-License-Identifier: Apache-2.0
#include "bcdof/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace bcdof {

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  const auto fail = [&] { throw std::invalid_argument("not a rational: '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  std::string s(text);
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    mpz_class n;
    mpz_class d;
    if (num.empty() || den.empty() || n.set_str(num, 10) != 0 || d.set_str(den, 10) != 0) fail();
    if (d == 0) fail();
    Rational q(n, d);
    q.canonicalize();
    return q;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  mpz_class num = 0;
  mpz_class den = 1;
  bool digits = false;
  bool fraction = false;
  for (; pos < s.size(); ++pos) {
    const char ch = s[pos];
    if (ch == '.' && !fraction) {
      fraction = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(ch))) fail();
    digits = true;
    num = num * 10 + (ch - '0');
    if (fraction) den *= 10;
  }
  if (!digits) fail();
  Rational q(negative ? mpz_class(-num) : num, den);
  q.canonicalize();
  return q;
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("from_double: non-finite value");
  return Rational(x);
}

} // namespace bcdof
