#include "gaudin/scalar.hpp"

#include <cctype>

#include "gaudin/errors.hpp"

namespace gaudin {

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw SchemaError("empty rational literal");

  const auto dot = s.find('.');
  if (dot == std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw SchemaError("not a rational literal: '" + text + "'");
    if (sgn(q.get_den()) == 0) throw SchemaError("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
  }
  // Decimal literal: digits on both sides of a single '.'.
  bool negative = false;
  std::size_t start = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    start = 1;
  }
  const std::string whole = s.substr(start, dot - start);
  const std::string frac = s.substr(dot + 1);
  auto all_digits = [](const std::string& x) {
    for (char c : x)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  if ((whole.empty() && frac.empty()) || !all_digits(whole) || !all_digits(frac))
    throw SchemaError("not a rational literal: '" + text + "'");
  mpz_class num(whole.empty() ? std::string("0") : whole + frac, 10);
  if (whole.empty()) num = mpz_class(frac, 10);
  mpz_class den = 1;
  for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
  Rational q(num, den);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace gaudin
