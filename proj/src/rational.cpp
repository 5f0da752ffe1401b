#include "rational.hpp"

#include <cctype>
#include <sstream>

namespace affdim {

namespace {

bool is_integer_literal(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  s.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParseError("empty rational literal");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den))
      throw ParseError("invalid rational literal '" + text + "'");
    mpq_class q;
    if (q.set_str(num + "/" + den, 10) != 0)
      throw ParseError("invalid rational literal '" + text + "'");
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
  }

  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string head = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool neg = !head.empty() && head[0] == '-';
    if (!head.empty() && (head[0] == '+' || head[0] == '-')) head.erase(0, 1);
    if (head.empty()) head = "0";
    if (!is_integer_literal(head) || (!frac.empty() && !is_integer_literal(frac)))
      throw ParseError("invalid decimal literal '" + text + "'");
    mpz_class scaled(head + frac);
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    Rational q(scaled, den);
    q.canonicalize();
    return neg ? Rational(-q) : q;
  }

  if (!is_integer_literal(s))
    throw ParseError("invalid rational literal '" + text + "'");
  return Rational(mpz_class(s));
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double to_double(const Rational& r) { return r.get_d(); }

Rational rational_gcd(const Rational& a, const Rational& b) {
  Rational x = abs(a), y = abs(b);
  if (x == 0) return y;
  if (y == 0) return x;
  mpz_class num;
  mpz_gcd(num.get_mpz_t(), mpz_class(x.get_num() * y.get_den()).get_mpz_t(),
          mpz_class(y.get_num() * x.get_den()).get_mpz_t());
  Rational g(num, x.get_den() * y.get_den());
  g.canonicalize();
  return g;
}

std::vector<Rational> parse_rational_list(const std::string& csv) {
  std::vector<Rational> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_rational(item));
  }
  return out;
}

}  // namespace affdim
