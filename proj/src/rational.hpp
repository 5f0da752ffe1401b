#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace affdim {

// Exact rational scalar. All set-theoretic identity (subspace equality,
// decomposition merging, paper-value reproduction) runs on these; floats
// appear only where a quantity is inherently real (entropies, singular
// values).
using Rational = mpq_class;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts "p/q", integers ("-2"), and decimal literals ("0.3" -> 3/10).
Rational parse_rational(const std::string& text);

// Canonical "p/q" rendering; integers render without the "/q" part.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

// gcd of |a|, |b| as nonnegative rationals; gcd(x, 0) = |x|.
Rational rational_gcd(const Rational& a, const Rational& b);

std::vector<Rational> parse_rational_list(const std::string& csv);

}  // namespace affdim
