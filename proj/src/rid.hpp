#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "matrix.hpp"
#include "model.hpp"
#include "rational.hpp"

namespace affdim {

struct RIDResult {
  std::optional<Rational> exact;  // set on the exact path
  double value = 0.0;             // float view of `exact`, or the MC mean
  std::optional<std::pair<double, double>> ci;  // 95% normal CI (MC path)
  std::string method;             // "exact-enumeration" | "monte-carlo"
  std::uint64_t patterns = 0;     // nu patterns enumerated / distinct sampled
};

inline constexpr int kDefaultEnumerationCap = 20;

// Enumerates the nu-marginal as (pattern, probability) pairs, skipping
// zero-probability patterns. Product form walks a branch tree so the cost
// tracks the support, not 2^n times the per-pattern product.
void enumerate_nu(const SourceSpec& spec,
                  const std::function<void(BitPattern, const Rational&)>& fn);

// d(Y^m) = E_nu[rank(A^nu)], exact. Dependent nu laws supported through the
// joint-table marginal. Throws when n exceeds `cap`, pointing the caller at
// rid_linear_mc.
RIDResult rid_linear(const SourceSpec& spec, const RationalMatrix& a,
                     int cap = kDefaultEnumerationCap);

// Monte Carlo estimate of the same expectation (samples >= 1000), with a
// normal-approximation 95% CI. Ranks are exact and memoized per pattern.
RIDResult rid_linear_mc(const SourceSpec& spec, const RationalMatrix& a,
                        std::uint64_t samples, std::uint64_t seed);

// E_nu[min(|nu|_1, m)]: the Lipschitz-function RID upper bound. Equals
// rid_linear for any A with spark = rank+1 and rank = min(m, n).
Rational lipschitz_upper_bound(const SourceSpec& spec, int m);

// Exact d/d(alpha_i) of rid_linear for independent-form specs; always >= 0.
Rational rid_sensitivity(const SourceSpec& spec, const RationalMatrix& a,
                         int coordinate);

// True iff spark(A) = rank(A) + 1, the maximal-RID-preservation condition.
bool check_spark_condition(const RationalMatrix& a);

}  // namespace affdim
