#include "rid.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "parallel.hpp"

namespace affdim {

namespace {

void enumerate_product_nu(const SourceSpec& spec, int coord, BitPattern nu,
                          const Rational& prob,
                          const std::function<void(BitPattern, const Rational&)>& fn) {
  if (coord == spec.n) {
    fn(nu, prob);
    return;
  }
  Rational alpha = spec.coordinates[coord].alpha.value_or(0);
  if (alpha < 1) enumerate_product_nu(spec, coord + 1, nu, prob * (1 - alpha), fn);
  if (alpha > 0)
    enumerate_product_nu(spec, coord + 1, nu | (BitPattern{1} << coord),
                         prob * alpha, fn);
}

}  // namespace

void enumerate_nu(const SourceSpec& spec,
                  const std::function<void(BitPattern, const Rational&)>& fn) {
  if (spec.has_joint_table()) {
    for (const auto& [pat, p] : nu_marginal(spec))
      if (p > 0) fn(pat, p);
    return;
  }
  enumerate_product_nu(spec, 0, 0, Rational(1), fn);
}

RIDResult rid_linear(const SourceSpec& spec, const RationalMatrix& a, int cap) {
  require_valid(spec);
  if (a.cols() != spec.n)
    throw std::invalid_argument("matrix has " + std::to_string(a.cols()) +
                                " columns, source has " + std::to_string(spec.n));
  if (spec.n > cap)
    throw std::invalid_argument(
        "n = " + std::to_string(spec.n) + " exceeds the exact enumeration cap " +
        std::to_string(cap) + "; use rid_linear_mc");
  Rational total = 0;
  std::uint64_t patterns = 0;
  enumerate_nu(spec, [&](BitPattern nu, const Rational& p) {
    ++patterns;
    int r = rank(a.column_submatrix(nu));
    if (r != 0) total += p * r;
  });
  RIDResult out;
  out.exact = total;
  out.value = total.get_d();
  out.method = "exact-enumeration";
  out.patterns = patterns;
  return out;
}

RIDResult rid_linear_mc(const SourceSpec& spec, const RationalMatrix& a,
                        std::uint64_t samples, std::uint64_t seed) {
  require_valid(spec);
  if (a.cols() != spec.n)
    throw std::invalid_argument("matrix/source dimension mismatch");
  if (samples < 1000)
    throw std::invalid_argument("rid_linear_mc requires at least 1000 samples");

  NuSampler sampler(spec);
  std::unordered_map<BitPattern, int> memo;
  std::mutex memo_mutex;
  std::atomic<std::uint64_t> sum{0}, sumsq{0};

  parallel_blocks(samples, [&](std::size_t lo, std::size_t hi) {
    std::unordered_map<BitPattern, int> local;
    std::uint64_t s = 0, s2 = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      BitPattern nu = sampler.draw(seed, i);
      auto it = local.find(nu);
      int r;
      if (it != local.end()) {
        r = it->second;
      } else {
        r = rank(a.column_submatrix(nu));
        local.emplace(nu, r);
      }
      s += static_cast<std::uint64_t>(r);
      s2 += static_cast<std::uint64_t>(r) * r;
    }
    sum += s;
    sumsq += s2;
    std::lock_guard<std::mutex> g(memo_mutex);
    memo.merge(local);
  });

  double n = static_cast<double>(samples);
  double mean = static_cast<double>(sum.load()) / n;
  double var =
      (static_cast<double>(sumsq.load()) - n * mean * mean) / std::max(1.0, n - 1);
  double half = 1.959963985 * std::sqrt(std::max(0.0, var) / n);
  RIDResult out;
  out.value = mean;
  out.ci = std::make_pair(mean - half, mean + half);
  out.method = "monte-carlo";
  out.patterns = memo.size();
  return out;
}

Rational lipschitz_upper_bound(const SourceSpec& spec, int m) {
  require_valid(spec);
  if (m < 0) throw std::invalid_argument("m must be >= 0");
  auto pmf = hamming_weight_pmf(spec);
  Rational total = 0;
  for (int k = 0; k <= spec.n; ++k)
    if (pmf[k] != 0) total += pmf[k] * std::min(k, m);
  return total;
}

Rational rid_sensitivity(const SourceSpec& spec, const RationalMatrix& a,
                         int coordinate) {
  require_valid(spec);
  if (spec.has_joint_table())
    throw std::invalid_argument("sensitivity defined for independent form");
  if (coordinate < 0 || coordinate >= spec.n)
    throw std::invalid_argument("coordinate out of range");
  if (a.cols() != spec.n)
    throw std::invalid_argument("matrix/source dimension mismatch");

  // Sum over patterns of the other coordinates of
  // w(pattern) * (rank with column i - rank without it); each term >= 0.
  Rational total = 0;
  BitPattern bit = BitPattern{1} << coordinate;
  std::function<void(int, BitPattern, const Rational&)> walk =
      [&](int coord, BitPattern nu, const Rational& prob) {
        if (coord == spec.n) {
          int with = rank(a.column_submatrix(nu | bit));
          int without = rank(a.column_submatrix(nu));
          if (with != without) total += prob * (with - without);
          return;
        }
        if (coord == coordinate) {
          walk(coord + 1, nu, prob);
          return;
        }
        Rational alpha = spec.coordinates[coord].alpha.value_or(0);
        if (alpha < 1) walk(coord + 1, nu, prob * (1 - alpha));
        if (alpha > 0) walk(coord + 1, nu | (BitPattern{1} << coord), prob * alpha);
      };
  walk(0, 0, Rational(1));
  return total;
}

bool check_spark_condition(const RationalMatrix& a) {
  return spark(a) == rank(a) + 1;
}

}  // namespace affdim
