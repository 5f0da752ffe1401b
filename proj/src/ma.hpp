#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "model.hpp"
#include "rational.hpp"

namespace affdim {

// Moving-average filter Y_i = sum_j a_j W_{i-j} with discrete-continuous
// excitation of continuous weight alpha. Only the total band width l1+l2
// enters any formula, so the taps are stored as one ordered vector.
struct MAConfig {
  std::vector<Rational> taps;  // a_{-l1} .. a_{l2}, endpoints nonzero
  Rational alpha;

  int band_width() const { return static_cast<int>(taps.size()) - 1; }  // l1+l2
};

void validate_ma(const MAConfig& cfg);

// m x (m + l1 + l2) banded matrix; row i carries the taps shifted by i.
RationalMatrix build_ma_matrix(const MAConfig& cfg, int m);

// The i.i.d. excitation source feeding the banded matrix: weight-alpha
// Bernoulli-Gaussian with atom 0 (the RID results do not depend on the
// choice, which is itself a tested invariant).
SourceSpec ma_excitation_spec(const MAConfig& cfg, int n);

struct BIDRow {
  int m = 0;
  std::optional<Rational> exact;  // d(Y^m), exact mode
  double value = 0.0;             // d(Y^m)/m
  std::optional<std::pair<double, double>> ci;  // of d(Y^m)/m, MC mode
  Rational lower;                 // m alpha / m = alpha
  Rational upper;                 // (m + l1 + l2) alpha / m
};

// Per-m block-average information dimension data (the BID curve). Exact mode
// requires m + l1 + l2 <= 20; mc_samples > 0 switches to Monte Carlo.
std::vector<BIDRow> bid_report(const MAConfig& cfg, const std::vector<int>& m_list,
                               std::uint64_t mc_samples = 0,
                               std::uint64_t seed = 0);

// KL divergence between Bern(p) and Bern(q) in nats; boundary cases by
// limits (0 log 0 = 0; q in {0,1} with p != q gives +inf).
double kl_bernoulli(double p, double q);

struct ConcentrationBounds {
  double p_above = 0.0;  // lower bound on Pr(d_V > k)
  double p_below = 0.0;  // lower bound on Pr(d_V < k)
  bool above_applicable = false;  // (k + l1 + l2 - 1)/n < alpha
  bool below_applicable = false;  // k/(n - l1 - l2) > alpha
};

// The two 1 - exp(-n KL) singularity-dimension tail bounds for a length-n
// excitation window.
ConcentrationBounds concentration_bounds(const MAConfig& cfg, int n, int k);

// Sample-size thresholds making the dimension concentrate within delta of
// n*alpha with failure probability eps:
//   first:  max{ 2(l1+l2-1)/delta, -ln(eps)/D(alpha - delta/2 || alpha) }
//   second: max{ l1+l2+1,          -ln(eps)/D(alpha + delta || alpha) }
std::pair<double, double> sample_size_threshold(double eps, double delta,
                                                double alpha, int l1, int l2);

}  // namespace affdim
