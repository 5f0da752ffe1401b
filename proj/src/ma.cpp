#include "ma.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rid.hpp"

namespace affdim {

void validate_ma(const MAConfig& cfg) {
  if (cfg.taps.empty()) throw std::invalid_argument("MAConfig: taps must be nonempty");
  if (cfg.taps.front() == 0 || cfg.taps.back() == 0)
    throw std::invalid_argument("MAConfig: tap endpoints must be nonzero");
  if (cfg.alpha < 0 || cfg.alpha > 1)
    throw std::invalid_argument("MAConfig: alpha must lie in [0, 1]");
}

RationalMatrix build_ma_matrix(const MAConfig& cfg, int m) {
  validate_ma(cfg);
  if (m < 1) throw std::invalid_argument("build_ma_matrix: m must be >= 1");
  int width = static_cast<int>(cfg.taps.size());
  RationalMatrix a(m, m + cfg.band_width());
  for (int i = 0; i < m; ++i)
    for (int t = 0; t < width; ++t) a.at(i, i + t) = cfg.taps[t];
  return a;
}

SourceSpec ma_excitation_spec(const MAConfig& cfg, int n) {
  SourceSpec spec;
  spec.n = n;
  spec.coordinates.resize(n);
  for (Coordinate& c : spec.coordinates) {
    c.alpha = cfg.alpha;
    c.continuous = GaussianSpec{0.0, 1.0};
    if (cfg.alpha < 1) c.discrete.atoms = {Atom{Rational(0), Rational(1)}};
  }
  return spec;
}

std::vector<BIDRow> bid_report(const MAConfig& cfg, const std::vector<int>& m_list,
                               std::uint64_t mc_samples, std::uint64_t seed) {
  validate_ma(cfg);
  std::vector<BIDRow> rows;
  for (int m : m_list) {
    int n = m + cfg.band_width();
    if (mc_samples == 0 && n > kDefaultEnumerationCap)
      throw std::invalid_argument(
          "exact mode requires m + l1 + l2 <= " +
          std::to_string(kDefaultEnumerationCap) + "; use Monte Carlo");
    RationalMatrix a = build_ma_matrix(cfg, m);
    SourceSpec spec = ma_excitation_spec(cfg, n);
    BIDRow row;
    row.m = m;
    row.lower = cfg.alpha;
    row.upper = Rational(n) * cfg.alpha / m;
    if (mc_samples == 0) {
      RIDResult r = rid_linear(spec, a);
      row.exact = *r.exact;
      row.value = (*r.exact / m).get_d();
    } else {
      RIDResult r = rid_linear_mc(spec, a, mc_samples, seed);
      row.value = r.value / m;
      row.ci = std::make_pair(r.ci->first / m, r.ci->second / m);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double kl_bernoulli(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("kl_bernoulli requires p, q in [0, 1]");
  if (p == q) return 0.0;
  if (q == 0.0 || q == 1.0) return std::numeric_limits<double>::infinity();
  double out = 0.0;
  if (p > 0.0) out += p * std::log(p / q);
  if (p < 1.0) out += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return out;
}

ConcentrationBounds concentration_bounds(const MAConfig& cfg, int n, int k) {
  validate_ma(cfg);
  int band = cfg.band_width();
  if (n <= band) throw std::invalid_argument("need n > l1 + l2");
  double alpha = cfg.alpha.get_d();
  ConcentrationBounds out;

  double ratio_above = static_cast<double>(k + band - 1) / n;
  out.above_applicable = ratio_above < alpha && ratio_above >= 0.0;
  if (out.above_applicable)
    out.p_above = 1.0 - std::exp(-n * kl_bernoulli(ratio_above, alpha));

  double ratio_below = static_cast<double>(k) / (n - band);
  out.below_applicable = ratio_below > alpha && ratio_below <= 1.0;
  if (out.below_applicable)
    out.p_below = 1.0 - std::exp(-n * kl_bernoulli(ratio_below, alpha));

  return out;
}

std::pair<double, double> sample_size_threshold(double eps, double delta,
                                                double alpha, int l1, int l2) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in (0, 1]");
  if (!(delta > 0.0 && delta < std::min(alpha, 1.0 - alpha)))
    throw std::invalid_argument("delta must lie in (0, min(alpha, 1 - alpha))");
  int band = l1 + l2;
  double neg_log_eps = -std::log(eps);
  double first = std::max(2.0 * (band - 1) / delta,
                          neg_log_eps / kl_bernoulli(alpha - delta / 2.0, alpha));
  double second = std::max(static_cast<double>(band + 1),
                           neg_log_eps / kl_bernoulli(alpha + delta, alpha));
  return {first, second};
}

}  // namespace affdim
