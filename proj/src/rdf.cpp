#include "rdf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace affdim {

namespace {

constexpr double kLog2e = 1.4426950408889634;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

struct Grid {
  GridMeta meta;
  std::vector<double> x;  // grid points
  std::vector<double> p;  // source pmf
};

Grid build_grid(const SourceSpec& spec, double target_step) {
  const Coordinate& c = spec.coordinates[0];
  const auto* g = std::get_if<GaussianSpec>(&c.continuous);
  if (!g)
    throw std::invalid_argument("rdf_oracle_scalar requires a Gaussian continuous part");
  double sigma = std::sqrt(g->variance);
  Rational alpha = c.alpha.value_or(0);

  // Step choice: at most target_step, and an exact divisor of all atom
  // differences so every atom is a grid point.
  const auto& atoms = c.discrete.atoms;
  Rational anchor_q = atoms.empty() ? Rational(0) : atoms[0].value;
  double step = target_step;
  if (atoms.size() > 1) {
    Rational g_diff = 0;
    for (std::size_t i = 1; i < atoms.size(); ++i)
      g_diff = rational_gcd(g_diff, atoms[i].value - anchor_q);
    double gd = g_diff.get_d();
    double k = std::ceil(gd / target_step);
    step = gd / k;
  }

  double anchor = anchor_q.get_d();
  double lo = g->mean - 6.0 * sigma;
  double hi = g->mean + 6.0 * sigma;
  for (const Atom& a : atoms) {
    lo = std::min(lo, a.value.get_d());
    hi = std::max(hi, a.value.get_d());
  }
  std::int64_t klo = static_cast<std::int64_t>(std::floor((lo - anchor) / step));
  std::int64_t khi = static_cast<std::int64_t>(std::ceil((hi - anchor) / step));

  Grid grid;
  grid.meta = {anchor, step, klo, static_cast<std::size_t>(khi - klo + 1)};
  grid.x.resize(grid.meta.count);
  grid.p.assign(grid.meta.count, 0.0);
  for (std::size_t i = 0; i < grid.meta.count; ++i)
    grid.x[i] = anchor + static_cast<double>(klo + static_cast<std::int64_t>(i)) * step;

  // Continuous part: bin integrals of the Gaussian, tails folded into the
  // end bins so the pmf is exactly normalized.
  double ac = alpha.get_d();
  if (ac > 0.0) {
    double prev = 0.0;
    for (std::size_t i = 0; i < grid.meta.count; ++i) {
      double upper = (i + 1 < grid.meta.count)
                         ? normal_cdf((grid.x[i] + 0.5 * step - g->mean) / sigma)
                         : 1.0;
      grid.p[i] += ac * (upper - prev);
      prev = upper;
    }
  }
  // Atoms at exact indices (step divides every atom difference).
  for (const Atom& a : atoms) {
    double idx_d = std::round((a.value.get_d() - anchor) / step);
    std::int64_t idx = static_cast<std::int64_t>(idx_d) - klo;
    if (idx < 0 || idx >= static_cast<std::int64_t>(grid.meta.count))
      throw std::runtime_error("atom fell outside the oracle grid");
    grid.p[static_cast<std::size_t>(idx)] += (1.0 - ac) * a.prob.get_d();
  }
  double total = 0.0;
  for (double v : grid.p) total += v;
  for (double& v : grid.p) v /= total;
  return grid;
}

struct BaState {
  double distortion = 0.0;
  double rate_bits = 0.0;
  int iterations = 0;
};

// One fixed-slope solve; q is warm-started across slope updates.
BaState ba_fixed_slope(const Grid& grid, double s, std::vector<double>& q,
                       int max_iter) {
  std::size_t n = grid.meta.count;
  double step = grid.meta.step;
  int half = static_cast<int>(std::ceil(std::sqrt(700.0 / s) / step)) + 1;
  int klen = 2 * half + 1;
  std::vector<double> ker(klen), kerd(klen);
  for (int j = 0; j < klen; ++j) {
    double dx = (j - half) * step;
    ker[j] = std::exp(-s * dx * dx);
    kerd[j] = ker[j] * dx * dx;
  }

  auto convolve = [&](const std::vector<double>& v, const std::vector<double>& k,
                      std::vector<double>& out) {
    out.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      int j0 = std::max<int>(0, static_cast<int>(i) - half);
      int j1 = std::min<int>(static_cast<int>(n) - 1, static_cast<int>(i) + half);
      const double* kp = k.data() + (j0 - (static_cast<int>(i) - half));
      for (int j = j0; j <= j1; ++j) acc += v[j] * kp[j - j0];
      out[i] = acc;
    }
  };

  std::vector<double> z, ratio, back, zd;
  BaState st;
  double prev_rate = std::numeric_limits<double>::quiet_NaN();
  for (int it = 1; it <= max_iter; ++it) {
    convolve(q, ker, z);
    ratio.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      ratio[i] = z[i] > 0.0 ? grid.p[i] / z[i] : 0.0;
    convolve(ratio, ker, back);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      q[i] = std::max(q[i] * back[i], 1e-300);
      total += q[i];
    }
    for (std::size_t i = 0; i < n; ++i) q[i] /= total;

    convolve(q, ker, z);
    convolve(q, kerd, zd);
    double dist = 0.0, logz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (grid.p[i] <= 0.0) continue;
      dist += grid.p[i] * (zd[i] / z[i]);
      logz += grid.p[i] * std::log2(z[i]);
    }
    double rate = -logz - s * kLog2e * dist;
    st.distortion = dist;
    st.rate_bits = std::max(0.0, rate);
    st.iterations = it;
    if (!std::isnan(prev_rate) && std::abs(rate - prev_rate) < 1e-6) return st;
    prev_rate = rate;
  }
  throw std::runtime_error("rdf oracle: no convergence in 10^4 iterations");
}

}  // namespace

RdfPoint rdf_oracle_scalar(const SourceSpec& spec, double distortion,
                           double step_hint) {
  require_valid(spec);
  if (spec.n != 1)
    throw std::invalid_argument("rdf_oracle_scalar requires a 1-D source");
  if (!(distortion > 0.0)) throw std::invalid_argument("distortion must be > 0");

  double target_step = std::sqrt(distortion) / 4.0;
  if (step_hint > 0.0) target_step = std::min(target_step, step_hint);
  Grid grid = build_grid(spec, target_step);

  constexpr int kMaxInner = 10000;
  std::vector<double> q(grid.meta.count, 1.0 / static_cast<double>(grid.meta.count));

  // Variance of the gridded source bounds the achievable distortion range.
  double mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i < grid.meta.count; ++i) mean += grid.p[i] * grid.x[i];
  for (std::size_t i = 0; i < grid.meta.count; ++i) {
    double d = grid.x[i] - mean;
    var += grid.p[i] * d * d;
  }

  RdfPoint out;
  out.grid = grid.meta;
  double s = 1.0 / (2.0 * distortion);
  double prev_s = 0.0, prev_logd = 0.0;
  for (int outer = 0; outer < 60; ++outer) {
    BaState st = ba_fixed_slope(grid, s, q, kMaxInner);
    out.distortion = st.distortion;
    out.rate_bits = st.rate_bits;
    out.ba_iterations = st.iterations;
    out.slope = s;
    if (std::abs(st.distortion - distortion) / distortion < 1e-3) return out;
    if (st.rate_bits <= 1e-9 && st.distortion <= distortion) return out;

    double logd = std::log(st.distortion);
    double next;
    if (outer > 0 && std::abs(logd - prev_logd) > 1e-12) {
      double dl = (std::log(s) - std::log(prev_s)) / (logd - prev_logd);
      next = std::exp(std::log(s) + (std::log(distortion) - logd) * dl);
    } else {
      next = st.distortion > distortion ? s * 2.0 : s * 0.5;
    }
    prev_s = s;
    prev_logd = logd;
    s = std::clamp(next, 1e-9 / std::max(var, 1e-12), 1e18);
  }
  return out;
}

}  // namespace affdim
