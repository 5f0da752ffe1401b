#include "empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace affdim {

QuantizedBatch quantize(const RealBatch& batch, std::uint64_t scale) {
  if (scale < 2) throw std::invalid_argument("quantization scale must be >= 2");
  QuantizedBatch out;
  out.rows = batch.rows;
  out.dim = batch.dim;
  out.scale = scale;
  out.codes.resize(batch.data.size());
  double m = static_cast<double>(scale);
  for (std::size_t i = 0; i < batch.data.size(); ++i) {
    double v = batch.data[i];
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite sample");
    out.codes[i] = static_cast<std::int64_t>(std::floor(m * v));
  }
  return out;
}

namespace {

// Counts of distinct code rows via an index sort (memory-stable for 10^6 rows).
template <typename Fn>
void for_each_count(const QuantizedBatch& q, std::size_t row_lo, std::size_t row_hi,
                    Fn&& fn) {
  std::size_t n = row_hi - row_lo;
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  int d = q.dim;
  const std::int64_t* base = q.codes.data() + row_lo * d;
  auto less = [base, d](std::uint32_t a, std::uint32_t b) {
    const std::int64_t* ra = base + static_cast<std::size_t>(a) * d;
    const std::int64_t* rb = base + static_cast<std::size_t>(b) * d;
    for (int k = 0; k < d; ++k) {
      if (ra[k] != rb[k]) return ra[k] < rb[k];
    }
    return false;
  };
  std::sort(idx.begin(), idx.end(), less);
  auto equal = [base, d](std::uint32_t a, std::uint32_t b) {
    const std::int64_t* ra = base + static_cast<std::size_t>(a) * d;
    const std::int64_t* rb = base + static_cast<std::size_t>(b) * d;
    for (int k = 0; k < d; ++k)
      if (ra[k] != rb[k]) return false;
    return true;
  };
  std::size_t run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && equal(idx[i], idx[i - 1])) {
      ++run;
    } else {
      fn(run);
      run = 1;
    }
  }
}

double entropy_over(const QuantizedBatch& q, std::size_t lo, std::size_t hi) {
  std::size_t n = hi - lo;
  if (n < 100) throw std::invalid_argument("plugin_entropy requires N >= 100");
  double h = 0.0;
  std::size_t support = 0;
  double dn = static_cast<double>(n);
  for_each_count(q, lo, hi, [&](std::size_t count) {
    double p = static_cast<double>(count) / dn;
    h -= p * std::log2(p);
    ++support;
  });
  return h + static_cast<double>(support - 1) / (2.0 * dn * std::log(2.0));
}

double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double xb = 0.0, yb = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xb += xs[i];
    yb += ys[i];
  }
  xb /= xs.size();
  yb /= ys.size();
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - xb) * (xs[i] - xb);
    sxy += (xs[i] - xb) * (ys[i] - yb);
  }
  return sxy / sxx;
}

}  // namespace

double plugin_entropy(const QuantizedBatch& q) {
  return entropy_over(q, 0, q.rows);
}

std::size_t distinct_codes(const QuantizedBatch& q) {
  std::size_t support = 0;
  for_each_count(q, 0, q.rows, [&](std::size_t) { ++support; });
  return support;
}

RIDEstimate empirical_rid(const SourceSpec& spec, const RationalMatrix* a,
                          const std::vector<std::uint64_t>& scales,
                          std::size_t samples, std::uint64_t seed) {
  require_valid(spec);
  if (scales.size() < 2) throw std::invalid_argument("need at least 2 scales");
  if (samples < 2000) throw std::invalid_argument("need at least 2000 samples");
  if (a && a->cols() != spec.n)
    throw std::invalid_argument("matrix/source dimension mismatch");

  SampleBatch batch = sample(spec, samples, seed);
  RealBatch y;
  y.rows = samples;
  y.dim = a ? a->rows() : spec.n;
  if (a) {
    Eigen::MatrixXd af = a->to_double();
    y.data.resize(samples * y.dim);
    for (std::size_t r = 0; r < samples; ++r)
      for (int i = 0; i < y.dim; ++i) {
        double acc = 0.0;
        for (int j = 0; j < spec.n; ++j) acc += af(i, j) * batch.at(r, j);
        y.data[r * y.dim + i] = acc;
      }
  } else {
    y.data = batch.data;
  }

  RIDEstimate out;
  std::vector<QuantizedBatch> quantized;
  std::vector<std::uint64_t> sorted_scales = scales;
  std::sort(sorted_scales.begin(), sorted_scales.end());
  for (std::uint64_t m : sorted_scales) {
    QuantizedBatch q = quantize(y, m);
    ScalePoint pt;
    pt.scale = m;
    pt.distinct = distinct_codes(q);
    pt.entropy_bits = plugin_entropy(q);
    pt.used = static_cast<double>(pt.distinct) / static_cast<double>(samples) < 0.1;
    if (!pt.used)
      out.warnings.push_back("scale " + std::to_string(m) +
                             " undersampled (K/N >= 0.1), dropped from the fit");
    out.per_scale.push_back(pt);
    if (pt.used) quantized.push_back(std::move(q));
  }

  std::vector<double> xs, ys;
  for (const ScalePoint& pt : out.per_scale)
    if (pt.used) {
      xs.push_back(std::log2(static_cast<double>(pt.scale)));
      ys.push_back(pt.entropy_bits);
    }
  if (xs.size() < 2)
    throw std::runtime_error("fewer than 2 usable scales; increase N or lower scales");
  out.slope = ols_slope(xs, ys);

  // Replicate stderr: slopes over disjoint blocks, same scale set.
  constexpr std::size_t kBlocks = 20;
  std::vector<double> block_slopes;
  std::size_t block = samples / kBlocks;
  if (block >= 100) {
    for (std::size_t b = 0; b < kBlocks; ++b) {
      std::size_t lo = b * block;
      std::size_t hi = (b + 1 == kBlocks) ? samples : lo + block;
      std::vector<double> bys;
      for (const QuantizedBatch& q : quantized) bys.push_back(entropy_over(q, lo, hi));
      block_slopes.push_back(ols_slope(xs, bys));
    }
    double mean = 0.0;
    for (double s : block_slopes) mean += s;
    mean /= block_slopes.size();
    double var = 0.0;
    for (double s : block_slopes) var += (s - mean) * (s - mean);
    var /= (block_slopes.size() - 1);
    out.stderr_bits = std::sqrt(var / block_slopes.size());
  } else {
    out.warnings.push_back("batch too small for replicate stderr");
    out.stderr_bits = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace affdim
