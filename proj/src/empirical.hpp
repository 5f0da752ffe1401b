#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "model.hpp"

namespace affdim {

struct RealBatch {
  std::size_t rows = 0;
  int dim = 0;
  std::vector<double> data;  // rows x dim, row-major

  double at(std::size_t r, int c) const { return data[r * dim + c]; }
};

struct QuantizedBatch {
  std::size_t rows = 0;
  int dim = 0;
  std::uint64_t scale = 0;
  std::vector<std::int64_t> codes;  // floor(scale * x), rows x dim
};

// Componentwise floor(m * x). Throws on non-finite samples or m < 2.
QuantizedBatch quantize(const RealBatch& batch, std::uint64_t scale);

// Plug-in entropy of the code tuples plus the Miller-Madow correction
// (K-1)/(2N ln 2), K = observed support size. Requires N >= 100.
double plugin_entropy(const QuantizedBatch& q);

std::size_t distinct_codes(const QuantizedBatch& q);

struct ScalePoint {
  std::uint64_t scale = 0;
  double entropy_bits = 0.0;
  std::size_t distinct = 0;
  bool used = false;  // dropped when K/N >= 0.1 (undersampled)
};

struct RIDEstimate {
  double slope = 0.0;
  double stderr_bits = 0.0;  // replicate-based standard error of the slope
  std::vector<ScalePoint> per_scale;
  std::vector<std::string> warnings;
};

// Estimates d(Y) for Y = AX from the entropy growth of quantized samples:
// least-squares slope of H([Y]_m) against log2 m over the usable scales.
// The stderr comes from slopes over 20 disjoint sample blocks (entropy
// estimates at nested scales share one batch and are strongly correlated,
// so a residual-based error would be far too small). A null matrix means
// Y = X.
RIDEstimate empirical_rid(const SourceSpec& spec, const RationalMatrix* a,
                          const std::vector<std::uint64_t>& scales,
                          std::size_t samples, std::uint64_t seed);

}  // namespace affdim
