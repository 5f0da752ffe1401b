#pragma once

#include <cstdint>
#include <vector>

#include "model.hpp"

namespace affdim {

struct GridMeta {
  double anchor = 0.0;      // a grid point; atoms sit at exact multiples of step
  double step = 0.0;
  std::int64_t index_lo = 0;
  std::size_t count = 0;
};

struct RdfPoint {
  double distortion = 0.0;  // achieved E(X - Xhat)^2 on the grid
  double rate_bits = 0.0;
  GridMeta grid;
  int ba_iterations = 0;    // of the final slope solve
  double slope = 0.0;       // Lagrangian parameter of the final solve
};

// Quadratic rate-distortion point of a 1-D Gaussian+atoms source, computed by
// alternating minimization on a shared source/reproduction grid. The grid
// covers mean +- 6 sigma, uses step <= sqrt(D)/4 (or `step_hint` if smaller),
// and places every atom on an exact grid point. The inner iteration stops
// when successive rates differ by < 1e-6 bits (throws after 10^4 iterations);
// the Lagrangian slope is adjusted until the achieved distortion is within
// 0.1% of `distortion`.
RdfPoint rdf_oracle_scalar(const SourceSpec& spec, double distortion,
                           double step_hint = 0.0);

}  // namespace affdim
