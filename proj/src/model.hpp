#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "matrix.hpp"
#include "rational.hpp"

namespace affdim {

struct GaussianSpec {
  double mean = 0.0;
  double variance = 1.0;
};

struct UniformSpec {
  double lo = 0.0;
  double hi = 1.0;
};

using ContinuousSpec = std::variant<GaussianSpec, UniformSpec>;

struct Atom {
  Rational value;
  Rational prob;
};

struct DiscreteSpec {
  std::vector<Atom> atoms;
};

struct Coordinate {
  std::optional<Rational> alpha;  // Pr(nu_i = 1); required in product form
  ContinuousSpec continuous = GaussianSpec{};
  DiscreteSpec discrete;
};

// One cell of the joint (nu, x_d) law. Bit i of `nu` set means coordinate i
// draws its continuous component; `xd` lists the discrete values for the
// zero bits, in ascending coordinate order.
struct JointEntry {
  BitPattern nu = 0;
  std::vector<Rational> xd;
  Rational prob;
};

// Coordinate-wise discrete-continuous source: X_i = nu_i X_c_i + (1-nu_i) X_d_i
// with the continuous parts mutually independent, independent of (nu, X_d).
// The (nu, X_d) law is either the per-coordinate product or an explicit table.
struct SourceSpec {
  int n = 0;
  std::vector<Coordinate> coordinates;
  std::optional<std::vector<JointEntry>> joint_table;

  bool has_joint_table() const { return joint_table.has_value(); }
};

struct Violation {
  std::string field;
  std::string rule;
};

std::string to_string(const Violation& v);

// Empty iff every invariant holds; each violation names field + rule.
std::vector<Violation> validate(const SourceSpec& spec);

void require_valid(const SourceSpec& spec);

// Pr(nu_i = 1) per coordinate; in table form the marginal over the table.
std::vector<Rational> marginal_alpha(const SourceSpec& spec);

// Iterates the joint (nu, x_d) support (zero-probability cells skipped).
// Product form enumerates the cartesian support on the fly; table form
// iterates entries in canonical (nu, xd) order.
void for_each_joint(const SourceSpec& spec,
                    const std::function<void(const JointEntry&)>& fn);

// Support size guard for the enumeration above.
std::size_t joint_support_size(const SourceSpec& spec);

// Marginal law of nu (summed over x_d), as pattern -> probability.
std::map<BitPattern, Rational> nu_marginal(const SourceSpec& spec);

// P(|nu|_1 = k) for k = 0..n, exact (product form via convolution, so it
// stays cheap for large n).
std::vector<Rational> hamming_weight_pmf(const SourceSpec& spec);

// Shannon entropy of the pair (nu, X_d^nubar) in bits.
double joint_entropy_bits(const SourceSpec& spec);

struct SampleBatch {
  int n = 0;
  std::size_t rows = 0;
  std::uint64_t seed = 0;
  std::vector<double> data;        // rows x n, row-major
  std::vector<std::uint8_t> nu;    // rows x n, 1 = continuous draw

  double at(std::size_t r, int c) const { return data[r * n + c]; }
};

// i.i.d. rows; bit-identical output for equal seeds, independent of worker
// count (draws are addressed by (seed, row, coordinate)).
SampleBatch sample(const SourceSpec& spec, std::size_t count, std::uint64_t seed);

// Draws nu patterns only (the rid Monte Carlo path). Uses the same counter
// addressing as sample(), so row r of either path sees the same nu.
class NuSampler {
 public:
  explicit NuSampler(const SourceSpec& spec);
  BitPattern draw(std::uint64_t seed, std::uint64_t row) const;

 private:
  int n_ = 0;
  std::vector<double> alphas_;          // product form
  std::vector<BitPattern> cell_nu_;     // table form
  std::vector<double> cell_cumulative_;
};

}  // namespace affdim
