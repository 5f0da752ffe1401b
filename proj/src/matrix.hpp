#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rational.hpp"

namespace affdim {

// Column-selection bit pattern; bit i set means column i is kept.
using BitPattern = std::uint64_t;

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& at(int r, int c) { return e_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Rational& at(int r, int c) const {
    return e_[static_cast<std::size_t>(r) * cols_ + c];
  }

  static RationalMatrix identity(int n);

  // Columns i with bit i of `pattern` set, original order. Empty pattern
  // yields a rows x 0 matrix (rank 0 by convention).
  RationalMatrix column_submatrix(BitPattern pattern) const;

  RationalMatrix transpose() const;

  bool operator==(const RationalMatrix& other) const;

  Eigen::MatrixXd to_double() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> e_;
};

// Unique RREF basis of a linear subspace of R^m: two column spans are equal
// iff their canonical forms compare equal.
struct SubspaceCanonical {
  int ambient_dim = 0;
  int dimension = 0;
  RationalMatrix rref_basis;   // dimension x ambient_dim, rows span the space
  std::vector<int> pivot_cols;

  bool operator==(const SubspaceCanonical& other) const;
  bool operator<(const SubspaceCanonical& other) const;
};

struct RrefResult {
  RationalMatrix matrix;
  std::vector<int> pivot_cols;
  int rank = 0;
};

RrefResult rref(const RationalMatrix& m);

int rank(const RationalMatrix& m);

// Rank over GF(p) for a fixed 62-bit prime; never exceeds the rational rank
// and matches it except on adversarial inputs. Used for high-volume sampled
// rank statistics where mpq elimination would dominate the runtime.
int rank_modp(const RationalMatrix& m, BitPattern pattern);

// Smallest cardinality of a linearly dependent column subset; cols+1 when all
// columns are independent. Subset enumeration in increasing cardinality,
// bounded by rank+1 (any rank+1 columns are dependent).
int spark(const RationalMatrix& m);

SubspaceCanonical subspace_canonical(const RationalMatrix& m);

// Exact projection of `v` onto the orthogonal complement of S. Idempotent;
// the result has exact zero inner product with every basis row.
std::vector<Rational> project_orthogonal(const std::vector<Rational>& v,
                                         const SubspaceCanonical& s);

// Solves the r x r system (B B^T) z = B v exactly; B = rref basis rows.
std::vector<Rational> solve_gram(const RationalMatrix& basis,
                                 const std::vector<Rational>& rhs);

// True iff `v` lies in the span of the basis rows (exact membership test).
bool in_span(const SubspaceCanonical& s, const std::vector<Rational>& v);

struct SVDResult {
  std::vector<double> singular_values;  // descending, > threshold * sigma_max
  Eigen::MatrixXd left;                 // m x k orthonormal columns
  Eigen::MatrixXd right;                // n x k orthonormal columns
};

// Thin SVD keeping singular values above `threshold` * sigma_max
// (default threshold 1e-9, the documented float-rank cutoff).
SVDResult svd(const Eigen::MatrixXd& m, double threshold = 1e-9);

int float_rank(const Eigen::MatrixXd& m, double threshold = 1e-9);

}  // namespace affdim
