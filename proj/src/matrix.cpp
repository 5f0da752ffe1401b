#include "matrix.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include <Eigen/SVD>

namespace affdim {

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::column_submatrix(BitPattern pattern) const {
  std::vector<int> keep;
  for (int j = 0; j < cols_; ++j)
    if (pattern & (BitPattern{1} << j)) keep.push_back(j);
  RationalMatrix out(rows_, static_cast<int>(keep.size()));
  for (int i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < keep.size(); ++k)
      out.at(i, static_cast<int>(k)) = at(i, keep[k]);
  return out;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

bool RationalMatrix::operator==(const RationalMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && e_ == other.e_;
}

Eigen::MatrixXd RationalMatrix::to_double() const {
  Eigen::MatrixXd out(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(i, j) = at(i, j).get_d();
  return out;
}

RrefResult rref(const RationalMatrix& m) {
  RrefResult res;
  res.matrix = m;
  RationalMatrix& a = res.matrix;
  int lead = 0;
  for (int col = 0; col < a.cols() && lead < a.rows(); ++col) {
    int pivot = -1;
    for (int r = lead; r < a.rows(); ++r) {
      if (a.at(r, col) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != lead)
      for (int j = 0; j < a.cols(); ++j) std::swap(a.at(pivot, j), a.at(lead, j));
    Rational inv = a.at(lead, col);
    for (int j = col; j < a.cols(); ++j) a.at(lead, j) /= inv;
    for (int r = 0; r < a.rows(); ++r) {
      if (r == lead || a.at(r, col) == 0) continue;
      Rational f = a.at(r, col);
      for (int j = col; j < a.cols(); ++j) a.at(r, j) -= f * a.at(lead, j);
    }
    res.pivot_cols.push_back(col);
    ++lead;
  }
  res.rank = lead;
  return res;
}

int rank(const RationalMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  // Elimination without back-substitution; column pivoting not needed for
  // exact arithmetic.
  RationalMatrix a = m;
  int r = 0;
  for (int col = 0; col < a.cols() && r < a.rows(); ++col) {
    int pivot = -1;
    for (int i = r; i < a.rows(); ++i) {
      if (a.at(i, col) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != r)
      for (int j = col; j < a.cols(); ++j) std::swap(a.at(pivot, j), a.at(r, j));
    for (int i = r + 1; i < a.rows(); ++i) {
      if (a.at(i, col) == 0) continue;
      Rational f = a.at(i, col) / a.at(r, col);
      a.at(i, col) = 0;
      for (int j = col + 1; j < a.cols(); ++j) a.at(i, j) -= f * a.at(r, j);
    }
    ++r;
  }
  return r;
}

namespace {

constexpr std::uint64_t kRankPrime = 0x1FFFFFFFFFFFFFFFULL;  // 2^61 - 1

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % kRankPrime);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  while (exp) {
    if (exp & 1) r = mulmod(r, base);
    base = mulmod(base, base);
    exp >>= 1;
  }
  return r;
}

std::uint64_t modp(const mpz_class& z) {
  unsigned long rem = mpz_fdiv_ui(z.get_mpz_t(), static_cast<unsigned long>(kRankPrime));
  return static_cast<std::uint64_t>(rem);
}

}  // namespace

int rank_modp(const RationalMatrix& m, BitPattern pattern) {
  std::vector<int> keep;
  for (int j = 0; j < m.cols(); ++j)
    if (pattern & (BitPattern{1} << j)) keep.push_back(j);
  int rows = m.rows(), cols = static_cast<int>(keep.size());
  if (rows == 0 || cols == 0) return 0;
  std::vector<std::uint64_t> a(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const Rational& q = m.at(i, keep[j]);
      std::uint64_t num = modp(q.get_num());
      std::uint64_t den = modp(q.get_den());
      a[static_cast<std::size_t>(i) * cols + j] =
          mulmod(num, powmod(den, kRankPrime - 2));
    }
  auto at = [&](int i, int j) -> std::uint64_t& {
    return a[static_cast<std::size_t>(i) * cols + j];
  };
  int r = 0;
  for (int col = 0; col < cols && r < rows; ++col) {
    int pivot = -1;
    for (int i = r; i < rows; ++i)
      if (at(i, col) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != r)
      for (int j = col; j < cols; ++j) std::swap(at(pivot, j), at(r, j));
    std::uint64_t inv = powmod(at(r, col), kRankPrime - 2);
    for (int i = r + 1; i < rows; ++i) {
      if (at(i, col) == 0) continue;
      std::uint64_t f = mulmod(at(i, col), inv);
      at(i, col) = 0;
      for (int j = col + 1; j < cols; ++j) {
        std::uint64_t sub = mulmod(f, at(r, j));
        at(i, j) = (at(i, j) + kRankPrime - sub) % kRankPrime;
      }
    }
    ++r;
  }
  return r;
}

namespace {

// Enumerates k-subsets of [0, n) in lexicographic order.
bool next_combination(std::vector<int>& idx, int n) {
  int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

int spark(const RationalMatrix& m) {
  int n = m.cols();
  if (n == 0) return 1;
  int r = rank(m);
  // Zero column => spark 1 (fast path inside the k=1 loop below).
  for (int k = 1; k <= r; ++k) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    do {
      BitPattern pat = 0;
      for (int i : idx) pat |= BitPattern{1} << i;
      if (rank(m.column_submatrix(pat)) < k) return k;
    } while (next_combination(idx, n));
  }
  // No dependent subset of size <= rank: any rank+1 columns are dependent,
  // so spark = rank+1 when such a subset exists, else n+1.
  return n > r ? r + 1 : n + 1;
}

bool SubspaceCanonical::operator==(const SubspaceCanonical& other) const {
  return ambient_dim == other.ambient_dim && dimension == other.dimension &&
         pivot_cols == other.pivot_cols && rref_basis == other.rref_basis;
}

bool SubspaceCanonical::operator<(const SubspaceCanonical& other) const {
  if (dimension != other.dimension) return dimension < other.dimension;
  if (pivot_cols != other.pivot_cols) return pivot_cols < other.pivot_cols;
  for (int i = 0; i < dimension; ++i)
    for (int j = 0; j < ambient_dim; ++j) {
      int c = cmp(rref_basis.at(i, j), other.rref_basis.at(i, j));
      if (c != 0) return c < 0;
    }
  return false;
}

SubspaceCanonical subspace_canonical(const RationalMatrix& m) {
  SubspaceCanonical out;
  out.ambient_dim = m.rows();
  RrefResult rr = rref(m.transpose());
  out.dimension = rr.rank;
  out.pivot_cols = rr.pivot_cols;
  out.rref_basis = RationalMatrix(rr.rank, m.rows());
  for (int i = 0; i < rr.rank; ++i)
    for (int j = 0; j < m.rows(); ++j) out.rref_basis.at(i, j) = rr.matrix.at(i, j);
  return out;
}

std::vector<Rational> solve_gram(const RationalMatrix& basis,
                                 const std::vector<Rational>& rhs) {
  int r = basis.rows(), mdim = basis.cols();
  // Augmented [B B^T | B rhs], exact Gauss-Jordan.
  RationalMatrix aug(r, r + 1);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      Rational s = 0;
      for (int k = 0; k < mdim; ++k) s += basis.at(i, k) * basis.at(j, k);
      aug.at(i, j) = s;
    }
    Rational s = 0;
    for (int k = 0; k < mdim; ++k) s += basis.at(i, k) * rhs[k];
    aug.at(i, r) = s;
  }
  RrefResult rr = rref(aug);
  if (rr.rank != r)
    throw std::runtime_error("gram matrix singular; basis rows dependent");
  std::vector<Rational> z(r);
  for (int i = 0; i < r; ++i) z[i] = rr.matrix.at(i, r);
  return z;
}

std::vector<Rational> project_orthogonal(const std::vector<Rational>& v,
                                         const SubspaceCanonical& s) {
  if (static_cast<int>(v.size()) != s.ambient_dim)
    throw std::invalid_argument("projection: vector/ambient dimension mismatch");
  if (s.dimension == 0) return v;
  std::vector<Rational> z = solve_gram(s.rref_basis, v);
  std::vector<Rational> out = v;
  for (int k = 0; k < s.ambient_dim; ++k) {
    Rational acc = 0;
    for (int i = 0; i < s.dimension; ++i) acc += s.rref_basis.at(i, k) * z[i];
    out[k] -= acc;
  }
  return out;
}

bool in_span(const SubspaceCanonical& s, const std::vector<Rational>& v) {
  auto perp = project_orthogonal(v, s);
  for (const Rational& x : perp)
    if (x != 0) return false;
  return true;
}

SVDResult svd(const Eigen::MatrixXd& m, double threshold) {
  if (!m.allFinite()) throw std::invalid_argument("svd: non-finite entries");
  Eigen::JacobiSVD<Eigen::MatrixXd> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = dec.singularValues();
  double cutoff = sv.size() > 0 ? threshold * sv(0) : 0.0;
  int k = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > 0.0) ++k;
  SVDResult out;
  out.singular_values.assign(sv.data(), sv.data() + k);
  out.left = dec.matrixU().leftCols(k);
  out.right = dec.matrixV().leftCols(k);
  return out;
}

int float_rank(const Eigen::MatrixXd& m, double threshold) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return static_cast<int>(svd(m, threshold).singular_values.size());
}

}  // namespace affdim
