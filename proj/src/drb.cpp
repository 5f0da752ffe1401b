#include "drb.hpp"

#include <cmath>
#include <stdexcept>

#include "rid.hpp"

namespace affdim {

namespace {

double gaussian_coord_entropy(const GaussianSpec& g) {
  return 0.5 * std::log2(2.0 * M_PI * M_E * g.variance);
}

void require_gaussian(const SourceSpec& spec) {
  for (const Coordinate& c : spec.coordinates)
    if (!std::holds_alternative<GaussianSpec>(c.continuous))
      throw std::invalid_argument("drb_linear requires Gaussian continuous parts");
}

}  // namespace

Rational det(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det requires a square matrix");
  int n = m.rows();
  if (n == 0) return 1;
  RationalMatrix a = m;
  Rational result = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int i = col; i < n; ++i)
      if (a.at(i, col) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) return 0;
    if (pivot != col) {
      for (int j = col; j < n; ++j) std::swap(a.at(pivot, j), a.at(col, j));
      result = -result;
    }
    result *= a.at(col, col);
    for (int i = col + 1; i < n; ++i) {
      if (a.at(i, col) == 0) continue;
      Rational f = a.at(i, col) / a.at(col, col);
      for (int j = col; j < n; ++j) a.at(i, j) -= f * a.at(col, j);
    }
  }
  return result;
}

DRBResult drb_of_decomposition(const Decomposition& d) {
  DRBResult out;
  out.formula = "decomposition";
  Rational dim = 0;
  for (const AffineComponent& c : d.components) dim += c.prob * c.dimension();
  out.rid = dim;
  if (dim == 0) throw std::runtime_error("degenerate: purely discrete");

  double sum_h = 0.0;
  for (const AffineComponent& c : d.components) {
    if (c.dimension() == 0) {
      if (c.prob > 0) out.hypothesis_flags.push_back(
          "point-component-present: h(C_i) > -inf hypothesis not met; "
          "0-dimensional components contribute no entropy term");
      continue;
    }
    if (!c.diff_entropy_bits) {
      out.hypothesis_flags.push_back("diff-entropy-unavailable");
      out.drb_bits = std::numeric_limits<double>::quiet_NaN();
      return out;
    }
    sum_h += c.prob.get_d() * *c.diff_entropy_bits;
  }
  double dv = dim.get_d();
  out.drb_bits = d.selector_entropy_bits + sum_h + 0.5 * dv * std::log2(dv);
  return out;
}

DRBResult drb_linear(const SourceSpec& spec, const RationalMatrix& a, DrbPath path,
                     const DecomposeOptions& options) {
  require_valid(spec);
  require_gaussian(spec);
  if (a.cols() != spec.n)
    throw std::invalid_argument("matrix/source dimension mismatch");

  bool full_column_rank = rank(a) == a.cols();
  if (path == DrbPath::kFullColumnRank && !full_column_rank)
    throw std::invalid_argument("full-column-rank path requires rank(A) = n");
  bool use_full = path == DrbPath::kFullColumnRank ||
                  (path == DrbPath::kAuto && full_column_rank);

  if (!use_full) {
    Decomposition d = decompose(spec, a, options);
    DRBResult out = drb_of_decomposition(d);
    return out;
  }

  // Specialized closed form for rank(A) = n: every (nu, x_d) cell is its own
  // affine subset, so H(V) = H(nu, X_d) and the per-cell entropies collapse
  // to (1/2) log2 det(A^nu^T A^nu) + h(X_c^nu).
  DRBResult out;
  out.formula = "full-column-rank";
  RIDResult rid = rid_linear(spec, a);
  out.rid = *rid.exact;
  if (out.rid == 0) throw std::runtime_error("degenerate: purely discrete");

  double expectation = 0.0;
  enumerate_nu(spec, [&](BitPattern nu, const Rational& p) {
    RationalMatrix cols = a.column_submatrix(nu);
    double term = 0.0;
    if (cols.cols() > 0) {
      RationalMatrix gram(cols.cols(), cols.cols());
      for (int i = 0; i < cols.cols(); ++i)
        for (int j = 0; j < cols.cols(); ++j) {
          Rational s = 0;
          for (int r = 0; r < cols.rows(); ++r) s += cols.at(r, i) * cols.at(r, j);
          gram.at(i, j) = s;
        }
      term += 0.5 * std::log2(det(gram).get_d());
      for (int j = 0; j < spec.n; ++j)
        if (nu & (BitPattern{1} << j))
          term += gaussian_coord_entropy(
              std::get<GaussianSpec>(spec.coordinates[j].continuous));
    }
    expectation += p.get_d() * term;
  });

  double dv = out.rid.get_d();
  out.drb_bits =
      joint_entropy_bits(spec) + expectation + 0.5 * dv * std::log2(dv);
  return out;
}

DRBResult drb_abs_continuous(const RationalMatrix& a, double h_bits) {
  int k = rank(a);
  if (k == 0) throw std::invalid_argument("zero matrix has no DRB");
  SVDResult dec = svd(a.to_double());
  if (static_cast<int>(dec.singular_values.size()) < k)
    throw std::runtime_error("float rank fell below the exact rank");
  DRBResult out;
  out.formula = "absolutely-continuous";
  out.rid = k;
  double sum_log_sigma = 0.0;
  for (int i = 0; i < k; ++i) sum_log_sigma += std::log2(dec.singular_values[i]);
  out.drb_bits = sum_log_sigma + h_bits + 0.5 * k * std::log2(static_cast<double>(k));
  return out;
}

GapReport drb_limit_gap(const DRBResult& b, const std::vector<RdfPoint>& curve) {
  if (curve.size() < 2)
    throw std::invalid_argument("drb_limit_gap needs at least 2 curve points");
  for (std::size_t i = 1; i < curve.size(); ++i)
    if (!(curve[i].distortion < curve[i - 1].distortion))
      throw std::invalid_argument("curve distortions must be decreasing");
  GapReport out;
  double rid = b.rid.get_d();
  for (const RdfPoint& pt : curve)
    out.gaps.push_back(std::abs(pt.rate_bits +
                                0.5 * rid * std::log2(2.0 * M_PI * M_E * pt.distortion) -
                                b.drb_bits));
  out.decreasing = true;
  for (std::size_t i = 1; i < out.gaps.size(); ++i)
    if (!(out.gaps[i] < out.gaps[i - 1])) out.decreasing = false;
  return out;
}

}  // namespace affdim
