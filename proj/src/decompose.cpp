#include "decompose.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "rng.hpp"

namespace affdim {

namespace {

struct SubsetKey {
  SubspaceCanonical subspace;
  std::vector<Rational> shift;

  bool operator<(const SubsetKey& other) const {
    if (!(subspace == other.subspace)) return subspace < other.subspace;
    for (std::size_t i = 0; i < shift.size(); ++i) {
      int c = cmp(shift[i], other.shift[i]);
      if (c != 0) return c < 0;
    }
    return false;
  }
};

std::vector<Rational> shift_vector(const RationalMatrix& a, BitPattern nu,
                                   const std::vector<Rational>& xd) {
  std::vector<Rational> out(a.rows(), Rational(0));
  std::size_t xi = 0;
  for (int j = 0; j < a.cols(); ++j) {
    if (nu & (BitPattern{1} << j)) continue;
    const Rational& v = xd[xi++];
    if (v != 0)
      for (int i = 0; i < a.rows(); ++i) out[i] += a.at(i, j) * v;
  }
  return out;
}

double entropy_bits(const std::vector<Rational>& probs) {
  double h = 0.0;
  for (const Rational& p : probs) {
    double d = p.get_d();
    if (d > 0.0) h -= d * std::log2(d);
  }
  return h;
}

// Gaussian law of one member in orthonormal subspace coordinates.
struct MemberGaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  double weight = 0.0;
};

}  // namespace

Decomposition decompose(const SourceSpec& spec, const RationalMatrix& a,
                        const DecomposeOptions& options) {
  require_valid(spec);
  if (a.cols() != spec.n)
    throw std::invalid_argument("matrix has " + std::to_string(a.cols()) +
                                " columns, source has " + std::to_string(spec.n));
  if (spec.n > options.enumeration_cap)
    throw std::invalid_argument("n exceeds the enumeration cap");
  joint_support_size(spec);  // throws when the support cannot be enumerated

  std::unordered_map<BitPattern, SubspaceCanonical> span_cache;
  std::map<SubsetKey, AffineComponent> classes;

  for_each_joint(spec, [&](const JointEntry& e) {
    auto it = span_cache.find(e.nu);
    if (it == span_cache.end())
      it = span_cache.emplace(e.nu, subspace_canonical(a.column_submatrix(e.nu)))
               .first;
    const SubspaceCanonical& span = it->second;
    std::vector<Rational> shift =
        project_orthogonal(shift_vector(a, e.nu, e.xd), span);

    SubsetKey key{span, shift};
    auto [cit, inserted] = classes.try_emplace(key);
    AffineComponent& comp = cit->second;
    if (inserted) {
      comp.subspace = span;
      comp.shift = std::move(shift);
      comp.prob = 0;
    }
    comp.prob += e.prob;
    comp.members.push_back(ComponentMember{e.nu, e.xd, e.prob});
  });

  Decomposition out;
  out.total_dim = a.rows();
  out.source_dim = spec.n;
  out.components.reserve(classes.size());
  for (auto& [key, comp] : classes) out.components.push_back(std::move(comp));
  // Map ordering already sorts by (dimension, pivots, basis, shift); keep the
  // documented order explicit.
  std::sort(out.components.begin(), out.components.end(),
            [](const AffineComponent& x, const AffineComponent& y) {
              if (!(x.subspace == y.subspace)) return x.subspace < y.subspace;
              for (std::size_t i = 0; i < x.shift.size(); ++i) {
                int c = cmp(x.shift[i], y.shift[i]);
                if (c != 0) return c < 0;
              }
              return false;
            });

  std::vector<Rational> probs;
  for (const AffineComponent& c : out.components) probs.push_back(c.prob);
  out.selector_entropy_bits = entropy_bits(probs);
  out.joint_entropy_bits = joint_entropy_bits(spec);

  if (options.compute_entropies) {
    for (AffineComponent& comp : out.components) {
      ComponentEntropy ce =
          component_diff_entropy(spec, a, comp, options.entropy_mc_samples,
                                 options.entropy_mc_seed);
      comp.diff_entropy_bits = ce.bits;
      comp.diff_entropy_stderr = ce.stderr_bits;
    }
  }
  return out;
}

double selector_entropy(const Decomposition& d) {
  std::vector<Rational> probs;
  for (const AffineComponent& c : d.components) probs.push_back(c.prob);
  return entropy_bits(probs);
}

ComponentEntropy component_diff_entropy(const SourceSpec& spec,
                                        const RationalMatrix& a,
                                        const AffineComponent& component,
                                        std::uint64_t mc_samples,
                                        std::uint64_t mc_seed) {
  ComponentEntropy out;
  int d = component.dimension();
  if (d == 0) {
    out.bits = 0.0;  // point mass: no differential entropy term
    return out;
  }

  // Closed forms require Gaussian continuous parts on every active coordinate.
  for (const ComponentMember& mem : component.members)
    for (int j = 0; j < spec.n; ++j)
      if ((mem.nu & (BitPattern{1} << j)) &&
          !std::holds_alternative<GaussianSpec>(spec.coordinates[j].continuous))
        return out;  // unavailable

  // Orthonormal basis U (m x d) of the subspace, from the exact RREF basis.
  Eigen::MatrixXd basis_t = component.subspace.rref_basis.to_double().transpose();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis_t);
  Eigen::MatrixXd u =
      qr.householderQ() * Eigen::MatrixXd::Identity(basis_t.rows(), d);

  Eigen::MatrixXd a_full = a.to_double();
  std::vector<MemberGaussian> members;
  double total = component.prob.get_d();
  for (const ComponentMember& mem : component.members) {
    std::vector<int> active;
    for (int j = 0; j < spec.n; ++j)
      if (mem.nu & (BitPattern{1} << j)) active.push_back(j);

    Eigen::MatrixXd b(d, static_cast<int>(active.size()));
    Eigen::VectorXd mean_shift = Eigen::VectorXd::Zero(a.rows());
    for (std::size_t k = 0; k < active.size(); ++k) {
      const auto& g = std::get<GaussianSpec>(spec.coordinates[active[k]].continuous);
      b.col(static_cast<int>(k)) = u.transpose() * a_full.col(active[k]);
      mean_shift += a_full.col(active[k]) * g.mean;
    }
    std::size_t xi = 0;
    for (int j = 0; j < spec.n; ++j)
      if (!(mem.nu & (BitPattern{1} << j)))
        mean_shift += a_full.col(j) * mem.xd[xi++].get_d();

    MemberGaussian mg;
    mg.weight = mem.prob.get_d() / total;
    mg.mean = u.transpose() * mean_shift;
    Eigen::VectorXd vars(static_cast<int>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k)
      vars(static_cast<int>(k)) =
          std::get<GaussianSpec>(spec.coordinates[active[k]].continuous).variance;
    mg.cov = b * vars.asDiagonal() * b.transpose();
    members.push_back(std::move(mg));
  }

  auto gaussian_entropy = [d](const Eigen::MatrixXd& cov) {
    double det = cov.determinant();
    if (det <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return 0.5 * std::log2(std::pow(2.0 * M_PI * M_E, d) * det);
  };

  bool homogeneous = true;
  for (std::size_t k = 1; k < members.size() && homogeneous; ++k) {
    if ((members[k].cov - members[0].cov).cwiseAbs().maxCoeff() > 1e-12 ||
        (members[k].mean - members[0].mean).cwiseAbs().maxCoeff() > 1e-12)
      homogeneous = false;
  }
  if (homogeneous) {
    double h = gaussian_entropy(members[0].cov);
    if (std::isnan(h)) return out;
    out.bits = h;
    return out;
  }

  // Mixture of distinct Gaussians on the same subspace: resubstitution
  // Monte Carlo against the exact mixture density.
  struct Prepared {
    Eigen::MatrixXd chol;       // L with cov = L L^T
    Eigen::MatrixXd cov_inv;
    double log_norm;            // -log2 of the Gaussian normalizer
    double weight;
    Eigen::VectorXd mean;
  };
  std::vector<Prepared> prep;
  std::vector<double> cum;
  double acc = 0.0;
  for (const MemberGaussian& mg : members) {
    Eigen::LLT<Eigen::MatrixXd> llt(mg.cov);
    if (llt.info() != Eigen::Success) return out;  // degenerate member
    Prepared p;
    p.chol = llt.matrixL();
    p.cov_inv = llt.solve(Eigen::MatrixXd::Identity(d, d));
    double det = mg.cov.determinant();
    if (det <= 0.0) return out;
    p.log_norm = -0.5 * (d * std::log2(2.0 * M_PI) + std::log2(det));
    p.weight = mg.weight;
    p.mean = mg.mean;
    prep.push_back(std::move(p));
    acc += mg.weight;
    cum.push_back(acc);
  }

  double sum = 0.0, sumsq = 0.0;
  Eigen::VectorXd z(d), w(d);
  constexpr double kLog2e = 1.4426950408889634;
  for (std::uint64_t t = 0; t < mc_samples; ++t) {
    double u_pick = rand_uniform(mc_seed, t, draw_counter(0, DrawKind::kJointCell));
    std::size_t k = std::lower_bound(cum.begin(), cum.end(), u_pick) - cum.begin();
    if (k >= prep.size()) k = prep.size() - 1;
    for (int j = 0; j < d; ++j)
      z(j) = rand_gaussian(mc_seed, t,
                           draw_counter(static_cast<std::uint64_t>(j),
                                        DrawKind::kContinuous));
    w = prep[k].mean + prep[k].chol * z;

    double density_log2 = -std::numeric_limits<double>::infinity();
    double linear = 0.0;
    for (const Prepared& p : prep) {
      Eigen::VectorXd diff = w - p.mean;
      double e2 = diff.dot(p.cov_inv * diff);
      linear += p.weight * std::exp2(p.log_norm - 0.5 * e2 * kLog2e);
    }
    density_log2 = std::log2(linear);
    sum += density_log2;
    sumsq += density_log2 * density_log2;
  }
  double n = static_cast<double>(mc_samples);
  double mean = sum / n;
  double var = (sumsq - n * mean * mean) / std::max(1.0, n - 1);
  out.bits = -mean;
  out.stderr_bits = std::sqrt(std::max(0.0, var) / n);
  out.estimated = true;
  return out;
}

}  // namespace affdim
