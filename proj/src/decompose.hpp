#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "matrix.hpp"
#include "model.hpp"
#include "rational.hpp"

namespace affdim {

struct ComponentMember {
  BitPattern nu = 0;
  std::vector<Rational> xd;  // values at the zero bits, ascending coordinate
  Rational prob;
};

// One affine singularity class: all (nu, x_d) cells whose image lies on the
// same affine subset (span, orthogonal shift) of R^m.
struct AffineComponent {
  SubspaceCanonical subspace;
  std::vector<Rational> shift;  // exact projection onto the orthogonal complement
  Rational prob;
  std::vector<ComponentMember> members;
  std::optional<double> diff_entropy_bits;    // nullopt: unavailable
  std::optional<double> diff_entropy_stderr;  // set when MC-estimated

  int dimension() const { return subspace.dimension; }
};

struct Decomposition {
  int total_dim = 0;   // m
  int source_dim = 0;  // n (width of member nu patterns)
  std::vector<AffineComponent> components;
  double selector_entropy_bits = 0.0;  // H(V)
  double joint_entropy_bits = 0.0;     // H(nu, X_d^nubar), the H(V) upper bound
};

struct DecomposeOptions {
  int enumeration_cap = 20;
  bool compute_entropies = true;
  // A class whose members carry different Gaussians has no closed-form
  // entropy; it is estimated by seeded resubstitution over the exact mixture
  // density. Fixed default seed keeps outputs byte-identical.
  std::uint64_t entropy_mc_samples = 400000;
  std::uint64_t entropy_mc_seed = 0x5EEDAFF1;
};

// Enumerates the joint support of (nu, x_d), canonicalizes each affine subset
// (span(A^nu), orthogonal shift), and merges exact duplicates. Components are
// sorted by (dimension, canonical basis, shift); probabilities are exact.
Decomposition decompose(const SourceSpec& spec, const RationalMatrix& a,
                        const DecomposeOptions& options = {});

double selector_entropy(const Decomposition& d);

struct ComponentEntropy {
  std::optional<double> bits;
  std::optional<double> stderr_bits;  // set when estimated
  bool estimated = false;
};

// Differential entropy of the component's continuous vector in orthonormal
// subspace coordinates. Closed form (Gaussian) when the class conditional law
// is a single Gaussian; mixture classes use resubstitution Monte Carlo with
// the exact mixture density. Non-Gaussian continuous parts: unavailable.
// Zero-dimensional components contribute 0 by convention.
ComponentEntropy component_diff_entropy(const SourceSpec& spec,
                                        const RationalMatrix& a,
                                        const AffineComponent& component,
                                        std::uint64_t mc_samples = 400000,
                                        std::uint64_t mc_seed = 0x5EEDAFF1);

}  // namespace affdim
