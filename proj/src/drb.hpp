#pragma once

#include <optional>
#include <string>
#include <vector>

#include "decompose.hpp"
#include "matrix.hpp"
#include "model.hpp"
#include "rational.hpp"
#include "rdf.hpp"

namespace affdim {

struct DRBResult {
  double drb_bits = 0.0;
  Rational rid;  // exact; the (d/2) log d term uses this value
  std::string formula;  // "decomposition" | "full-column-rank" | "absolutely-continuous"
  std::vector<std::string> hypothesis_flags;

  bool flagged() const { return !hypothesis_flags.empty(); }
};

// b = H(V) + sum_i p_i h(C_i) + (d/2) log2 d over the decomposition,
// d = sum p_i d_i. Point components contribute 0 to the entropy sum and set a
// hypothesis flag (the closed form assumes h(C_i) > -inf). Throws when d = 0.
DRBResult drb_of_decomposition(const Decomposition& d);

enum class DrbPath { kAuto, kFullColumnRank, kDecomposition };

// DRB of Y = AX for Gaussian-continuous sources. Full-column-rank A uses the
// specialized closed form H(nu, X_d) + E_nu[ (1/2) log2 det(A^nu^T A^nu)
// + h(X_c^nu) ] + (d/2) log2 d; otherwise the decomposition path.
DRBResult drb_linear(const SourceSpec& spec, const RationalMatrix& a,
                     DrbPath path = DrbPath::kAuto,
                     const DecomposeOptions& options = {});

// b = sum_{i<=k} log2 sigma_i + h + (k/2) log2 k for absolutely continuous X,
// k = rank(A); the caller supplies h = h(V_k^dagger X) in bits.
DRBResult drb_abs_continuous(const RationalMatrix& a, double h_bits);

struct GapReport {
  std::vector<double> gaps;  // |R_j + (rid/2) log2(2 pi e D_j) - b|
  bool decreasing = false;
};

// Checks the defining DRB limit against a rate-distortion curve (decreasing D).
GapReport drb_limit_gap(const DRBResult& b, const std::vector<RdfPoint>& curve);

// Exact determinant (square matrices).
Rational det(const RationalMatrix& m);

}  // namespace affdim
