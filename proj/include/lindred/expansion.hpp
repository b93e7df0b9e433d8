#pragma once

#include <vector>

#include "lindred/lindblad.hpp"
#include "lindred/spectral.hpp"
#include "lindred/types.hpp"

namespace lindred {

/// Order-by-order expansion of the slow dynamics. F[n] and S_corr[n] hold the
/// order-n coefficient matrix and the basis corrections S_d^{(n)}; index 0 is
/// the base point (F[0] = 0, S_corr[0] = S_d). Entries of F are real; the
/// imaginary residue is checked against `imag_residue` before being dropped.
struct SlowExpansion {
  int order = 0;
  Eigen::Index dbar = 0;
  std::vector<RealMatrix> F;                       // n = 0..order
  std::vector<std::vector<ComplexMatrix>> S_corr;  // [n][d]
  std::vector<double> residuals;     // order-n invariance defect, relative
  std::vector<double> gauge_defects; // max |Tr(J_d' S_d^{(n)})|
  double imag_residue = 0.0;
  double coefficient_scale = 0.0; // max ||F^{(n)}||, for validity reporting
};

/// Mirror expansion for the fast-manifold invariant operators.
struct FastExpansion {
  int order = 0;
  Eigen::Index dbar = 0;
  std::vector<RealMatrix> G;                       // n = 0..order
  std::vector<std::vector<ComplexMatrix>> J_corr;  // [n][d]
  std::vector<double> residuals;
  std::vector<double> gauge_defects; // max |Tr(S_d' J_d^{(n)})|
  double imag_residue = 0.0;
};

/// E(eps) = Tr(J_d(eps) S_d'(eps)) on the truncated series, together with a
/// factorization for applying E^{-1}.
struct PairingMatrix {
  double eps = 0.0;
  int order = 0;
  RealMatrix E;
  Eigen::PartialPivLU<RealMatrix> lu;

  RealVector solve(const RealVector& x) const { return lu.solve(x); }
};

/// Slow recursion: F^{(n)}_{d',d} = Tr(J_d' L1(S_d^{(n-1)})) and
/// S_d^{(n)} = R(L1(S_d^{(n-1)}) - sum_{d'', r<=n} F^{(r)}_{d'',d} S_{d''}^{(n-r)}).
/// Each order's invariance residual is checked against tol.recursion_residual.
SlowExpansion expand_slow(const FastSlowSplit& split, const GeneratorSpec& slow_gen,
                          int order, const Tolerances& tol = {});

/// Heisenberg recursion: G^{(n)}_{d,d'} = Tr(S_d' L1*(J_d^{(n-1)})) and
/// J_d^{(n)} = R*(L1*(J_d^{(n-1)}) - sum_{d', r<=n} G^{(r)}_{d,d'} J_{d'}^{(n-r)}).
FastExpansion expand_fast(const FastSlowSplit& split, const GeneratorSpec& slow_gen,
                          int order, const Tolerances& tol = {});

/// Truncated perturbed bases S_d(eps), J_d(eps).
std::vector<ComplexMatrix> truncated_slow_basis(const SlowExpansion& slow, double eps);
std::vector<ComplexMatrix> truncated_invariant_operators(const FastExpansion& fast, double eps);

PairingMatrix pairing_matrix(const SlowExpansion& slow, const FastExpansion& fast, double eps);

/// F(eps) = sum_{n=1..N} eps^n F^{(n)}.
RealMatrix truncated_F(const SlowExpansion& slow, double eps);
RealMatrix truncated_G(const FastExpansion& fast, double eps);

/// eps * ||L1||_2 / gamma, the dimensionless small parameter; results are
/// flagged as outside the validated regime above tol.validity_warn.
double validity_parameter(const FastSlowSplit& split, const GeneratorSpec& slow_gen, double eps);

} // namespace lindred
