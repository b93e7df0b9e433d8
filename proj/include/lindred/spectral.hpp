#pragma once

#include <vector>

#include "lindred/operator_algebra.hpp"
#include "lindred/types.hpp"

namespace lindred {

struct SpectralGapReport {
  std::vector<Complex> zero_group; // |lambda| <= zero_tol * ||L0||_2
  std::vector<Complex> fast_group; // the rest, all with Re < 0
  double gamma = 0.0;              // min over fast group of -Re(lambda)
  double norm = 0.0;               // ||L0||_2 used for the clustering
};

/// Partition the spectrum of L0 into the zero group and the exponentially
/// decaying group. Fails (HypothesisViolated) when the fast group touches the
/// closed right half-plane or the imaginary axis, i.e. when trajectories do
/// not converge exponentially to quasi-equilibria, and (NonSemisimpleKernel)
/// when the zero group is defective.
SpectralGapReport spectral_gap_analysis(const Superoperator& l0, double zero_tol_rel = 1e-8);

/// Slow/fast decomposition of the fast generator: quasi-equilibria basis S_d,
/// invariant operators J_d, the channel Kbar and its adjoint, and the two
/// pseudo-resolvents. Immutable after construction.
struct FastSlowSplit {
  Eigen::Index dim = 0;
  Eigen::Index dbar = 0;
  double gamma = 0.0;
  SpectralGapReport gap;

  std::vector<ComplexMatrix> S; // Frobenius-orthonormal Hermitian kernel basis
  std::vector<ComplexMatrix> J; // biorthogonal invariant operators, Tr(J_d S_d') = delta
  ComplexMatrix S_mat;          // D^2 x dbar, columns vec(S_d)
  ComplexMatrix J_mat;          // D^2 x dbar, columns vec(J_d)

  Superoperator L0;     // the analyzed generator
  Superoperator L0_adj; // its Frobenius adjoint

  Superoperator Kbar;     // spectral projector onto ker L0 along range L0
  Superoperator Kbar_adj; // adjoint projector, Kbar_adj(S_d) = J_d
  Superoperator R;        // pseudo-resolvent: L0(R(W)) = Kbar(W) - W, Tr(J_d R(W)) = 0
  Superoperator R_adj;    // mirror on the adjoint generator

  /// Slow coordinates x_d = Tr(J_d rho).
  RealVector slow_coordinates(const ComplexMatrix& rho) const;
  /// Coefficients of the projection onto span{S_d}: Tr(S_d rho).
  RealVector quasi_equilibrium_coordinates(const ComplexMatrix& rho) const;
  /// sum_d x_d S_d.
  ComplexMatrix assemble(const RealVector& x) const;
};

/// Hermitian, Frobenius-orthonormal basis of ker L0, deterministic: the
/// orthogonal kernel projector is applied to the canonical Hermitian basis
/// (identity direction first) and the images are Gram-Schmidt swept in that
/// fixed order.
std::vector<ComplexMatrix> compute_slow_basis(const Superoperator& l0,
                                              const SpectralGapReport& gap,
                                              double zero_tol_rel = 1e-8);

/// Spectral projector onto ker L0 along the fast subspace,
/// Kbar = sum_d S_d Tr(J_d .). Equals lim_{t->inf} e^{t L0}.
Superoperator compute_kbar(const Superoperator& l0, const std::vector<ComplexMatrix>& s_basis,
                           double zero_tol_rel = 1e-8, double biortho_tol = 1e-8);

/// J_d = Kbar_adj(S_d); Heisenberg steady states with Tr(J_d S_d') = delta.
std::vector<ComplexMatrix> compute_invariant_operators(const Superoperator& kbar_adj,
                                                       const std::vector<ComplexMatrix>& s_basis,
                                                       double biortho_tol = 1e-8);

/// Pseudo-resolvent as a superoperator: R(W) is the unique X with
/// L0(X) = Kbar(W) - W and Tr(J_d X) = 0, built from a rank-revealing
/// restricted solve followed by projection (not by time integration).
Superoperator resolvent_R(const Superoperator& l0, const Superoperator& kbar,
                          Eigen::Index dbar, double residual_tol = 1e-10);

/// Mirror of resolvent_R on the adjoint generator: L0*(X) = Kbar*(W) - W,
/// Tr(S_d X) = 0.
Superoperator resolvent_R_adj(const Superoperator& l0_adj, const Superoperator& kbar_adj,
                              Eigen::Index dbar, double residual_tol = 1e-10);

/// Full pipeline. l0_adj must be the Frobenius adjoint of l0.
FastSlowSplit build_fast_slow_split(const Superoperator& l0, const Superoperator& l0_adj,
                                    const Tolerances& tol = {});

} // namespace lindred
