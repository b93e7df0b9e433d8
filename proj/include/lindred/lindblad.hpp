#pragma once

#include <vector>

#include "lindred/operator_algebra.hpp"
#include "lindred/types.hpp"

namespace lindred {

/// One GKSL generator: Hermitian Hamiltonian (units of rate, hbar = 1) plus
/// collapse operators (units sqrt(rate), not necessarily Hermitian). Rates
/// enter squared through the collapse amplitudes; nothing is rescaled here.
struct GeneratorSpec {
  ComplexMatrix hamiltonian;
  std::vector<ComplexMatrix> collapse_ops;

  Eigen::Index dim() const { return hamiltonian.rows(); }
};

/// Validates shapes and hermiticity of the Hamiltonian.
void validate_generator_spec(const GeneratorSpec& spec, double hermiticity_tol = 1e-10);

/// Slow/fast pair: d/dt rho = L0(rho) + eps * L1(rho).
struct GKSLModel {
  Eigen::Index dim = 0;
  GeneratorSpec fast; // L0
  GeneratorSpec slow; // L1
  std::vector<double> epsilons; // one value, or a sweep grid

  double epsilon() const { return epsilons.empty() ? 0.0 : epsilons.front(); }
};

void validate_model(const GKSLModel& model, double hermiticity_tol = 1e-10);

// Operator-level maps. The recursions use these (D x D products); the dense
// matrices below are the source of truth for spectral work.
ComplexMatrix apply_generator(const GeneratorSpec& spec, const ComplexMatrix& x);
ComplexMatrix apply_adjoint_generator(const GeneratorSpec& spec, const ComplexMatrix& w);

/// rho -> -i[H, rho] + sum_nu (L rho L^dag - 1/2 {L^dag L, rho}) as a matrix.
Superoperator build_lindbladian(const GeneratorSpec& spec);

/// Heisenberg picture: W -> +i[H, W] + sum_nu (L^dag W L - 1/2 {L^dag L, W}).
/// Satisfies Tr(W L(X)) = Tr(L*(W) X); its matrix is the adjoint of the
/// Schroedinger one.
Superoperator build_adjoint_lindbladian(const GeneratorSpec& spec);

/// L0 + eps * L1.
Superoperator total_generator(const GKSLModel& model, double eps);

} // namespace lindred
