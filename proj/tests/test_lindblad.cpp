#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "lindred/lindblad.hpp"
#include "test_helpers.hpp"

using namespace lindred;
using namespace lindred::testing;

TEST_CASE("amplitude damping dissipator on the excited state") {
  const GeneratorSpec spec = damping_spec();
  // L(|e><e|) = |g><g| - |e><e|
  const ComplexMatrix out = apply_generator(spec, excited_projector());
  CHECK((out - (ground_projector() - excited_projector())).norm() < 1e-14);

  const Superoperator l = build_lindbladian(spec);
  CHECK((l.apply(excited_projector()) - out).norm() < 1e-14);
}

TEST_CASE("pure Hamiltonian generator reproduces the Pauli commutator") {
  GeneratorSpec spec;
  spec.hamiltonian = pauli_z();
  // L(sigma_x) = -i [sigma_z, sigma_x] = 2 sigma_y
  const ComplexMatrix out = apply_generator(spec, pauli_x());
  CHECK((out - 2.0 * pauli_y()).norm() < 1e-14);
}

TEST_CASE("GKSL generators annihilate the trace") {
  auto rng = seeded_rng(10);
  GeneratorSpec spec;
  spec.hamiltonian = random_hermitian(4, rng);
  spec.collapse_ops = {random_complex_matrix(4, rng), random_complex_matrix(4, rng)};
  const Superoperator l = build_lindbladian(spec);
  for (int i = 0; i < 100; ++i) {
    const ComplexMatrix x = random_complex_matrix(4, rng);
    CHECK(std::abs(l.apply(x).trace()) <= 1e-11 * std::max(1.0, x.norm()));
  }
}

TEST_CASE("GKSL generators preserve hermiticity") {
  auto rng = seeded_rng(11);
  GeneratorSpec spec;
  spec.hamiltonian = random_hermitian(3, rng);
  spec.collapse_ops = {random_complex_matrix(3, rng)};
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix x = random_complex_matrix(3, rng);
    const ComplexMatrix lx = apply_generator(spec, x);
    const ComplexMatrix lxd = apply_generator(spec, x.adjoint().eval());
    CHECK((lxd - lx.adjoint()).norm() <= 1e-11 * std::max(1.0, lx.norm()));
  }
}

TEST_CASE("adjoint generator fixes the identity and damps the excited state") {
  const GeneratorSpec spec = damping_spec();
  CHECK(apply_adjoint_generator(spec, ComplexMatrix::Identity(2, 2)).norm() < 1e-14);
  // L*(|e><e|) = -|e><e|: sigma+ |e><e| sigma- vanishes, the anticommutator stays.
  const ComplexMatrix out = apply_adjoint_generator(spec, excited_projector());
  CHECK((out + excited_projector()).norm() < 1e-14);
}

TEST_CASE("superoperator matrices agree with the operator-level maps") {
  auto rng = seeded_rng(14);
  GeneratorSpec spec;
  spec.hamiltonian = random_hermitian(4, rng);
  spec.collapse_ops = {random_complex_matrix(4, rng), random_complex_matrix(4, rng)};
  const Superoperator l = build_lindbladian(spec);
  const Superoperator l_adj = build_adjoint_lindbladian(spec);
  const double scale = std::max(1.0, l.matrix.norm());
  for (int i = 0; i < 100; ++i) {
    const ComplexMatrix x = random_complex_matrix(4, rng);
    CHECK((l.apply(x) - apply_generator(spec, x)).norm() <= 1e-12 * scale * x.norm());
    CHECK((l_adj.apply(x) - apply_adjoint_generator(spec, x)).norm() <=
          1e-12 * scale * x.norm());
  }
}

TEST_CASE("adjoint pairing identity and matrix adjoint") {
  auto rng = seeded_rng(12);
  GeneratorSpec spec;
  spec.hamiltonian = random_hermitian(3, rng);
  spec.collapse_ops = {random_complex_matrix(3, rng), random_complex_matrix(3, rng)};
  const Superoperator l = build_lindbladian(spec);
  const Superoperator l_adj = build_adjoint_lindbladian(spec);

  CHECK((l_adj.matrix - l.matrix.adjoint()).norm() <= 1e-12 * l.matrix.norm());

  for (int i = 0; i < 100; ++i) {
    const ComplexMatrix w = random_hermitian(3, rng);
    const ComplexMatrix x = random_hermitian(3, rng);
    const Complex lhs = (w * apply_generator(spec, x)).trace();
    const Complex rhs = (apply_adjoint_generator(spec, w) * x).trace();
    CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("spectrum of a GKSL generator stays in the closed left half-plane") {
  auto rng = seeded_rng(13);
  GeneratorSpec spec;
  spec.hamiltonian = random_hermitian(3, rng);
  spec.collapse_ops = {random_complex_matrix(3, rng)};
  const Superoperator l = build_lindbladian(spec);
  Eigen::ComplexEigenSolver<ComplexMatrix> es(l.matrix, false);
  const double scale = l.matrix.norm();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    CHECK(es.eigenvalues()(i).real() <= 1e-9 * scale);
}

TEST_CASE("total_generator is linear in epsilon") {
  GKSLModel model = [] {
    GKSLModel m;
    m.dim = 2;
    m.fast = damping_spec();
    m.slow.hamiltonian = pauli_x();
    m.epsilons = {0.1};
    return m;
  }();

  const Superoperator l0 = build_lindbladian(model.fast);
  const Superoperator l1 = build_lindbladian(model.slow);

  CHECK((total_generator(model, 0.0).matrix - l0.matrix).norm() == 0.0);

  GKSLModel zero_slow = model;
  zero_slow.slow.hamiltonian = ComplexMatrix::Zero(2, 2);
  CHECK((total_generator(zero_slow, 1.0).matrix - l0.matrix).norm() == 0.0);

  const double eps = 0.37;
  CHECK((total_generator(model, eps).matrix - (l0.matrix + eps * l1.matrix)).norm() == 0.0);
}

TEST_CASE("generator validation rejects bad specs") {
  GeneratorSpec bad;
  bad.hamiltonian = lowering(); // not Hermitian
  CHECK_THROWS_AS(build_lindbladian(bad), ReductionError);

  GeneratorSpec mismatched;
  mismatched.hamiltonian = ComplexMatrix::Zero(2, 2);
  mismatched.collapse_ops = {ComplexMatrix::Zero(3, 3)};
  CHECK_THROWS_AS(build_lindbladian(mismatched), ReductionError);
}
