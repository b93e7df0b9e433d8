#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "lindred/operator_algebra.hpp"
#include "test_helpers.hpp"

using namespace lindred;
using namespace lindred::testing;

TEST_CASE("frobenius_inner on fixed operators") {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  CHECK(frobenius_inner(id, id).real() == doctest::Approx(2.0));
  CHECK(std::abs(frobenius_inner(pauli_x(), pauli_y())) == doctest::Approx(0.0));
  // Tr(sigma+ sigma-) = Tr(|e><e|) = 1
  CHECK(frobenius_inner(lowering(), lowering()).real() == doctest::Approx(1.0));

  ComplexMatrix rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS((void)frobenius_inner(id, rect), ReductionError);
}

TEST_CASE("vectorize uses column stacking and round-trips exactly") {
  ComplexMatrix m(2, 2);
  m << 1, 2, 3, 4;
  const ComplexVector v = vectorize(m);
  CHECK(v(0) == Complex(1, 0));
  CHECK(v(1) == Complex(3, 0));
  CHECK(v(2) == Complex(2, 0));
  CHECK(v(3) == Complex(4, 0));

  CHECK(vectorize(ComplexMatrix::Zero(3, 3)).norm() == 0.0);

  const ComplexVector id_vec = vectorize(ComplexMatrix::Identity(2, 2));
  CHECK(id_vec(0) == Complex(1, 0));
  CHECK(id_vec(1) == Complex(0, 0));
  CHECK(id_vec(2) == Complex(0, 0));
  CHECK(id_vec(3) == Complex(1, 0));

  auto rng = seeded_rng(1);
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix x = random_complex_matrix(5, rng);
    CHECK((devectorize(vectorize(x)) - x).norm() == 0.0); // exact round-trip
  }

  ComplexMatrix rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS((void)vectorize(rect), ReductionError);
}

TEST_CASE("orthonormalize_hermitian matches hand Gram-Schmidt") {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  SUBCASE("already normalized input is unchanged") {
    const auto out = orthonormalize_hermitian({inv_sqrt2 * id});
    REQUIRE(out.size() == 1);
    CHECK((out[0] - inv_sqrt2 * id).norm() < 1e-14);
  }

  SUBCASE("identity and sigma_z only need scaling") {
    const auto out = orthonormalize_hermitian({id, pauli_z()});
    REQUIRE(out.size() == 2);
    CHECK((out[0] - inv_sqrt2 * id).norm() < 1e-14);
    CHECK((out[1] - inv_sqrt2 * pauli_z()).norm() < 1e-14);
  }

  SUBCASE("ground projector then identity gives the excited projector") {
    const auto out = orthonormalize_hermitian({ground_projector(), id});
    REQUIRE(out.size() == 2);
    CHECK((out[0] - ground_projector()).norm() < 1e-14);
    CHECK((out[1] - excited_projector()).norm() < 1e-13);
  }

  SUBCASE("rank deficiency is rejected") {
    CHECK_THROWS_AS(orthonormalize_hermitian({pauli_x(), pauli_x()}), ReductionError);
  }

  SUBCASE("non-Hermitian input is rejected") {
    CHECK_THROWS_AS(orthonormalize_hermitian({lowering()}), ReductionError);
  }

  SUBCASE("Gram matrix is the identity within 1e-12 on random sets") {
    auto rng = seeded_rng(2);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<ComplexMatrix> input;
      for (int k = 0; k < 6; ++k) input.push_back(random_hermitian(4, rng));
      const auto out = orthonormalize_hermitian(input);
      for (size_t a = 0; a < out.size(); ++a)
        for (size_t b = 0; b < out.size(); ++b) {
          const double expected = a == b ? 1.0 : 0.0;
          CHECK(std::abs(frobenius_inner(out[a], out[b]) - expected) < 1e-12);
        }
    }
  }
}

TEST_CASE("canonical_hermitian_basis spans and is unit-normalized") {
  const auto basis = canonical_hermitian_basis(3);
  CHECK(basis.size() == 10); // identity + 9 matrix-unit combinations
  for (const ComplexMatrix& b : basis) {
    CHECK(hermiticity_defect(b) < 1e-15);
    CHECK(b.norm() == doctest::Approx(1.0));
  }
  // The elements past the identity form a complete orthonormal set.
  ComplexMatrix gram(9, 9);
  for (int a = 0; a < 9; ++a)
    for (int b = 0; b < 9; ++b) gram(a, b) = frobenius_inner(basis[a + 1], basis[b + 1]);
  CHECK((gram - ComplexMatrix::Identity(9, 9)).norm() < 1e-14);
}

namespace {

// Transpose map under column stacking: out_vec(i + D j) = in_vec(j + D i).
Superoperator transpose_superoperator(Eigen::Index d) {
  ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i + d * j, j + d * i) = 1.0;
  return {d, std::move(m)};
}

} // namespace

TEST_CASE("choi_matrix of the identity channel is the scaled Bell projector") {
  const Superoperator id = Superoperator::identity(2);
  const ComplexMatrix choi = choi_matrix(id);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(choi));
  CHECK(es.eigenvalues()(3) == doctest::Approx(2.0)); // rank one, trace D
  CHECK(std::abs(es.eigenvalues()(0)) < 1e-14);
  CHECK(std::abs(es.eigenvalues()(2)) < 1e-14);

  ComplexVector bell(4);
  bell << 1, 0, 0, 1; // |00> + |11> in the (i,k) composite index
  CHECK((choi - bell * bell.adjoint()).norm() < 1e-14);
}

TEST_CASE("choi_matrix flags the transpose map as non-CP") {
  const Superoperator t = transpose_superoperator(2);
  const ComplexMatrix choi = choi_matrix(t);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(choi));
  // SWAP spectrum: min eigenvalue -1, i.e. -1/2 after normalization by D.
  CHECK(es.eigenvalues()(0) == doctest::Approx(-1.0));
  CHECK(es.eigenvalues()(0) / 2.0 == doctest::Approx(-0.5));

  const CpTpDiagnostics diag = cp_tp_diagnostics(t);
  CHECK(diag.min_choi_eigenvalue < 0.0);
  CHECK(diag.trace_defect < 1e-14); // transpose preserves the trace
}

TEST_CASE("superoperator action matches its matrix on random inputs") {
  auto rng = seeded_rng(3);
  const ComplexMatrix a = random_complex_matrix(3, rng);
  // Left multiplication X -> A X as a hand-built superoperator.
  ComplexMatrix m = ComplexMatrix::Zero(9, 9);
  for (Eigen::Index j = 0; j < 3; ++j) m.block(3 * j, 3 * j, 3, 3) = a;
  const Superoperator left{3, m};
  for (int i = 0; i < 100; ++i) {
    const ComplexMatrix x = random_complex_matrix(3, rng);
    CHECK((left.apply(x) - a * x).norm() <= 1e-12 * x.norm());
  }
}

TEST_CASE("random_pure_state is a normalized rank-one projector") {
  auto rng = seeded_rng(4);
  const ComplexMatrix rho = random_pure_state(4, rng);
  CHECK(rho.trace().real() == doctest::Approx(1.0));
  CHECK(hermiticity_defect(rho) < 1e-14);
  CHECK((rho * rho - rho).norm() < 1e-13);
}
