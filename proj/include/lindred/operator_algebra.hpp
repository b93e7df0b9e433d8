#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lindred/error.hpp"
#include "lindred/types.hpp"

namespace lindred {

/// Frobenius pairing Tr(A^dag B). All orthonormality statements in this
/// project are with respect to this product.
template <typename DerivedA, typename DerivedB>
Complex frobenius_inner(const Eigen::MatrixBase<DerivedA>& a,
                        const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorKind::DimensionMismatch, "frobenius_inner: shape mismatch");
  return (a.adjoint() * b).trace();
}

// Column-stacking vectorization, fixed project-wide: vec(X)(i + D*j) = X(i,j).
// Every superoperator matrix and the Choi transform assume this convention.
template <typename Derived>
ComplexVector vectorize(const Eigen::MatrixBase<Derived>& x) {
  if (x.rows() != x.cols())
    fail(ErrorKind::DimensionMismatch, "vectorize: input must be square");
  ComplexMatrix m = x;
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

inline ComplexMatrix devectorize(const ComplexVector& v) {
  const auto dd = v.size();
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(dd))));
  if (d * d != dd)
    fail(ErrorKind::DimensionMismatch, "devectorize: length is not a square");
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

template <typename Derived>
ComplexMatrix hermitize(const Eigen::MatrixBase<Derived>& x) {
  return 0.5 * (x + x.adjoint());
}

template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& x) {
  const double scale = x.norm();
  if (scale == 0.0) return 0.0;
  return (x - x.adjoint()).norm() / scale;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& x, double tol = 1e-10) {
  return x.rows() == x.cols() && hermiticity_defect(x) <= tol;
}

/// Linear map on operators, stored as the dense D^2 x D^2 matrix acting on
/// column-stacked operators.
struct Superoperator {
  Eigen::Index dim = 0; // Hilbert-space dimension D
  ComplexMatrix matrix; // D^2 x D^2

  Superoperator() = default;
  Superoperator(Eigen::Index d, ComplexMatrix m) : dim(d), matrix(std::move(m)) {
    if (matrix.rows() != dim * dim || matrix.cols() != dim * dim)
      fail(ErrorKind::DimensionMismatch, "Superoperator: matrix must be D^2 x D^2");
  }

  static Superoperator identity(Eigen::Index d) {
    return {d, ComplexMatrix::Identity(d * d, d * d)};
  }

  ComplexMatrix apply(const ComplexMatrix& x) const {
    if (x.rows() != dim || x.cols() != dim)
      fail(ErrorKind::DimensionMismatch, "Superoperator::apply: operand dimension");
    return devectorize(matrix * vectorize(x));
  }

  /// Adjoint with respect to the Frobenius pairing.
  Superoperator adjoint() const { return {dim, matrix.adjoint()}; }

  Superoperator compose(const Superoperator& inner) const {
    if (dim != inner.dim)
      fail(ErrorKind::DimensionMismatch, "Superoperator::compose: dimension");
    return {dim, matrix * inner.matrix};
  }
};

/// Real-linear Gram-Schmidt of Hermitian operators under the Frobenius
/// product, with one re-orthogonalization pass. Inputs must be Hermitian and
/// linearly independent over the reals.
std::vector<ComplexMatrix> orthonormalize_hermitian(
    const std::vector<ComplexMatrix>& basis, double hermiticity_tol = 1e-10,
    double rank_tol = 1e-10);

/// Fixed canonical basis of Hermitian D x D operators, all unit Frobenius
/// norm: identity/sqrt(D) first, then for each index pair (i <= j) in
/// lexicographic order the diagonal unit, or the symmetric and antisymmetric
/// (sigma_y-like) combinations. Used to make kernel bases deterministic.
std::vector<ComplexMatrix> canonical_hermitian_basis(Eigen::Index dim);

/// Choi matrix of S under the column-stacking convention, unnormalized so
/// that a trace-preserving map has Tr(Choi) = D. S is completely positive
/// iff the Choi matrix is positive semidefinite.
ComplexMatrix choi_matrix(const Superoperator& s);

struct CpTpDiagnostics {
  double min_choi_eigenvalue = 0.0;
  double trace_defect = 0.0;
};

/// min_choi_eigenvalue: smallest eigenvalue of the Hermitized Choi matrix.
/// trace_defect: max over a Frobenius-orthonormal Hermitian basis X of
/// |Tr(S(X)) - Tr(X)|.
CpTpDiagnostics cp_tp_diagnostics(const Superoperator& s);

// Deterministic test/sampling helpers (all distributions seeded explicitly).
ComplexMatrix random_complex_matrix(Eigen::Index dim, std::mt19937_64& rng);
ComplexMatrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng);
/// Haar-random pure state |psi><psi|.
ComplexMatrix random_pure_state(Eigen::Index dim, std::mt19937_64& rng);

} // namespace lindred
