#include "lindred/operator_algebra.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace lindred {

std::vector<ComplexMatrix> orthonormalize_hermitian(
    const std::vector<ComplexMatrix>& basis, double hermiticity_tol,
    double rank_tol) {
  if (basis.empty()) return {};
  const Eigen::Index dim = basis.front().rows();

  std::vector<ComplexMatrix> out;
  out.reserve(basis.size());
  for (const ComplexMatrix& b : basis) {
    if (b.rows() != dim || b.cols() != dim)
      fail(ErrorKind::DimensionMismatch, "orthonormalize_hermitian: mixed dimensions");
    if (hermiticity_defect(b) > hermiticity_tol)
      fail(ErrorKind::InvalidArgument, "orthonormalize_hermitian: input not Hermitian");

    ComplexMatrix v = hermitize(b);
    const double scale = v.norm();
    // Two MGS passes keep the Gram defect near machine precision.
    for (int pass = 0; pass < 2; ++pass)
      for (const ComplexMatrix& q : out)
        v -= frobenius_inner(q, v).real() * q;
    const double residual = v.norm();
    if (residual <= rank_tol * std::max(scale, 1.0))
      fail(ErrorKind::DegenerateBasis,
           "orthonormalize_hermitian: rank deficiency beyond tolerance");
    out.push_back(v / residual);
  }
  return out;
}

std::vector<ComplexMatrix> canonical_hermitian_basis(Eigen::Index dim) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<size_t>(dim * dim) + 1);
  basis.push_back(ComplexMatrix::Identity(dim, dim) / std::sqrt(double(dim)));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i; j < dim; ++j) {
      if (i == j) {
        ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
        e(i, i) = 1.0;
        basis.push_back(e);
      } else {
        ComplexMatrix sym = ComplexMatrix::Zero(dim, dim);
        sym(i, j) = inv_sqrt2;
        sym(j, i) = inv_sqrt2;
        basis.push_back(sym);
        ComplexMatrix asym = ComplexMatrix::Zero(dim, dim);
        asym(i, j) = Complex(0.0, -inv_sqrt2);
        asym(j, i) = Complex(0.0, inv_sqrt2);
        basis.push_back(asym);
      }
    }
  }
  return basis;
}

ComplexMatrix choi_matrix(const Superoperator& s) {
  const Eigen::Index d = s.dim;
  ComplexMatrix choi(d * d, d * d);
  // Choi = sum_{ij} E_ij (x) S(E_ij); entry ((i,k),(j,l)) = S(E_ij)_{kl},
  // which under column stacking is matrix(k + D*l, i + D*j).
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < d; ++k)
      for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index l = 0; l < d; ++l)
          choi(i * d + k, j * d + l) = s.matrix(k + d * l, i + d * j);
  return choi;
}

CpTpDiagnostics cp_tp_diagnostics(const Superoperator& s) {
  CpTpDiagnostics diag;

  const ComplexMatrix choi = hermitize(choi_matrix(s));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(choi, Eigen::EigenvaluesOnly);
  diag.min_choi_eigenvalue = es.eigenvalues().minCoeff();

  const ComplexVector id_vec = vectorize(ComplexMatrix::Identity(s.dim, s.dim));
  double defect = 0.0;
  for (const ComplexMatrix& x : canonical_hermitian_basis(s.dim)) {
    const ComplexVector v = vectorize(x);
    const Complex out_trace = id_vec.dot(s.matrix * v);
    defect = std::max(defect, std::abs(out_trace - x.trace()) / x.norm());
  }
  diag.trace_defect = defect;
  return diag;
}

ComplexMatrix random_complex_matrix(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i)
      m(i, j) = Complex(gauss(rng), gauss(rng));
  return m;
}

ComplexMatrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  return hermitize(random_complex_matrix(dim, rng));
}

ComplexMatrix random_pure_state(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexVector psi(dim);
  for (Eigen::Index i = 0; i < dim; ++i) psi(i) = Complex(gauss(rng), gauss(rng));
  psi.normalize();
  return psi * psi.adjoint();
}

} // namespace lindred
