#include "lindred/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace lindred {

namespace {

struct KernelData {
  double norm = 0.0;        // ||L0||_2
  ComplexMatrix right_null; // D^2 x k, orthonormal basis of ker L0
  ComplexMatrix left_null;  // D^2 x k, orthonormal basis of ker L0^dag
};

KernelData kernel_data(const ComplexMatrix& m, double zero_tol_rel) {
  Eigen::BDCSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  KernelData out;
  out.norm = svd.singularValues()(0);
  const double tol = zero_tol_rel * std::max(out.norm, 1e-300);
  Eigen::Index null_dim = 0;
  for (Eigen::Index i = svd.singularValues().size(); i-- > 0;) {
    if (svd.singularValues()(i) <= tol)
      ++null_dim;
    else
      break;
  }
  out.right_null = svd.matrixV().rightCols(null_dim);
  out.left_null = svd.matrixU().rightCols(null_dim);
  return out;
}

void sort_group(std::vector<Complex>& v) {
  std::sort(v.begin(), v.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() < b.imag();
  });
}

} // namespace

SpectralGapReport spectral_gap_analysis(const Superoperator& l0, double zero_tol_rel) {
  const KernelData kd = kernel_data(l0.matrix, zero_tol_rel);
  const double tol = zero_tol_rel * std::max(kd.norm, 1e-300);

  if (kd.norm <= 1e-300)
    fail(ErrorKind::HypothesisViolated, "hypothesis violated: no spectral gap (L0 = 0)");

  Eigen::ComplexEigenSolver<ComplexMatrix> ces(l0.matrix, /*computeEigenvectors=*/false);
  if (ces.info() != Eigen::Success)
    fail(ErrorKind::InvalidArgument, "spectral_gap_analysis: eigensolver failed");

  SpectralGapReport report;
  report.norm = kd.norm;
  for (Eigen::Index i = 0; i < ces.eigenvalues().size(); ++i) {
    const Complex lam = ces.eigenvalues()(i);
    if (std::abs(lam) <= tol)
      report.zero_group.push_back(lam);
    else
      report.fast_group.push_back(lam);
  }
  sort_group(report.zero_group);
  sort_group(report.fast_group);

  if (report.zero_group.empty())
    fail(ErrorKind::HypothesisViolated, "hypothesis violated: no zero group (no quasi-equilibria)");
  if (report.fast_group.empty())
    fail(ErrorKind::HypothesisViolated, "hypothesis violated: no spectral gap (all eigenvalues in the zero group)");

  for (const Complex& lam : report.fast_group) {
    if (lam.real() >= -tol) {
      std::ostringstream msg;
      if (std::abs(lam.real()) <= tol)
        msg << "hypothesis violated: purely imaginary eigenvalue " << lam
            << " outside the zero group (rotating quasi-equilibria unsupported)";
      else
        msg << "hypothesis violated: eigenvalue " << lam << " in the right half-plane";
      fail(ErrorKind::HypothesisViolated, msg.str());
    }
  }

  // Semisimplicity: geometric multiplicity (numerical kernel dimension) must
  // match the zero-group count.
  const auto geometric = kd.right_null.cols();
  if (geometric != static_cast<Eigen::Index>(report.zero_group.size())) {
    std::ostringstream msg;
    msg << "non-semisimple kernel: zero group has algebraic multiplicity "
        << report.zero_group.size() << " but kernel dimension " << geometric;
    fail(ErrorKind::NonSemisimpleKernel, msg.str());
  }

  double gamma = std::numeric_limits<double>::infinity();
  for (const Complex& lam : report.fast_group) gamma = std::min(gamma, -lam.real());
  report.gamma = gamma;
  return report;
}

std::vector<ComplexMatrix> compute_slow_basis(const Superoperator& l0,
                                              const SpectralGapReport& gap,
                                              double zero_tol_rel) {
  const KernelData kd = kernel_data(l0.matrix, zero_tol_rel);
  const Eigen::Index dbar = static_cast<Eigen::Index>(gap.zero_group.size());
  if (kd.right_null.cols() != dbar)
    fail(ErrorKind::NonSemisimpleKernel, "compute_slow_basis: kernel dimension changed");

  // Orthogonal projection of the canonical Hermitian basis onto the kernel.
  // The projector is basis-independent, so the sweep order alone fixes the
  // output: identity direction first, then matrix-unit combinations.
  std::vector<ComplexMatrix> accepted;
  for (const ComplexMatrix& c : canonical_hermitian_basis(l0.dim)) {
    const ComplexVector proj = kd.right_null * (kd.right_null.adjoint() * vectorize(c));
    ComplexMatrix y = hermitize(devectorize(proj));
    for (const ComplexMatrix& q : accepted)
      y -= frobenius_inner(q, y).real() * q;
    if (y.norm() > 1e-7) accepted.push_back(y / y.norm());
    if (static_cast<Eigen::Index>(accepted.size()) == dbar) break;
  }
  if (static_cast<Eigen::Index>(accepted.size()) != dbar)
    fail(ErrorKind::DegenerateBasis,
         "compute_slow_basis: Hermitization collapsed the kernel rank");

  return orthonormalize_hermitian(accepted);
}

Superoperator compute_kbar(const Superoperator& l0, const std::vector<ComplexMatrix>& s_basis,
                           double zero_tol_rel, double biortho_tol) {
  const KernelData kd = kernel_data(l0.matrix, zero_tol_rel);
  const Eigen::Index dbar = static_cast<Eigen::Index>(s_basis.size());
  if (kd.left_null.cols() != dbar)
    fail(ErrorKind::IllConditionedSplit, "compute_kbar: left/right kernel dimension mismatch");

  ComplexMatrix s_mat(l0.dim * l0.dim, dbar);
  for (Eigen::Index d = 0; d < dbar; ++d) s_mat.col(d) = vectorize(s_basis[d]);

  // Kbar = S (J'^H S)^{-1} J'^H projects onto ker L0 along range L0.
  const ComplexMatrix pairing = kd.left_null.adjoint() * s_mat;
  Eigen::JacobiSVD<ComplexMatrix> cond(pairing);
  const double smin = cond.singularValues().minCoeff();
  const double smax = cond.singularValues().maxCoeff();
  if (smax <= 0.0 || smin / smax < biortho_tol)
    fail(ErrorKind::IllConditionedSplit,
         "compute_kbar: slow/fast pairing nearly singular (spectral projector ill-conditioned)");

  ComplexMatrix kbar = s_mat * pairing.partialPivLu().solve(kd.left_null.adjoint());

  const double idem = (kbar * kbar - kbar).norm() / std::max(1.0, kbar.norm());
  if (idem > 1e-9)
    fail(ErrorKind::IllConditionedSplit, "compute_kbar: projector not idempotent");
  return {l0.dim, std::move(kbar)};
}

std::vector<ComplexMatrix> compute_invariant_operators(const Superoperator& kbar_adj,
                                                       const std::vector<ComplexMatrix>& s_basis,
                                                       double biortho_tol) {
  std::vector<ComplexMatrix> j_ops;
  j_ops.reserve(s_basis.size());
  for (const ComplexMatrix& s : s_basis) j_ops.push_back(hermitize(kbar_adj.apply(s)));

  double defect = 0.0;
  for (size_t d = 0; d < j_ops.size(); ++d)
    for (size_t dp = 0; dp < s_basis.size(); ++dp) {
      const double expected = d == dp ? 1.0 : 0.0;
      defect = std::max(defect, std::abs(frobenius_inner(j_ops[d], s_basis[dp]) - expected));
    }
  if (defect > biortho_tol)
    fail(ErrorKind::IllConditionedSplit, "compute_invariant_operators: biorthogonality defect above tolerance");
  return j_ops;
}

namespace {

Superoperator restricted_resolvent(const Superoperator& gen, const Superoperator& projector,
                                   Eigen::Index dbar, double residual_tol, const char* label) {
  const Eigen::Index n = gen.matrix.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);

  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod(gen.matrix);
  cod.setThreshold(1e-10);
  if (cod.rank() != n - dbar) {
    std::ostringstream msg;
    msg << label << ": generator rank " << cod.rank() << " inconsistent with kernel dimension "
        << dbar;
    fail(ErrorKind::SingularResolvent, msg.str());
  }

  // Minimum-norm least-squares solve of L (X) = (Kbar - I), then removal of
  // the kernel component so that the slow pairings of the output vanish.
  const ComplexMatrix rhs = projector.matrix - id;
  ComplexMatrix r = (id - projector.matrix) * cod.solve(rhs);

  const double scale = std::max(1.0, rhs.norm());
  const double residual = (gen.matrix * r - rhs).norm() / scale;
  if (residual > residual_tol) {
    std::ostringstream msg;
    msg << label << ": restricted solve residual " << residual << " above tolerance "
        << residual_tol;
    fail(ErrorKind::SingularResolvent, msg.str());
  }
  return {gen.dim, std::move(r)};
}

} // namespace

Superoperator resolvent_R(const Superoperator& l0, const Superoperator& kbar,
                          Eigen::Index dbar, double residual_tol) {
  return restricted_resolvent(l0, kbar, dbar, residual_tol, "resolvent_R");
}

Superoperator resolvent_R_adj(const Superoperator& l0_adj, const Superoperator& kbar_adj,
                              Eigen::Index dbar, double residual_tol) {
  return restricted_resolvent(l0_adj, kbar_adj, dbar, residual_tol, "resolvent_R_adj");
}

RealVector FastSlowSplit::slow_coordinates(const ComplexMatrix& rho) const {
  RealVector x(dbar);
  for (Eigen::Index d = 0; d < dbar; ++d) x(d) = frobenius_inner(J[d], rho).real();
  return x;
}

RealVector FastSlowSplit::quasi_equilibrium_coordinates(const ComplexMatrix& rho) const {
  RealVector x(dbar);
  for (Eigen::Index d = 0; d < dbar; ++d) x(d) = frobenius_inner(S[d], rho).real();
  return x;
}

ComplexMatrix FastSlowSplit::assemble(const RealVector& x) const {
  if (x.size() != dbar) fail(ErrorKind::DimensionMismatch, "assemble: coordinate length");
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index d = 0; d < dbar; ++d) rho += x(d) * S[d];
  return rho;
}

FastSlowSplit build_fast_slow_split(const Superoperator& l0, const Superoperator& l0_adj,
                                    const Tolerances& tol) {
  if ((l0_adj.matrix - l0.matrix.adjoint()).norm() > 1e-10 * std::max(1.0, l0.matrix.norm()))
    fail(ErrorKind::InvalidArgument, "build_fast_slow_split: l0_adj is not the adjoint of l0");

  FastSlowSplit split;
  split.dim = l0.dim;
  split.L0 = l0;
  split.L0_adj = l0_adj;
  split.gap = spectral_gap_analysis(l0, tol.zero_cluster);
  split.gamma = split.gap.gamma;

  split.S = compute_slow_basis(l0, split.gap, tol.zero_cluster);
  split.dbar = static_cast<Eigen::Index>(split.S.size());

  split.Kbar = compute_kbar(l0, split.S, tol.zero_cluster, tol.biorthogonality);
  split.Kbar_adj = split.Kbar.adjoint();
  split.J = compute_invariant_operators(split.Kbar_adj, split.S, tol.biorthogonality);

  split.S_mat.resize(split.dim * split.dim, split.dbar);
  split.J_mat.resize(split.dim * split.dim, split.dbar);
  for (Eigen::Index d = 0; d < split.dbar; ++d) {
    split.S_mat.col(d) = vectorize(split.S[d]);
    split.J_mat.col(d) = vectorize(split.J[d]);
  }

  split.R = resolvent_R(l0, split.Kbar, split.dbar, tol.resolvent);
  split.R_adj = resolvent_R_adj(l0_adj, split.Kbar_adj, split.dbar, tol.resolvent);

  // Kernel conditions the recursions rely on.
  const double scale = std::max(1.0, split.gap.norm);
  for (Eigen::Index d = 0; d < split.dbar; ++d) {
    if (l0.apply(split.S[d]).norm() > tol.hermiticity * scale)
      fail(ErrorKind::IllConditionedSplit, "split: S_d not in ker L0");
    if (l0_adj.apply(split.J[d]).norm() > tol.hermiticity * scale)
      fail(ErrorKind::IllConditionedSplit, "split: J_d not in ker L0*");
  }
  return split;
}

} // namespace lindred
