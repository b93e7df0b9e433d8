#include "lindred/expansion.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

namespace lindred {

namespace {

void check_order(int order, const Tolerances& tol) {
  if (order < 1) fail(ErrorKind::InvalidArgument, "expansion order must be >= 1");
  if (order > tol.max_order) {
    std::ostringstream msg;
    msg << "expansion order " << order << " exceeds cap " << tol.max_order
        << " (roundoff grows with repeated resolvent solves)";
    fail(ErrorKind::InvalidArgument, msg.str());
  }
}

// The coefficient matrices are traces of Hermitian products; their imaginary
// parts are numerical noise. Track the residue, keep the real part.
double split_real(const ComplexMatrix& m, RealMatrix& out) {
  out = m.real();
  return m.imag().size() == 0 ? 0.0 : m.imag().cwiseAbs().maxCoeff();
}

void check_recursion(int n, double residual, double tolerance, const char* which) {
  if (residual > tolerance) {
    std::ostringstream msg;
    msg << which << ": order-" << n << " invariance residual " << residual
        << " above tolerance " << tolerance << " (split or resolvent failure)";
    fail(ErrorKind::RecursionInconsistency, msg.str());
  }
}

} // namespace

SlowExpansion expand_slow(const FastSlowSplit& split, const GeneratorSpec& slow_gen,
                          int order, const Tolerances& tol) {
  check_order(order, tol);
  const Eigen::Index dbar = split.dbar;

  SlowExpansion exp;
  exp.order = order;
  exp.dbar = dbar;
  exp.F.assign(order + 1, RealMatrix::Zero(dbar, dbar));
  exp.S_corr.assign(order + 1, split.S);
  exp.residuals.assign(order + 1, 0.0);
  exp.gauge_defects.assign(order + 1, 0.0);

  for (int n = 1; n <= order; ++n) {
    // L1(S^{(n-1)}_d) is shared by F^{(n)} and the S^{(n)} right-hand side.
    std::vector<ComplexMatrix> l1_prev(dbar);
    for (Eigen::Index d = 0; d < dbar; ++d)
      l1_prev[d] = apply_generator(slow_gen, exp.S_corr[n - 1][d]);

    ComplexMatrix f_n(dbar, dbar);
    for (Eigen::Index dp = 0; dp < dbar; ++dp)
      for (Eigen::Index d = 0; d < dbar; ++d)
        f_n(dp, d) = frobenius_inner(split.J[dp], l1_prev[d]);
    exp.imag_residue = std::max(exp.imag_residue, split_real(f_n, exp.F[n]));

    double residual = 0.0;
    for (Eigen::Index d = 0; d < dbar; ++d) {
      // Q_d = sum_{d''} sum_{r=1..n} F^{(r)}_{d'',d} S_{d''}^{(n-r)}, the sum
      // as written including the r = n term against S^{(0)}.
      ComplexMatrix q = ComplexMatrix::Zero(split.dim, split.dim);
      for (int r = 1; r <= n; ++r)
        for (Eigen::Index dpp = 0; dpp < dbar; ++dpp)
          q += exp.F[r](dpp, d) * exp.S_corr[n - r][dpp];

      const ComplexMatrix s_n = hermitize(split.R.apply(l1_prev[d] - q));
      exp.S_corr[n][d] = s_n;

      // Invariance condition of order n:
      //   Q_d = L0(S^{(n)}_d) + L1(S^{(n-1)}_d).
      const ComplexMatrix defect = q - split.L0.apply(s_n) - l1_prev[d];
      const double scale = std::max({q.norm(), l1_prev[d].norm(), 1e-30});
      residual = std::max(residual, defect.norm() / scale);

      for (Eigen::Index dp = 0; dp < dbar; ++dp)
        exp.gauge_defects[n] =
            std::max(exp.gauge_defects[n], std::abs(frobenius_inner(split.J[dp], s_n)));
    }
    exp.residuals[n] = residual;
    check_recursion(n, residual, tol.recursion_residual, "expand_slow");
  }

  for (int n = 1; n <= order; ++n)
    exp.coefficient_scale = std::max(exp.coefficient_scale, exp.F[n].norm());
  return exp;
}

FastExpansion expand_fast(const FastSlowSplit& split, const GeneratorSpec& slow_gen,
                          int order, const Tolerances& tol) {
  check_order(order, tol);
  const Eigen::Index dbar = split.dbar;

  FastExpansion exp;
  exp.order = order;
  exp.dbar = dbar;
  exp.G.assign(order + 1, RealMatrix::Zero(dbar, dbar));
  exp.J_corr.assign(order + 1, split.J);
  exp.residuals.assign(order + 1, 0.0);
  exp.gauge_defects.assign(order + 1, 0.0);

  for (int n = 1; n <= order; ++n) {
    std::vector<ComplexMatrix> l1adj_prev(dbar);
    for (Eigen::Index d = 0; d < dbar; ++d)
      l1adj_prev[d] = apply_adjoint_generator(slow_gen, exp.J_corr[n - 1][d]);

    // G^{(n)}_{d,d'} = Tr(S_d' L1*(J_d^{(n-1)})): the row index is the evolved
    // invariant operator, matching (L0* + eps L1*)(J_d) = sum_d' G_{d,d'} J_d'.
    ComplexMatrix g_n(dbar, dbar);
    for (Eigen::Index d = 0; d < dbar; ++d)
      for (Eigen::Index dp = 0; dp < dbar; ++dp)
        g_n(d, dp) = frobenius_inner(split.S[dp], l1adj_prev[d]);
    exp.imag_residue = std::max(exp.imag_residue, split_real(g_n, exp.G[n]));

    double residual = 0.0;
    for (Eigen::Index d = 0; d < dbar; ++d) {
      ComplexMatrix q = ComplexMatrix::Zero(split.dim, split.dim);
      for (int r = 1; r <= n; ++r)
        for (Eigen::Index dp = 0; dp < dbar; ++dp)
          q += exp.G[r](d, dp) * exp.J_corr[n - r][dp];

      const ComplexMatrix j_n = hermitize(split.R_adj.apply(l1adj_prev[d] - q));
      exp.J_corr[n][d] = j_n;

      // Order-n invariance: Q_d = L0*(J^{(n)}_d) + L1*(J^{(n-1)}_d).
      const ComplexMatrix defect = q - split.L0_adj.apply(j_n) - l1adj_prev[d];
      const double scale = std::max({q.norm(), l1adj_prev[d].norm(), 1e-30});
      residual = std::max(residual, defect.norm() / scale);

      for (Eigen::Index dp = 0; dp < dbar; ++dp)
        exp.gauge_defects[n] =
            std::max(exp.gauge_defects[n], std::abs(frobenius_inner(split.S[dp], j_n)));
    }
    exp.residuals[n] = residual;
    check_recursion(n, residual, tol.recursion_residual, "expand_fast");
  }
  return exp;
}

namespace {

std::vector<ComplexMatrix> truncated_series(const std::vector<std::vector<ComplexMatrix>>& corr,
                                            double eps, int order) {
  const size_t dbar = corr.front().size();
  std::vector<ComplexMatrix> out = corr.front();
  for (int n = 1; n <= order; ++n) {
    const double w = std::pow(eps, n);
    for (size_t d = 0; d < dbar; ++d) out[d] += w * corr[n][d];
  }
  return out;
}

} // namespace

std::vector<ComplexMatrix> truncated_slow_basis(const SlowExpansion& slow, double eps) {
  return truncated_series(slow.S_corr, eps, slow.order);
}

std::vector<ComplexMatrix> truncated_invariant_operators(const FastExpansion& fast, double eps) {
  return truncated_series(fast.J_corr, eps, fast.order);
}

PairingMatrix pairing_matrix(const SlowExpansion& slow, const FastExpansion& fast, double eps) {
  if (slow.order != fast.order)
    fail(ErrorKind::InvalidArgument, "pairing_matrix: expansions must share the truncation order");
  if (slow.dbar != fast.dbar)
    fail(ErrorKind::DimensionMismatch, "pairing_matrix: dbar mismatch");

  const auto s_eps = truncated_slow_basis(slow, eps);
  const auto j_eps = truncated_invariant_operators(fast, eps);

  PairingMatrix pm;
  pm.eps = eps;
  pm.order = slow.order;
  pm.E.resize(slow.dbar, slow.dbar);
  for (Eigen::Index d = 0; d < slow.dbar; ++d)
    for (Eigen::Index dp = 0; dp < slow.dbar; ++dp)
      pm.E(d, dp) = frobenius_inner(j_eps[d], s_eps[dp]).real();

  Eigen::JacobiSVD<RealMatrix> svd(pm.E);
  const double smin = svd.singularValues().minCoeff();
  if (smin < 1e-8) {
    std::ostringstream msg;
    msg << "pairing_matrix: E(eps) nearly singular at eps = " << eps
        << " (outside the perturbative regime)";
    fail(ErrorKind::RegimeExceeded, msg.str());
  }
  pm.lu = Eigen::PartialPivLU<RealMatrix>(pm.E);
  return pm;
}

RealMatrix truncated_F(const SlowExpansion& slow, double eps) {
  RealMatrix f = RealMatrix::Zero(slow.dbar, slow.dbar);
  for (int n = 1; n <= slow.order; ++n) f += std::pow(eps, n) * slow.F[n];
  return f;
}

RealMatrix truncated_G(const FastExpansion& fast, double eps) {
  RealMatrix g = RealMatrix::Zero(fast.dbar, fast.dbar);
  for (int n = 1; n <= fast.order; ++n) g += std::pow(eps, n) * fast.G[n];
  return g;
}

double validity_parameter(const FastSlowSplit& split, const GeneratorSpec& slow_gen, double eps) {
  const Superoperator l1 = build_lindbladian(slow_gen);
  Eigen::BDCSVD<ComplexMatrix> svd(l1.matrix);
  const double norm = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  return eps * norm / split.gamma;
}

} // namespace lindred
