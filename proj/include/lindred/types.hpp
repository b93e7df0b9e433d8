#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace lindred {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Numerical tolerances used across the reduction pipeline. Values are
// relative unless the name says otherwise; see README for the config
// precedence (CLI flags > model-file overrides > these defaults).
struct Tolerances {
  double hermiticity = 1e-10;       // ||M - M^dag||_F <= tol * ||M||_F
  double orthonormality = 1e-12;    // Gram-matrix defect after Gram-Schmidt
  double zero_cluster = 1e-8;       // |lambda| <= tol * ||L0||_2 -> zero group
  double biorthogonality = 1e-8;    // conditioning floor for Tr(J_d S_d')
  double resolvent = 1e-10;         // residual of the restricted solve
  double recursion_residual = 1e-9; // per-order invariance defect, relative
  double gauge = 1e-10;             // |Tr(J S^{(n)})| and |Tr(S J^{(n)})|
  double fit_floor = 1e-12;         // errors below this are "at floor"
  double validity_warn = 0.1;       // warn when eps * ||L1|| / gamma exceeds
  int max_order = 8;
};

inline constexpr uint64_t kDefaultSeed = 0x5eed51070ull;

} // namespace lindred
