#pragma once

#include <random>
#include <vector>

#include "lindred/expansion.hpp"
#include "lindred/fitting.hpp"
#include "lindred/lindblad.hpp"
#include "lindred/spectral.hpp"
#include "lindred/types.hpp"

namespace lindred {

/// e^{t S} as a superoperator (scaling-and-squaring Pade on the D^2 x D^2
/// matrix). Fails with RegimeExceeded when t * ||S|| is outside the range the
/// exponential can represent.
Superoperator matrix_exponential(const Superoperator& s, double t);
ComplexMatrix matrix_exponential_apply(const Superoperator& s, double t, const ComplexMatrix& x);

/// K_{eps,T} = Kbar o e^{T (L0 + eps L1)}, the exact oracle for every reduced
/// quantity in this module.
Superoperator full_slow_map(const GKSLModel& model, const FastSlowSplit& split, double eps,
                            double T);

struct SlowState {
  RealVector x; // x_d = Tr(J_d rho)
  double time = 0.0;
};

/// z(T) = e^{T F(eps)} E^{-1}(eps) x(0).
SlowState reduced_trajectory(const SlowExpansion& slow, const PairingMatrix& pairing,
                             const SlowState& x0, double eps, double T);

/// Second-order slow propagator over the slow time-scale Tbar/eps, plus its
/// lift sum_{d,d'} m_{d,d'} S_d Tr(J_d' .) for Choi diagnostics.
struct SecondOrderReducedMap {
  RealMatrix matrix; // e^{(Tbar/eps)(eps F1 + eps^2 F2)}
  Superoperator lifted;
};

SecondOrderReducedMap second_order_reduced_map(const FastSlowSplit& split,
                                               const SlowExpansion& slow, double eps,
                                               double tbar);

/// Haar-random pure state projected onto span{S_d} and trace-renormalized;
/// the default initial condition for the validations below.
ComplexMatrix random_reduced_state(const FastSlowSplit& split, std::mt19937_64& rng);

struct ClosenessEntry {
  double T = 0.0;
  double error = 0.0; // sum_d |Tr(S_d K_{eps,T}(rho0)) - z_d(T)|
};

struct ClosenessRecord {
  double eps = 0.0;
  int order = 0;
  std::vector<ClosenessEntry> entries;
  double gamma = 0.0;
  double fitted_rate = 0.0;
  double envelope_M = 0.0; // from the first usable grid point
  int points_used = 0;
  bool at_floor = false;
  bool rate_ok = false;
  bool envelope_ok = false;
  bool passed = false;
};

/// Exponential-closeness check (slow coordinates of the exact map against the
/// reduced trajectory). rho0 must lie in span{S_d}. Pass: fitted decay rate
/// >= 0.8 gamma and the errors stay under the envelope anchored at the first
/// grid point; all-floor data passes outright.
ClosenessRecord validate_exponential_closeness(
    const GKSLModel& model, const FastSlowSplit& split, const SlowExpansion& slow,
    const FastExpansion& fast, double eps, const ComplexMatrix& rho0,
    const std::vector<double>& t_grid, const Tolerances& tol = {});

struct SecondOrderEntry {
  double eps = 0.0;
  double T = 0.0; // = tbar / eps
  double state_error = 0.0;
  double min_choi_eigenvalue = 0.0;
  double trace_defect = 0.0;
};

struct SecondOrderRecord {
  double tbar = 0.0;
  std::vector<SecondOrderEntry> entries;
  SlopeFit state_fit;
  SlopeFit choi_fit;   // on max(-min_choi_eigenvalue, 0)
  SlopeFit defect_fit; // on the trace defect
  bool state_ok = false;
  bool choi_ok = false;
  bool defect_ok = false;
  bool passed = false;
};

/// Second-order accuracy on the slow time-scale: state error of the second-order
/// propagator over an epsilon sweep must fit a log-log slope in [1.7, 2.3],
/// and the lifted map's CP/TP defects must shrink at least quadratically
/// (slope >= 1.7) or sit at the numerical floor.
SecondOrderRecord validate_second_order(
    const GKSLModel& model, const FastSlowSplit& split, const SlowExpansion& slow,
    const std::vector<double>& eps_grid, double tbar, const ComplexMatrix& rho0,
    const Tolerances& tol = {});

/// Truncations of an already computed expansion pair (the recursion is
/// incremental, so lower orders are prefixes).
SlowExpansion truncate_expansion(const SlowExpansion& slow, int order);
FastExpansion truncate_expansion(const FastExpansion& fast, int order);

struct OrderScalingRecord {
  int order = 0;
  std::vector<double> eps_grid;
  std::vector<double> errors; // slow-coordinate l1 error at the fixed horizon
  SlopeFit fit;               // expected slope: order + 1
};

/// Slow-coordinate error of the order-N reduced trajectory at a fixed horizon
/// T, swept over epsilon. Operationalizes the asymptotic-series claim: the
/// fitted slope is N + 1.
OrderScalingRecord order_scaling(const GKSLModel& model, const FastSlowSplit& split,
                                 const SlowExpansion& slow, const FastExpansion& fast, int order,
                                 const std::vector<double>& eps_grid, double t_horizon,
                                 const ComplexMatrix& rho0, const Tolerances& tol = {});

} // namespace lindred
