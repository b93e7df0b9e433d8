#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "lindred/fitting.hpp"
#include "lindred/model_zoo.hpp"
#include "lindred/propagate.hpp"
#include "lindred/spectral.hpp"
#include "test_helpers.hpp"

using namespace lindred;
using namespace lindred::testing;

TEST_CASE("every zoo model passes the spectral hypothesis with the expected dbar") {
  for (const ZooEntry& entry : zoo_entries()) {
    CAPTURE(entry.name);
    const GKSLModel model = zoo_build(entry.name);
    const FastSlowSplit split = build_fast_slow_split(build_lindbladian(model.fast),
                                                      build_adjoint_lindbladian(model.fast));
    CHECK(split.gamma > 0.0);
    CHECK(split.dbar == entry.expected_dbar);
    if (entry.expected_gamma)
      CHECK(split.gamma == doctest::Approx(*entry.expected_gamma).epsilon(1e-9));
  }
}

TEST_CASE("damped qubit facts") {
  const GKSLModel model = zoo_build("damped_qubit", {{"kappa", 2.0}});
  const FastSlowSplit split = build_fast_slow_split(build_lindbladian(model.fast),
                                                    build_adjoint_lindbladian(model.fast));
  CHECK(split.dbar == 1);
  CHECK(split.gamma == doctest::Approx(1.0)); // kappa / 2
  CHECK((split.S[0] - ground_projector()).norm() < 1e-12);
}

TEST_CASE("purcell effective decay rate matches the exact propagation fit") {
  const double g = 0.5, kappa = 1.0, eps = 0.02;
  const GKSLModel model = zoo_build("purcell_two_qubit", {{"g", g}, {"kappa", kappa}});
  const FastSlowSplit split = build_fast_slow_split(build_lindbladian(model.fast),
                                                    build_adjoint_lindbladian(model.fast));
  const SlowExpansion slow = expand_slow(split, model.slow, 2);

  CHECK(slow.F[1].norm() < 1e-12); // excitation exchange has no first-order term

  // Rate carried by eps^2 F^(2): the population channel is the most negative
  // eigenvalue of the truncated slow generator.
  const RealMatrix a = eps * slow.F[1] + eps * eps * slow.F[2];
  Eigen::EigenSolver<RealMatrix> es(a);
  double rate_reduced = 0.0;
  for (int i = 0; i < 4; ++i)
    rate_reduced = std::max(rate_reduced, -es.eigenvalues()(i).real());

  const double theory = eps * eps * purcell_effective_rate(g, kappa);
  CHECK(rate_reduced == doctest::Approx(theory).epsilon(1e-6));

  // Brute-force oracle: decay of the qubit-1 excited population under the
  // full generator, fitted past the fast transient.
  ComplexMatrix rho0 = ComplexMatrix::Zero(4, 4);
  rho0(2, 2) = 1.0; // |e g>
  ComplexMatrix pe_op = ComplexMatrix::Zero(4, 4);
  pe_op(2, 2) = 1.0;
  pe_op(3, 3) = 1.0;
  const Superoperator total = total_generator(model, eps);
  std::vector<double> ts, ps;
  for (int k = 0; k < 24; ++k) {
    const double t = 10.0 + k * (2.0 / theory - 10.0) / 23.0;
    ts.push_back(t);
    ps.push_back((pe_op * matrix_exponential_apply(total, t, rho0)).trace().real());
  }
  const RateFit fit = fit_exponential_rate(ts, ps, 1e-14, 0.0);
  CHECK(std::abs(rate_reduced - fit.rate) / fit.rate < 0.05);
}

TEST_CASE("two photon loss: kernel rank is stable under truncation growth") {
  for (double n_max : {6.0, 8.0}) {
    const GKSLModel model = zoo_build("two_photon_loss", {{"n_max", n_max}});
    const FastSlowSplit split = build_fast_slow_split(build_lindbladian(model.fast),
                                                      build_adjoint_lindbladian(model.fast));
    CHECK(split.dbar == 4);
  }
}

TEST_CASE("two photon loss: slow manifold is the Fock qubit block") {
  const GKSLModel model = zoo_build("two_photon_loss");
  const FastSlowSplit split = build_fast_slow_split(build_lindbladian(model.fast),
                                                    build_adjoint_lindbladian(model.fast));
  // Every S_d is supported on span{|0>, |1>}.
  for (const ComplexMatrix& s : split.S) {
    ComplexMatrix outside = s;
    outside.block(0, 0, 2, 2).setZero();
    CHECK(outside.norm() < 1e-10);
  }
}

TEST_CASE("zoo rejects unknown names and invalid parameters") {
  CHECK_THROWS_AS(zoo_build("nonexistent_model"), ReductionError);
  CHECK_THROWS_AS(zoo_build("damped_qubit", {{"kappa", -1.0}}), ReductionError);
  CHECK_THROWS_AS(zoo_build("damped_qubit", {{"not_a_param", 1.0}}), ReductionError);
  CHECK_THROWS_AS(zoo_build("two_photon_loss", {{"n_max", 3.0}}), ReductionError);
  CHECK_THROWS_AS(zoo_build("two_photon_loss", {{"n_max", 5.5}}), ReductionError);
}

TEST_CASE("lambda system keeps odd expansion orders alive") {
  // The ground-manifold splitting breaks the block parity that otherwise
  // forces F^(odd) = 0; the order-scaling checks rely on this.
  const GKSLModel model = zoo_build("lambda_system");
  const FastSlowSplit split = build_fast_slow_split(build_lindbladian(model.fast),
                                                    build_adjoint_lindbladian(model.fast));
  const SlowExpansion slow = expand_slow(split, model.slow, 3);
  CHECK(slow.F[1].norm() > 1e-3);
  CHECK(slow.F[2].norm() > 1e-3);
  CHECK(slow.F[3].norm() > 1e-3);

  // Without the splitting the parity is exact.
  const GKSLModel pure = zoo_build("lambda_system", {{"delta", 0.0}});
  const SlowExpansion pure_slow = expand_slow(split, pure.slow, 3);
  CHECK(pure_slow.F[1].norm() < 1e-12);
  CHECK(pure_slow.F[3].norm() < 1e-12);
  CHECK(pure_slow.F[2].norm() > 1e-3);
}
