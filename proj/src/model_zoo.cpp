#include "lindred/model_zoo.hpp"

#include <cmath>
#include <sstream>

namespace lindred {

namespace {

ComplexMatrix zero(Eigen::Index d) { return ComplexMatrix::Zero(d, d); }

ComplexMatrix sigma_minus() {
  ComplexMatrix m = zero(2);
  m(0, 1) = 1.0; // |g><e| with ground = index 0
  return m;
}

ComplexMatrix sigma_x() {
  ComplexMatrix m = zero(2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

ComplexMatrix sigma_z() {
  ComplexMatrix m = zero(2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix annihilation(Eigen::Index dim) {
  ComplexMatrix a = zero(dim);
  for (Eigen::Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

ZooParams merge_params(const ZooEntry& entry, const ZooParams& overrides) {
  ZooParams merged = entry.defaults;
  for (const auto& [key, value] : overrides) {
    if (!merged.count(key)) {
      std::ostringstream msg;
      msg << "zoo model '" << entry.name << "' has no parameter '" << key << "'";
      fail(ErrorKind::InvalidArgument, msg.str());
    }
    merged[key] = value;
  }
  return merged;
}

void require_positive(const std::string& model, const ZooParams& p,
                      std::initializer_list<const char*> keys) {
  for (const char* key : keys) {
    if (!(p.at(key) > 0.0)) {
      std::ostringstream msg;
      msg << "zoo model '" << model << "': parameter '" << key << "' must be positive";
      fail(ErrorKind::InvalidArgument, msg.str());
    }
  }
}

GKSLModel build_damped_qubit(const ZooParams& p) {
  GKSLModel model;
  model.dim = 2;
  model.fast.hamiltonian = zero(2);
  model.fast.collapse_ops = {std::sqrt(p.at("kappa")) * sigma_minus()};
  model.slow.hamiltonian = p.at("drive") * sigma_x();
  return model;
}

GKSLModel build_dephased_qubit(const ZooParams& p) {
  GKSLModel model;
  model.dim = 2;
  model.fast.hamiltonian = zero(2);
  model.fast.collapse_ops = {std::sqrt(p.at("kappa")) * sigma_z()};
  model.slow.hamiltonian = p.at("drive") * sigma_x();
  return model;
}

// Three levels |g0>, |g1>, |e>: fast radiative decay e -> g0/g1 at Gamma/2
// each; slow drive couplings plus a ground-manifold splitting delta. The
// splitting keeps odd expansion orders alive (a pure bilinear drive has a
// block parity that nulls them).
GKSLModel build_lambda_system(const ZooParams& p) {
  const Eigen::Index d = 3;
  GKSLModel model;
  model.dim = d;
  model.fast.hamiltonian = zero(d);
  ComplexMatrix decay0 = zero(d), decay1 = zero(d);
  decay0(0, 2) = std::sqrt(p.at("Gamma") / 2.0);
  decay1(1, 2) = std::sqrt(p.at("Gamma") / 2.0);
  model.fast.collapse_ops = {decay0, decay1};

  ComplexMatrix h1 = zero(d);
  h1(2, 0) = p.at("omega0");
  h1(0, 2) = p.at("omega0");
  h1(2, 1) = p.at("omega1");
  h1(1, 2) = p.at("omega1");
  h1(0, 0) = p.at("delta");
  h1(1, 1) = -p.at("delta");
  model.slow.hamiltonian = h1;
  return model;
}

GKSLModel build_purcell_two_qubit(const ZooParams& p) {
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  GKSLModel model;
  model.dim = 4;
  model.fast.hamiltonian = zero(4);
  model.fast.collapse_ops = {std::sqrt(p.at("kappa")) * kron(id2, sigma_minus())};

  const ComplexMatrix sp = sigma_minus().adjoint();
  model.slow.hamiltonian =
      p.at("g") * (kron(sp, sigma_minus()) + kron(sigma_minus(), sp));
  return model;
}

GKSLModel build_two_photon_loss(const ZooParams& p) {
  const double n_max_raw = p.at("n_max");
  const auto n_max = static_cast<Eigen::Index>(std::llround(n_max_raw));
  if (n_max != n_max_raw || n_max < 4)
    fail(ErrorKind::InvalidArgument,
         "zoo model 'two_photon_loss': n_max must be an integer >= 4");
  require_positive("two_photon_loss", p, {"kappa2", "kappa1"});

  const Eigen::Index d = n_max + 1;
  const ComplexMatrix a = annihilation(d);
  GKSLModel model;
  model.dim = d;
  model.fast.hamiltonian = zero(d);
  model.fast.collapse_ops = {std::sqrt(p.at("kappa2")) * (a * a)};
  // Single-photon loss and detuning act inside the Fock-qubit manifold; the
  // linear drive couples it to the decaying states and makes the reduction
  // genuinely perturbative.
  model.slow.hamiltonian =
      p.at("delta") * (a.adjoint() * a) + p.at("drive") * (a + a.adjoint());
  model.slow.collapse_ops = {std::sqrt(p.at("kappa1")) * a};
  return model;
}

} // namespace

const std::vector<ZooEntry>& zoo_entries() {
  static const std::vector<ZooEntry> entries = {
      {"damped_qubit",
       "amplitude damping kappa D[sigma-] with a slow sigma_x drive",
       {{"kappa", 1.0}, {"drive", 1.0}},
       1,
       0.5,
       "trace conservation forces F(eps) = 0"},
      {"dephased_qubit",
       "dephasing kappa D[sigma_z] with a slow sigma_x drive",
       {{"kappa", 1.0}, {"drive", 0.5}},
       2,
       2.0,
       "kernel = diagonal operators"},
      {"lambda_system",
       "3-level Lambda: excited decay Gamma to two ground states, slow drives "
       "and ground splitting",
       {{"Gamma", 1.0}, {"omega0", 0.4}, {"omega1", 0.3}, {"delta", 0.3}},
       4,
       0.5,
       "ground-manifold Raman dynamics at second order"},
      {"purcell_two_qubit",
       "qubit 1 coupled by excitation exchange to a fast-damped qubit 2",
       {{"kappa", 1.0}, {"g", 0.5}},
       4,
       0.5,
       "second-order effective decay 4 g^2 / kappa"},
      {"two_photon_loss",
       "truncated oscillator with fast two-photon dissipation; slow "
       "single-photon loss, detuning, and a weak linear drive",
       {{"n_max", 6.0}, {"kappa2", 1.0}, {"kappa1", 0.3}, {"delta", 0.2}, {"drive", 0.3}},
       4,
       std::nullopt,
       "Fock {|0>,|1>} block spans a qubit-like manifold"},
  };
  return entries;
}

GKSLModel zoo_build(const std::string& name, const ZooParams& params) {
  for (const ZooEntry& entry : zoo_entries()) {
    if (entry.name != name) continue;
    const ZooParams p = merge_params(entry, params);

    GKSLModel model;
    if (name == "damped_qubit") {
      require_positive(name, p, {"kappa"});
      model = build_damped_qubit(p);
    } else if (name == "dephased_qubit") {
      require_positive(name, p, {"kappa"});
      model = build_dephased_qubit(p);
    } else if (name == "lambda_system") {
      require_positive(name, p, {"Gamma"});
      model = build_lambda_system(p);
    } else if (name == "purcell_two_qubit") {
      require_positive(name, p, {"kappa", "g"});
      model = build_purcell_two_qubit(p);
    } else {
      model = build_two_photon_loss(p);
    }

    if (model.slow.hamiltonian.size() == 0) model.slow.hamiltonian = zero(model.dim);
    if (model.fast.hamiltonian.size() == 0) model.fast.hamiltonian = zero(model.dim);
    model.epsilons = {0.05};
    validate_model(model);
    return model;
  }
  fail(ErrorKind::InvalidArgument, "unknown zoo model '" + name + "'");
}

double purcell_effective_rate(double g, double kappa) { return 4.0 * g * g / kappa; }

} // namespace lindred
