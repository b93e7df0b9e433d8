#include "lindred/lindblad.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace lindred {

namespace {
const Complex kImag(0.0, 1.0);
}

void validate_generator_spec(const GeneratorSpec& spec, double hermiticity_tol) {
  const Eigen::Index d = spec.hamiltonian.rows();
  if (d == 0 || spec.hamiltonian.cols() != d)
    fail(ErrorKind::DimensionMismatch, "generator: Hamiltonian must be square and nonempty");
  if (hermiticity_defect(spec.hamiltonian) > hermiticity_tol)
    fail(ErrorKind::InvalidArgument, "generator: Hamiltonian is not Hermitian");
  for (const ComplexMatrix& l : spec.collapse_ops)
    if (l.rows() != d || l.cols() != d)
      fail(ErrorKind::DimensionMismatch, "generator: collapse operator dimension mismatch");
  if (!spec.hamiltonian.allFinite())
    fail(ErrorKind::InvalidArgument, "generator: non-finite Hamiltonian entries");
  for (const ComplexMatrix& l : spec.collapse_ops)
    if (!l.allFinite())
      fail(ErrorKind::InvalidArgument, "generator: non-finite collapse entries");
}

void validate_model(const GKSLModel& model, double hermiticity_tol) {
  validate_generator_spec(model.fast, hermiticity_tol);
  validate_generator_spec(model.slow, hermiticity_tol);
  if (model.fast.dim() != model.dim || model.slow.dim() != model.dim)
    fail(ErrorKind::DimensionMismatch, "model: fast and slow generators must share dim");
  for (double eps : model.epsilons)
    if (!(eps > 0.0))
      fail(ErrorKind::InvalidArgument, "model: epsilon must be positive");
}

ComplexMatrix apply_generator(const GeneratorSpec& spec, const ComplexMatrix& x) {
  ComplexMatrix out = -kImag * (spec.hamiltonian * x - x * spec.hamiltonian);
  for (const ComplexMatrix& l : spec.collapse_ops) {
    const ComplexMatrix ldl = l.adjoint() * l;
    out += l * x * l.adjoint() - 0.5 * (ldl * x + x * ldl);
  }
  return out;
}

ComplexMatrix apply_adjoint_generator(const GeneratorSpec& spec, const ComplexMatrix& w) {
  ComplexMatrix out = kImag * (spec.hamiltonian * w - w * spec.hamiltonian);
  for (const ComplexMatrix& l : spec.collapse_ops) {
    const ComplexMatrix ldl = l.adjoint() * l;
    out += l.adjoint() * w * l - 0.5 * (ldl * w + w * ldl);
  }
  return out;
}

Superoperator build_lindbladian(const GeneratorSpec& spec) {
  validate_generator_spec(spec);
  const Eigen::Index d = spec.dim();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);

  // Column stacking: vec(A X B) = (B^T kron A) vec(X).
  ComplexMatrix m = -kImag * (Eigen::kroneckerProduct(id, spec.hamiltonian) -
                              Eigen::kroneckerProduct(spec.hamiltonian.transpose(), id));
  for (const ComplexMatrix& l : spec.collapse_ops) {
    const ComplexMatrix ldl = l.adjoint() * l;
    m += Eigen::kroneckerProduct(l.conjugate(), l);
    m -= 0.5 * Eigen::kroneckerProduct(id, ldl);
    m -= 0.5 * Eigen::kroneckerProduct(ldl.transpose(), id);
  }
  return {d, std::move(m)};
}

Superoperator build_adjoint_lindbladian(const GeneratorSpec& spec) {
  validate_generator_spec(spec);
  const Eigen::Index d = spec.dim();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);

  ComplexMatrix m = kImag * (Eigen::kroneckerProduct(id, spec.hamiltonian) -
                             Eigen::kroneckerProduct(spec.hamiltonian.transpose(), id));
  for (const ComplexMatrix& l : spec.collapse_ops) {
    const ComplexMatrix ldl = l.adjoint() * l;
    m += Eigen::kroneckerProduct(l.transpose(), l.adjoint());
    m -= 0.5 * Eigen::kroneckerProduct(id, ldl);
    m -= 0.5 * Eigen::kroneckerProduct(ldl.transpose(), id);
  }
  return {d, std::move(m)};
}

Superoperator total_generator(const GKSLModel& model, double eps) {
  if (eps < 0.0) fail(ErrorKind::InvalidArgument, "total_generator: eps must be >= 0");
  const Superoperator l0 = build_lindbladian(model.fast);
  const Superoperator l1 = build_lindbladian(model.slow);
  return {model.dim, l0.matrix + eps * l1.matrix};
}

} // namespace lindred
