#pragma once

#include <stdexcept>
#include <string>

namespace lindred {

enum class ErrorKind {
  DimensionMismatch,
  HypothesisViolated,   // no spectral gap / oscillatory or unstable fast block
  NonSemisimpleKernel,  // algebraic > geometric multiplicity of the zero group
  DegenerateBasis,      // rank loss while orthonormalizing
  IllConditionedSplit,  // biorthogonality matrix close to singular
  SingularResolvent,    // restricted solve failed its residual check
  RecursionInconsistency,
  RegimeExceeded,       // eps outside the validity regime (E singular, ...)
  InvalidArgument,
};

class ReductionError : public std::runtime_error {
public:
  ReductionError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw ReductionError(kind, what);
}

} // namespace lindred
