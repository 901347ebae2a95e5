#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace oddform {

enum class Errc {
  malformed_spec,
  invalid_symmetry,
  invalid_mu,
  non_unit_lambda,
  context_mismatch,
  unsupported_exponent,
  generator_outside_delta_max,
  generator_outside_omega_max,
  closure_escapes_omega_max,
  bad_indices,
  not_in_parameter,
  precondition_violated,
  not_invertible,
  not_unitary,
  budget_exceeded,
  not_closed,
  bad_arguments,
  invalid_indices,
};

inline std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::malformed_spec: return "MalformedSpec";
    case Errc::invalid_symmetry: return "InvalidSymmetry";
    case Errc::invalid_mu: return "InvalidMu";
    case Errc::non_unit_lambda: return "NonUnitLambda";
    case Errc::context_mismatch: return "ContextMismatch";
    case Errc::unsupported_exponent: return "UnsupportedExponent";
    case Errc::generator_outside_delta_max: return "GeneratorOutsideDeltaMax";
    case Errc::generator_outside_omega_max: return "GeneratorOutsideOmegaMax";
    case Errc::closure_escapes_omega_max: return "ClosureEscapesOmegaMax";
    case Errc::bad_indices: return "BadIndices";
    case Errc::not_in_parameter: return "NotInParameter";
    case Errc::precondition_violated: return "PreconditionViolated";
    case Errc::not_invertible: return "NotInvertible";
    case Errc::not_unitary: return "NotUnitary";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::not_closed: return "NotClosed";
    case Errc::bad_arguments: return "BadArguments";
    case Errc::invalid_indices: return "InvalidIndices";
  }
  return "Unknown";
}

/// Library-wide exception; `code()` identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Thrown by the closure engine when the element budget is exhausted.
class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(std::size_t partial)
      : Error(Errc::budget_exceeded, "partial size " + std::to_string(partial)),
        partial_size_(partial) {}

  std::size_t partial_size() const noexcept { return partial_size_; }

 private:
  std::size_t partial_size_;
};

}  // namespace oddform
