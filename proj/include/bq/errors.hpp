#pragma once

#include <stdexcept>
#include <string>

namespace bq {

/// Base for all library errors. `label()` names the offending field or
/// parameter so callers (and the CLI) can report it without parsing text.
class Error : public std::runtime_error {
 public:
  Error(std::string label, const std::string& message)
      : std::runtime_error(label + ": " + message), label_(std::move(label)) {}

  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

/// Bad arguments: unknown labels, out-of-range parameters, mismatched sizes.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A matrix or distribution that violates a domain invariant (trace,
/// Hermiticity, positivity, normalization).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed state/POVM files. The label carries line/field context.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: projection did not converge, infeasible candidates.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Problem size exceeds the configured dimension cap.
class CapError : public Error {
 public:
  using Error::Error;
};

}  // namespace bq
