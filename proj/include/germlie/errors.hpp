#pragma once

#include <stdexcept>
#include <string>

namespace germlie {

/// Mismatched shapes: anchors, coefficient spaces, levels, anchor sets.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An input lies outside the domain where an operation is defined or certified
/// (singular constant term, exhausted convergence budget, radius too large, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A user-supplied evaluator returned non-finite values.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of a check was violated by its parameters.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace germlie
