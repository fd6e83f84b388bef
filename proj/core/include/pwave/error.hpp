#ifndef PWAVE_ERROR_HPP_
#define PWAVE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace pwave {

/// An evaluator was asked for a value outside the interval it is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input that makes the requested quantity undefined (e.g. a jump with ul == ur).
class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Should be unreachable for valid inputs; signals a bug or a broken invariant.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed experiment configuration or command-line usage.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pwave

#endif  // PWAVE_ERROR_HPP_
