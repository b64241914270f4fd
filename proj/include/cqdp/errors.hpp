#pragma once

#include <stdexcept>
#include <string>

namespace cqdp {

// Bad argument values, dimension mismatches, non-finite entries.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& msg) : std::invalid_argument(msg) {}
};

// A matrix required to be (strictly) positive definite is not.
class NotPositiveDefinite : public std::runtime_error {
 public:
  explicit NotPositiveDefinite(const std::string& msg) : std::runtime_error(msg) {}
};

// Problem size exceeds a hard limit (e.g. 2^n LP columns).
class ResourceLimit : public std::runtime_error {
 public:
  explicit ResourceLimit(const std::string& msg) : std::runtime_error(msg) {}
};

// An iterative routine exhausted its budget without converging.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& msg) : std::runtime_error(msg) {}
};

// A tuple handed to the certifier fails the privacy check it presupposes.
class NotDPAtEps : public std::runtime_error {
 public:
  explicit NotDPAtEps(const std::string& msg) : std::runtime_error(msg) {}
};

// Document text does not match the expected schema.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Document parsed but the values violate a type invariant.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cqdp
