#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace reform {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document; `what()` carries the location.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A network (or model) failed its invariants after parsing.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& msg, std::vector<std::string> violations)
      : Error(msg), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Pipeline produced or received a structure that breaks a graph invariant.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class InconsistentEvidence : public Error {
 public:
  using Error::Error;
};

class JointTooLarge : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

class BoundaryError : public Error {
 public:
  using Error::Error;
};

class NoFeasibleTarget : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace reform
