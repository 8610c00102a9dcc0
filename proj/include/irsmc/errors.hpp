#pragma once

#include <stdexcept>
#include <string>

namespace irsmc {

/// Invalid argument or a result that left the domain of the model (non-finite, out of range).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two Chu spheres overlap, or elements are placed closer than their radii allow.
class OverlapError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A matrix that must be inverted is singular or numerically so.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, double condition)
      : std::runtime_error(what + " (condition estimate " + std::to_string(condition) + ")"),
        condition_(condition) {}

  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

}  // namespace irsmc
