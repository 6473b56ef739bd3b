#ifndef B92_ERRORS_HPP
#define B92_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace b92 {

// Parameter outside its admissible range (alpha, q, m, epsilons, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Subsystem label or factor layout does not match the operation.
class LabelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Matrix is not a density matrix (negative spectrum, bad trace, ...).
class NotAStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Channel is not completely positive where one is required.
class FeasibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A probability that must be positive is zero (empty sift set, n = 0, ...).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleRegionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace b92

#endif  // B92_ERRORS_HPP
