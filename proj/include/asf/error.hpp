#pragma once

#include <stdexcept>
#include <string>

namespace asf {

/// Bad arguments from a caller: non-prime characteristic, unknown family, parity mismatch.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An argument outside the mathematical domain of an operation (element not in the stated subfield,
/// degenerate conic, non-invertible substitution).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A root or point needed by the computation does not live in the ambient field.
class InsufficientField : public std::runtime_error {
public:
  InsufficientField(const std::string& what, unsigned needed_degree)
      : std::runtime_error(what + " (needs ambient degree " + std::to_string(needed_degree) + ")"),
        needed_degree_(needed_degree) {}

  unsigned needed_degree() const noexcept { return needed_degree_; }

private:
  unsigned needed_degree_;
};

/// Two independent computations that must agree did not.
class ConsistencyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Point counts that admit no valid L-polynomial for the claimed genus.
class OracleInconsistency : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace asf
