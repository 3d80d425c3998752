#pragma once

#include <stdexcept>
#include <string>

namespace diophlab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Request exceeds a declared table or enumeration cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature or series failed to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two independent computations that must agree did not.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IrreducibleError : public DomainError {
 public:
  explicit IrreducibleError(const std::string& what)
      : DomainError("IrreducibleError: " + what) {}
};

class SquarePolynomialError : public DomainError {
 public:
  explicit SquarePolynomialError(const std::string& what)
      : DomainError("SquarePolynomialError: " + what) {}
};

class DegreeError : public DomainError {
 public:
  explicit DegreeError(const std::string& what)
      : DomainError("DegreeError: " + what) {}
};

class NotDiophantinePairError : public DomainError {
 public:
  explicit NotDiophantinePairError(const std::string& what)
      : DomainError("NotDiophantinePairError: " + what) {}
};

}  // namespace diophlab
