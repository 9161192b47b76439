#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace puw {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An infinite sum did not meet its stopping rule within the term cap.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, std::int64_t terms_used)
      : std::runtime_error(what), terms_used_(terms_used) {}
  std::int64_t terms_used() const noexcept { return terms_used_; }

 private:
  std::int64_t terms_used_;
};

/// Input for which a variance is undefined (zero centre of mass, zero norm,
/// negative space variance).
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computed uncertainty product fell below n/2. Only a numerical bug can
/// trigger this.
class BoundViolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact series arithmetic that has no valid result (division by a series
/// with no nonzero coefficient, square root of a non-normalizable series,
/// evaluation at a pole).
class SeriesArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace puw
