#include "puw/summation.hpp"

namespace puw {

void SeriesTruncation::validate() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-6)) {
    throw DomainError("truncation: rel_tol must lie in (0, 1e-6]");
  }
  if (min_terms < 1) {
    throw DomainError("truncation: min_terms must be >= 1");
  }
  if (max_terms < min_terms) {
    throw DomainError("truncation: max_terms must be >= min_terms");
  }
}

}  // namespace puw
