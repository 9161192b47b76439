#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "puw/errors.hpp"

namespace puw {

/// Stopping policy shared by every infinite sum in the library.
struct SeriesTruncation {
  double rel_tol = 1e-14;
  std::int64_t min_terms = 16;
  std::int64_t max_terms = 10'000'000;

  /// Throws DomainError unless 0 < rel_tol <= 1e-6 and
  /// 1 <= min_terms <= max_terms.
  void validate() const;
};

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct SumDiagnostics {
  std::int64_t terms_used = 0;
  /// Estimated neglected tail relative to the partial sum (geometric
  /// extrapolation of the last term ratio), maximised over components.
  double tail_estimate = 0.0;
};

template <std::size_t K>
struct SeriesSums {
  std::array<double, K> values{};
  SumDiagnostics diagnostics;
};

/// Sums K series sharing a summation index l = first, first+1, ... .
///
/// `term(l)` returns the K terms at index l. Summation stops once, for three
/// consecutive indices at or beyond `peak_degree`, every component term is
/// no larger than its predecessor, and both the term and the geometric tail
/// extrapolated from the last ratio are at most rel_tol times its partial
/// sum. The peak requirement matters for small scales, where terms
/// grow for a long stretch before they decay.
template <std::size_t K, class TermFn>
SeriesSums<K> sum_until_converged(TermFn&& term, std::int64_t first, double peak_degree,
                                  const SeriesTruncation& trunc, std::string_view what) {
  std::array<CompensatedSum, K> acc{};
  std::array<double, K> prev{};
  std::array<double, K> last{};
  int quiet_streak = 0;
  std::int64_t count = 0;
  for (std::int64_t l = first;; ++l) {
    if (count >= trunc.max_terms) {
      throw TruncationError(std::string(what) + ": no convergence within " +
                                std::to_string(trunc.max_terms) + " terms",
                            count);
    }
    const std::array<double, K> t = term(l);
    ++count;
    bool quiet = count >= trunc.min_terms && static_cast<double>(l) >= peak_degree;
    for (std::size_t k = 0; k < K; ++k) {
      if (!std::isfinite(t[k])) {
        throw DomainError(std::string(what) + ": non-finite term at l = " + std::to_string(l));
      }
      acc[k].add(t[k]);
      const double mag = std::abs(t[k]);
      if (count > 1 && mag > std::abs(prev[k])) {
        quiet = false;
      }
      // The geometric tail implied by the last ratio must also be small:
      // for slowly decaying terms the remainder is many times the last term.
      const double pmag = std::abs(prev[k]);
      double tail = mag;
      if (count > 1 && mag > 0.0) {
        tail = mag < pmag ? mag * (mag / pmag) / (1.0 - mag / pmag) : std::numeric_limits<double>::infinity();
      }
      const double limit = trunc.rel_tol * std::abs(acc[k].value());
      if (mag > limit || tail > limit) {
        quiet = false;
      }
    }
    last = t;
    quiet_streak = quiet ? quiet_streak + 1 : 0;
    if (quiet_streak >= 3) {
      break;
    }
    prev = t;
  }

  SeriesSums<K> out;
  out.diagnostics.terms_used = count;
  for (std::size_t k = 0; k < K; ++k) {
    out.values[k] = acc[k].value();
    const double s = std::abs(out.values[k]);
    const double a = std::abs(last[k]);
    const double p = std::abs(prev[k]);
    double tail = 0.0;
    if (a > 0.0 && s > 0.0) {
      const double q = p > 0.0 ? a / p : 1.0;
      tail = q < 1.0 ? a * q / (1.0 - q) / s : a / s;
    }
    out.diagnostics.tail_estimate = std::max(out.diagnostics.tail_estimate, tail);
  }
  return out;
}

}  // namespace puw
