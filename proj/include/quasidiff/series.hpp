#pragma once

#include <string>
#include <vector>

namespace quasidiff {

enum class SeriesVerdict { converges, diverges, inconclusive };

struct SeriesResult {
  SeriesVerdict verdict = SeriesVerdict::inconclusive;
  double log_partial_sum = -1.0 / 0.0;  ///< log of the sum of the supplied terms
  std::string test;                      ///< which tail test decided
};

/// log(exp(a) + exp(b)) without overflow.
double log_add(double a, double b);

/// Decides convergence of a positive series from the log of its first N terms.
///
/// Uses the tail half of the terms: monotone growth (divergence), the ratio
/// test, and Raabe's test. Reports inconclusive when none applies. A term of
/// log value +inf means an infinite term; -inf means a zero term.
SeriesResult classify_series(const std::vector<double>& log_terms);

const char* to_string(SeriesVerdict v);

}  // namespace quasidiff
