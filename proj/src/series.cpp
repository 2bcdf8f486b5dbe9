#include "quasidiff/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace quasidiff {

double log_add(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  if (a == INFINITY || b == INFINITY) return INFINITY;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

const char* to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::converges: return "converges";
    case SeriesVerdict::diverges: return "diverges";
    default: return "inconclusive";
  }
}

SeriesResult classify_series(const std::vector<double>& log_terms) {
  SeriesResult out;
  for (double t : log_terms) out.log_partial_sum = log_add(out.log_partial_sum, t);
  if (std::any_of(log_terms.begin(), log_terms.end(), [](double t) { return t == INFINITY; })) {
    out.verdict = SeriesVerdict::diverges;
    out.test = "infinite term";
    return out;
  }
  const std::size_t n = log_terms.size();
  if (n < 8) {
    out.test = "too few terms";
    return out;
  }
  const std::size_t start = n / 2;
  bool all_zero = true;
  bool any_zero = false;
  for (std::size_t k = start; k < n; ++k) {
    all_zero = all_zero && log_terms[k] == -INFINITY;
    any_zero = any_zero || log_terms[k] == -INFINITY;
  }
  if (all_zero) {
    out.verdict = SeriesVerdict::converges;
    out.test = "vanishing tail";
    return out;
  }
  if (any_zero) {
    out.test = "sparse tail";
    return out;
  }

  double r_min = INFINITY, r_max = -INFINITY;
  double raabe_min = INFINITY, raabe_max = -INFINITY;
  for (std::size_t k = start; k + 1 < n; ++k) {
    const double r = log_terms[k + 1] - log_terms[k];
    r_min = std::min(r_min, r);
    r_max = std::max(r_max, r);
    const double raabe = static_cast<double>(k + 1) * std::expm1(-r);
    raabe_min = std::min(raabe_min, raabe);
    raabe_max = std::max(raabe_max, raabe);
  }
  if (r_min >= 0.0) {
    out.verdict = SeriesVerdict::diverges;
    out.test = "non-decreasing terms";
  } else if (r_max <= std::log(0.99)) {
    out.verdict = SeriesVerdict::converges;
    out.test = "ratio";
  } else if (raabe_min >= 1.05) {
    out.verdict = SeriesVerdict::converges;
    out.test = "raabe";
  } else if (raabe_max <= 1.0 + 1e-9) {
    out.verdict = SeriesVerdict::diverges;
    out.test = "raabe";
  } else {
    out.test = "undecided tail";
  }
  return out;
}

}  // namespace quasidiff
