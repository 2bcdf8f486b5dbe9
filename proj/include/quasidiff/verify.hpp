#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quasidiff/regularize.hpp"
#include "quasidiff/simulate.hpp"

namespace quasidiff {

/// One Monte Carlo estimate against its exact reference.
struct McComparison {
  std::string label;
  double estimate = 0.0;
  double stderr_ = 0.0;
  double reference = 0.0;
  double z = 0.0;
  std::size_t n = 0;
  double truncated_fraction = 0.0;
  double horizon = 0.0;

  bool passed(double gate = 4.0) const { return std::abs(z) <= gate; }
};

struct McConfig {
  std::size_t n_paths = 200000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  double delta = 0.05;  ///< discretization of density pieces
};

/// z-score of estimate vs reference; 0 when both agree with zero stderr.
double z_score(double estimate, double reference, double stderr_);

/// Chain on (a, b) with kill states at a and b and x as a state.
SkipFreeChain window_chain(const RegularizedPackage& p, double x, double a, double b,
                           double delta);

/// Horizon making the predicted truncation effect < 1e-3 of `stderr_`:
/// min over k of (E[T^k] / target)^(1/(k - shift)).
double truncation_horizon(const std::vector<std::vector<double>>& moments, std::size_t ix,
                          double target, int shift);

McComparison mc_hitting(const RegularizedPackage& p, double x, double a, double b,
                        const McConfig& cfg);
McComparison mc_exit_time(const RegularizedPackage& p, double x, double a, double b,
                          const McConfig& cfg);

/// Largest relative error of -1/2 h'' against the chain masses, h from the
/// exact exit-time solve on the full window.
double oracle_round_trip_error(const SkipFreeChain& c);

struct SpeedLevel {
  double delta = 0.0;
  std::vector<double> positions;
  std::vector<double> recovered;
  std::vector<double> chain_masses;
  double cumulative_error = 0.0;    ///< sup |recovered cumulative - m_hat((a, y])|
  double mean_relative_error = 0.0; ///< mean |recovered - chain mass| / chain mass
  bool concave = true;
};

struct SpeedRecovery {
  std::vector<SpeedLevel> levels;
  std::vector<double> ratios;  ///< cumulative_error(level i+1) / cumulative_error(level i)
  bool decreasing = true;
};

/// Recovers the speed measure on (a, b) from Monte Carlo exit times at each
/// delta (n_paths per state).
SpeedRecovery mc_speed_recovery(const RegularizedPackage& p, double a, double b,
                                const std::vector<double>& deltas, const McConfig& cfg);

struct JumpRateResult {
  double lambda = 0.0;  ///< 1 / gap length
  McComparison up;      ///< jumps a -> b vs lambda * local time at a
  McComparison down;    ///< jumps b -> a vs lambda * local time at b
};

/// Jump counts across gap `k` by time t against lambda_k times the local time
/// at the gap end, with local time occupation / (2 m_hat) on the chain.
JumpRateResult mc_jump_rate_martingale(const RegularizedPackage& p, std::size_t gap, double x0,
                                       double t, const ChainSpec& spec, const McConfig& cfg);

/// E[X_{t ^ T}] - x at each grid time for the chain killed at a and b.
std::vector<McComparison> mc_martingale_scale(const RegularizedPackage& p, double x, double a,
                                              double b, const std::vector<double>& times,
                                              const McConfig& cfg);

struct SuiteOptions {
  std::string suite = "all";  ///< hitting, exit, speed, jumps, martingale, all
  std::optional<double> x, a, b;
  McConfig mc;
  std::vector<double> jump_times{1.0, 4.0};
  std::vector<double> martingale_times{0.0, 0.25, 0.5, 1.0, 2.0};
};

struct SuiteReport {
  std::vector<McComparison> comparisons;
  std::optional<SpeedRecovery> speed;
  double round_trip_error = 0.0;
  double x = 0.0, a = 0.0, b = 0.0;
  std::vector<std::string> skipped;  ///< checks with nothing to test, and why
  bool passed = true;
};

SuiteReport run_suite(const RegularizedPackage& p, const SuiteOptions& opt);

}  // namespace quasidiff
