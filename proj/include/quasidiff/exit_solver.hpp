#pragma once

#include <cstddef>
#include <vector>

#include "quasidiff/measure.hpp"
#include "quasidiff/scale.hpp"

namespace quasidiff {

enum class EndBehavior { reflect, absorb, none };
const char* to_string(EndBehavior b);

/// Nearest-neighbour chain on the atoms of a purely atomic image measure.
///
/// An absorbing end means the first (last) state kills the path on arrival;
/// its mass is never used. `none` behaves like reflect at the outermost
/// state and marks an inaccessible end.
struct SkipFreeChain {
  std::vector<double> states;       ///< strictly increasing positions
  std::vector<double> masses;       ///< m_hat({c_k})
  std::vector<double> conductance;  ///< mu_{k,k+1} = 1/(2(c_{k+1}-c_k)), size n-1
  EndBehavior left = EndBehavior::reflect;
  EndBehavior right = EndBehavior::reflect;

  std::size_t size() const { return states.size(); }
  bool absorbing(std::size_t k) const;
  double mu_down(std::size_t k) const;  ///< mu_{k-1,k}, 0 at the left end
  double mu_up(std::size_t k) const;    ///< mu_{k,k+1}, 0 at the right end
  double mu(std::size_t k) const { return mu_down(k) + mu_up(k); }
  double rate_up(std::size_t k) const { return mu_up(k) / masses[k]; }
  double rate_down(std::size_t k) const { return mu_down(k) / masses[k]; }
  /// Mean holding time m_hat({c_k}) / mu_k (inf when mu_k = 0).
  double holding_mean(std::size_t k) const;
  double p_up(std::size_t k) const { return mu_up(k) / mu(k); }

  /// Index of the state at position x; throws DomainError when absent.
  std::size_t index_of(double x) const;
  /// Index of the state closest to x.
  std::size_t nearest(double x) const;
};

/// Chain whose states are the atoms of `atomic` (finite positions only).
/// An absorbing end state gets the given mass (typically 0 for a kill point).
SkipFreeChain build_chain(const MeasureSpec& atomic, EndBehavior left, EndBehavior right);

/// (x - a) / (b - a) on natural scale.
double hitting_probability(double x, double a, double b);
/// (s(x) - s(a)) / (s(b) - s(a)).
double hitting_probability(double x, double a, double b, const GeneralizedScale& s);

/// P(hit states[hi] before states[lo]) from the embedded jump chain.
std::vector<double> gambler_ruin(const SkipFreeChain& c, std::size_t lo, std::size_t hi);

/// Solves, for lo < k < hi, the generator equation
///   mu_{k-1,k} (h_{k-1} - h_k) + mu_{k,k+1} (h_{k+1} - h_k) = -rhs_k
/// with h = 0 at absorbing window ends and a one-sided row at reflecting ones.
/// Returns h on lo..hi.
std::vector<double> solve_generator(const SkipFreeChain& c, std::size_t lo, std::size_t hi,
                                    bool absorb_lo, bool absorb_hi, const std::vector<double>& rhs);

/// h_{a,b}(c_k) = E_k(T_a ^ T_b) on lo..hi.
std::vector<double> exit_time_oracle(const SkipFreeChain& c, std::size_t lo, std::size_t hi);

/// E_k[T^j] for j = 1..order on lo..hi (row j-1 of the result).
std::vector<std::vector<double>> exit_moments(const SkipFreeChain& c, std::size_t lo,
                                              std::size_t hi, int order);

struct RecoveredSpeed {
  std::vector<double> positions;  ///< interior states
  std::vector<double> masses;     ///< -1/2 (h'_+ - h'_-)
  bool concave = true;
  double worst_violation = 0.0;  ///< most negative recovered mass (0 if concave)
};

RecoveredSpeed speed_from_exit_times(const std::vector<double>& h,
                                     const std::vector<double>& states);

}  // namespace quasidiff
