#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "quasidiff/boundary.hpp"
#include "quasidiff/triple.hpp"

namespace quasidiff {

/// s(x) = x on [0,1), 1 on [1,2), x on [2,3]; m = Lebesgue on [0,3].
Triple example_3_1();

/// Continuous strictly increasing s given by breakpoints on [l, r]. Rejects
/// flat pieces and triples that fail validation.
Triple regular_diffusion(ExtendedReal l, ExtendedReal r, std::vector<Breakpoint> breakpoints,
                         MeasureSpec m);
/// Reflecting Brownian motion on [0, 1].
Triple reflecting_bm();
/// Brownian motion on the real line.
Triple bm_line();
/// Brownian motion on [0, 1] absorbed at 1 (m({1}) = inf).
Triple absorbing_bm();
/// Piecewise-linear interpolation of x^3 on [-1, 1] at n pieces, Lebesgue m.
Triple cubic_diffusion(std::size_t pieces = 8);

/// s(x) = x for x < 0 and 2/kappa + x for x >= 0; m = Lebesgue on R.
Triple snapping_out(double kappa);

/// s = c_k on [k, k+1), m = masses[k] dx on [k, k+1]; I = [0, n].
Triple random_walk(const std::vector<double>& c, const std::vector<double>& masses);
/// Constant-speed walk: the interval masses equal mu_k for the positions c.
Triple constant_speed_walk(const std::vector<double>& c);

/// Death rates a_k (k >= 1) and birth rates b_k (k >= 0).
struct BirthDeathRates {
  std::string name;
  std::function<double(std::size_t)> a;
  std::function<double(std::size_t)> b;
};

/// constant (a = b = 1), linear (a_k = b_k = k + 1),
/// quadratic (a_k = (k+1)^2, b_k = 2 (k+1)^2), entrance (a_k = k^2, b_k = 1).
BirthDeathRates birth_death_family(const std::string& name);

/// Uniqueness criteria evaluated directly from the rates.
struct UniquenessReport {
  std::size_t q_max = 0;
  std::size_t horizon = 0;
  SeriesResult c_infinity;  ///< sum of c_{k+1} - c_k
  SeriesResult total_mass;  ///< sum of pi_k
  SeriesResult series;      ///< sum |c_{k+1} - c_k| sum_{i<=k} pi_i
  bool symmetric_unique = false;  ///< c_infinity or total mass diverges
  bool unique = false;            ///< series diverges
  bool determined = false;
};

struct BirthDeath {
  Triple triple;
  std::vector<double> positions;  ///< c_0..c_q
  std::vector<double> masses;     ///< pi_0..pi_q
  std::vector<double> q_rates;    ///< a_k + b_k (a_q only at the reflecting cut)
  double round_trip_error = 0.0;  ///< chain holding means / jump probabilities vs rates
  UniquenessReport report;
  AtomTail tail;                  ///< continuation past q for feller_classify
};

/// Chain truncated at q_max with a reflecting last state. The tail series use
/// `horizon` terms (default 4 q_max, at least 64).
BirthDeath birth_death(const BirthDeathRates& rates, std::size_t q_max, std::size_t horizon = 0);
/// Explicit rate lists a_1..a_q and b_0..b_{q-1}; no tail.
BirthDeath birth_death(const std::vector<double>& a, const std::vector<double>& b);

enum class CantorVariant { timechange, bm_on_cantor };

/// Depth-d middle-thirds construction repeated on `cells` unit cells of
/// [0, cells]. s(x) = x on K and s = a_k on [a_k, b_k); m = 1_K dx, plus atoms
/// (b_k - a_k)/2 at a_k and b_k for bm_on_cantor.
Triple cantor(std::size_t depth, CantorVariant variant, std::size_t cells = 1);
/// Removed intervals (a_k, b_k) of the depth-d construction on [0, cells].
std::vector<std::pair<double, double>> cantor_gaps(std::size_t depth, std::size_t cells = 1);

/// Gallery entry by name with string-valued parameters (used by the CLI).
Triple gallery_triple(const std::string& name, const std::map<std::string, std::string>& params);
std::vector<std::string> gallery_names();

}  // namespace quasidiff
