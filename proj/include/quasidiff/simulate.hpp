#pragma once

#include <cstddef>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "quasidiff/exit_solver.hpp"
#include "quasidiff/measure.hpp"
#include "quasidiff/regularize.hpp"

namespace quasidiff {

// ---- random numbers ---------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t& state);
/// Seed of path `index` under run seed `seed`.
std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index);

/// xoshiro256** with splitmix64 seeding and hand-written variates, so streams
/// do not depend on the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();      ///< in [0, 1)
  double exponential();  ///< mean 1

 private:
  std::uint64_t s_[4];
};

// ---- discretization ---------------------------------------------------------

/// Replaces densities by atoms, one per cell of length <= delta, each carrying
/// the exact cell mass at the cell midpoint. Atoms are kept. Infinite pieces
/// are rejected.
MeasureSpec discretize_measure(const MeasureSpec& m, double delta);

struct DiscretizeOptions {
  double delta = 0.01;
  double lo = -INFINITY;  ///< window; densities are clipped to [lo, hi]
  double hi = INFINITY;
  std::vector<double> anchors;    ///< points that must become atoms
  std::vector<double> pin_left;   ///< gap right ends: first cell's atom sits here
  std::vector<double> pin_right;  ///< gap left ends: last cell's atom sits here
};

/// Windowed discretization with anchors and pinned gap edges.
MeasureSpec discretize_measure(const MeasureSpec& m, const DiscretizeOptions& opt);

/// One end of a simulation window. `absorb` adds a kill state at `position`
/// (atoms at or beyond it are dropped); `reflect`/`none` keep atoms up to and
/// including `position`.
struct WindowEnd {
  double position = 0.0;
  EndBehavior behavior = EndBehavior::reflect;
};

struct ChainSpec {
  double delta = 0.01;
  std::optional<WindowEnd> lo;  ///< defaults from the package endpoints
  std::optional<WindowEnd> hi;
  std::vector<double> anchors;
};

/// Default window: reflect at included endpoints, absorb at finite excluded
/// ones, and truncate infinite ends (behaviour `none`) one span beyond the
/// finite features of the package.
std::pair<WindowEnd, WindowEnd> default_window(const RegularizedPackage& p);

/// Chain on the discretized image measure inside the window. Gap edges
/// without an atom are pinned so that gap crossings are exact.
SkipFreeChain build_chain(const RegularizedPackage& p, const ChainSpec& spec);

/// m_hat({k}) rate(k -> k+1) == m_hat({k+1}) rate(k+1 -> k) to 4 ulps.
bool detailed_balance(const SkipFreeChain& c);

// ---- paths -------------------------------------------------------------------

struct PathEvent {
  double t = 0.0;
  std::size_t state = 0;  ///< chain state index
};

struct PathSample {
  std::vector<PathEvent> events;  ///< starts with (0, x0); empty if not recorded
  double lifetime = INFINITY;     ///< arrival time at an absorbing state
  std::optional<std::size_t> absorbed_at;
  std::uint64_t seed = 0;
  double end_time = 0.0;  ///< min(horizon, lifetime)
  std::vector<std::pair<std::size_t, double>> occupation;  ///< sorted by state
  std::size_t jumps = 0;
  std::size_t edge_up = 0;    ///< jumps k -> k+1 across the tracked edge
  std::size_t edge_down = 0;  ///< jumps k+1 -> k
  std::vector<std::size_t> probe_states;  ///< state at each probe time
};

struct RunOptions {
  bool record_events = true;
  bool record_occupation = true;
  std::optional<std::size_t> track_edge;  ///< left state of the edge to count
  std::vector<double> probe_times;        ///< increasing, within the horizon
};

/// One path; deterministic in `seed`.
PathSample simulate_path(const SkipFreeChain& c, std::size_t x0, double horizon,
                         std::uint64_t seed, const RunOptions& opt = {});

/// Runs fn(i) for i in [0, n) over `threads` workers (0 = hardware).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

std::vector<PathSample> simulate_paths(const SkipFreeChain& c, std::size_t x0, double horizon,
                                       std::size_t n_paths, std::uint64_t seed,
                                       unsigned threads = 0, const RunOptions& opt = {});

double occupation_of(const PathSample& p, std::size_t state);

/// l(t, x) = occupation of x up to t divided by m_hat({x}), as breakpoints
/// (t, l) at every event time and at the end time.
std::vector<std::pair<double, double>> markov_local_time(const PathSample& p, std::size_t state,
                                                         const SkipFreeChain& c);
double markov_local_time_at(const PathSample& p, std::size_t state, const SkipFreeChain& c,
                            double t);

struct ProjectedEvent {
  double t = 0.0;
  double image = 0.0;  ///< position in I_hat
  double x = 0.0;      ///< r(image) in I
};

std::vector<ProjectedEvent> project_unregularized(const PathSample& p, const SkipFreeChain& c,
                                                  const Pullback& r);

/// Every jump moves to a neighbouring state.
bool skip_free_check(const PathSample& p, const SkipFreeChain& c);
/// Every jump's open interval contains none of `states`.
bool skip_free_check(const std::vector<double>& positions, const std::vector<double>& states);

/// CSV rows path_id,t,state[,x] (x only when a pullback is given).
void write_csv(std::ostream& os, const std::vector<PathSample>& paths, const SkipFreeChain& c,
               const Pullback* r = nullptr);

}  // namespace quasidiff
