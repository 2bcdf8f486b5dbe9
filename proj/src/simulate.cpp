#include "quasidiff/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <limits>
#include <thread>

namespace quasidiff {

// ---- random numbers ---------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t st = seed;
  const std::uint64_t a = splitmix64(st);
  st = a ^ (index * 0xD1B54A32D192ED03ULL);
  return splitmix64(st);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t st = seed;
  for (auto& w : s_) w = splitmix64(st);
}

std::uint64_t Rng::next() {
  const auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::exponential() { return -std::log1p(-uniform()); }

// ---- discretization ---------------------------------------------------------

MeasureSpec discretize_measure(const MeasureSpec& m, double delta) {
  DiscretizeOptions opt;
  opt.delta = delta;
  return discretize_measure(m, opt);
}

namespace {

enum class Pin { center, left, right };

struct Forced {
  double x;
  Pin pin;
};

void fill_uniform(double u, double v, double density, double delta, std::vector<PointMass>& out) {
  const double len = v - u;
  if (!(len > 0.0)) return;
  const auto cells = static_cast<std::size_t>(std::ceil(len / delta - 1e-12));
  const std::size_t n = std::max<std::size_t>(cells, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = u + len * static_cast<double>(i) / static_cast<double>(n);
    const double b = i + 1 == n ? v : u + len * static_cast<double>(i + 1) / static_cast<double>(n);
    out.push_back({0.5 * (a + b), density * (b - a)});
  }
}

void discretize_piece(double u, double v, double density, const DiscretizeOptions& opt,
                      std::vector<PointMass>& out) {
  std::vector<Forced> forced;
  for (double a : opt.anchors)
    if (a >= u && a <= v) forced.push_back({a, a == u ? Pin::left : a == v ? Pin::right : Pin::center});
  for (double a : opt.pin_left)
    if (a == u) forced.push_back({a, Pin::left});
  for (double a : opt.pin_right)
    if (a == v) forced.push_back({a, Pin::right});
  std::sort(forced.begin(), forced.end(), [](const Forced& a, const Forced& b) { return a.x < b.x; });
  forced.erase(std::unique(forced.begin(), forced.end(),
                           [](const Forced& a, const Forced& b) { return a.x == b.x; }),
               forced.end());

  const double d = opt.delta;
  double cursor = u;
  for (std::size_t i = 0; i < forced.size(); ++i) {
    const double x = forced[i].x;
    const double prev = i == 0 ? x - u : (x - forced[i - 1].x) / 2.0;
    const double next = i + 1 == forced.size() ? v - x : (forced[i + 1].x - x) / 2.0;
    double el = 0.0, er = 0.0;
    switch (forced[i].pin) {
      case Pin::center:
        el = std::min(d / 2.0, prev);
        er = std::min(d / 2.0, next);
        break;
      case Pin::left: er = std::min(d, next); break;
      case Pin::right: el = std::min(d, prev); break;
    }
    fill_uniform(cursor, x - el, density, d, out);
    if (el + er > 0.0) out.push_back({x, density * (el + er)});
    cursor = x + er;
  }
  fill_uniform(cursor, v, density, d, out);
}

}  // namespace

MeasureSpec discretize_measure(const MeasureSpec& m, const DiscretizeOptions& opt) {
  if (!(opt.delta > 0.0)) throw DomainError("discretize_measure needs delta > 0");
  std::vector<PointMass> atoms;
  for (const auto& a : m.atoms()) {
    if (!a.x.is_finite()) continue;
    if (a.x.value() >= opt.lo && a.x.value() <= opt.hi) atoms.push_back(a);
  }
  for (const auto& p : m.pieces()) {
    const double u = std::max(p.a.as_double(), opt.lo);
    const double v = std::min(p.b.as_double(), opt.hi);
    if (!(v > u)) continue;
    if (!std::isfinite(u) || !std::isfinite(v))
      throw DomainError("cannot discretize an unbounded density piece; give a finite window");
    discretize_piece(u, v, p.density, opt, atoms);
  }
  return MeasureSpec({}, std::move(atoms));
}

std::pair<WindowEnd, WindowEnd> default_window(const RegularizedPackage& p) {
  double lo_f = INFINITY, hi_f = -INFINITY;
  const auto see = [&](ExtendedReal x) {
    if (!x.is_finite()) return;
    lo_f = std::min(lo_f, x.value());
    hi_f = std::max(hi_f, x.value());
  };
  for (const auto& c : p.set.components) {
    see(c.lo);
    see(c.hi);
  }
  for (const auto& a : p.measure.atoms()) see(a.x);
  for (const auto& q : p.measure.pieces()) {
    see(q.a);
    see(q.b);
  }
  if (!(lo_f <= hi_f)) lo_f = hi_f = 0.0;
  const double span = std::max(1.0, hi_f - lo_f);
  WindowEnd lo, hi;
  if (p.set.l_hat.is_finite()) {
    lo = {p.set.l_hat.value(), p.set.include_l ? EndBehavior::reflect : EndBehavior::absorb};
  } else {
    lo = {lo_f - span, EndBehavior::none};
  }
  if (p.set.r_hat.is_finite()) {
    hi = {p.set.r_hat.value(), p.set.include_r ? EndBehavior::reflect : EndBehavior::absorb};
  } else {
    hi = {hi_f + span, EndBehavior::none};
  }
  return {lo, hi};
}

SkipFreeChain build_chain(const RegularizedPackage& p, const ChainSpec& spec) {
  auto [lo, hi] = default_window(p);
  if (spec.lo) lo = *spec.lo;
  if (spec.hi) hi = *spec.hi;
  if (!(lo.position < hi.position)) throw DomainError("chain window needs lo < hi");

  DiscretizeOptions opt;
  opt.delta = spec.delta;
  opt.lo = lo.position;
  opt.hi = hi.position;
  opt.anchors = spec.anchors;
  for (const auto& g : p.gaps) {
    if (!(p.measure.atom_at(g.a) > 0.0)) opt.pin_right.push_back(g.a);
    if (!(p.measure.atom_at(g.b) > 0.0)) opt.pin_left.push_back(g.b);
  }
  const MeasureSpec atomic = discretize_measure(p.measure, opt);

  SkipFreeChain c;
  c.left = lo.behavior;
  c.right = hi.behavior;
  if (lo.behavior == EndBehavior::absorb) {
    c.states.push_back(lo.position);
    c.masses.push_back(0.0);
  }
  for (const auto& a : atomic.atoms()) {
    const double x = a.x.value();
    if (lo.behavior == EndBehavior::absorb && !(x > lo.position)) continue;
    if (hi.behavior == EndBehavior::absorb && !(x < hi.position)) continue;
    c.states.push_back(x);
    c.masses.push_back(a.mass.value());
  }
  if (hi.behavior == EndBehavior::absorb) {
    c.states.push_back(hi.position);
    c.masses.push_back(0.0);
  }
  const std::size_t kills = (lo.behavior == EndBehavior::absorb) + (hi.behavior == EndBehavior::absorb);
  // Two kill states with nothing between them is a valid (trivial) window.
  if (c.states.size() <= kills && kills < 2) throw DomainError("chain window contains no atoms");
  for (std::size_t k = 0; k + 1 < c.states.size(); ++k)
    c.conductance.push_back(1.0 / (2.0 * (c.states[k + 1] - c.states[k])));
  return c;
}

bool detailed_balance(const SkipFreeChain& c) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t k = 0; k + 1 < c.size(); ++k) {
    if (c.absorbing(k) || c.absorbing(k + 1)) continue;
    const double lhs = c.masses[k] * c.rate_up(k);
    const double rhs = c.masses[k + 1] * c.rate_down(k + 1);
    if (std::abs(lhs - rhs) > 4.0 * eps * std::max(std::abs(lhs), std::abs(rhs))) return false;
  }
  return true;
}

// ---- paths -------------------------------------------------------------------

PathSample simulate_path(const SkipFreeChain& c, std::size_t x0, double horizon,
                         std::uint64_t seed, const RunOptions& opt) {
  if (x0 >= c.size()) throw DomainError("start state outside the chain");
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  PathSample p;
  p.seed = seed;
  Rng rng(seed);
  std::vector<double> occ;
  if (opt.record_occupation) occ.assign(c.size(), 0.0);
  double occ_lo = 0.0, occ_hi = 0.0;
  const std::size_t edge = opt.track_edge.value_or(c.size());
  std::size_t probe = 0;

  std::size_t k = x0;
  double t = 0.0;
  if (opt.record_events) p.events.push_back({0.0, k});
  for (;;) {
    if (c.absorbing(k)) {
      p.lifetime = t;
      p.absorbed_at = k;
      p.end_time = t;
      break;
    }
    const double mu = c.mu(k);
    const double hold = mu > 0.0 ? c.masses[k] / mu * rng.exponential() : INFINITY;
    const double until = std::min(t + hold, horizon);
    while (probe < opt.probe_times.size() && opt.probe_times[probe] < t + hold) {
      p.probe_states.push_back(k);
      ++probe;
    }
    const double dwell = until - t;
    if (opt.record_occupation) occ[k] += dwell;
    if (k == edge) occ_lo += dwell;
    if (k == edge + 1) occ_hi += dwell;
    if (t + hold >= horizon) {
      p.end_time = horizon;
      break;
    }
    t += hold;
    const double up = c.mu_up(k) / mu;
    const std::size_t next = rng.uniform() < up ? k + 1 : k - 1;
    if (k == edge && next == edge + 1) ++p.edge_up;
    if (k == edge + 1 && next == edge) ++p.edge_down;
    k = next;
    ++p.jumps;
    if (opt.record_events) p.events.push_back({t, k});
  }
  while (probe < opt.probe_times.size()) {
    p.probe_states.push_back(k);
    ++probe;
  }
  if (opt.record_occupation) {
    for (std::size_t i = 0; i < occ.size(); ++i)
      if (occ[i] > 0.0) p.occupation.emplace_back(i, occ[i]);
  } else if (opt.track_edge && edge + 1 < c.size()) {
    p.occupation = {{edge, occ_lo}, {edge + 1, occ_hi}};
  }
  return p;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

std::vector<PathSample> simulate_paths(const SkipFreeChain& c, std::size_t x0, double horizon,
                                       std::size_t n_paths, std::uint64_t seed, unsigned threads,
                                       const RunOptions& opt) {
  if (n_paths == 0) throw DomainError("n_paths must be at least 1");
  std::vector<PathSample> out(n_paths);
  parallel_for(n_paths, threads, [&](std::size_t i) {
    out[i] = simulate_path(c, x0, horizon, path_seed(seed, i), opt);
  });
  return out;
}

double occupation_of(const PathSample& p, std::size_t state) {
  for (const auto& [s, t] : p.occupation)
    if (s == state) return t;
  return 0.0;
}

namespace {

double local_time_mass(const SkipFreeChain& c, std::size_t state) {
  if (state >= c.size()) throw DomainError("local time: state outside the chain");
  const double m = c.masses[state];
  if (!(m > 0.0) || !std::isfinite(m))
    throw DomainError("local time needs a positive finite atom at the state");
  return m;
}

}  // namespace

std::vector<std::pair<double, double>> markov_local_time(const PathSample& p, std::size_t state,
                                                         const SkipFreeChain& c) {
  const double m = local_time_mass(c, state);
  if (p.events.empty()) throw DomainError("local time trajectory needs recorded events");
  std::vector<std::pair<double, double>> out;
  double ell = 0.0;
  for (std::size_t i = 0; i < p.events.size(); ++i) {
    out.emplace_back(p.events[i].t, ell);
    const double t_next = i + 1 < p.events.size() ? p.events[i + 1].t : p.end_time;
    if (p.events[i].state == state) ell += (t_next - p.events[i].t) / m;
  }
  out.emplace_back(p.end_time, ell);
  return out;
}

double markov_local_time_at(const PathSample& p, std::size_t state, const SkipFreeChain& c,
                            double t) {
  const double m = local_time_mass(c, state);
  if (p.events.empty()) throw DomainError("local time needs recorded events");
  double occ = 0.0;
  for (std::size_t i = 0; i < p.events.size(); ++i) {
    const double a = p.events[i].t;
    if (a >= t) break;
    const double b = std::min(t, i + 1 < p.events.size() ? p.events[i + 1].t : p.end_time);
    if (p.events[i].state == state && b > a) occ += b - a;
  }
  return occ / m;
}

std::vector<ProjectedEvent> project_unregularized(const PathSample& p, const SkipFreeChain& c,
                                                  const Pullback& r) {
  std::vector<ProjectedEvent> out;
  out.reserve(p.events.size());
  for (const auto& e : p.events) {
    const double y = c.states[e.state];
    double x = std::numeric_limits<double>::quiet_NaN();
    try {
      x = r(y);
    } catch (const DomainError&) {
      // absorbing kill point outside the image set
    }
    out.push_back({e.t, y, x});
  }
  return out;
}

bool skip_free_check(const PathSample& p, const SkipFreeChain& c) {
  for (std::size_t i = 1; i < p.events.size(); ++i) {
    const std::size_t a = p.events[i - 1].state, b = p.events[i].state;
    if (a >= c.size() || b >= c.size()) return false;
    if ((a > b ? a - b : b - a) != 1) return false;
  }
  return true;
}

bool skip_free_check(const std::vector<double>& positions, const std::vector<double>& states) {
  for (std::size_t i = 1; i < positions.size(); ++i) {
    const double lo = std::min(positions[i - 1], positions[i]);
    const double hi = std::max(positions[i - 1], positions[i]);
    auto it = std::upper_bound(states.begin(), states.end(), lo);
    if (it != states.end() && *it < hi) return false;
  }
  return true;
}

void write_csv(std::ostream& os, const std::vector<PathSample>& paths, const SkipFreeChain& c,
               const Pullback* r) {
  os << "path_id,t,state" << (r ? ",x" : "") << '\n';
  char buf[128];
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (r) {
      for (const auto& e : project_unregularized(paths[i], c, *r)) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", i, e.t, e.image, e.x);
        os << buf;
      }
    } else {
      for (const auto& e : paths[i].events) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, e.t, c.states[e.state]);
        os << buf;
      }
    }
  }
}

}  // namespace quasidiff
