#include "quasidiff/verify.hpp"

#include <algorithm>
#include <cmath>

namespace quasidiff {

double z_score(double estimate, double reference, double stderr_) {
  const double diff = estimate - reference;
  if (stderr_ > 0.0) return diff / stderr_;
  return diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
}

namespace {

struct Moments {
  double mean = 0.0;
  double stderr_ = 0.0;
};

Moments sample_moments(const std::vector<double>& v) {
  Moments m;
  const double n = static_cast<double>(v.size());
  if (v.empty()) return m;
  double s = 0.0;
  for (double x : v) s += x;
  m.mean = s / n;
  if (v.size() < 2) return m;
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  return m;
}

void check_target(const RegularizedPackage& p, double y, const char* name) {
  if (!std::isfinite(y)) throw DomainError(std::string(name) + " is inaccessible (infinite)");
  const bool excluded_end = (ExtendedReal(y) == p.set.l_hat && !p.set.include_l) ||
                            (ExtendedReal(y) == p.set.r_hat && !p.set.include_r);
  if (!excluded_end && !p.set.contains(y))
    throw DomainError(std::string(name) + " = " + ExtendedReal(y).to_string() +
                      " is not in the image state space");
}

}  // namespace

SkipFreeChain window_chain(const RegularizedPackage& p, double x, double a, double b,
                           double delta) {
  check_target(p, a, "a");
  check_target(p, b, "b");
  if (!(a < b)) throw DomainError("window needs a < b");
  if (x < a || x > b) throw DomainError("window needs a <= x <= b");
  ChainSpec spec;
  spec.delta = delta;
  spec.lo = WindowEnd{a, EndBehavior::absorb};
  spec.hi = WindowEnd{b, EndBehavior::absorb};
  if (x > a && x < b) {
    if (!p.set.contains(x)) throw DomainError("x is not in the image state space");
    spec.anchors.push_back(x);
  }
  return build_chain(p, spec);
}

double truncation_horizon(const std::vector<std::vector<double>>& moments, std::size_t ix,
                          double target, int shift) {
  double best = INFINITY;
  for (std::size_t j = 0; j < moments.size(); ++j) {
    const int k = static_cast<int>(j) + 1;
    if (k - shift < 1) continue;
    const double mk = moments[j][ix];
    if (!(mk > 0.0)) return 1.0;
    best = std::min(best, std::pow(mk / target, 1.0 / (k - shift)));
  }
  return std::isfinite(best) && best > 0.0 ? best : 1.0;
}

namespace {

struct ExitRun {
  std::vector<double> hit;     // 1 when absorbed at the upper end
  std::vector<double> time;    // T ^ horizon
  std::size_t truncated = 0;
};

ExitRun run_exits(const SkipFreeChain& c, std::size_t ix, double horizon, std::size_t n,
                  std::uint64_t seed, unsigned threads) {
  ExitRun r;
  r.hit.assign(n, 0.0);
  r.time.assign(n, 0.0);
  std::vector<char> trunc(n, 0);
  RunOptions opt;
  opt.record_events = false;
  opt.record_occupation = false;
  const std::size_t top = c.size() - 1;
  parallel_for(n, threads, [&](std::size_t i) {
    const PathSample s = simulate_path(c, ix, horizon, path_seed(seed, i), opt);
    r.hit[i] = s.absorbed_at && *s.absorbed_at == top ? 1.0 : 0.0;
    r.time[i] = s.end_time;
    trunc[i] = s.absorbed_at ? 0 : 1;
  });
  for (char t : trunc) r.truncated += static_cast<std::size_t>(t);
  return r;
}

}  // namespace

McComparison mc_hitting(const RegularizedPackage& p, double x, double a, double b,
                        const McConfig& cfg) {
  const SkipFreeChain c = window_chain(p, x, a, b, cfg.delta);
  const std::size_t ix = x == a ? 0 : x == b ? c.size() - 1 : c.index_of(x);
  McComparison out;
  out.label = "hitting";
  out.reference = hitting_probability(x, a, b);
  out.n = cfg.n_paths;
  const double pr = out.reference;
  const double sd = std::sqrt(pr * (1.0 - pr) / static_cast<double>(cfg.n_paths));
  const auto mom = exit_moments(c, 0, c.size() - 1, 8);
  out.horizon = sd > 0.0 ? truncation_horizon(mom, ix, 1e-3 * sd, 0) : 1.0;
  const ExitRun r = run_exits(c, ix, out.horizon, cfg.n_paths, cfg.seed, cfg.threads);
  double hits = 0.0;
  for (double h : r.hit) hits += h;
  out.estimate = hits / static_cast<double>(cfg.n_paths);
  out.stderr_ = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(cfg.n_paths));
  out.truncated_fraction = static_cast<double>(r.truncated) / static_cast<double>(cfg.n_paths);
  out.z = z_score(out.estimate, out.reference, out.stderr_);
  return out;
}

McComparison mc_exit_time(const RegularizedPackage& p, double x, double a, double b,
                          const McConfig& cfg) {
  const SkipFreeChain c = window_chain(p, x, a, b, cfg.delta);
  const std::size_t ix = x == a ? 0 : x == b ? c.size() - 1 : c.index_of(x);
  McComparison out;
  out.label = "exit_time";
  const auto mom = exit_moments(c, 0, c.size() - 1, 8);
  out.reference = mom[0][ix];
  out.n = cfg.n_paths;
  const double var = std::max(0.0, mom[1][ix] - mom[0][ix] * mom[0][ix]);
  const double sd = std::sqrt(var / static_cast<double>(cfg.n_paths));
  out.horizon = sd > 0.0 ? truncation_horizon(mom, ix, 1e-3 * sd, 1) : 1.0;
  const ExitRun r = run_exits(c, ix, out.horizon, cfg.n_paths, cfg.seed, cfg.threads);
  const Moments m = sample_moments(r.time);
  out.estimate = m.mean;
  out.stderr_ = m.stderr_;
  out.truncated_fraction = static_cast<double>(r.truncated) / static_cast<double>(cfg.n_paths);
  out.z = z_score(out.estimate, out.reference, out.stderr_);
  return out;
}

double oracle_round_trip_error(const SkipFreeChain& c) {
  if (c.size() < 3) return 0.0;
  const auto h = exit_time_oracle(c, 0, c.size() - 1);
  const RecoveredSpeed rec = speed_from_exit_times(h, c.states);
  double worst = 0.0;
  for (std::size_t i = 0; i < rec.masses.size(); ++i) {
    const double m = c.masses[i + 1];
    worst = std::max(worst, std::abs(rec.masses[i] - m) / m);
  }
  return worst;
}

SpeedRecovery mc_speed_recovery(const RegularizedPackage& p, double a, double b,
                                const std::vector<double>& deltas, const McConfig& cfg) {
  SpeedRecovery out;
  for (std::size_t level = 0; level < deltas.size(); ++level) {
    SpeedLevel L;
    L.delta = deltas[level];
    const SkipFreeChain c = window_chain(p, a, a, b, L.delta);
    const std::size_t n = c.size();
    const std::uint64_t level_seed = path_seed(cfg.seed, level);
    const auto mom = exit_moments(c, 0, n - 1, 8);
    std::vector<double> h(n, 0.0);
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double var = std::max(0.0, mom[1][k] - mom[0][k] * mom[0][k]);
      const double sd = std::sqrt(var / static_cast<double>(cfg.n_paths));
      const double horizon = truncation_horizon(mom, k, 1e-3 * sd, 1);
      const ExitRun r =
          run_exits(c, k, horizon, cfg.n_paths, path_seed(level_seed, k), cfg.threads);
      h[k] = sample_moments(r.time).mean;
    }
    const RecoveredSpeed rec = speed_from_exit_times(h, c.states);
    L.positions = rec.positions;
    L.recovered = rec.masses;
    L.concave = rec.concave;
    double cum = 0.0, rel = 0.0;
    for (std::size_t i = 0; i < rec.masses.size(); ++i) {
      const double y = rec.positions[i];
      const double before = p.measure.mass({a, y, false, false}).as_double();
      L.cumulative_error = std::max(L.cumulative_error, std::abs(cum - before));
      cum += rec.masses[i];
      const double upto = p.measure.mass({a, y, false, true}).as_double();
      L.cumulative_error = std::max(L.cumulative_error, std::abs(cum - upto));
      L.chain_masses.push_back(c.masses[i + 1]);
      rel += std::abs(rec.masses[i] - c.masses[i + 1]) / c.masses[i + 1];
    }
    const double total = p.measure.mass({a, b, false, false}).as_double();
    L.cumulative_error = std::max(L.cumulative_error, std::abs(cum - total));
    L.mean_relative_error = rec.masses.empty() ? 0.0 : rel / static_cast<double>(rec.masses.size());
    out.levels.push_back(std::move(L));
  }
  for (std::size_t i = 1; i < out.levels.size(); ++i) {
    const double prev = out.levels[i - 1].cumulative_error;
    const double cur = out.levels[i].cumulative_error;
    out.ratios.push_back(prev > 0.0 ? cur / prev : INFINITY);
    if (!(cur < prev)) out.decreasing = false;
  }
  return out;
}

JumpRateResult mc_jump_rate_martingale(const RegularizedPackage& p, std::size_t gap, double x0,
                                       double t, const ChainSpec& spec, const McConfig& cfg) {
  if (gap >= p.gaps.size()) throw DomainError("no gap with that index");
  const Gap g = p.gaps[gap];
  JumpRateResult out;
  out.lambda = 1.0 / g.length();
  out.up.label = "jumps_up";
  out.down.label = "jumps_down";
  for (McComparison* m : {&out.up, &out.down}) {
    m->n = cfg.n_paths;
    m->horizon = t;
  }
  ChainSpec s = spec;
  s.anchors.push_back(x0);
  const SkipFreeChain c = build_chain(p, s);
  const std::size_t ia = c.index_of(g.a), ib = c.index_of(g.b);
  if (ib != ia + 1) throw DomainError("gap ends are not neighbouring chain states");
  const double ma = c.masses[ia], mb = c.masses[ib];
  if (!(ma > 0.0 && std::isfinite(ma) && mb > 0.0 && std::isfinite(mb)))
    throw DomainError("local time undefined at a gap end (zero or infinite atom)");
  if (t == 0.0) return out;
  if (!(t > 0.0)) throw DomainError("time must be non-negative");

  const std::size_t ix = c.index_of(x0);
  const std::size_t n = cfg.n_paths;
  std::vector<double> au(n), ad(n), lu(n), ld(n);
  RunOptions opt;
  opt.record_events = false;
  opt.record_occupation = false;
  opt.track_edge = ia;
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    const PathSample ps = simulate_path(c, ix, t, path_seed(cfg.seed, i), opt);
    au[i] = static_cast<double>(ps.edge_up);
    ad[i] = static_cast<double>(ps.edge_down);
    lu[i] = out.lambda * occupation_of(ps, ia) / (2.0 * ma);
    ld[i] = out.lambda * occupation_of(ps, ib) / (2.0 * mb);
  });
  const auto fill = [&](McComparison& m, const std::vector<double>& A,
                        const std::vector<double>& Lt) {
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = A[i] - Lt[i];
    m.estimate = sample_moments(A).mean;
    m.reference = sample_moments(Lt).mean;
    m.stderr_ = sample_moments(d).stderr_;
    m.z = z_score(m.estimate, m.reference, m.stderr_);
  };
  fill(out.up, au, lu);
  fill(out.down, ad, ld);
  return out;
}

std::vector<McComparison> mc_martingale_scale(const RegularizedPackage& p, double x, double a,
                                              double b, const std::vector<double>& times,
                                              const McConfig& cfg) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw DomainError("martingale check needs a bounded window");
  const SkipFreeChain c = window_chain(p, x, a, b, cfg.delta);
  const std::size_t ix = x == a ? 0 : x == b ? c.size() - 1 : c.index_of(x);
  std::vector<double> grid = times;
  std::sort(grid.begin(), grid.end());
  const double horizon = std::max(grid.empty() ? 0.0 : grid.back(), 1e-12);
  const std::size_t n = cfg.n_paths;
  std::vector<std::vector<double>> pos(grid.size(), std::vector<double>(n));
  RunOptions opt;
  opt.record_events = false;
  opt.record_occupation = false;
  opt.probe_times = grid;
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    const PathSample ps = simulate_path(c, ix, horizon, path_seed(cfg.seed, i), opt);
    // Centred on x so that t = 0 gives exactly zero mean and variance.
    for (std::size_t j = 0; j < grid.size(); ++j)
      pos[j][i] = c.states[ps.probe_states[j]] - c.states[ix];
  });
  std::vector<McComparison> out;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    McComparison m;
    m.label = "martingale_t=" + ExtendedReal(grid[j]).to_string();
    const Moments mo = sample_moments(pos[j]);
    m.estimate = c.states[ix] + mo.mean;
    m.stderr_ = mo.stderr_;
    m.reference = c.states[ix];
    m.n = n;
    m.horizon = grid[j];
    m.z = z_score(mo.mean, 0.0, m.stderr_);
    out.push_back(m);
  }
  return out;
}

SuiteReport run_suite(const RegularizedPackage& p, const SuiteOptions& opt) {
  static const std::vector<std::string> known{"hitting", "exit", "speed", "jumps", "martingale",
                                              "all"};
  if (std::find(known.begin(), known.end(), opt.suite) == known.end())
    throw DomainError("unknown suite '" + opt.suite + "'");
  const auto want = [&](const char* s) { return opt.suite == "all" || opt.suite == s; };

  SuiteReport rep;
  const auto [wlo, whi] = default_window(p);
  rep.a = opt.a.value_or(wlo.position);
  rep.b = opt.b.value_or(whi.position);
  if (opt.x) {
    rep.x = *opt.x;
  } else {
    const SkipFreeChain probe = window_chain(p, rep.a, rep.a, rep.b, opt.mc.delta);
    if (probe.size() < 3) throw DomainError("window has no interior state to start from");
    std::size_t k = probe.nearest(0.5 * (rep.a + rep.b));
    k = std::clamp<std::size_t>(k, 1, probe.size() - 2);
    rep.x = probe.states[k];
  }

  if (want("hitting")) rep.comparisons.push_back(mc_hitting(p, rep.x, rep.a, rep.b, opt.mc));
  if (want("exit")) {
    rep.comparisons.push_back(mc_exit_time(p, rep.x, rep.a, rep.b, opt.mc));
    rep.round_trip_error = oracle_round_trip_error(window_chain(p, rep.x, rep.a, rep.b, opt.mc.delta));
    if (!(rep.round_trip_error <= 1e-12)) rep.passed = false;
  }
  if (want("speed")) {
    if (p.is_atomic()) {
      rep.skipped.push_back("speed: atomic measure, nothing to refine");
    } else {
      McConfig mc = opt.mc;
      mc.n_paths = std::max<std::size_t>(1000, opt.mc.n_paths / 10);
      const double w = rep.b - rep.a;
      rep.speed = mc_speed_recovery(p, rep.a, rep.b, {w / 4, w / 8, w / 16}, mc);
      if (!rep.speed->decreasing) rep.passed = false;
    }
  }
  if (want("jumps")) {
    if (p.gaps.empty()) rep.skipped.push_back("jumps: no gaps");
    ChainSpec spec;
    spec.delta = opt.mc.delta;
    for (std::size_t k = 0; k < p.gaps.size(); ++k) {
      McConfig mc = opt.mc;
      mc.seed = path_seed(opt.mc.seed, 1000 + k);
      for (double t : opt.jump_times) {
        try {
          JumpRateResult jr = mc_jump_rate_martingale(p, k, rep.x, t, spec, mc);
          const std::string tag = "_gap" + std::to_string(k) + "_t=" + ExtendedReal(t).to_string();
          jr.up.label += tag;
          jr.down.label += tag;
          rep.comparisons.push_back(jr.up);
          rep.comparisons.push_back(jr.down);
        } catch (const DomainError& e) {
          rep.skipped.push_back("jumps gap " + std::to_string(k) + ": " + e.what());
          break;
        }
      }
    }
  }
  if (want("martingale")) {
    for (const auto& m : mc_martingale_scale(p, rep.x, rep.a, rep.b, opt.martingale_times, opt.mc))
      rep.comparisons.push_back(m);
  }
  for (const auto& m : rep.comparisons)
    if (!m.passed()) rep.passed = false;
  return rep;
}

}  // namespace quasidiff
