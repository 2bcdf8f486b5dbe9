#include "quasidiff/exit_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace quasidiff {

const char* to_string(EndBehavior b) {
  switch (b) {
    case EndBehavior::reflect: return "reflect";
    case EndBehavior::absorb: return "absorb";
    default: return "none";
  }
}

bool SkipFreeChain::absorbing(std::size_t k) const {
  return (k == 0 && left == EndBehavior::absorb) ||
         (k + 1 == states.size() && right == EndBehavior::absorb);
}

double SkipFreeChain::mu_down(std::size_t k) const { return k == 0 ? 0.0 : conductance[k - 1]; }

double SkipFreeChain::mu_up(std::size_t k) const {
  return k + 1 >= states.size() ? 0.0 : conductance[k];
}

double SkipFreeChain::holding_mean(std::size_t k) const {
  const double m = mu(k);
  return m > 0.0 ? masses[k] / m : INFINITY;
}

std::size_t SkipFreeChain::index_of(double x) const {
  auto it = std::lower_bound(states.begin(), states.end(), x);
  if (it == states.end() || *it != x)
    throw DomainError("no chain state at " + ExtendedReal(x).to_string());
  return static_cast<std::size_t>(it - states.begin());
}

std::size_t SkipFreeChain::nearest(double x) const {
  if (states.empty()) throw DomainError("empty chain");
  auto it = std::lower_bound(states.begin(), states.end(), x);
  if (it == states.begin()) return 0;
  if (it == states.end()) return states.size() - 1;
  const auto hi = static_cast<std::size_t>(it - states.begin());
  return (x - states[hi - 1] <= states[hi] - x) ? hi - 1 : hi;
}

SkipFreeChain build_chain(const MeasureSpec& atomic, EndBehavior left, EndBehavior right) {
  if (!atomic.is_atomic()) throw DomainError("build_chain needs a purely atomic measure");
  if (atomic.atoms().empty()) throw DomainError("build_chain needs at least one atom");
  SkipFreeChain c;
  c.left = left;
  c.right = right;
  const auto& atoms = atomic.atoms();
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (!atoms[k].x.is_finite()) throw DomainError("chain states must be finite");
    const bool end_absorbing = (k == 0 && left == EndBehavior::absorb) ||
                               (k + 1 == atoms.size() && right == EndBehavior::absorb);
    if (!atoms[k].mass.is_finite() && !end_absorbing)
      throw DomainError("infinite atom at a non-absorbing state " + atoms[k].x.to_string());
    c.states.push_back(atoms[k].x.value());
    c.masses.push_back(atoms[k].mass.as_double());
  }
  for (std::size_t k = 0; k + 1 < c.states.size(); ++k)
    c.conductance.push_back(1.0 / (2.0 * (c.states[k + 1] - c.states[k])));
  return c;
}

double hitting_probability(double x, double a, double b) {
  if (!(a < b)) throw DomainError("hitting_probability needs a < b");
  if (x < a || x > b) throw DomainError("hitting_probability needs a <= x <= b");
  return (x - a) / (b - a);
}

double hitting_probability(double x, double a, double b, const GeneralizedScale& s) {
  const double sa = s.at(a), sb = s.at(b);
  if (!(sa < sb)) throw DomainError("hitting_probability needs s(a) < s(b)");
  return hitting_probability(s.at(x), sa, sb);
}

namespace {

// Thomas algorithm for sub/diag/super diagonals a, b, c and right side d.
std::vector<double> thomas(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                           std::vector<double> d) {
  const std::size_t n = b.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    if (b[i] == 0.0) throw DomainError("singular tridiagonal system");
    x[i] = (d[i] - (i + 1 < n ? c[i] * x[i + 1] : 0.0)) / b[i];
  }
  return x;
}

void check_window(const SkipFreeChain& c, std::size_t lo, std::size_t hi) {
  if (!(lo < hi) || hi >= c.size()) throw DomainError("window needs lo < hi inside the chain");
}

}  // namespace

std::vector<double> gambler_ruin(const SkipFreeChain& c, std::size_t lo, std::size_t hi) {
  check_window(c, lo, hi);
  const std::size_t n = hi - lo + 1;
  std::vector<double> a(n, 0.0), b(n, 1.0), u(n, 0.0), d(n, 0.0);
  d[n - 1] = 1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double p = c.p_up(lo + i);
    a[i] = -(1.0 - p);
    u[i] = -p;
  }
  return thomas(a, b, u, d);
}

std::vector<double> solve_generator(const SkipFreeChain& c, std::size_t lo, std::size_t hi,
                                    bool absorb_lo, bool absorb_hi,
                                    const std::vector<double>& rhs) {
  check_window(c, lo, hi);
  const std::size_t n = hi - lo + 1;
  if (rhs.size() != n) throw DomainError("solve_generator: rhs size mismatch");
  if (!absorb_lo && !absorb_hi) throw DomainError("solve_generator needs an absorbing end");
  std::vector<double> a(n, 0.0), b(n, 0.0), u(n, 0.0), d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = lo + i;
    if ((i == 0 && absorb_lo) || (i + 1 == n && absorb_hi)) {
      b[i] = 1.0;
      continue;
    }
    const double md = i == 0 ? 0.0 : c.conductance[k - 1];
    const double mu = i + 1 == n ? 0.0 : c.conductance[k];
    a[i] = -md;
    u[i] = -mu;
    b[i] = md + mu;
    d[i] = rhs[i];
  }
  return thomas(a, b, u, d);
}

std::vector<double> exit_time_oracle(const SkipFreeChain& c, std::size_t lo, std::size_t hi) {
  check_window(c, lo, hi);
  std::vector<double> rhs(c.masses.begin() + static_cast<std::ptrdiff_t>(lo),
                          c.masses.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
  rhs.front() = 0.0;
  rhs.back() = 0.0;
  return solve_generator(c, lo, hi, true, true, rhs);
}

std::vector<std::vector<double>> exit_moments(const SkipFreeChain& c, std::size_t lo,
                                              std::size_t hi, int order) {
  if (order < 1) throw DomainError("exit_moments needs order >= 1");
  std::vector<std::vector<double>> out;
  out.push_back(exit_time_oracle(c, lo, hi));
  for (int j = 2; j <= order; ++j) {
    const auto& prev = out.back();
    std::vector<double> rhs(prev.size(), 0.0);
    for (std::size_t i = 1; i + 1 < prev.size(); ++i) rhs[i] = j * c.masses[lo + i] * prev[i];
    out.push_back(solve_generator(c, lo, hi, true, true, rhs));
  }
  return out;
}

RecoveredSpeed speed_from_exit_times(const std::vector<double>& h,
                                     const std::vector<double>& states) {
  if (h.size() != states.size()) throw DomainError("speed_from_exit_times: size mismatch");
  RecoveredSpeed out;
  for (std::size_t k = 1; k + 1 < h.size(); ++k) {
    const double left = (h[k] - h[k - 1]) / (states[k] - states[k - 1]);
    const double right = (h[k + 1] - h[k]) / (states[k + 1] - states[k]);
    const double m = -0.5 * (right - left);
    out.positions.push_back(states[k]);
    out.masses.push_back(m);
    if (m < 0.0) {
      out.concave = false;
      out.worst_violation = std::min(out.worst_violation, m);
    }
  }
  return out;
}

}  // namespace quasidiff
