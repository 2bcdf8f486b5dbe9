#include "quasidiff/dirichlet_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace quasidiff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// One affine piece of a host function: h(x) = y0 + k (x - x0) on (lo, hi).
struct HostPiece {
  ExtendedReal lo;
  ExtendedReal hi;
  double x0;
  double y0;
  double k;
};

std::vector<HostPiece> host_pieces(const LiftedFunction& f) {
  std::vector<HostPiece> out;
  const auto& bp = f.breakpoints;
  if (bp.empty()) return out;
  out.push_back({ExtendedReal::neg_inf(), bp.front().first, bp.front().first, bp.front().second,
                 f.left_slope});
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double k = (bp[i + 1].second - bp[i].second) / (bp[i + 1].first - bp[i].first);
    out.push_back({bp[i].first, bp[i + 1].first, bp[i].first, bp[i].second, k});
  }
  out.push_back({bp.back().first, ExtendedReal::pos_inf(), bp.back().first, bp.back().second,
                 f.right_slope});
  return out;
}

double eval_piece(const HostPiece& p, double x) {
  return p.k == 0.0 ? p.y0 : p.y0 + p.k * (x - p.x0);
}

/// Integral of (h')^2 over [a, b].
double dirichlet_integral(const std::vector<HostPiece>& pieces, ExtendedReal a, ExtendedReal b) {
  double total = 0.0;
  for (const auto& p : pieces) {
    const ExtendedReal len = overlap_length(p.lo, p.hi, a, b);
    if (!(len > 0.0) || p.k == 0.0) continue;
    if (!len.is_finite()) return kInf;
    total += p.k * p.k * len.value();
  }
  return total;
}

double segment_measure(const Segment& seg) {
  return seg.slope * (seg.hi - seg.lo).value();
}

}  // namespace

double LiftedFunction::operator()(double x) const {
  if (breakpoints.empty()) return 0.0;
  const auto& bp = breakpoints;
  if (x <= bp.front().first)
    return left_slope == 0.0 ? bp.front().second : bp.front().second + left_slope * (x - bp.front().first);
  if (x >= bp.back().first)
    return right_slope == 0.0 ? bp.back().second : bp.back().second + right_slope * (x - bp.back().first);
  auto it = std::upper_bound(bp.begin(), bp.end(), x,
                             [](double v, const std::pair<double, double>& p) { return v < p.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  if (lo.first == x) return lo.second;
  return lo.second + (hi.second - lo.second) * ((x - lo.first) / (hi.first - lo.first));
}

double LiftedFunction::slope_right(double x) const {
  for (const auto& p : host_pieces(*this))
    if (p.lo <= ExtendedReal(x) && ExtendedReal(x) < p.hi) return p.k;
  return right_slope;
}

std::vector<TripleFunction::NodeValue> TripleFunction::node_values(const GeneralizedScale& s) const {
  const auto& segs = s.segments();
  const std::size_t n = segs.size();
  if (g_c.size() != n || g_minus.size() != s.jumps().size() || g_plus.size() != s.jumps().size())
    throw DomainError("triple function: coefficient counts do not match the scale");

  std::vector<double> ax(n), av(n);
  auto rate = [&](std::size_t i) { return segs[i].slope > 0.0 ? g_c[i] * segs[i].slope : 0.0; };
  auto eval = [&](std::size_t i, ExtendedReal x) -> ExtendedReal {
    const double k = rate(i);
    if (k == 0.0) return av[i];
    if (!x.is_finite()) return (x.is_pos_inf() == (k > 0)) ? ExtendedReal::pos_inf() : ExtendedReal::neg_inf();
    return av[i] + k * (x.value() - ax[i]);
  };

  const double ref = s.reference_point();
  const std::size_t iref = s.segment_index(ref);
  ax[iref] = ref;
  av[iref] = c0;

  std::vector<NodeValue> nodes(n + 1);
  nodes[0].x = segs[0].lo;
  for (std::size_t i = 0; i < n; ++i) nodes[i + 1].x = segs[i].hi;

  for (std::size_t i = iref + 1; i < n; ++i) {
    const double x = segs[i].lo.value();
    NodeValue& nv = nodes[i];
    nv.left = eval(i - 1, x).value();
    nv.mid = nv.left;
    nv.right = nv.left;
    if (auto j = s.jump_index(x)) {
      nv.mid = nv.left + g_minus[*j] * s.jumps()[*j].left_gap;
      nv.right = nv.mid + g_plus[*j] * s.jumps()[*j].right_gap;
    }
    ax[i] = x;
    av[i] = nv.right;
  }
  for (std::size_t i = iref; i-- > 0;) {
    const double x = segs[i].hi.value();
    NodeValue& nv = nodes[i + 1];
    nv.right = eval(i + 1, x).value();
    nv.mid = nv.right;
    nv.left = nv.right;
    if (auto j = s.jump_index(x)) {
      nv.mid = nv.right - g_plus[*j] * s.jumps()[*j].right_gap;
      nv.left = nv.mid - g_minus[*j] * s.jumps()[*j].left_gap;
    }
    ax[i] = x;
    av[i] = nv.left;
  }
  auto as_limit = [](ExtendedReal v) { return v.as_double(); };
  nodes[0].left = nodes[0].mid = nodes[0].right = as_limit(eval(0, segs[0].lo));
  nodes[n].left = nodes[n].mid = nodes[n].right = as_limit(eval(n - 1, segs[n - 1].hi));
  return nodes;
}

double TripleFunction::operator()(const GeneralizedScale& s, double x) const {
  const auto nodes = node_values(s);
  const auto& segs = s.segments();
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (nodes[k].x == ExtendedReal(x)) return nodes[k].mid;
  const std::size_t i = s.segment_index(x);
  const double k = segs[i].slope > 0.0 ? g_c[i] * segs[i].slope : 0.0;
  if (segs[i].lo.is_finite()) return nodes[i].right + k * (x - segs[i].lo.value());
  return nodes[i + 1].left - k * (segs[i].hi.value() - x);
}

TripleFunction TripleFunction::identity(const GeneralizedScale& s) {
  TripleFunction f;
  f.c0 = s.at(s.reference_point());
  for (const auto& seg : s.segments()) f.g_c.push_back(seg.slope > 0.0 ? 1.0 : 0.0);
  for (const auto& j : s.jumps()) {
    f.g_minus.push_back(j.left_gap > 0.0 ? 1.0 : 0.0);
    f.g_plus.push_back(j.right_gap > 0.0 ? 1.0 : 0.0);
  }
  return f;
}

TripleFunction TripleFunction::from_node_values(const GeneralizedScale& s,
                                                const std::vector<NodeValue>& values) {
  const auto& segs = s.segments();
  const std::size_t n = segs.size();
  if (values.size() != n + 1) throw DomainError("node values: expected one entry per segment end");
  for (std::size_t k = 0; k <= n; ++k) {
    const ExtendedReal expected = k == 0 ? segs[0].lo : segs[k - 1].hi;
    if (values[k].x != expected) throw DomainError("node values: positions do not match the scale");
  }
  TripleFunction f;
  f.g_minus.assign(s.jumps().size(), 0.0);
  f.g_plus.assign(s.jumps().size(), 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const auto& v = values[k];
    const double x = v.x.value();
    if (auto j = s.jump_index(x)) {
      const Jump& jp = s.jumps()[*j];
      if (jp.left_gap > 0.0)
        f.g_minus[*j] = (v.mid - v.left) / jp.left_gap;
      else if (v.mid != v.left)
        throw NotInScaleClass("f jumps at x where s is left-continuous");
      if (jp.right_gap > 0.0)
        f.g_plus[*j] = (v.right - v.mid) / jp.right_gap;
      else if (v.right != v.mid)
        throw NotInScaleClass("f jumps at x where s is right-continuous");
    } else if (v.left != v.mid || v.mid != v.right) {
      throw NotInScaleClass("f is discontinuous where s is continuous");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& seg = segs[i];
    const double start = values[i].right;
    const double end = values[i + 1].left;
    if (!seg.lo.is_finite() || !seg.hi.is_finite()) {
      f.g_c.push_back(0.0);
      continue;
    }
    if (seg.slope > 0.0) {
      f.g_c.push_back((end - start) / segment_measure(seg));
    } else {
      if (start != end) throw NotInScaleClass("f is not constant on a plateau");
      f.g_c.push_back(0.0);
    }
  }
  // Value at the reference point from the segment that contains it.
  const double ref = s.reference_point();
  const std::size_t i = s.segment_index(ref);
  const auto& seg = segs[i];
  if (seg.lo.is_finite()) {
    const double k = seg.slope > 0.0 ? f.g_c[i] * seg.slope : 0.0;
    f.c0 = k == 0.0 ? values[i].right : values[i].right + k * (ref - seg.lo.value());
  } else {
    f.c0 = values[i + 1].left;
  }
  return f;
}

LiftedFunction lift(const TripleFunction& f, const Triple& t, const RegularizedPackage&) {
  const GeneralizedScale& s = t.scale();
  const auto nodes = f.node_values(s);
  const auto& segs = s.segments();
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& seg = segs[i];
    if (seg.s_lo.is_finite()) pts.emplace_back(seg.s_lo.value(), nodes[i].right);
    if (seg.s_hi.is_finite()) pts.emplace_back(seg.s_hi.value(), nodes[i + 1].left);
    if (seg.jump_hi) pts.emplace_back(s.at(seg.hi.value()), nodes[i + 1].mid);
  }
  std::stable_sort(pts.begin(), pts.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  LiftedFunction out;
  for (const auto& p : pts) {
    if (!out.breakpoints.empty() && out.breakpoints.back().first == p.first) {
      const double prev = out.breakpoints.back().second;
      if (std::abs(prev - p.second) > 1e-12 * std::max({1.0, std::abs(prev), std::abs(p.second)}))
        throw NotInScaleClass("f takes two values at one image point");
      continue;
    }
    out.breakpoints.push_back(p);
  }
  const auto& first = segs.front();
  const auto& last = segs.back();
  if (!first.lo.is_finite() && first.slope > 0.0) out.left_slope = f.g_c.front();
  if (!last.hi.is_finite() && last.slope > 0.0) out.right_slope = f.g_c.back();
  return out;
}

double energy_image(const LiftedFunction& f, const RegularizedPackage& pkg) {
  const auto pieces = host_pieces(f);
  double local = 0.0;
  for (const auto& c : pkg.set.components)
    if (c.lo < c.hi) local += dirichlet_integral(pieces, c.lo, c.hi);
  double jumps = 0.0;
  for (const auto& g : pkg.gaps) {
    const double d = f(g.b) - f(g.a);
    jumps += d * d / g.length();
  }
  return 0.5 * local + 0.5 * jumps;
}

double energy_triple(const TripleFunction& f, const GeneralizedScale& s) {
  const auto& segs = s.segments();
  if (f.g_c.size() != segs.size()) throw DomainError("triple function does not match the scale");
  double total = 0.0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& seg = segs[i];
    if (!(seg.slope > 0.0) || f.g_c[i] == 0.0) continue;
    if (!seg.lo.is_finite() || !seg.hi.is_finite()) return kInf;
    total += f.g_c[i] * f.g_c[i] * segment_measure(seg);
  }
  for (std::size_t j = 0; j < s.jumps().size(); ++j) {
    const Jump& jp = s.jumps()[j];
    total += f.g_minus[j] * f.g_minus[j] * jp.left_gap + f.g_plus[j] * f.g_plus[j] * jp.right_gap;
  }
  return 0.5 * total;
}

double l2_norm_squared(const LiftedFunction& f, const RegularizedPackage& pkg) {
  const auto pieces = host_pieces(f);
  double total = 0.0;
  for (const auto& d : pkg.measure.pieces()) {
    for (const auto& p : pieces) {
      const ExtendedReal lo = max(p.lo, d.a);
      const ExtendedReal hi = min(p.hi, d.b);
      if (!(lo < hi)) continue;
      if (!lo.is_finite() || !hi.is_finite()) {
        if (p.k != 0.0 || p.y0 != 0.0) return kInf;
        continue;
      }
      const double u = eval_piece(p, lo.value());
      const double v = eval_piece(p, hi.value());
      total += d.density * (hi - lo).value() * (u * u + u * v + v * v) / 3.0;
    }
  }
  for (const auto& a : pkg.measure.atoms()) {
    const double v = f(a.x.value());
    if (v == 0.0) continue;
    if (!a.mass.is_finite()) return kInf;
    total += v * v * a.mass.value();
  }
  return total;
}

bool membership_F(const LiftedFunction& f, const RegularizedPackage& pkg) {
  if (!std::isfinite(energy_image(f, pkg))) return false;
  if (!std::isfinite(l2_norm_squared(f, pkg))) return false;
  const auto& set = pkg.set;
  if (set.l_hat.is_finite() && !set.include_l && f(set.l_hat.value()) != 0.0) return false;
  if (set.r_hat.is_finite() && !set.include_r && f(set.r_hat.value()) != 0.0) return false;
  return true;
}

Recurrence transience(const RegularizedPackage& pkg) {
  const auto& set = pkg.set;
  const bool l_out = set.l_hat.is_finite() && !set.include_l;
  const bool r_out = set.r_hat.is_finite() && !set.include_r;
  return (l_out || r_out) ? Recurrence::transient : Recurrence::recurrent;
}

ArclengthMaps::ArclengthMaps(const NearlyClosedSet& set, double base)
    : comps_(set.components), base_(base), l_hat_(set.l_hat), r_hat_(set.r_hat) {}

double ArclengthMaps::F(double x) const {
  double total = 0.0;
  for (const auto& c : comps_) {
    const ExtendedReal len = x >= base_ ? overlap_length(c.lo, c.hi, base_, x)
                                        : overlap_length(c.lo, c.hi, x, base_);
    if (len > 0.0) total += len.value();
  }
  return x >= base_ ? total : -total;
}

ExtendedReal ArclengthMaps::G(double t) const {
  if (t >= 0.0) {
    double acc = 0.0;
    for (const auto& c : comps_) {
      const ExtendedReal lo = max(c.lo, base_);
      if (!(lo < c.hi)) continue;
      const ExtendedReal len = c.hi - lo;
      if (!len.is_finite() || acc + len.value() > t) return lo.value() + (t - acc);
      acc += len.value();
    }
    return r_hat_;
  }
  double acc = 0.0;
  const double need = -t;
  for (auto it = comps_.rbegin(); it != comps_.rend(); ++it) {
    const ExtendedReal hi = min(it->hi, base_);
    if (!(it->lo < hi)) continue;
    const ExtendedReal len = hi - it->lo;
    if (!len.is_finite() || acc + len.value() >= need) return hi.value() - (need - acc);
    acc += len.value();
  }
  return l_hat_;
}

ArclengthMaps arclength_maps(const RegularizedPackage& pkg, double base) {
  return ArclengthMaps(pkg.set, base);
}

LiftedFunction unit_contraction(const LiftedFunction& f) {
  auto clamp01 = [](double v) { return std::min(std::max(v, 0.0), 1.0); };
  LiftedFunction g;
  const auto& bp = f.breakpoints;
  if (bp.empty()) return g;

  // Unbounded tails leave (0, 1) somewhere; the clamped tail is constant from there.
  auto tail_crossing = [&](double x0, double y0, double slope, double dir) {
    const double rate = slope * dir;
    if (rate == 0.0 || y0 <= 0.0 || y0 >= 1.0) return std::optional<std::pair<double, double>>{};
    const double d = rate > 0 ? (1.0 - y0) / rate : -y0 / rate;
    return std::optional<std::pair<double, double>>{{x0 + dir * d, rate > 0 ? 1.0 : 0.0}};
  };
  if (auto c = tail_crossing(bp.front().first, bp.front().second, f.left_slope, -1.0))
    g.breakpoints.push_back(*c);
  for (std::size_t i = 0; i < bp.size(); ++i) {
    g.breakpoints.emplace_back(bp[i].first, clamp01(bp[i].second));
    if (i + 1 == bp.size()) break;
    std::vector<std::pair<double, double>> cross;
    for (double level : {0.0, 1.0}) {
      const double a = bp[i].second - level;
      const double b = bp[i + 1].second - level;
      if (a * b < 0.0)
        cross.emplace_back(bp[i].first + (bp[i + 1].first - bp[i].first) * (a / (a - b)), level);
    }
    std::sort(cross.begin(), cross.end());
    for (const auto& c : cross)
      if (c.first > g.breakpoints.back().first && c.first < bp[i + 1].first)
        g.breakpoints.push_back(c);
  }
  if (auto c = tail_crossing(bp.back().first, bp.back().second, f.right_slope, 1.0))
    g.breakpoints.push_back(*c);
  return g;
}

}  // namespace quasidiff
