#include "quasidiff/scale.hpp"

#include <algorithm>
#include <cmath>

namespace quasidiff {

namespace {

std::size_t count_jumps_before(const std::vector<Jump>& jumps, double x) {
  return static_cast<std::size_t>(
      std::lower_bound(jumps.begin(), jumps.end(), x,
                       [](const Jump& j, double v) { return j.x < v; }) -
      jumps.begin());
}

std::size_t count_jumps_upto(const std::vector<Jump>& jumps, double x) {
  return static_cast<std::size_t>(
      std::upper_bound(jumps.begin(), jumps.end(), x,
                       [](double v, const Jump& j) { return v < j.x; }) -
      jumps.begin());
}

}  // namespace

GeneralizedScale::GeneralizedScale(ExtendedReal l, ExtendedReal r,
                                   std::vector<Breakpoint> breakpoints, std::vector<Jump> jumps)
    : l_(l), r_(r), bps_(std::move(breakpoints)), jumps_(std::move(jumps)) {
  if (!(l_ < r_)) throw DomainError("scale: need l < r");
  if (bps_.empty()) throw DomainError("scale: at least one breakpoint required");
  for (std::size_t i = 0; i < bps_.size(); ++i) {
    const auto& b = bps_[i];
    if (!std::isfinite(b.x) || !std::isfinite(b.y))
      throw DomainError("scale: breakpoints must be finite");
    if (ExtendedReal(b.x) < l_ || ExtendedReal(b.x) > r_)
      throw DomainError("scale: breakpoint x outside [l, r]");
    if (i > 0 && !(bps_[i - 1].x < b.x))
      throw DomainError("scale: breakpoint x must be strictly increasing");
    if (i > 0 && b.y < bps_[i - 1].y) throw DomainError("scale: continuous part must be non-decreasing");
  }
  prefix_.assign(1, 0.0);
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    const auto& j = jumps_[i];
    if (!std::isfinite(j.x)) throw DomainError("scale: jump position must be finite");
    if (!(ExtendedReal(j.x) > l_ && ExtendedReal(j.x) < r_))
      throw DomainError("scale: jump position must lie in (l, r)");
    if (i > 0 && !(jumps_[i - 1].x < j.x))
      throw DomainError("scale: jump positions must be strictly increasing");
    if (!(j.left_gap >= 0.0) || !(j.right_gap >= 0.0) || !std::isfinite(j.left_gap) ||
        !std::isfinite(j.right_gap))
      throw DomainError("scale: jump gaps must be finite and non-negative");
    if (!(j.left_gap + j.right_gap > 0.0)) throw DomainError("scale: jump with zero size");
    prefix_.push_back(prefix_.back() + (j.left_gap + j.right_gap));
  }

  std::vector<double> interior;
  for (const auto& b : bps_)
    if (ExtendedReal(b.x) > l_ && ExtendedReal(b.x) < r_) interior.push_back(b.x);
  for (const auto& j : jumps_) interior.push_back(j.x);
  std::sort(interior.begin(), interior.end());
  interior.erase(std::unique(interior.begin(), interior.end()), interior.end());

  std::vector<ExtendedReal> nodes;
  nodes.push_back(l_);
  for (double x : interior) nodes.emplace_back(x);
  nodes.push_back(r_);

  bool rising = false;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    Segment seg;
    seg.lo = nodes[i];
    seg.hi = nodes[i + 1];
    const double lo_probe = seg.lo.is_finite() ? seg.lo.value() : -INFINITY;
    const double hi_probe = seg.hi.is_finite() ? seg.hi.value() : INFINITY;
    seg.slope = slope_at_interval(lo_probe, hi_probe);
    if (seg.lo.is_finite()) {
      seg.jump_lo = jump_index(seg.lo.value());
      seg.offset = prefix_[count_jumps_upto(jumps_, seg.lo.value())];
    }
    if (seg.hi.is_finite()) seg.jump_hi = jump_index(seg.hi.value());
    if (seg.lo.is_finite())
      seg.s_lo = continuous_part(seg.lo.value()) + seg.offset;
    else if (seg.slope > 0.0)
      seg.s_lo = ExtendedReal::neg_inf();
    else
      seg.s_lo = continuous_part(seg.hi.value()) + seg.offset;
    if (seg.hi.is_finite())
      seg.s_hi = continuous_part(seg.hi.value()) + seg.offset;
    else if (seg.slope > 0.0)
      seg.s_hi = ExtendedReal::pos_inf();
    else
      seg.s_hi = continuous_part(seg.lo.value()) + seg.offset;
    rising = rising || seg.slope > 0.0;
    segments_.push_back(seg);
  }
  if (!rising && jumps_.empty()) throw DomainError("scale: s must be non-constant");

  // Reference point: 0 when admissible, otherwise the first breakpoint that is
  // not a jump, otherwise the midpoint of the first finite segment.
  auto admissible = [&](double x) {
    return ExtendedReal(x) >= l_ && ExtendedReal(x) <= r_ && !jump_index(x);
  };
  bool found = false;
  if (admissible(0.0)) {
    ref_ = 0.0;
    found = true;
  }
  for (std::size_t i = 0; !found && i < bps_.size(); ++i)
    if (admissible(bps_[i].x)) {
      ref_ = bps_[i].x;
      found = true;
    }
  for (std::size_t i = 0; !found && i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (s.lo.is_finite() && s.hi.is_finite()) {
      ref_ = 0.5 * (s.lo.value() + s.hi.value());
      found = true;
    } else if (s.lo.is_finite()) {
      ref_ = s.lo.value() + 1.0;
      found = true;
    } else if (s.hi.is_finite()) {
      ref_ = s.hi.value() - 1.0;
      found = true;
    }
  }
  offset_ = at(ref_);
}

double GeneralizedScale::slope_at_interval(double lo, double hi) const {
  if (bps_.size() == 1) return 0.0;
  const std::size_t n = bps_.size();
  auto interval_slope = [&](std::size_t k) {
    return (bps_[k + 1].y - bps_[k].y) / (bps_[k + 1].x - bps_[k].x);
  };
  if (hi <= bps_.front().x) return interval_slope(0);
  if (lo >= bps_.back().x) return interval_slope(n - 2);
  // Largest k with x_k <= lo.
  auto it = std::upper_bound(bps_.begin(), bps_.end(), lo,
                             [](double v, const Breakpoint& b) { return v < b.x; });
  std::size_t k = static_cast<std::size_t>(it - bps_.begin());
  k = k == 0 ? 0 : k - 1;
  if (k > n - 2) k = n - 2;
  return interval_slope(k);
}

double GeneralizedScale::continuous_part(double x) const {
  const std::size_t n = bps_.size();
  if (n == 1) return bps_[0].y;
  if (x <= bps_.front().x) {
    const double m = slope_at_interval(-INFINITY, bps_.front().x);
    return m == 0.0 ? bps_.front().y : bps_.front().y + m * (x - bps_.front().x);
  }
  if (x >= bps_.back().x) {
    const double m = slope_at_interval(bps_.back().x, INFINITY);
    return m == 0.0 ? bps_.back().y : bps_.back().y + m * (x - bps_.back().x);
  }
  auto it = std::upper_bound(bps_.begin(), bps_.end(), x,
                             [](double v, const Breakpoint& b) { return v < b.x; });
  const std::size_t k = static_cast<std::size_t>(it - bps_.begin()) - 1;
  if (bps_[k].x == x) return bps_[k].y;
  const double m = (bps_[k + 1].y - bps_[k].y) / (bps_[k + 1].x - bps_[k].x);
  return m == 0.0 ? bps_[k].y : bps_[k].y + m * (x - bps_[k].x);
}

std::optional<std::size_t> GeneralizedScale::jump_index(double x) const {
  const std::size_t k = count_jumps_before(jumps_, x);
  if (k < jumps_.size() && jumps_[k].x == x) return k;
  return std::nullopt;
}

double GeneralizedScale::at(double x) const {
  if (auto j = jump_index(x)) return continuous_part(x) + (prefix_[*j] + jumps_[*j].left_gap);
  return continuous_part(x) + prefix_[count_jumps_before(jumps_, x)];
}

double GeneralizedScale::left_limit(double x) const {
  return continuous_part(x) + prefix_[count_jumps_before(jumps_, x)];
}

double GeneralizedScale::right_limit(double x) const {
  return continuous_part(x) + prefix_[count_jumps_upto(jumps_, x)];
}

double GeneralizedScale::jump_part_plus(double x) const {
  double total = 0.0;
  for (const auto& j : jumps_) {
    if (x >= ref_ && j.x > ref_ && j.x < x) total += j.right_gap;
    if (x < ref_ && j.x >= x && j.x < ref_) total -= j.right_gap;
  }
  return total;
}

double GeneralizedScale::jump_part_minus(double x) const {
  double total = 0.0;
  for (const auto& j : jumps_) {
    if (x >= ref_ && j.x > ref_ && j.x <= x) total += j.left_gap;
    if (x < ref_ && j.x > x && j.x <= ref_) total -= j.left_gap;
  }
  return total;
}

bool GeneralizedScale::is_strictly_increasing() const {
  return std::all_of(segments_.begin(), segments_.end(),
                     [](const Segment& s) { return s.slope > 0.0; });
}

std::size_t GeneralizedScale::segment_index(double x) const {
  for (std::size_t i = 0; i < segments_.size(); ++i)
    if (ExtendedReal(x) <= segments_[i].hi) return i;
  return segments_.size() - 1;
}

ScaleDecomposition decompose_scale(const GeneralizedScale& s) {
  std::vector<DensityPiece> pieces;
  for (const auto& seg : s.segments())
    if (seg.slope > 0.0) pieces.push_back({seg.lo, seg.hi, seg.slope});
  std::vector<PointMass> plus;
  std::vector<PointMass> minus;
  for (const auto& j : s.jumps()) {
    if (j.right_gap > 0.0) plus.push_back({j.x, j.right_gap});
    if (j.left_gap > 0.0) minus.push_back({j.x, j.left_gap});
  }
  ScaleDecomposition d;
  d.mu_c = MeasureSpec(std::move(pieces), {});
  d.mu_d_plus = MeasureSpec({}, std::move(plus));
  d.mu_d_minus = MeasureSpec({}, std::move(minus));
  d.reference_point = s.reference_point();
  d.offset = s.offset();
  return d;
}

std::vector<Plateau> ScaleSupports::isolated_intervals() const {
  std::vector<Plateau> out;
  for (const auto& p : plateaus)
    if (p.isolated) out.push_back(p);
  return out;
}

bool ScaleSupports::in_D(double x) const {
  return std::binary_search(D_plus.begin(), D_plus.end(), x) ||
         std::binary_search(D_minus.begin(), D_minus.end(), x);
}

ScaleSupports compute_supports(const GeneralizedScale& s) {
  ScaleSupports out;
  for (const auto& j : s.jumps()) {
    if (j.right_gap > 0.0) out.D_plus.push_back(j.x);
    if (j.left_gap > 0.0) out.D_minus.push_back(j.x);
    if (j.right_gap > 0.0 && j.left_gap > 0.0) out.D_zero.push_back(j.x);
  }

  const auto& segs = s.segments();
  for (std::size_t i = 0; i < segs.size();) {
    if (segs[i].slope != 0.0) {
      ++i;
      continue;
    }
    std::size_t k = i;
    while (k + 1 < segs.size() && segs[k + 1].slope == 0.0 && !segs[k].jump_hi) ++k;
    out.plateaus.push_back({segs[i].lo, segs[k].hi, false});
    i = k + 1;
  }
  for (auto& p : out.plateaus) {
    const bool c_ok = p.c == s.l() || (p.c.is_finite() && out.in_D(p.c.value()));
    const bool d_ok = p.d == s.r() || (p.d.is_finite() && out.in_D(p.d.value()));
    p.isolated = c_ok && d_ok;
  }
  out.l_in_U = segs.front().slope == 0.0;
  out.r_in_U = segs.back().slope == 0.0;

  ExtendedReal cursor = s.l();
  bool cursor_removed = out.l_in_U;
  for (const auto& p : out.plateaus) {
    if (cursor < p.c)
      out.E_s.push_back({cursor, p.c});
    else if (cursor == p.c && !cursor_removed)
      out.E_s.push_back({cursor, cursor});
    cursor = p.d;
    cursor_removed = false;
  }
  if (cursor < s.r())
    out.E_s.push_back({cursor, s.r()});
  else if (cursor == s.r() && !out.r_in_U)
    out.E_s.push_back({cursor, cursor});
  return out;
}

}  // namespace quasidiff
