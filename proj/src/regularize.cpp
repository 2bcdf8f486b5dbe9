#include "quasidiff/regularize.hpp"

#include <algorithm>
#include <cmath>

namespace quasidiff {

bool NearlyClosedSet::contains(double x) const {
  const ExtendedReal v(x);
  if (v == l_hat && !include_l) return false;
  if (v == r_hat && !include_r) return false;
  return std::any_of(components.begin(), components.end(),
                     [&](const ClosedInterval& c) { return c.lo <= v && v <= c.hi; });
}

std::vector<Gap> gaps(const NearlyClosedSet& set) {
  std::vector<Gap> out;
  for (std::size_t i = 0; i + 1 < set.components.size(); ++i)
    out.push_back({set.components[i].hi.value(), set.components[i + 1].lo.value()});
  return out;
}

namespace {

/// Image of an interior point u of segment `seg` (u may be a segment end).
ExtendedReal image_in_segment(const GeneralizedScale& s, const Segment& seg, ExtendedReal u) {
  if (u == seg.lo) return seg.s_lo;
  if (u == seg.hi) return seg.s_hi;
  return s.continuous_part(u.value()) + seg.offset;
}

struct RawPiece {
  ExtendedReal lo;
  ExtendedReal hi;
};

double plateau_image(const GeneralizedScale& s, const Plateau& p) {
  for (const auto& seg : s.segments())
    if (seg.lo == p.c) return seg.s_lo.value();
  throw DomainError("plateau without a starting segment");
}

double representative(const Plateau& p) {
  if (p.c.is_finite() && p.d.is_finite()) return 0.5 * (p.c.value() + p.d.value());
  return p.c.is_finite() ? p.c.value() : p.d.value();
}

std::vector<ClosedInterval> merge_sorted(const std::vector<RawPiece>& raw) {
  std::vector<ClosedInterval> out;
  for (const auto& p : raw) {
    if (!out.empty() && p.lo <= out.back().hi)
      out.back().hi = max(out.back().hi, p.hi);
    else
      out.push_back({p.lo, p.hi});
  }
  return out;
}

}  // namespace

NearlyClosedSet image_set(const GeneralizedScale& s) {
  std::vector<RawPiece> raw;
  const auto& segs = s.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& seg = segs[i];
    if (seg.slope > 0.0)
      raw.push_back({seg.s_lo, seg.s_hi});
    else
      raw.push_back({seg.s_lo, seg.s_lo});
    if (seg.jump_hi) {
      const double mid = s.at(seg.hi.value());
      raw.push_back({mid, mid});
    }
  }
  NearlyClosedSet set;
  set.components = merge_sorted(raw);
  set.l_hat = s.at_l();
  set.r_hat = s.at_r();
  set.include_l = set.l_hat.is_finite();
  set.include_r = set.r_hat.is_finite();
  return set;
}

Pullback::Pullback(std::vector<Branch> branches, std::vector<PointImage> points)
    : branches_(std::move(branches)), points_(std::move(points)) {
  std::stable_sort(points_.begin(), points_.end(),
                   [](const PointImage& a, const PointImage& b) { return a.y < b.y; });
}

double Pullback::operator()(double y) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), y,
                             [](const PointImage& p, double v) { return p.y < v; });
  if (it != points_.end() && it->y == y) return it->x;
  for (const auto& b : branches_)
    if (b.y_lo <= ExtendedReal(y) && ExtendedReal(y) <= b.y_hi)
      return b.x_anchor + (y - b.y_anchor) / b.slope;
  throw DomainError("pullback: point outside the image set");
}

Pullback pullback_map(const Triple& t) {
  const GeneralizedScale& s = t.scale();
  const ScaleSupports sup = compute_supports(s);
  std::vector<Pullback::Branch> branches;
  std::vector<Pullback::PointImage> points;

  // Darned points first: they take precedence over plateau endpoints.
  for (const auto& p : sup.plateaus) points.push_back({plateau_image(s, p), representative(p)});
  for (const auto& j : s.jumps()) {
    points.push_back({s.left_limit(j.x), j.x});
    points.push_back({s.at(j.x), j.x});
    points.push_back({s.right_limit(j.x), j.x});
  }
  if (s.at_l().is_finite() && t.l().is_finite()) points.push_back({s.at_l().value(), t.l().value()});
  if (s.at_r().is_finite() && t.r().is_finite()) points.push_back({s.at_r().value(), t.r().value()});

  for (const auto& seg : s.segments()) {
    if (!(seg.slope > 0.0)) continue;
    Pullback::Branch b;
    b.y_lo = seg.s_lo;
    b.y_hi = seg.s_hi;
    b.slope = seg.slope;
    if (seg.lo.is_finite()) {
      b.x_anchor = seg.lo.value();
      b.y_anchor = seg.s_lo.value();
    } else {
      b.x_anchor = seg.hi.value();
      b.y_anchor = seg.s_hi.value();
    }
    branches.push_back(b);
  }
  return Pullback(std::move(branches), std::move(points));
}

RegularizedPackage image_regularization(const Triple& t) {
  const ValidationReport rep = validate_triple(t);
  if (!rep.ok()) throw ValidationError("triple fails validation: " + rep.summary());

  const GeneralizedScale& s = t.scale();
  RegularizedPackage pkg;
  pkg.left = classify_endpoint_triple(Side::left, t);
  pkg.right = classify_endpoint_triple(Side::right, t);
  pkg.set = image_set(s);
  pkg.set.include_l = pkg.set.include_l && pkg.left.reflecting;
  pkg.set.include_r = pkg.set.include_r && pkg.right.reflecting;
  pkg.gaps = gaps(pkg.set);

  std::vector<DensityPiece> pieces;
  std::vector<PointMass> atoms;
  const auto& segs = s.segments();
  for (const auto& seg : segs) {
    for (const auto& p : t.measure().pieces()) {
      const ExtendedReal u = max(p.a, seg.lo);
      const ExtendedReal v = min(p.b, seg.hi);
      if (!(u < v)) continue;
      if (seg.slope > 0.0) {
        pieces.push_back({image_in_segment(s, seg, u), image_in_segment(s, seg, v),
                          p.density / seg.slope});
      } else {
        atoms.push_back({seg.s_lo, (v - u) * ExtendedReal(p.density)});
      }
    }
  }
  for (const auto& a : t.measure().atoms()) {
    ExtendedReal y;
    if (a.x == t.l())
      y = s.at_l();
    else if (a.x == t.r())
      y = s.at_r();
    else
      y = s.at(a.x.value());
    atoms.push_back({y, a.mass});
  }

  std::vector<PointMass> kept;
  for (const auto& a : atoms) {
    if (a.x == pkg.set.l_hat && !pkg.set.include_l)
      pkg.boundary_mass_l += a.mass;
    else if (a.x == pkg.set.r_hat && !pkg.set.include_r)
      pkg.boundary_mass_r += a.mass;
    else if (a.x.is_finite())
      kept.push_back(a);
  }
  pkg.measure = MeasureSpec(std::move(pieces), std::move(kept));

  const ScaleSupports sup = compute_supports(s);
  for (const auto& p : sup.plateaus) {
    DarnedPoint dp;
    dp.c = p.c;
    dp.d = p.d;
    dp.image = plateau_image(s, p);
    dp.representative = representative(p);
    pkg.darned.push_back(dp);
  }
  pkg.pullback = pullback_map(t);
  return pkg;
}

bool full_support(const RegularizedPackage& pkg) {
  for (const auto& comp : pkg.set.components) {
    if (comp.lo == comp.hi) {
      const bool excluded = (comp.lo == pkg.set.l_hat && !pkg.set.include_l) ||
                            (comp.lo == pkg.set.r_hat && !pkg.set.include_r);
      if (!excluded && !(pkg.measure.atom_at(comp.lo) > 0.0)) return false;
      continue;
    }
    std::vector<ClosedInterval> cover;
    for (const auto& p : pkg.measure.pieces()) {
      const ExtendedReal lo = max(p.a, comp.lo);
      const ExtendedReal hi = min(p.b, comp.hi);
      if (lo < hi) cover.push_back({lo, hi});
    }
    std::sort(cover.begin(), cover.end(),
              [](const ClosedInterval& a, const ClosedInterval& b) { return a.lo < b.lo; });
    ExtendedReal reach = comp.lo;
    for (const auto& c : cover) {
      if (c.lo > reach) return false;
      reach = max(reach, c.hi);
    }
    if (reach < comp.hi) return false;
  }
  return true;
}

}  // namespace quasidiff
