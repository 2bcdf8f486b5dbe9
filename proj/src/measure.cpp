#include "quasidiff/measure.hpp"

#include <algorithm>

namespace quasidiff {

ExtendedReal overlap_length(ExtendedReal a1, ExtendedReal b1, ExtendedReal a2, ExtendedReal b2) {
  const ExtendedReal lo = max(a1, a2);
  const ExtendedReal hi = min(b1, b2);
  if (!(lo < hi)) return 0.0;
  return hi - lo;
}

MeasureSpec::MeasureSpec(std::vector<DensityPiece> pieces, std::vector<PointMass> atoms) {
  for (const auto& p : pieces) {
    if (!(p.a < p.b)) throw DomainError("density piece must satisfy a < b");
    if (!(p.density >= 0.0) || !std::isfinite(p.density))
      throw DomainError("density must be finite and non-negative");
    if (p.density > 0.0) pieces_.push_back(p);
  }
  std::sort(pieces_.begin(), pieces_.end(),
            [](const DensityPiece& u, const DensityPiece& v) { return u.a < v.a; });
  for (std::size_t i = 1; i < pieces_.size(); ++i)
    if (pieces_[i].a < pieces_[i - 1].b) throw DomainError("density pieces overlap");

  std::sort(atoms.begin(), atoms.end(),
            [](const PointMass& u, const PointMass& v) { return u.x < v.x; });
  for (const auto& a : atoms) {
    if (!(a.mass > 0.0)) throw DomainError("atom mass must be positive");
    if (!atoms_.empty() && atoms_.back().x == a.x)
      atoms_.back().mass += a.mass;
    else
      atoms_.push_back(a);
  }
}

ExtendedReal MeasureSpec::atom_at(ExtendedReal x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](const PointMass& a, ExtendedReal v) { return a.x < v; });
  if (it != atoms_.end() && it->x == x) return it->mass;
  return 0.0;
}

ExtendedReal MeasureSpec::density_mass(ExtendedReal lo, ExtendedReal hi) const {
  ExtendedReal total = 0.0;
  for (const auto& p : pieces_) {
    const ExtendedReal len = overlap_length(p.a, p.b, lo, hi);
    if (len > 0.0) total += len * ExtendedReal(p.density);
  }
  return total;
}

ExtendedReal MeasureSpec::mass(const Span& span) const {
  ExtendedReal total = density_mass(span.lo, span.hi);
  for (const auto& a : atoms_) {
    const bool above = span.lo_closed ? a.x >= span.lo : a.x > span.lo;
    const bool below = span.hi_closed ? a.x <= span.hi : a.x < span.hi;
    if (above && below) total += a.mass;
  }
  return total;
}

ExtendedReal MeasureSpec::total() const {
  return mass({ExtendedReal::neg_inf(), ExtendedReal::pos_inf(), true, true});
}

}  // namespace quasidiff
