#pragma once

#include <vector>

#include "quasidiff/extended_real.hpp"

namespace quasidiff {

/// Constant density on the interval [a, b]; a or b may be infinite.
struct DensityPiece {
  ExtendedReal a;
  ExtendedReal b;
  double density = 0.0;
};

/// Point mass. `x` may be an infinite endpoint; `mass` may be +inf.
struct PointMass {
  ExtendedReal x;
  ExtendedReal mass;
};

/// Interval with per-end inclusion flags, used for measure queries.
struct Span {
  ExtendedReal lo;
  ExtendedReal hi;
  bool lo_closed = false;
  bool hi_closed = false;
};

/// Measure given by piecewise-constant densities plus atoms.
///
/// Pieces are sorted by left end and have disjoint interiors. Atoms are sorted
/// by position with duplicates merged. Zero-density pieces are dropped.
class MeasureSpec {
 public:
  MeasureSpec() = default;
  MeasureSpec(std::vector<DensityPiece> pieces, std::vector<PointMass> atoms);

  const std::vector<DensityPiece>& pieces() const { return pieces_; }
  const std::vector<PointMass>& atoms() const { return atoms_; }

  bool is_atomic() const { return pieces_.empty(); }
  bool empty() const { return pieces_.empty() && atoms_.empty(); }

  /// m({x}); zero when there is no atom at x.
  ExtendedReal atom_at(ExtendedReal x) const;

  /// Mass of a span (open/closed ends as flagged).
  ExtendedReal mass(const Span& span) const;
  ExtendedReal total() const;

  /// Density-only part, restricted to the open span (lo, hi).
  ExtendedReal density_mass(ExtendedReal lo, ExtendedReal hi) const;

 private:
  std::vector<DensityPiece> pieces_;
  std::vector<PointMass> atoms_;
};

/// Length of the overlap of [a1,b1] and [a2,b2] (possibly infinite).
ExtendedReal overlap_length(ExtendedReal a1, ExtendedReal b1, ExtendedReal a2, ExtendedReal b2);

}  // namespace quasidiff
