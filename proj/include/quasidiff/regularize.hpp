#pragma once

#include <vector>

#include "quasidiff/measure.hpp"
#include "quasidiff/scale.hpp"
#include "quasidiff/triple.hpp"

namespace quasidiff {

/// Bounded open gap (a, b) of the image set.
struct Gap {
  double a = 0.0;
  double b = 0.0;
  double length() const { return b - a; }
};

/// Subset of R whose union with {l_hat, r_hat} is closed in the extended reals.
///
/// Components are disjoint closed intervals (or points) inside [l_hat, r_hat],
/// listed left to right. The first may start at l_hat and the last may end at
/// r_hat; those endpoints belong to the set only when the include flag is set.
struct NearlyClosedSet {
  ExtendedReal l_hat;
  ExtendedReal r_hat;
  std::vector<ClosedInterval> components;
  bool include_l = false;
  bool include_r = false;

  bool contains(double x) const;
  bool empty() const { return components.empty(); }
};

std::vector<Gap> gaps(const NearlyClosedSet& set);

/// Plateau (c, d) of s collapsed to the image point `image`.
struct DarnedPoint {
  double image = 0.0;
  ExtendedReal c;
  ExtendedReal d;
  double representative = 0.0;  ///< midpoint of [c, d] (finite end if unbounded)
};

/// r: I_hat -> I_0, the inverse of s off plateaus.
class Pullback {
 public:
  /// Affine piece: r(y) = x_anchor + (y - y_anchor) / slope on [y_lo, y_hi].
  struct Branch {
    ExtendedReal y_lo;
    ExtendedReal y_hi;
    double x_anchor = 0.0;
    double y_anchor = 0.0;
    double slope = 1.0;
  };
  struct PointImage {
    double y;
    double x;
  };

  Pullback() = default;
  Pullback(std::vector<Branch> branches, std::vector<PointImage> points);

  /// Throws DomainError for y outside the image set.
  double operator()(double y) const;

 private:
  std::vector<Branch> branches_;
  std::vector<PointImage> points_;  ///< sorted by y; checked before branches
};

struct RegularizedPackage {
  NearlyClosedSet set;
  MeasureSpec measure;  ///< m_hat on I_hat (excluded endpoints carry no mass)
  std::vector<Gap> gaps;
  EndpointClass left;
  EndpointClass right;
  ExtendedReal boundary_mass_l = 0.0;  ///< m_hat mass sitting at an excluded l_hat
  ExtendedReal boundary_mass_r = 0.0;
  std::vector<DarnedPoint> darned;
  Pullback pullback;

  bool is_atomic() const { return measure.is_atomic(); }
};

/// Closure of s(I) together with the one-sided limits at jumps; endpoint
/// include flags are set whenever the endpoint image is finite.
NearlyClosedSet image_set(const GeneralizedScale& s);

/// Throws ValidationError when the triple fails validation.
RegularizedPackage image_regularization(const Triple& t);

Pullback pullback_map(const Triple& t);

/// Every component carries positive mass on every relatively open subset.
bool full_support(const RegularizedPackage& p);

}  // namespace quasidiff
