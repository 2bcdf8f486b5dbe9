#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "quasidiff/extended_real.hpp"
#include "quasidiff/measure.hpp"

namespace quasidiff {

struct Breakpoint {
  double x = 0.0;
  double y = 0.0;
};

/// Discontinuity of s at x: left_gap = s(x) - s(x-), right_gap = s(x+) - s(x).
struct Jump {
  double x = 0.0;
  double left_gap = 0.0;
  double right_gap = 0.0;
};

/// Open interval between consecutive nodes (breakpoints, jumps, endpoints)
/// on which s is affine.
struct Segment {
  ExtendedReal lo;
  ExtendedReal hi;
  double slope = 0.0;      ///< slope of s on (lo, hi), taken from the input breakpoints
  double offset = 0.0;     ///< accumulated jump sizes left of the segment
  ExtendedReal s_lo;       ///< s(lo+)
  ExtendedReal s_hi;       ///< s(hi-)
  std::optional<std::size_t> jump_lo;  ///< jump index at lo, if lo is a jump
  std::optional<std::size_t> jump_hi;  ///< jump index at hi, if hi is a jump
};

/// Non-decreasing function on [l, r] made of a continuous piecewise-linear part
/// s_c and finitely many jumps.
///
/// Values are kept in input coordinates. The continuous part is extended past
/// its first/last breakpoint with the first/last slope (zero for a single
/// breakpoint). Jump contributions accumulate from the left, so
/// s(x) = s_c(x) + sum_{y<x}(left+right gaps at y) + (left gap at x).
class GeneralizedScale {
 public:
  GeneralizedScale(ExtendedReal l, ExtendedReal r, std::vector<Breakpoint> breakpoints,
                   std::vector<Jump> jumps);

  ExtendedReal l() const { return l_; }
  ExtendedReal r() const { return r_; }
  const std::vector<Breakpoint>& breakpoints() const { return bps_; }
  const std::vector<Jump>& jumps() const { return jumps_; }
  const std::vector<Segment>& segments() const { return segments_; }

  /// s_c at a finite x, with end-slope extrapolation.
  double continuous_part(double x) const;

  /// s(x), s(x-), s(x+) for finite x inside (l, r).
  double at(double x) const;
  double left_limit(double x) const;
  double right_limit(double x) const;

  /// s(l) = s(l+) and s(r) = s(r-), possibly infinite.
  ExtendedReal at_l() const { return segments_.front().s_lo; }
  ExtendedReal at_r() const { return segments_.back().s_hi; }

  /// Interior non-jump point used for the normalization s(ref) = 0.
  double reference_point() const { return ref_; }
  /// s(ref) in input coordinates; normalized(x) = at(x) - offset().
  double offset() const { return offset_; }
  double normalized(double x) const { return at(x) - offset_; }

  /// Jump parts relative to the reference point:
  /// s_d+(x) = mu_d+((ref,x)) for x >= ref, -mu_d+([x,ref)) otherwise;
  /// s_d-(x) = mu_d-((ref,x]) for x >= ref, -mu_d-((x,ref]) otherwise.
  double jump_part_plus(double x) const;
  double jump_part_minus(double x) const;

  std::optional<std::size_t> jump_index(double x) const;
  bool is_continuous() const { return jumps_.empty(); }
  /// No segment of zero slope.
  bool is_strictly_increasing() const;

  /// Segment whose closure contains x (the left one at a shared node).
  std::size_t segment_index(double x) const;

 private:
  double slope_at_interval(double lo, double hi) const;

  ExtendedReal l_;
  ExtendedReal r_;
  std::vector<Breakpoint> bps_;
  std::vector<Jump> jumps_;
  std::vector<double> prefix_;  ///< prefix_[j] = sum of gaps of jumps before j
  std::vector<Segment> segments_;
  double ref_ = 0.0;
  double offset_ = 0.0;
};

/// s = s_c + s_d+ + s_d- with the associated measures.
struct ScaleDecomposition {
  MeasureSpec mu_c;        ///< Lebesgue-Stieltjes measure of s_c (density = slope)
  MeasureSpec mu_d_plus;   ///< sum (s(x+)-s(x)) delta_x
  MeasureSpec mu_d_minus;  ///< sum (s(x)-s(x-)) delta_x
  double reference_point = 0.0;
  double offset = 0.0;
  /// Normalized continuous part: s_c(x) - s_c(ref).
  double s_c(const GeneralizedScale& s, double x) const {
    return s.continuous_part(x) - s.continuous_part(reference_point);
  }
};

ScaleDecomposition decompose_scale(const GeneralizedScale& s);

/// Maximal open plateau (c, d) of s.
struct Plateau {
  ExtendedReal c;
  ExtendedReal d;
  bool isolated = false;  ///< c, d in D u {l, r}
};

/// Closed interval [lo, hi] (lo == hi for a point) in the extended reals.
struct ClosedInterval {
  ExtendedReal lo;
  ExtendedReal hi;
};

struct ScaleSupports {
  std::vector<Plateau> plateaus;            ///< U minus {l, r}, sorted
  bool l_in_U = false;
  bool r_in_U = false;
  std::vector<ClosedInterval> E_s;          ///< components of I \ U
  std::vector<double> D_plus;
  std::vector<double> D_minus;
  std::vector<double> D_zero;

  std::vector<Plateau> isolated_intervals() const;
  bool in_D(double x) const;
};

ScaleSupports compute_supports(const GeneralizedScale& s);

}  // namespace quasidiff
