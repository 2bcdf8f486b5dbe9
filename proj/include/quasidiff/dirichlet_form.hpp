#pragma once

#include <utility>
#include <vector>

#include "quasidiff/regularize.hpp"
#include "quasidiff/scale.hpp"
#include "quasidiff/triple.hpp"

namespace quasidiff {

/// The function is not s-continuous (e.g. varies along a plateau).
class NotInScaleClass : public Error {
 public:
  using Error::Error;
};

/// Piecewise-linear function on the image side.
///
/// `host` is the interpolant of the breakpoints, extended past the first/last
/// breakpoint with the given end slopes. Only its values on I_hat matter;
/// across gaps the interpolation is affine by construction.
struct LiftedFunction {
  std::vector<std::pair<double, double>> breakpoints;  ///< (x_hat, h(x_hat)), strictly increasing
  double left_slope = 0.0;
  double right_slope = 0.0;

  double operator()(double x) const;
  /// Slope on (x, x+) (right derivative).
  double slope_right(double x) const;
};

/// Element of the class S on the triple side: f = f_c + f+ + f-.
///
/// `c0` is f at the scale's reference point. `g_c[i]` is df_c/ds_c on segment
/// i, `g_minus[j]` and `g_plus[j]` are the coefficients at jump j, so that
/// f(x) - f(x-) = g_minus * left_gap and f(x+) - f(x) = g_plus * right_gap.
/// Values of g_c on zero-slope segments are irrelevant and treated as 0.
struct TripleFunction {
  double c0 = 0.0;
  std::vector<double> g_c;
  std::vector<double> g_minus;
  std::vector<double> g_plus;

  /// Values at every finite node of the scale: f(x-), f(x), f(x+).
  struct NodeValue {
    ExtendedReal x;
    double left = 0.0;
    double mid = 0.0;
    double right = 0.0;
  };

  /// Builds f from its values at the scale's nodes (segment ends in order).
  /// Rejects values that are not s-continuous. f is constant on infinite
  /// segments.
  static TripleFunction from_node_values(const GeneralizedScale& s,
                                         const std::vector<NodeValue>& values);

  /// f = s itself (all densities 1).
  static TripleFunction identity(const GeneralizedScale& s);

  /// Node values f(n-), f(n), f(n+) for every segment boundary (infinite ends
  /// carry limits, possibly +-inf).
  std::vector<NodeValue> node_values(const GeneralizedScale& s) const;

  /// f(x) for x in [l, r] (finite).
  double operator()(const GeneralizedScale& s, double x) const;
};

LiftedFunction lift(const TripleFunction& f, const Triple& t, const RegularizedPackage& pkg);

/// Half the Dirichlet integral over I_hat plus the gap sum; may be +inf.
double energy_image(const LiftedFunction& f, const RegularizedPackage& pkg);
/// Half the sum of the squared densities against mu_c, mu_d+, mu_d-.
double energy_triple(const TripleFunction& f, const GeneralizedScale& s);

bool membership_F(const LiftedFunction& f, const RegularizedPackage& pkg);

/// Integral of f^2 against m_hat (may be +inf).
double l2_norm_squared(const LiftedFunction& f, const RegularizedPackage& pkg);

enum class Recurrence { transient, recurrent };
Recurrence transience(const RegularizedPackage& pkg);

/// Arclength map F(x) = |(base, x) n I_hat| (signed) and its right-continuous
/// pseudo-inverse G(t) = inf{x : F(x) > t}.
class ArclengthMaps {
 public:
  explicit ArclengthMaps(const NearlyClosedSet& set, double base = 0.0);
  double F(double x) const;
  ExtendedReal G(double t) const;

 private:
  std::vector<ClosedInterval> comps_;
  double base_;
  ExtendedReal l_hat_;
  ExtendedReal r_hat_;
};

ArclengthMaps arclength_maps(const RegularizedPackage& pkg, double base = 0.0);

/// min(max(f, 0), 1), inserting the crossing points as new breakpoints.
LiftedFunction unit_contraction(const LiftedFunction& f);

}  // namespace quasidiff
