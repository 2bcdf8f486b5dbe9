#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "quasidiff/regularize.hpp"
#include "quasidiff/series.hpp"

namespace quasidiff {

enum class Finiteness { finite, infinite, undetermined };

/// Value of sigma or lambda at one endpoint. `value` is exact when finite and
/// the explicit partial sum otherwise.
struct EndValue {
  Finiteness finiteness = Finiteness::finite;
  double value = 0.0;
  std::string method;  ///< "closed form" or the series test used

  bool is_finite() const { return finiteness == Finiteness::finite; }
  bool is_infinite() const { return finiteness == Finiteness::infinite; }
  ExtendedReal as_extended() const;
};

enum class FellerClass { regular, exit, entrance, natural, undetermined };
const char* to_string(FellerClass c);
const char* to_string(Finiteness f);

struct EndpointReport {
  ExtendedReal position;  ///< limit of the state space at this end
  EndValue sigma;
  EndValue lambda;
  FellerClass cls = FellerClass::undetermined;
  bool accessible = false;
  bool in_state_space = false;
};

struct FellerReport {
  double base = 0.0;  ///< interior reference point the integrals start from
  EndpointReport left;
  EndpointReport right;
  bool conservative = false;
  bool determined = true;  ///< false when some series test was inconclusive
};

/// Atoms continuing an atomic image measure past its last explicit atom on
/// one side (used for truncated infinite chains).
///
/// Atom j (j = first, first+1, ...) sits log_spacing(j) (in log) away from
/// atom j-1 and carries mass exp(log_mass(j)). The tail endpoint is excluded
/// from the state space.
struct AtomTail {
  std::function<double(std::size_t)> log_spacing;
  std::function<double(std::size_t)> log_mass;
  std::size_t first = 0;
  std::size_t horizon = 0;  ///< number of tail terms fed to the series tests
};

struct SigmaLambda {
  EndValue sigma_l, lambda_l, sigma_r, lambda_r;
};

/// Interior base point: 0 when it lies in (l_hat, r_hat), else the midpoint
/// of the bounded interval, else one unit inside the finite end.
double default_base(const RegularizedPackage& p);

SigmaLambda sigma_lambda(const RegularizedPackage& p, double base);
SigmaLambda sigma_lambda(const RegularizedPackage& p);

FellerClass class_from(const EndValue& sigma, const EndValue& lambda);

FellerReport feller_classify(const RegularizedPackage& p);
/// Classification with the right end continued by `tail` (the package must
/// be purely atomic).
FellerReport feller_classify(const RegularizedPackage& p, const AtomTail& right_tail);

}  // namespace quasidiff
