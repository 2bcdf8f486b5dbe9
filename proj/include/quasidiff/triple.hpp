#pragma once

#include <string>
#include <vector>

#include "quasidiff/measure.hpp"
#include "quasidiff/scale.hpp"

namespace quasidiff {

/// Input rejected for failing the standing assumptions on (I, s, m).
class ValidationError : public Error {
 public:
  using Error::Error;
};

enum class Side { left, right };

/// Triple (I, s, m); the interval is carried by the scale.
class Triple {
 public:
  /// Checks that m lives on [l, r] and has infinite atoms only at l or r.
  Triple(GeneralizedScale scale, MeasureSpec measure);

  const GeneralizedScale& scale() const { return scale_; }
  const MeasureSpec& measure() const { return measure_; }
  ExtendedReal l() const { return scale_.l(); }
  ExtendedReal r() const { return scale_.r(); }
  ExtendedReal endpoint(Side side) const { return side == Side::left ? l() : r(); }

 private:
  GeneralizedScale scale_;
  MeasureSpec measure_;
};

/// Endpoint type of the triple.
struct EndpointClass {
  bool approachable = false;  ///< |s(j)| < inf
  bool regular = false;       ///< approachable and m(j-+) < inf
  bool reflecting = false;    ///< regular and m({j}) < inf

  /// "reflecting", "absorbing" (regular, infinite point mass) or "n/a".
  std::string label() const;
};

EndpointClass classify_endpoint_triple(Side side, const Triple& t);

struct ClauseResult {
  std::string clause;   ///< "DK", "DM-support", "DM-atom", "DM-isolated"
  bool passed = true;
  std::string witness;  ///< offending point or interval when failed
};

struct ValidationReport {
  std::vector<ClauseResult> clauses;
  bool ok() const;
  std::string summary() const;
};

ValidationReport validate_triple(const Triple& t);

/// Closed support E_m as merged closed intervals (points for isolated atoms).
std::vector<ClosedInterval> measure_support(const MeasureSpec& m);

}  // namespace quasidiff
