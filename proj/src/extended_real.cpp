#include "quasidiff/extended_real.hpp"

#include <cstdio>

namespace quasidiff {

std::string ExtendedReal::to_string() const {
  if (is_pos_inf()) return "inf";
  if (is_neg_inf()) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
  if (a.is_finite() && b.is_finite()) return ExtendedReal(a.value_ + b.value_);
  if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
    throw DomainError("inf - inf is undefined");
  return a.is_finite() ? b : a;
}

ExtendedReal operator-(ExtendedReal a) {
  if (a.is_pos_inf()) return ExtendedReal::neg_inf();
  if (a.is_neg_inf()) return ExtendedReal::pos_inf();
  return ExtendedReal(-a.value_);
}

ExtendedReal operator*(ExtendedReal a, ExtendedReal b) {
  if (a.is_finite() && b.is_finite()) return ExtendedReal(a.value_ * b.value_);
  const double x = a.as_double();
  const double y = b.as_double();
  if (x == 0.0 || y == 0.0) throw DomainError("0 * inf is undefined");
  return (x > 0) == (y > 0) ? ExtendedReal::pos_inf() : ExtendedReal::neg_inf();
}

}  // namespace quasidiff
