#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace quasidiff {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition or domain violation (bad arguments, undefined arithmetic).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Real number or one of the two signed infinities.
///
/// Infinities are tagged rather than approximated; arithmetic that has no
/// value in the extended reals (inf - inf, 0 * inf) throws DomainError.
class ExtendedReal {
 public:
  enum class Kind { neg_inf, finite, pos_inf };

  constexpr ExtendedReal() = default;
  ExtendedReal(double v) : kind_(Kind::finite), value_(v) {  // NOLINT(implicit)
    if (std::isnan(v)) throw DomainError("NaN is not an extended real");
    if (std::isinf(v)) {
      kind_ = v > 0 ? Kind::pos_inf : Kind::neg_inf;
      value_ = 0.0;
    }
  }

  static constexpr ExtendedReal pos_inf() { return ExtendedReal(Kind::pos_inf); }
  static constexpr ExtendedReal neg_inf() { return ExtendedReal(Kind::neg_inf); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::finite; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::neg_inf; }

  /// Finite value; throws for infinities.
  double value() const {
    if (!is_finite()) throw DomainError("ExtendedReal::value() on an infinite value");
    return value_;
  }

  /// IEEE double view (infinities map to +-inf). For ordering and I/O only.
  constexpr double as_double() const {
    switch (kind_) {
      case Kind::pos_inf: return std::numeric_limits<double>::infinity();
      case Kind::neg_inf: return -std::numeric_limits<double>::infinity();
      default: return value_;
    }
  }

  std::string to_string() const;

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.value_ == b.value_);
  }
  friend constexpr bool operator<(ExtendedReal a, ExtendedReal b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) < static_cast<int>(b.kind_);
    return a.kind_ == Kind::finite && a.value_ < b.value_;
  }
  friend constexpr bool operator!=(ExtendedReal a, ExtendedReal b) { return !(a == b); }
  friend constexpr bool operator>(ExtendedReal a, ExtendedReal b) { return b < a; }
  friend constexpr bool operator<=(ExtendedReal a, ExtendedReal b) { return !(b < a); }
  friend constexpr bool operator>=(ExtendedReal a, ExtendedReal b) { return !(a < b); }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b);
  friend ExtendedReal operator-(ExtendedReal a);
  friend ExtendedReal operator-(ExtendedReal a, ExtendedReal b) { return a + (-b); }
  friend ExtendedReal operator*(ExtendedReal a, ExtendedReal b);

  ExtendedReal& operator+=(ExtendedReal b) { return *this = *this + b; }

 private:
  constexpr explicit ExtendedReal(Kind k) : kind_(k) {}

  Kind kind_ = Kind::finite;
  double value_ = 0.0;
};

inline ExtendedReal min(ExtendedReal a, ExtendedReal b) { return b < a ? b : a; }
inline ExtendedReal max(ExtendedReal a, ExtendedReal b) { return a < b ? b : a; }

}  // namespace quasidiff
