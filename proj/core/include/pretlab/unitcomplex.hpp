#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "pretlab/error.hpp"
#include "pretlab/numeric.hpp"

namespace pretlab {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kCircleTolerance = 1e-12;

inline double reduce_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;  // fmod can land exactly on 2*pi after the shift
  return r;
}

// Point on the unit circle, stored as an angle reduced to [0, 2*pi).
class UnitComplex {
 public:
  UnitComplex() : angle_(0.0) {}
  explicit UnitComplex(double angle) : angle_(reduce_angle(angle)) {}

  static UnitComplex one() { return UnitComplex(); }
  // e(x) = exp(2*pi*i*x)
  static UnitComplex e(double x) { return UnitComplex(kTwoPi * x); }

  double angle() const { return angle_; }
  // Angle mapped to (-pi, pi].
  double signed_angle() const {
    return angle_ > std::numbers::pi ? angle_ - kTwoPi : angle_;
  }
  std::complex<double> value() const { return std::polar(1.0, angle_); }

  UnitComplex operator*(const UnitComplex& o) const { return UnitComplex(angle_ + o.angle_); }
  UnitComplex conj() const { return UnitComplex(-angle_); }
  UnitComplex pow(long k) const { return UnitComplex(angle_ * static_cast<double>(k)); }

  // Chord distance |u - 1| = 2|sin(angle/2)|.
  double chord_to_one() const { return 2.0 * std::abs(std::sin(angle_ / 2.0)); }
  double chord_to(const UnitComplex& o) const { return (*this * o.conj()).chord_to_one(); }

  bool approx_one(double tol = kCircleTolerance) const { return chord_to_one() <= tol; }
  bool approx_equal(const UnitComplex& o, double tol = kCircleTolerance) const {
    return chord_to(o) <= tol;
  }

 private:
  double angle_;
};

// n^{it} for n >= 1.
inline UnitComplex unit_power(const Int& n, double t) {
  if (n < 1) raise("DomainError", "unit_power requires n >= 1");
  if (n == 1 || t == 0.0) return UnitComplex::one();
  return UnitComplex(t * log_int(n));
}

// x^i = exp(i ln x) for x > 0, with x given as a double-precision value.
inline UnitComplex unit_power_i(double x) {
  return UnitComplex(std::log(x));
}

}  // namespace pretlab
