#pragma once

// Small floating-point helpers shared by the dynamics modules: reduction mod 1,
// exact-ish products reduced mod 1, unit phasors, and a double-double type used
// for long orbits.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace mixlab {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Representative of v mod 1 in [0, 1).
inline double frac(double v) {
  double r = v - std::floor(v);
  return r >= 1.0 ? 0.0 : r;
}

/// a*k mod 1 with the rounding error of the product recovered by an FMA, so the
/// result stays accurate when a*k is large. Requires |k| < 2^53.
inline double frac_product(double a, std::int64_t k) {
  const double kd = static_cast<double>(k);
  const double p = a * kd;
  const double e = std::fma(a, kd, -p);
  return frac(frac(p) + e);
}

/// C(j,2) = j(j-1)/2, extended to negative j by the same polynomial.
inline std::int64_t binom2(std::int64_t j) { return j * (j - 1) / 2; }

/// e^{2 pi i theta}; theta is first centered to [-1/2, 1/2].
inline Complex unit_phasor(double theta) {
  const double t = theta - std::nearbyint(theta);
  return {std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
}

/// Distance on the circle R/Z.
inline double circle_distance(double a, double b) {
  const double d = std::fabs(frac(a - b));
  return std::fmin(d, 1.0 - d);
}

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  static DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
  }

  static DoubleDouble two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
  }

  DoubleDouble& operator+=(double b) {
    DoubleDouble s = two_sum(hi, b);
    s.lo += lo;
    *this = quick(s.hi, s.lo);
    return *this;
  }

  DoubleDouble& operator+=(const DoubleDouble& b) {
    DoubleDouble s = two_sum(hi, b.hi);
    s.lo += lo + b.lo;
    *this = quick(s.hi, s.lo);
    return *this;
  }

  friend DoubleDouble operator+(DoubleDouble a, const DoubleDouble& b) { return a += b; }
  friend DoubleDouble operator+(DoubleDouble a, double b) { return a += b; }

  /// Reduce mod 1 into [0, 1).
  DoubleDouble frac() const {
    const double f = std::floor(hi);
    DoubleDouble r = quick(hi - f, lo);
    if (r.hi < 0.0 || (r.hi == 0.0 && r.lo < 0.0)) r += 1.0;
    if (r.hi >= 1.0) r += -1.0;
    return r;
  }

  double value() const { return hi + lo; }

 private:
  static DoubleDouble quick(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
  }
};

}  // namespace mixlab
