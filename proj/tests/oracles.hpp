#pragma once

// Reference implementations used only by the tests. They deliberately avoid the
// library's fast paths: plain 3x3 matrices, step-by-step orbits in long double and
// term-by-term evaluation of exponentials.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using Matrix3 = std::array<std::array<double, 3>, 3>;

inline Matrix3 unipotent(double x, double y, double z) {
  return {{{1.0, x, z}, {0.0, 1.0, y}, {0.0, 0.0, 1.0}}};
}

inline Matrix3 multiply(const Matrix3& a, const Matrix3& b) {
  Matrix3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

struct Mode {
  int m;
  int k;
  std::complex<double> c;
};

inline long double wrap(long double v) { return v - std::floor(v); }

/// j-fold application of (x, y) -> (x + alpha, y + x + beta), in long double.
inline std::array<double, 2> iterate(double alpha, double beta, double x, double y, long j) {
  long double X = x, Y = y;
  for (long i = 0; i < j; ++i) {
    const long double nx = wrap(X + alpha);
    Y = wrap(Y + X + beta);
    X = nx;
  }
  return {static_cast<double>(X), static_cast<double>(Y)};
}

inline std::complex<double> evaluate(const std::vector<Mode>& modes, double x, double y) {
  std::complex<double> s{};
  const double two_pi = 2.0 * std::acos(-1.0);
  for (const Mode& md : modes)
    s += md.c * std::exp(std::complex<double>(0.0, two_pi * (md.m * x + md.k * y)));
  return s;
}

/// sum_{j<n} Phi(f^j(x, y)) by stepping the orbit.
inline std::complex<double> birkhoff(const std::vector<Mode>& modes, double alpha, double beta,
                                     double x, double y, long n) {
  long double X = x, Y = y;
  std::complex<double> s{};
  for (long i = 0; i < n; ++i) {
    s += evaluate(modes, static_cast<double>(X), static_cast<double>(Y));
    const long double nx = wrap(X + alpha);
    Y = wrap(Y + X + beta);
    X = nx;
  }
  return s;
}

}  // namespace oracle
