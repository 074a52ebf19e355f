#pragma once

// The linear skew-shift f(x, y) = (x + alpha, y + x + beta) on the 2-torus, its
// Birkhoff sums, and the fiber diagnostics (stretch, sublevel measures, visit
// frequencies) used to observe the growth of Birkhoff sums.

#include <cstdint>
#include <functional>
#include <vector>

#include "mixlab/numeric.hpp"
#include "mixlab/trigpoly.hpp"

namespace mixlab::skew {

enum class Precision { Double, DoubleDouble };

/// Orbits longer than this switch to double-double accumulation automatically.
inline constexpr std::int64_t kDoubleDoubleThreshold = 10'000'000;

class SkewShift {
 public:
  SkewShift(double alpha, double beta, Precision precision = Precision::Double);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  Precision precision() const { return precision_; }
  /// Precision actually used for an orbit of the given length.
  Precision precision_for(std::int64_t steps) const;

 private:
  double alpha_;
  double beta_;
  Precision precision_;
};

struct TorusPoint {
  double x = 0.0;
  double y = 0.0;
};

inline TorusPoint torus_point(double x, double y) { return {frac(x), frac(y)}; }

TorusPoint step(const SkewShift& f, const TorusPoint& p);
TorusPoint inverse_step(const SkewShift& f, const TorusPoint& p);

/// f^j(x, y) = (x + j alpha, y + j x + j beta + C(j,2) alpha) with every product
/// reduced mod 1 separately.
TorusPoint orbit_at(const SkewShift& f, const TorusPoint& p, std::int64_t j);

/// Orbit state (x_j, p_j) with x_j = x + j alpha and quadratic phase
/// p_j = j x + j beta + C(j,2) alpha, advanced by p_{j+1} = p_j + x_j + beta and
/// reduced mod 1 after every step. The current point is (x_j, y + p_j).
class PhaseAccumulator {
 public:
  PhaseAccumulator(const SkewShift& f, const TorusPoint& start, Precision precision);

  std::int64_t index() const { return index_; }
  double base() const { return x_.hi; }
  double phase() const { return p_.hi; }
  TorusPoint point() const { return {x_.hi, frac(y0_ + p_.hi + p_.lo)}; }

  void advance() {
    if (dd_) {
      p_ += x_;
      p_ += beta_;
      p_ = p_.frac();
      x_ += alpha_;
      x_ = x_.frac();
    } else {
      p_.hi = frac(p_.hi + x_.hi + beta_);
      x_.hi = frac(x_.hi + alpha_);
    }
    ++index_;
  }

 private:
  double alpha_;
  double beta_;
  double y0_;
  bool dd_;
  DoubleDouble x_;
  DoubleDouble p_;
  std::int64_t index_ = 0;
};

/// Phi_n(p) = sum_{j<n} Phi(f^j p), with Phi_0 = 0. For real-flagged Phi the
/// imaginary part is zero. Absolute error is O(n eps |Phi|) in double precision.
Complex birkhoff_sum(const SkewShift& f, const FiberedTrigPoly& phi, const TorusPoint& p,
                     std::int64_t n);

/// Values Phi_0(p), ..., Phi_{n}(p) (n + 1 entries), real parts only.
std::vector<double> birkhoff_trajectory(const SkewShift& f, const FiberedTrigPoly& phi,
                                        const TorusPoint& p, std::int64_t n);

struct Projection {
  FiberedTrigPoly phi;       ///< zero fiber average part
  TrigPoly1D phi_perp;       ///< fiber average, a function of x
};

/// Splits Phi into its zero-fiber-average part and the fiber average c_0.
Projection project(const FiberedTrigPoly& phi);

/// Phi o f as a fibered polynomial: e_{m,k} o f = e^{2 pi i (m alpha + k beta)} e_{m+k,k}.
FiberedTrigPoly compose(const SkewShift& f, const FiberedTrigPoly& phi);

/// Coefficients c_{k,n}(x) of y -> Phi_n(x, y) = sum_k c_{k,n}(x) e^{2 pi i k y}, returned
/// as a polynomial in y; c_{k,n}(x) = sum_{j<n} c_k(x + j alpha) e^{2 pi i k p_j(x)}.
TrigPoly1D fiber_coefficients(const SkewShift& f, const FiberedTrigPoly& phi, double x,
                              std::int64_t n);

/// phi_N(f^n p) - phi_N(p) where phi is the zero-fiber-average part of Phi.
double decoupling_difference(const SkewShift& f, const FiberedTrigPoly& phi,
                             const TorusPoint& p, std::int64_t n, std::int64_t N);

/// Oscillation max - min of y -> Phi_n(x, y) on the arc from a to b (taken
/// counterclockwise, b < a wraps). Uniform grid of `resolution` points refined by
/// golden-section search around the grid extrema.
double stretch(const SkewShift& f, const FiberedTrigPoly& phi, double x, double a, double b,
               std::int64_t n, int resolution = 1024);

/// Oscillation of an explicit fiber polynomial on an arc (same estimator as stretch).
double oscillation_on_arc(const TrigPoly1D& g, double a, double b, int resolution = 1024);

struct SublevelEstimate {
  double measure = 0.0;
  /// Bound on |measure - true value|: (boundary crossings per line) / grid.
  double error_bound = 0.0;
};

/// Fraction of midpoints (i + 1/2)/grid with |g| < C. `crossings` bounds the number of
/// boundary points of {|g| < C} on the circle and sets the reported error bound.
SublevelEstimate sublevel_measure(const std::function<double(double)>& g, double C, int grid,
                                  int crossings);
/// Real trig polynomial of degree D: at most 4D crossings.
SublevelEstimate sublevel_measure(const TrigPoly1D& g, double C, int grid);
/// Two-dimensional midpoint grid of grid x grid points.
SublevelEstimate sublevel_measure(const std::function<double(double, double)>& g, double C,
                                  int grid, int crossings_per_line, int workers = 0);

/// Leb(|Phi_n| < C) on the torus, estimated on a grid x grid midpoint lattice.
/// Rows are processed independently through fiber_coefficients.
SublevelEstimate birkhoff_sublevel_measure(const SkewShift& f, const FiberedTrigPoly& phi,
                                           std::int64_t n, double C, int grid,
                                           int workers = 0);

/// Same, for several n at once; one orbit pass per row. ns must be increasing.
std::vector<SublevelEstimate> birkhoff_sublevel_curve(const SkewShift& f,
                                                      const FiberedTrigPoly& phi,
                                                      const std::vector<std::int64_t>& ns,
                                                      double C, int grid, int workers = 0);

/// (1/N) #{0 <= n < N : |phi_n(p)| < C} for the zero-fiber-average part phi of Phi.
double visit_fraction(const SkewShift& f, const FiberedTrigPoly& phi, const TorusPoint& p,
                      double C, std::int64_t N);

struct RotationTransfer {
  TrigPoly1D g;
  double mean = 0.0;
};

/// Solves g(x + alpha) - g(x) = phi_perp(x) - mean for a trig polynomial phi_perp.
/// Throws SmallDivisor when |e^{2 pi i m alpha} - 1| < divisor_floor for some m in
/// the support.
RotationTransfer rotation_transfer(const TrigPoly1D& phi_perp, double alpha,
                                   double divisor_floor = 1e-12);

}  // namespace mixlab::skew
