#pragma once

// Finite Fourier series on the circle and fibered trigonometric polynomials on the
// 2-torus,
//
//     Phi(x, y) = sum_{|k| <= d} c_k(x) e^{2 pi i k y},
//     c_k(x)    = sum_{|m| <= D} a_{m,k} e^{2 pi i m x}.
//
// The fiberwise-polynomial roof class is exactly the set of such Phi with real
// values, so this type doubles as the machine representation of that class.

#include <vector>

#include "mixlab/numeric.hpp"

namespace mixlab {

class TrigPoly1D {
 public:
  TrigPoly1D() : coeffs_(1) {}
  explicit TrigPoly1D(int degree, bool real = false);

  static TrigPoly1D constant(double c);

  int degree() const { return degree_; }
  bool is_real() const { return real_; }

  /// Coefficient of e^{2 pi i m x}; zero outside the stored range.
  Complex coefficient(int m) const;
  /// Sets the coefficient, growing the degree as needed. On a real-flagged
  /// polynomial the mirror coefficient at -m is set to the conjugate.
  void set_coefficient(int m, Complex c);
  void add_to_coefficient(int m, Complex c);

  Complex evaluate(double x) const;
  /// Evaluates at e^{2 pi i x} given as a phasor.
  Complex evaluate_phasor(Complex ex) const;

  bool is_zero() const;
  double l2_norm() const;
  /// Sup norm of the coefficient vector.
  double coefficient_sup_norm() const;
  /// Sum of |coefficient|, an upper bound on the sup norm of the function.
  double coefficient_l1_norm() const;

  /// True when coefficient(-m) == conj(coefficient(m)) for every m, within tol.
  bool satisfies_realness(double tol = 0.0) const;
  void set_real_flag(bool real) { real_ = real; }

  TrigPoly1D& operator+=(const TrigPoly1D& other);
  TrigPoly1D& operator-=(const TrigPoly1D& other);
  TrigPoly1D& operator*=(double s);
  friend TrigPoly1D operator+(TrigPoly1D a, const TrigPoly1D& b) { return a += b; }
  friend TrigPoly1D operator-(TrigPoly1D a, const TrigPoly1D& b) { return a -= b; }
  friend TrigPoly1D operator*(double s, TrigPoly1D a) { return a *= s; }

 private:
  void grow(int degree);

  int degree_ = 0;
  std::vector<Complex> coeffs_;  // index m + degree_
  bool real_ = false;
};

class FiberedTrigPoly {
 public:
  struct Mode {
    int m = 0;  ///< frequency in x
    int k = 0;  ///< frequency in y
    Complex c;
  };

  FiberedTrigPoly() : coeffs_(1) {}
  FiberedTrigPoly(int degree_y, int degree_x, bool real = false);

  static FiberedTrigPoly constant(double c);
  /// Builds from a list of modes; on real-flagged input every mode must come with
  /// its conjugate mirror (use from_modes_real to add mirrors automatically).
  static FiberedTrigPoly from_modes(const std::vector<Mode>& modes, bool real);
  /// Real part of sum c e_{m,k} plus its conjugate image, i.e. the real function
  /// Re(sum c e_{m,k}) represented with both mirror modes.
  static FiberedTrigPoly real_part_of(const std::vector<Mode>& modes);
  /// The function g(x) viewed on the torus (only the k = 0 fiber).
  static FiberedTrigPoly from_base(const TrigPoly1D& g);

  int degree_y() const { return degree_y_; }
  int degree_x() const { return degree_x_; }
  bool is_real() const { return real_; }

  Complex coefficient(int m, int k) const;
  void set_coefficient(int m, int k, Complex c);
  void add_to_coefficient(int m, int k, Complex c);

  /// c_k as a polynomial in x.
  TrigPoly1D fiber(int k) const;

  Complex evaluate(double x, double y) const;
  /// Real part of evaluate; the function value for real-flagged polynomials.
  double evaluate_real(double x, double y) const;

  /// Evaluation from the unit phasors e^{2 pi i x}, e^{2 pi i y}. For real-flagged
  /// polynomials only nonnegative k are summed and the result is real.
  Complex evaluate_phasors(Complex ex, Complex ey) const;

  /// Fills out[k + d] = c_k(x) for |k| <= d from the phasor e^{2 pi i x}.
  void fiber_values(Complex ex, std::vector<Complex>& out) const;

  std::vector<Mode> modes() const;
  /// Largest |m| + |k| over nonzero modes.
  int max_frequency() const;
  double l2_norm() const;
  /// Integral over the torus.
  double mean() const { return coefficient(0, 0).real(); }
  bool is_zero() const;
  bool satisfies_realness(double tol = 0.0) const;
  void set_real_flag(bool real) { real_ = real; }

  FiberedTrigPoly& operator+=(const FiberedTrigPoly& other);
  FiberedTrigPoly& operator-=(const FiberedTrigPoly& other);
  FiberedTrigPoly& operator*=(double s);
  friend FiberedTrigPoly operator+(FiberedTrigPoly a, const FiberedTrigPoly& b) {
    return a += b;
  }
  friend FiberedTrigPoly operator-(FiberedTrigPoly a, const FiberedTrigPoly& b) {
    return a -= b;
  }
  friend FiberedTrigPoly operator*(double s, FiberedTrigPoly a) { return a *= s; }

 private:
  void grow(int degree_y, int degree_x);
  std::size_t index(int m, int k) const {
    return static_cast<std::size_t>(k + degree_y_) * (2 * degree_x_ + 1) +
           static_cast<std::size_t>(m + degree_x_);
  }

  int degree_y_ = 0;
  int degree_x_ = 0;
  std::vector<Complex> coeffs_;  // row k + d, column m + D
  bool real_ = false;
};

}  // namespace mixlab
