#pragma once

// Arithmetic in the 3-dimensional Heisenberg group N, realized as upper triangular
// unipotent 3x3 matrices
//
//     [x, y, z]  <->  | 1 x z |
//                     | 0 1 y |
//                     | 0 0 1 |
//
// together with nilflows on the quotient by the lattice
// Gamma_E = { [a, b, c/E] : a, b, c integers }, the transverse torus section
// Sigma = { Gamma [x, 0, z] } and its first return map.

#include <functional>

#include "mixlab/errors.hpp"

namespace mixlab::heisenberg {

struct Element {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// W = w_x X + w_y Y + w_z Z in the Lie algebra.
struct AlgebraVector {
  double wx = 0.0;
  double wy = 0.0;
  double wz = 0.0;
};

/// Standard lattice with Euler number E >= 1.
class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(int euler) : euler_(euler) {
    if (euler < 1) throw ValidationError("lattice Euler number must be >= 1");
  }
  int euler() const { return euler_; }
  double z_period() const { return 1.0 / euler_; }

 private:
  int euler_ = 1;
};

/// A point of Gamma\N, stored by its representative in [0,1) x [0,1) x [0,1/E).
struct NilPoint {
  Element g;
};

Element group_mul(const Element& a, const Element& b);
Element group_inverse(const Element& a);

/// exp(tW) = [t w_x, t w_y, t w_z + t^2 w_x w_y / 2].
Element group_exp(const AlgebraVector& w, double t = 1.0);
/// Inverse of group_exp at t = 1.
AlgebraVector group_log(const Element& g);

struct Reduction {
  NilPoint point;
  /// gamma with gamma * point.g == g.
  Element lattice_element;
};

/// Reduces y, then x (shifting z by -floor(x) * y), then z mod 1/E.
Reduction reduce_mod_lattice(const Element& g, const Lattice& lattice = {});

/// p * exp(tW), reduced. Products are formed in double-double so the result stays
/// accurate for |t| up to ~1e6.
NilPoint nilflow_at(const NilPoint& p, const AlgebraVector& w, double t,
                    const Lattice& lattice = {});

/// Coordinates (x, z) of j(x, z) = Gamma exp(xX + zZ) = Gamma [x, 0, z].
struct SectionPoint {
  double x = 0.0;
  double z = 0.0;
};

NilPoint section_embed(const SectionPoint& s, const Lattice& lattice = {});

/// Closed-form return map: the flow at time 1/w_y maps j(x,z) to
/// j(x + w_x/w_y, z + x + w_z/w_y + w_x/(2 w_y)). Output reduced mod (1, 1/E).
/// Throws DegenerateSection if w_y == 0.
SectionPoint poincare_return(const AlgebraVector& w, const SectionPoint& s,
                             const Lattice& lattice = {});

struct NumericReturn {
  SectionPoint point;
  double time = 0.0;  ///< signed; equals 1/w_y
};

/// Flows j(x,z) with nilflow_at in the direction of sign(w_y) and locates the first
/// crossing of the section by bisection to a time tolerance of 1e-12.
NumericReturn poincare_return_numeric(const AlgebraVector& w, const SectionPoint& s,
                                      const Lattice& lattice = {});

using TimeChange = std::function<double(const NilPoint&)>;

/// Integral of the time-change density along the nilflow orbit of j(x,z) between
/// t = 0 and t = 1/w_y (adaptive Simpson, absolute error <= tol). This is the roof
/// of the time-changed flow over the same section.
double timechange_return_time(const TimeChange& alpha, const AlgebraVector& w,
                              const SectionPoint& s, double tol = 1e-10,
                              const Lattice& lattice = {});

/// Skew-shift parameters of the return map: alpha = w_x/w_y and
/// beta = w_z/w_y + w_x/(2 w_y), both reduced mod 1.
struct SkewParameters {
  double alpha = 0.0;
  double beta = 0.0;
};
SkewParameters section_skew_parameters(const AlgebraVector& w);

}  // namespace mixlab::heisenberg
