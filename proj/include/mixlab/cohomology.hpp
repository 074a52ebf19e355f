#pragma once

// Fourier cohomology of the skew-shift. L^2 of the torus splits into the fiber-constant
// part H0 and the orbit components H_{(m,n)} = span{e_{m+jn,n} : j in Z}, n != 0,
// 0 <= m < |n|. On each component the operator u -> u o f - u has a single invariant
// distribution D_{(m,n)}; it vanishes exactly on coboundaries.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mixlab/numeric.hpp"
#include "mixlab/skewshift.hpp"
#include "mixlab/trigpoly.hpp"

namespace mixlab::cohomology {

using skew::SkewShift;

struct OrbitLabel {
  int m = 0;  ///< 0 <= m < |n|
  int n = 1;  ///< nonzero

  auto operator<=>(const OrbitLabel&) const = default;
};

/// Canonical label and index of the mode e_{a,b}, b != 0.
OrbitLabel label_of(int a, int b);
std::int64_t index_of(int a, int b);

struct ComponentSpectrum {
  OrbitLabel label;
  std::map<std::int64_t, Complex> coeffs;  ///< j -> Phi_j, coefficient of e_{m+jn,n}

  bool empty() const { return coeffs.empty(); }
  double l2_norm() const;
};

struct Decomposition {
  TrigPoly1D h0;  ///< the b = 0 modes, a function of x
  std::vector<ComponentSpectrum> components;  ///< ordered by label
};

Decomposition decompose_components(const FiberedTrigPoly& phi);
FiberedTrigPoly reconstruct(const ComponentSpectrum& s);
FiberedTrigPoly reconstruct(const Decomposition& d);

struct DistributionValue {
  Complex value;
  OrbitLabel label;
};

/// e^{-2 pi i [(alpha m + beta n) j + alpha n C(j,2)]}.
Complex distribution_weight(const SkewShift& f, const OrbitLabel& label, std::int64_t j);

DistributionValue evaluate_distribution(const SkewShift& f, const ComponentSpectrum& s);

/// Spectrum of (sum_j Phi_j e_{m+jn,n}) o f.
ComponentSpectrum compose_with_skew(const SkewShift& f, const ComponentSpectrum& s);

struct ComponentSolution {
  ComponentSpectrum u;        ///< left-sum transfer function
  ComponentSpectrum u_right;  ///< right-sum form, kept as a consistency check
  Complex distribution;
  /// max_j |u_j - u_right_j|; equals |D| up to rounding.
  double consistency = 0.0;
};

/// Solves u o f - u = S on the component of S. Throws ObstructionNonzero when
/// |D(S)| > tol * ||S||.
ComponentSolution solve_component_detailed(const SkewShift& f, const ComponentSpectrum& s,
                                           double tol = 1e-9);
ComponentSpectrum solve_component(const SkewShift& f, const ComponentSpectrum& s,
                                  double tol = 1e-9);

double sobolev_norm(const FiberedTrigPoly& phi, double s);
double sobolev_norm(const ComponentSpectrum& spectrum, double s);

enum class Verdict { Mixing, Trivial };
std::string to_string(Verdict v);

struct ClassifierEntry {
  OrbitLabel label;
  Complex value;
  /// The sum was an exact floating-point zero (no rounding involved).
  bool exact_zero = false;
};

struct ClassifierReport {
  Verdict verdict = Verdict::Trivial;
  std::vector<ClassifierEntry> entries;
  double phi_norm = 0.0;  ///< L^2 norm of the zero-fiber-average part
  double tol = 0.0;
};

/// Mixing iff some |D_{(m,n)}(phi)| > tol * ||phi||_{L^2}.
ClassifierReport classify_roof(const SkewShift& f, const FiberedTrigPoly& phi,
                               double tol = 1e-9);

/// ||sum_{k<N} S o f^k||^2_{L^2}, exactly, through the window-sum identity.
double ergodic_sum_l2(const SkewShift& f, const ComponentSpectrum& s, std::int64_t N);

struct ConvergentTimes {
  double alpha = 0.0;
  std::vector<std::int64_t> partial_quotients;  ///< a_1..a_L
  std::vector<std::int64_t> denominators;       ///< q_1..q_L
};

/// Continued-fraction denominators of alpha, computed by exact Euclid on the binary
/// rational that the double represents. Throws RationalAlpha when the expansion ends
/// in fewer than L terms.
ConvergentTimes convergent_times(double alpha, int L);

/// max over a grid x grid lattice of |Phi_N| / sqrt(N); a lower bound for the sup.
/// Requires zero fiber average.
double uniform_bound_scan(const SkewShift& f, const FiberedTrigPoly& phi, std::int64_t N,
                          int grid, int workers = 0);

struct CoboundarySolution {
  FiberedTrigPoly u;
  double mean = 0.0;
};

/// Transfer function u with Phi = mean + u o f - u: orbit components through the
/// left-sum formula, the fiber average through the rotation solver. Throws
/// ObstructionNonzero if some component is obstructed, SmallDivisor on resonances.
CoboundarySolution solve_coboundary(const SkewShift& f, const FiberedTrigPoly& phi,
                                    double tol = 1e-9);

}  // namespace mixlab::cohomology
