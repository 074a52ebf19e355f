#pragma once

// The special flow under a positive roof Phi over the skew-shift: points (x, y, z)
// with 0 <= z < Phi(x, y), flowing up at unit speed and returning through
// (p, Phi(p)) ~ (f(p), 0). Includes the invariant-measure sampler, correlation
// estimators and the diagnostics used to watch the stretching mechanism.

#include <cstdint>

#include "mixlab/skewshift.hpp"
#include "mixlab/trigpoly.hpp"

namespace mixlab::flow {

using skew::SkewShift;
using skew::TorusPoint;

struct Roof {
  FiberedTrigPoly phi;
  double certified_min = 0.0;
  double certified_max = 0.0;
  double mean = 0.0;
  int grid = 0;        ///< grid size used for certification
  double slack = 0.0;  ///< bound on |grid extremum - true extremum|
};

/// Certifies min/max of a real roof on a uniform grid. The grid starts at 8 times the
/// maximal frequency and is doubled until the curvature slack at an interior extremum,
/// (1/2) sum |c| 4 pi^2 (|m| + |k|)^2 (h/2)^2, is at most 1e-3. Throws NonPositiveRoof
/// when the certified lower bound is not positive.
Roof certify_roof(const FiberedTrigPoly& phi);

struct FlowPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// [x1, x2] x [y1, y2] x [0, h] with 0 < h < certified_min.
struct Cube {
  double x1 = 0.0, x2 = 1.0;
  double y1 = 0.0, y2 = 1.0;
  double h = 0.0;

  bool contains(const FlowPoint& p) const {
    return p.x >= x1 && p.x <= x2 && p.y >= y1 && p.y <= y2 && p.z <= h;
  }
  double volume() const { return (x2 - x1) * (y2 - y1) * h; }
};

/// Validates a cube against the roof.
Cube make_cube(const Roof& roof, double x1, double x2, double y1, double y2, double h);

/// Normalized invariant measure |Q| / int Phi.
double cube_measure(const Roof& roof, const Cube& q);

struct CorrelationEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Largest n with Phi_n(x, y) < t + z (strict). Requires t >= 0.
std::int64_t hit_count(const Roof& roof, const SkewShift& f, const FlowPoint& p, double t);

/// Flow for time t (either sign); negative times step back through f^{-1}.
FlowPoint flow_at(const Roof& roof, const SkewShift& f, const FlowPoint& p, double t);

/// Rejection sample from the normalized invariant measure; a pure function of
/// (seed, stream).
FlowPoint sample_measure(const Roof& roof, std::uint64_t seed, std::uint64_t stream = 0);

/// Monte-Carlo estimate of mu(Q1 ∩ phi_{-t} Q2) - mu(Q1) mu(Q2). Sample i uses stream i,
/// so the result does not depend on the worker count.
CorrelationEstimate correlate_cubes(const Roof& roof, const SkewShift& f, const Cube& q1,
                                    const Cube& q2, double t, std::int64_t samples,
                                    std::uint64_t seed, int workers = 0);

/// Leb({x} x [y1, y2] ∩ phi_{-t} Q), on a midpoint grid of `resolution` points.
double fiber_mixing_profile(const Roof& roof, const SkewShift& f, double x, double y1,
                            double y2, const Cube& q, double t, int resolution = 1024);

struct IterationBounds {
  std::int64_t n_lower = 0;  ///< min of n_t over the arc (grid)
  std::int64_t n_upper = 0;  ///< max of n_t over the arc (grid)
  double stretch = 0.0;      ///< oscillation of Phi_{n_lower} on the arc
  double lower_bound = 0.0;  ///< stretch / max Phi - max Phi / min Phi
  double upper_bound = 0.0;  ///< stretch / min Phi + max Phi / min Phi
  bool lower_holds = true;
  bool upper_holds = true;
};

/// Compares the spread of n_t along a fiber arc with the stretch of the Birkhoff sum.
IterationBounds discrete_iteration_bounds(const Roof& roof, const SkewShift& f, double x,
                                          double a, double b, double t, int resolution = 2048);

/// Fraction of x (midpoint grid) for which max_y |phi_{n(x)}(x, y)| <= C, where
/// n(x) = min_y n_t(x, y) over a y-grid and phi is the zero-fiber-average part.
double hitting_complement_measure(const Roof& roof, const SkewShift& f, double t, double C,
                                  int grid, int workers = 0);

/// Max deviation between I o phi^Phi_t and phi^{C}_t o I, I(p, z) = (p, z + u(p)), at
/// `points` sampled phase points, compared in the quotient of the constant suspension.
/// Throws NotACoboundary when u o f - u differs from Phi - C by more than 1e-9
/// (coefficient l1 bound).
double trivial_conjugacy_check(const Roof& roof, const SkewShift& f, const FiberedTrigPoly& u,
                               double C, double t, int points, std::uint64_t seed = 1);

}  // namespace mixlab::flow
