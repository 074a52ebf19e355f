#include "mixlab/specialflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "mixlab/errors.hpp"
#include "mixlab/parallel.hpp"
#include "mixlab/random.hpp"

namespace mixlab::flow {

namespace {

inline double roof_at(const Roof& roof, const TorusPoint& p) {
  return roof.phi.evaluate_real(p.x, p.y);
}

struct Landing {
  TorusPoint p;
  double z;
  std::int64_t n;  // signed number of base steps
};

// Moves level s = z + t into [0, height(p)) by walking the base orbit. `height` is the
// roof seen from a base point; forward steps subtract via the Birkhoff sum, backward
// steps add roofs of preimages.
template <class Height>
Landing land(const SkewShift& f, TorusPoint p, double s, Height&& height) {
  std::int64_t n = 0;
  if (s >= 0.0) {
    double sum = 0.0;
    for (;;) {
      const double h = height(p);
      if (!(sum + h < s)) break;
      sum += h;
      p = skew::step(f, p);
      ++n;
    }
    return {p, s - sum, n};
  }
  double sum = 0.0;
  while (s + sum < 0.0) {
    p = skew::inverse_step(f, p);
    sum += height(p);
    --n;
  }
  return {p, s + sum, n};
}

double flow_distance(const FlowPoint& a, const FlowPoint& b) {
  return std::max({circle_distance(a.x, b.x), circle_distance(a.y, b.y),
                   std::fabs(a.z - b.z)});
}

}  // namespace

Roof certify_roof(const FiberedTrigPoly& phi) {
  if (!phi.is_real()) throw ValidationError("roof must be real-flagged");
  const auto modes = phi.modes();
  double curvature = 0.0;
  for (const auto& mode : modes) {
    const double w = std::abs(mode.m) + std::abs(mode.k);
    curvature += std::abs(mode.c) * 4.0 * std::numbers::pi * std::numbers::pi * w * w;
  }
  int grid = std::max(8, 8 * phi.max_frequency());
  auto slack_for = [&](int g) {
    const double half = 0.5 / g;
    return 0.5 * curvature * half * half;
  };
  while (slack_for(grid) > 1e-3) grid *= 2;

  std::vector<Complex> ex(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) ex[i] = unit_phasor(static_cast<double>(i) / grid);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < grid; ++i) {
    for (int l = 0; l < grid; ++l) {
      const double v = phi.evaluate_phasors(ex[i], ex[l]).real();
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  Roof roof;
  roof.phi = phi;
  roof.grid = grid;
  roof.slack = slack_for(grid);
  roof.certified_min = lo - roof.slack;
  roof.certified_max = hi + roof.slack;
  roof.mean = phi.mean();
  if (!(roof.certified_min > 0.0)) throw NonPositiveRoof(roof.certified_min);
  return roof;
}

Cube make_cube(const Roof& roof, double x1, double x2, double y1, double y2, double h) {
  if (!(0.0 <= x1 && x1 <= x2 && x2 <= 1.0 && 0.0 <= y1 && y1 <= y2 && y2 <= 1.0))
    throw ValidationError("cube base must be a rectangle inside [0,1]^2");
  if (!(h > 0.0 && h < roof.certified_min))
    throw ValidationError("cube height must satisfy 0 < h < min roof");
  return {x1, x2, y1, y2, h};
}

double cube_measure(const Roof& roof, const Cube& q) { return q.volume() / roof.mean; }

std::int64_t hit_count(const Roof& roof, const SkewShift& f, const FlowPoint& p, double t) {
  if (!(t >= 0.0)) throw ValidationError("hit_count requires t >= 0");
  const double target = t + p.z;
  std::int64_t n = 0;
  double sum = 0.0;
  TorusPoint q{p.x, p.y};
  for (;;) {
    const double next = sum + roof_at(roof, q);
    if (!(next < target)) break;
    sum = next;
    q = skew::step(f, q);
    ++n;
  }
  return n;
}

FlowPoint flow_at(const Roof& roof, const SkewShift& f, const FlowPoint& p, double t) {
  const Landing l = land(f, {p.x, p.y}, p.z + t, [&](const TorusPoint& q) { return roof_at(roof, q); });
  return {l.p.x, l.p.y, l.z};
}

FlowPoint sample_measure(const Roof& roof, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  for (;;) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    const double z = rng.uniform(0.0, roof.certified_max);
    if (z < roof.phi.evaluate_real(x, y)) return {x, y, z};
  }
}

CorrelationEstimate correlate_cubes(const Roof& roof, const SkewShift& f, const Cube& q1,
                                    const Cube& q2, double t, std::int64_t samples,
                                    std::uint64_t seed, int workers) {
  if (samples < 1000) throw ValidationError("correlate_cubes requires at least 1000 samples");
  std::vector<unsigned char> hit(static_cast<std::size_t>(samples));
  parallel_for(hit.size(), workers, [&](std::size_t i) {
    const FlowPoint p = sample_measure(roof, seed, i);
    hit[i] = q1.contains(p) && q2.contains(flow_at(roof, f, p, t)) ? 1 : 0;
  });
  std::int64_t count = 0;
  for (unsigned char h : hit) count += h;
  const double n = static_cast<double>(samples);
  const double mean = static_cast<double>(count) / n;
  const double var = n > 1 ? mean * (1.0 - mean) * n / (n - 1.0) : 0.0;
  CorrelationEstimate out;
  out.value = mean - cube_measure(roof, q1) * cube_measure(roof, q2);
  out.std_error = std::sqrt(var / n);
  out.samples = samples;
  out.seed = seed;
  return out;
}

double fiber_mixing_profile(const Roof& roof, const SkewShift& f, double x, double y1,
                            double y2, const Cube& q, double t, int resolution) {
  if (resolution < 256) throw ValidationError("fiber profile resolution must be >= 256");
  if (!(0.0 <= y1 && y1 < y2 && y2 <= 1.0)) throw ValidationError("fiber arc must satisfy 0 <= y1 < y2 <= 1");
  const double len = y2 - y1;
  std::int64_t count = 0;
  for (int i = 0; i < resolution; ++i) {
    const double y = y1 + len * (i + 0.5) / resolution;
    if (q.contains(flow_at(roof, f, {frac(x), y, 0.0}, t))) ++count;
  }
  return len * static_cast<double>(count) / resolution;
}

IterationBounds discrete_iteration_bounds(const Roof& roof, const SkewShift& f, double x,
                                          double a, double b, double t, int resolution) {
  if (!(t > 0.0)) throw ValidationError("discrete_iteration_bounds requires t > 0");
  if (!(0.0 <= a && a < b && b <= 1.0)) throw ValidationError("arc must satisfy 0 <= a < b <= 1");
  if (resolution < 64) throw ValidationError("resolution must be >= 64");
  IterationBounds out;
  out.n_lower = std::numeric_limits<std::int64_t>::max();
  out.n_upper = 0;
  for (int i = 0; i < resolution; ++i) {
    const double y = a + (b - a) * (i + 0.5) / resolution;
    const std::int64_t n = hit_count(roof, f, {frac(x), y, 0.0}, t);
    out.n_lower = std::min(out.n_lower, n);
    out.n_upper = std::max(out.n_upper, n);
  }
  if (out.n_lower > 0) {
    const TrigPoly1D g = skew::fiber_coefficients(f, roof.phi, x, out.n_lower);
    out.stretch = skew::oscillation_on_arc(g, a, b, resolution);
  }
  const double hi = roof.certified_max;
  const double lo = roof.certified_min;
  out.lower_bound = out.stretch / hi - hi / lo;
  out.upper_bound = out.stretch / lo + hi / lo;
  const double spread = static_cast<double>(out.n_upper - out.n_lower);
  out.lower_holds = out.lower_bound <= spread;
  out.upper_holds = spread <= out.upper_bound;
  return out;
}

double hitting_complement_measure(const Roof& roof, const SkewShift& f, double t, double C,
                                  int grid, int workers) {
  if (!(C > 1.0)) throw ValidationError("hitting measure requires C > 1");
  if (grid < 256) throw ValidationError("hitting measure requires grid >= 256");
  if (!(t >= 0.0)) throw ValidationError("hitting measure requires t >= 0");
  const FiberedTrigPoly& phi = roof.phi;
  const int d = phi.degree_y();
  const bool real = phi.is_real();

  std::vector<Complex> ey(static_cast<std::size_t>(grid) * d);
  for (int l = 0; l < grid; ++l) {
    const Complex e1 = unit_phasor((l + 0.5) / grid);
    Complex e = 1.0;
    for (int k = 1; k <= d; ++k) {
      e *= e1;
      ey[static_cast<std::size_t>(l) * d + (k - 1)] = e;
    }
  }
  // Value of sum_k c_k e^{2 pi i k y_l} on the y-grid, with or without the k = 0 term.
  auto grid_value = [&](const std::vector<Complex>& c, int l, bool with_mean) {
    const Complex* e = d > 0 ? &ey[static_cast<std::size_t>(l) * d] : nullptr;
    Complex v = with_mean ? c[d] : Complex{};
    for (int k = 1; k <= d; ++k) v += c[k + d] * e[k - 1] + c[d - k] * std::conj(e[k - 1]);
    return real ? std::fabs(v.real()) : std::abs(v);
  };

  std::vector<unsigned char> fails(static_cast<std::size_t>(grid));
  parallel_for(fails.size(), workers, [&](std::size_t row) {
    const double x = (static_cast<double>(row) + 0.5) / grid;
    std::vector<Complex> sums(static_cast<std::size_t>(2 * d + 1));
    std::vector<Complex> prev = sums;
    std::vector<Complex> ck;
    skew::PhaseAccumulator acc(f, {x, 0.0}, skew::Precision::Double);
    for (;;) {
      prev = sums;
      phi.fiber_values(phi.degree_x() > 0 ? unit_phasor(acc.base()) : Complex{1.0}, ck);
      const Complex e1 = d > 0 ? unit_phasor(acc.phase()) : Complex{1.0};
      Complex e = 1.0;
      sums[d] += ck[d];
      for (int k = 1; k <= d; ++k) {
        e *= e1;
        sums[k + d] += ck[k + d] * e;
        sums[d - k] += ck[d - k] * std::conj(e);
      }
      acc.advance();
      // Does max_y Phi_n(x, y) reach t? Screen with the coefficient bound first.
      double bound = sums[d].real();
      for (int k = 1; k <= d; ++k) bound += std::abs(sums[k + d]) + std::abs(sums[d - k]);
      if (bound < t) continue;
      double vmax = -std::numeric_limits<double>::infinity();
      for (int l = 0; l < grid; ++l) {
        const Complex* ep = d > 0 ? &ey[static_cast<std::size_t>(l) * d] : nullptr;
        Complex v = sums[d];
        for (int k = 1; k <= d; ++k) v += sums[k + d] * ep[k - 1] + sums[d - k] * std::conj(ep[k - 1]);
        vmax = std::max(vmax, v.real());
      }
      if (vmax >= t) break;
    }
    // prev holds the coefficients of Phi_{n(x)}.
    double vmax = 0.0;
    for (int l = 0; l < grid; ++l) vmax = std::max(vmax, grid_value(prev, l, false));
    fails[row] = vmax > C ? 0 : 1;
  });
  std::int64_t count = 0;
  for (unsigned char v : fails) count += v;
  return static_cast<double>(count) / grid;
}

double trivial_conjugacy_check(const Roof& roof, const SkewShift& f, const FiberedTrigPoly& u,
                               double C, double t, int points, std::uint64_t seed) {
  if (points < 1) throw ValidationError("conjugacy check needs at least one point");
  if (!(C > 0.0)) throw ValidationError("conjugacy check needs a positive constant");
  FiberedTrigPoly residual = skew::compose(f, u) - u - roof.phi;
  residual.add_to_coefficient(0, 0, C);
  double l1 = 0.0;
  for (const auto& mode : residual.modes()) l1 += std::abs(mode.c);
  if (l1 > 1e-9) throw NotACoboundary(l1);

  auto u_at = [&](const TorusPoint& p) { return u.evaluate_real(p.x, p.y); };
  auto constant = [&](const TorusPoint&) { return C; };
  auto conjugate = [&](const TorusPoint& p, double z) {
    const Landing l = land(f, p, z + u_at(p), constant);
    return FlowPoint{l.p.x, l.p.y, l.z};
  };

  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const FlowPoint p = sample_measure(roof, seed, static_cast<std::uint64_t>(i));
    const FlowPoint moved = flow_at(roof, f, p, t);
    const FlowPoint lhs = conjugate({moved.x, moved.y}, moved.z);
    const Landing rl = land(f, {p.x, p.y}, p.z + u_at({p.x, p.y}) + t, constant);
    const FlowPoint rhs{rl.p.x, rl.p.y, rl.z};
    // (p, w) and (f p, w - C) are the same point of the constant suspension.
    double dev = flow_distance(lhs, rhs);
    const FlowPoint& top = lhs.z > rhs.z ? lhs : rhs;
    const FlowPoint& bottom = lhs.z > rhs.z ? rhs : lhs;
    const TorusPoint lifted = skew::step(f, {top.x, top.y});
    dev = std::min(dev, flow_distance({lifted.x, lifted.y, top.z - C}, bottom));
    worst = std::max(worst, dev);
  }
  return worst;
}

}  // namespace mixlab::flow
