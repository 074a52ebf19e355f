#include "mixlab/skewshift.hpp"

#include <algorithm>
#include <cmath>

#include "mixlab/errors.hpp"
#include "mixlab/parallel.hpp"

namespace mixlab::skew {

SkewShift::SkewShift(double alpha, double beta, Precision precision)
    : alpha_(frac(alpha)), beta_(frac(beta)), precision_(precision) {
  if (!std::isfinite(alpha) || !std::isfinite(beta))
    throw ValidationError("skew-shift parameters must be finite");
}

Precision SkewShift::precision_for(std::int64_t steps) const {
  if (precision_ == Precision::DoubleDouble || steps > kDoubleDoubleThreshold)
    return Precision::DoubleDouble;
  return Precision::Double;
}

TorusPoint step(const SkewShift& f, const TorusPoint& p) {
  return {frac(p.x + f.alpha()), frac(p.y + p.x + f.beta())};
}

TorusPoint inverse_step(const SkewShift& f, const TorusPoint& p) {
  const double x = frac(p.x - f.alpha());
  return {x, frac(p.y - x - f.beta())};
}

TorusPoint orbit_at(const SkewShift& f, const TorusPoint& p, std::int64_t j) {
  if (j < 0) throw ValidationError("orbit_at requires j >= 0");
  const double x = frac(p.x + frac_product(f.alpha(), j));
  const double y = frac(p.y + frac_product(p.x, j) + frac_product(f.beta(), j) +
                        frac_product(f.alpha(), binom2(j)));
  return {x, y};
}

PhaseAccumulator::PhaseAccumulator(const SkewShift& f, const TorusPoint& start,
                                   Precision precision)
    : alpha_(f.alpha()),
      beta_(f.beta()),
      y0_(start.y),
      dd_(precision == Precision::DoubleDouble),
      x_{start.x, 0.0},
      p_{0.0, 0.0} {}

namespace {

// Hot-loop evaluation of Phi at the accumulator's current point.
inline Complex evaluate_at(const FiberedTrigPoly& phi, const TorusPoint& pt) {
  const Complex ex = phi.degree_x() > 0 ? unit_phasor(pt.x) : Complex{1.0};
  const Complex ey = phi.degree_y() > 0 ? unit_phasor(pt.y) : Complex{1.0};
  return phi.evaluate_phasors(ex, ey);
}

}  // namespace

Complex birkhoff_sum(const SkewShift& f, const FiberedTrigPoly& phi, const TorusPoint& p,
                     std::int64_t n) {
  if (n < 0) throw ValidationError("birkhoff_sum requires n >= 0");
  PhaseAccumulator acc(f, p, f.precision_for(n));
  DoubleDouble re;
  DoubleDouble im;
  for (std::int64_t j = 0; j < n; ++j) {
    const Complex v = evaluate_at(phi, acc.point());
    re += v.real();
    im += v.imag();
    acc.advance();
  }
  return {re.value(), phi.is_real() ? 0.0 : im.value()};
}

std::vector<double> birkhoff_trajectory(const SkewShift& f, const FiberedTrigPoly& phi,
                                        const TorusPoint& p, std::int64_t n) {
  if (n < 0) throw ValidationError("birkhoff_trajectory requires n >= 0");
  std::vector<double> out(static_cast<std::size_t>(n + 1));
  PhaseAccumulator acc(f, p, f.precision_for(n));
  DoubleDouble sum;
  out[0] = 0.0;
  for (std::int64_t j = 0; j < n; ++j) {
    sum += evaluate_at(phi, acc.point()).real();
    out[static_cast<std::size_t>(j + 1)] = sum.value();
    acc.advance();
  }
  return out;
}

Projection project(const FiberedTrigPoly& phi) {
  Projection out{phi, phi.fiber(0)};
  for (int m = -phi.degree_x(); m <= phi.degree_x(); ++m) out.phi.add_to_coefficient(m, 0, -phi.coefficient(m, 0));
  out.phi_perp.set_real_flag(phi.is_real());
  return out;
}

FiberedTrigPoly compose(const SkewShift& f, const FiberedTrigPoly& phi) {
  FiberedTrigPoly out(phi.degree_y(), phi.degree_x() + phi.degree_y(), false);
  for (const auto& mode : phi.modes()) {
    const double theta = frac_product(f.alpha(), mode.m) + frac_product(f.beta(), mode.k);
    out.add_to_coefficient(mode.m + mode.k, mode.k, mode.c * unit_phasor(theta));
  }
  if (phi.is_real()) {
    // Exact mirror symmetry holds since the phase at (-m,-k) is the conjugate.
    return FiberedTrigPoly::from_modes(out.modes(), true);
  }
  return out;
}

TrigPoly1D fiber_coefficients(const SkewShift& f, const FiberedTrigPoly& phi, double x,
                              std::int64_t n) {
  if (n < 0) throw ValidationError("fiber_coefficients requires n >= 0");
  const int d = phi.degree_y();
  const bool real = phi.is_real();
  const int k_lo = real ? 0 : -d;
  std::vector<Complex> sums(static_cast<std::size_t>(2 * d + 1));
  std::vector<Complex> ck;
  std::vector<Complex> ep(static_cast<std::size_t>(d + 1));
  PhaseAccumulator acc(f, {frac(x), 0.0}, f.precision_for(n));
  for (std::int64_t j = 0; j < n; ++j) {
    phi.fiber_values(phi.degree_x() > 0 ? unit_phasor(acc.base()) : Complex{1.0}, ck);
    const Complex e1 = d > 0 ? unit_phasor(acc.phase()) : Complex{1.0};
    ep[0] = 1.0;
    for (int k = 1; k <= d; ++k) ep[k] = ep[k - 1] * e1;
    for (int k = k_lo; k <= d; ++k) {
      const Complex e = k >= 0 ? ep[k] : std::conj(ep[-k]);
      sums[k + d] += ck[k + d] * e;
    }
    acc.advance();
  }
  TrigPoly1D out(d, false);
  for (int k = k_lo; k <= d; ++k) out.set_coefficient(k, sums[k + d]);
  if (real) {
    out.set_coefficient(0, {sums[d].real(), 0.0});
    for (int k = 1; k <= d; ++k) out.set_coefficient(-k, std::conj(sums[k + d]));
    out.set_real_flag(true);
  }
  return out;
}

double decoupling_difference(const SkewShift& f, const FiberedTrigPoly& phi,
                             const TorusPoint& p, std::int64_t n, std::int64_t N) {
  if (n < 1 || N < 1) throw ValidationError("decoupling_difference requires n, N >= 1");
  const FiberedTrigPoly zero_mean = project(phi).phi;
  const TorusPoint pn = orbit_at(f, p, n);
  return (birkhoff_sum(f, zero_mean, pn, N) - birkhoff_sum(f, zero_mean, p, N)).real();
}

namespace {

template <class Fn>
double golden_section_max(Fn&& g, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int it = 0; it < 80 && (b - a) > 1e-14; ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kInvPhi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kInvPhi * (b - a);
      gd = g(d);
    }
  }
  return std::max({gc, gd, g(lo), g(hi)});
}

}  // namespace

double oscillation_on_arc(const TrigPoly1D& g, double a, double b, int resolution) {
  if (resolution < 64) throw ValidationError("stretch resolution must be >= 64");
  a = frac(a);
  b = frac(b);
  double length = b - a;
  if (length <= 0.0) length += 1.0;
  auto value = [&](double y) { return g.evaluate(y).real(); };
  const int pts = resolution;
  const double h = length / (pts - 1);
  int i_max = 0;
  int i_min = 0;
  double v_max = value(a);
  double v_min = v_max;
  for (int i = 1; i < pts; ++i) {
    const double v = value(a + i * h);
    if (v > v_max) {
      v_max = v;
      i_max = i;
    }
    if (v < v_min) {
      v_min = v;
      i_min = i;
    }
  }
  auto bracket = [&](int i) {
    const double lo = a + std::max(0, i - 1) * h;
    const double hi = a + std::min(pts - 1, i + 1) * h;
    return std::pair{lo, hi};
  };
  const auto [max_lo, max_hi] = bracket(i_max);
  const auto [min_lo, min_hi] = bracket(i_min);
  v_max = std::max(v_max, golden_section_max(value, max_lo, max_hi));
  v_min = std::min(v_min, -golden_section_max([&](double y) { return -value(y); }, min_lo, min_hi));
  return v_max - v_min;
}

double stretch(const SkewShift& f, const FiberedTrigPoly& phi, double x, double a, double b,
               std::int64_t n, int resolution) {
  if (n < 1) throw ValidationError("stretch requires n >= 1");
  return oscillation_on_arc(fiber_coefficients(f, phi, x, n), a, b, resolution);
}

SublevelEstimate sublevel_measure(const std::function<double(double)>& g, double C, int grid,
                                  int crossings) {
  if (!(C > 0.0)) throw ValidationError("sublevel threshold C must be > 0");
  if (grid < 64) throw ValidationError("sublevel grid must be >= 64");
  std::int64_t count = 0;
  for (int i = 0; i < grid; ++i) {
    if (std::fabs(g((i + 0.5) / grid)) < C) ++count;
  }
  return {static_cast<double>(count) / grid, static_cast<double>(crossings) / grid};
}

SublevelEstimate sublevel_measure(const TrigPoly1D& g, double C, int grid) {
  return sublevel_measure([&](double x) { return std::abs(g.evaluate(x)); }, C, grid,
                          4 * g.degree());
}

SublevelEstimate sublevel_measure(const std::function<double(double, double)>& g, double C,
                                  int grid, int crossings_per_line, int workers) {
  if (!(C > 0.0)) throw ValidationError("sublevel threshold C must be > 0");
  if (grid < 64) throw ValidationError("sublevel grid must be >= 64");
  std::vector<std::int64_t> rows(static_cast<std::size_t>(grid));
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    const double x = (static_cast<double>(i) + 0.5) / grid;
    std::int64_t c = 0;
    for (int l = 0; l < grid; ++l)
      if (std::fabs(g(x, (l + 0.5) / grid)) < C) ++c;
    rows[i] = c;
  });
  std::int64_t total = 0;
  for (std::int64_t c : rows) total += c;
  return {static_cast<double>(total) / (static_cast<double>(grid) * grid),
          static_cast<double>(crossings_per_line) / grid};
}

std::vector<SublevelEstimate> birkhoff_sublevel_curve(const SkewShift& f,
                                                      const FiberedTrigPoly& phi,
                                                      const std::vector<std::int64_t>& ns,
                                                      double C, int grid, int workers) {
  if (!(C > 0.0)) throw ValidationError("sublevel threshold C must be > 0");
  if (grid < 64) throw ValidationError("sublevel grid must be >= 64");
  if (!std::is_sorted(ns.begin(), ns.end()) || (!ns.empty() && ns.front() < 0))
    throw ValidationError("n values must be nonnegative and increasing");
  const int d = phi.degree_y();
  const bool real = phi.is_real();
  const std::size_t S = ns.size();
  const std::int64_t n_max = ns.empty() ? 0 : ns.back();

  // e^{2 pi i k y_l} for the y midpoints, k = 1..d.
  std::vector<Complex> ey(static_cast<std::size_t>(grid) * d);
  for (int l = 0; l < grid; ++l) {
    const Complex e1 = unit_phasor((l + 0.5) / grid);
    Complex e = 1.0;
    for (int k = 1; k <= d; ++k) {
      e *= e1;
      ey[static_cast<std::size_t>(l) * d + (k - 1)] = e;
    }
  }

  std::vector<std::int64_t> counts(static_cast<std::size_t>(grid) * S);
  parallel_for(static_cast<std::size_t>(grid), workers, [&](std::size_t row) {
    const double x = (static_cast<double>(row) + 0.5) / grid;
    std::vector<Complex> sums(static_cast<std::size_t>(2 * d + 1));
    std::vector<Complex> ck;
    std::vector<Complex> ep(static_cast<std::size_t>(d + 1));
    PhaseAccumulator acc(f, {x, 0.0}, f.precision_for(n_max));
    std::size_t next = 0;
    auto count_snapshot = [&](std::size_t s) {
      std::int64_t c = 0;
      for (int l = 0; l < grid; ++l) {
        const Complex* e = &ey[static_cast<std::size_t>(l) * d];
        double value;
        if (real) {
          double v = sums[d].real();
          for (int k = 1; k <= d; ++k) v += 2.0 * (sums[k + d] * e[k - 1]).real();
          value = std::fabs(v);
        } else {
          Complex v = sums[d];
          for (int k = 1; k <= d; ++k) v += sums[k + d] * e[k - 1] + sums[d - k] * std::conj(e[k - 1]);
          value = std::abs(v);
        }
        if (value < C) ++c;
      }
      counts[row * S + s] = c;
    };
    const int k_lo = real ? 0 : -d;
    for (std::int64_t j = 0; j <= n_max; ++j) {
      while (next < S && ns[next] == j) count_snapshot(next++);
      if (j == n_max) break;
      phi.fiber_values(phi.degree_x() > 0 ? unit_phasor(acc.base()) : Complex{1.0}, ck);
      const Complex e1 = d > 0 ? unit_phasor(acc.phase()) : Complex{1.0};
      ep[0] = 1.0;
      for (int k = 1; k <= d; ++k) ep[k] = ep[k - 1] * e1;
      for (int k = k_lo; k <= d; ++k) {
        const Complex e = k >= 0 ? ep[k] : std::conj(ep[-k]);
        sums[k + d] += ck[k + d] * e;
      }
      acc.advance();
    }
  });

  std::vector<SublevelEstimate> out(S);
  const double cells = static_cast<double>(grid) * grid;
  for (std::size_t s = 0; s < S; ++s) {
    std::int64_t total = 0;
    for (int row = 0; row < grid; ++row) total += counts[static_cast<std::size_t>(row) * S + s];
    out[s] = {static_cast<double>(total) / cells, 4.0 * d / grid};
  }
  return out;
}

SublevelEstimate birkhoff_sublevel_measure(const SkewShift& f, const FiberedTrigPoly& phi,
                                           std::int64_t n, double C, int grid, int workers) {
  return birkhoff_sublevel_curve(f, phi, {n}, C, grid, workers).front();
}

double visit_fraction(const SkewShift& f, const FiberedTrigPoly& phi, const TorusPoint& p,
                      double C, std::int64_t N) {
  if (!(C > 0.0)) throw ValidationError("visit_fraction requires C > 0");
  if (N < 1) throw ValidationError("visit_fraction requires N >= 1");
  const FiberedTrigPoly zero_mean = project(phi).phi;
  PhaseAccumulator acc(f, p, f.precision_for(N));
  DoubleDouble sum;
  std::int64_t count = 0;
  for (std::int64_t n = 0; n < N; ++n) {
    if (std::fabs(sum.value()) < C) ++count;
    if (n + 1 == N) break;
    sum += evaluate_at(zero_mean, acc.point()).real();
    acc.advance();
  }
  return static_cast<double>(count) / static_cast<double>(N);
}

RotationTransfer rotation_transfer(const TrigPoly1D& phi_perp, double alpha,
                                   double divisor_floor) {
  RotationTransfer out{TrigPoly1D(phi_perp.degree(), false), phi_perp.coefficient(0).real()};
  for (int m = -phi_perp.degree(); m <= phi_perp.degree(); ++m) {
    if (m == 0) continue;
    const Complex c = phi_perp.coefficient(m);
    if (c == Complex{}) continue;
    const Complex divisor = unit_phasor(frac_product(alpha, m)) - 1.0;
    if (std::abs(divisor) < divisor_floor) throw SmallDivisor(m, std::abs(divisor));
    out.g.set_coefficient(m, c / divisor);
  }
  out.g.set_real_flag(phi_perp.is_real());
  return out;
}

}  // namespace mixlab::skew
