#include "mixlab/cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mixlab/errors.hpp"
#include "mixlab/parallel.hpp"

namespace mixlab::cohomology {

OrbitLabel label_of(int a, int b) {
  if (b == 0) throw ValidationError("modes with b = 0 belong to H0, not to an orbit component");
  const int nb = std::abs(b);
  const int m = ((a % nb) + nb) % nb;
  return {m, b};
}

std::int64_t index_of(int a, int b) {
  const OrbitLabel l = label_of(a, b);
  return (static_cast<std::int64_t>(a) - l.m) / l.n;
}

double ComponentSpectrum::l2_norm() const {
  double s = 0.0;
  for (const auto& [j, c] : coeffs) s += std::norm(c);
  return std::sqrt(s);
}

Decomposition decompose_components(const FiberedTrigPoly& phi) {
  Decomposition out{TrigPoly1D(phi.degree_x(), false), {}};
  std::map<OrbitLabel, ComponentSpectrum> comps;
  for (const auto& mode : phi.modes()) {
    if (mode.k == 0) {
      out.h0.add_to_coefficient(mode.m, mode.c);
      continue;
    }
    const OrbitLabel l = label_of(mode.m, mode.k);
    auto& s = comps[l];
    s.label = l;
    s.coeffs[index_of(mode.m, mode.k)] += mode.c;
  }
  out.h0.set_real_flag(phi.is_real());
  for (auto& [l, s] : comps) out.components.push_back(std::move(s));
  return out;
}

FiberedTrigPoly reconstruct(const ComponentSpectrum& s) {
  FiberedTrigPoly out(0, 0, false);
  for (const auto& [j, c] : s.coeffs) {
    const std::int64_t a = s.label.m + j * s.label.n;
    out.add_to_coefficient(static_cast<int>(a), s.label.n, c);
  }
  return out;
}

FiberedTrigPoly reconstruct(const Decomposition& d) {
  FiberedTrigPoly out = FiberedTrigPoly::from_base(d.h0);
  out.set_real_flag(false);
  for (const auto& s : d.components) out += reconstruct(s);
  return out;
}

namespace {

double weight_phase(const SkewShift& f, const OrbitLabel& l, std::int64_t j) {
  const std::int64_t ka = l.m * j + l.n * binom2(j);
  return frac(frac_product(f.alpha(), ka) + frac_product(f.beta(), l.n * j));
}

}  // namespace

Complex distribution_weight(const SkewShift& f, const OrbitLabel& label, std::int64_t j) {
  return unit_phasor(-weight_phase(f, label, j));
}

DistributionValue evaluate_distribution(const SkewShift& f, const ComponentSpectrum& s) {
  Complex sum{};
  for (const auto& [j, c] : s.coeffs) sum += c * distribution_weight(f, s.label, j);
  return {sum, s.label};
}

ComponentSpectrum compose_with_skew(const SkewShift& f, const ComponentSpectrum& s) {
  ComponentSpectrum out{s.label, {}};
  for (const auto& [j, c] : s.coeffs) {
    const std::int64_t a = s.label.m + j * s.label.n;
    const double theta = frac(frac_product(f.alpha(), a) + frac_product(f.beta(), s.label.n));
    out.coeffs[j + 1] = c * unit_phasor(theta);
  }
  return out;
}

ComponentSolution solve_component_detailed(const SkewShift& f, const ComponentSpectrum& s,
                                           double tol) {
  ComponentSolution out;
  out.u.label = s.label;
  out.u_right.label = s.label;
  if (s.empty()) return out;
  const Complex total = evaluate_distribution(f, s).value;
  out.distribution = total;
  if (std::abs(total) > tol * s.l2_norm()) throw ObstructionNonzero(total);

  const std::int64_t lo = s.coeffs.begin()->first;
  const std::int64_t hi = s.coeffs.rbegin()->first;
  Complex left{};
  for (std::int64_t j = lo; j < hi; ++j) {
    const auto it = s.coeffs.find(j);
    const Complex w = distribution_weight(f, s.label, j);
    if (it != s.coeffs.end()) left += it->second * w;
    const Complex inv_w = std::conj(w);
    const Complex uj = -left * inv_w;
    const Complex rj = (total - left) * inv_w;
    out.u.coeffs[j] = uj;
    out.u_right.coeffs[j] = rj;
    out.consistency = std::max(out.consistency, std::abs(uj - rj));
  }
  return out;
}

ComponentSpectrum solve_component(const SkewShift& f, const ComponentSpectrum& s, double tol) {
  return solve_component_detailed(f, s, tol).u;
}

double sobolev_norm(const FiberedTrigPoly& phi, double s) {
  double sum = 0.0;
  for (const auto& mode : phi.modes()) {
    const double w = 1.0 + double(mode.m) * mode.m + double(mode.k) * mode.k;
    sum += std::pow(w, s) * std::norm(mode.c);
  }
  return std::sqrt(sum);
}

double sobolev_norm(const ComponentSpectrum& spectrum, double s) {
  double sum = 0.0;
  const double n = spectrum.label.n;
  for (const auto& [j, c] : spectrum.coeffs) {
    const double a = spectrum.label.m + double(j) * n;
    sum += std::pow(1.0 + a * a + n * n, s) * std::norm(c);
  }
  return std::sqrt(sum);
}

std::string to_string(Verdict v) { return v == Verdict::Mixing ? "mixing" : "trivial"; }

ClassifierReport classify_roof(const SkewShift& f, const FiberedTrigPoly& phi, double tol) {
  ClassifierReport report;
  report.tol = tol;
  const Decomposition d = decompose_components(phi);
  double norm2 = 0.0;
  for (const auto& s : d.components) norm2 += std::norm(s.l2_norm());
  report.phi_norm = std::sqrt(norm2);
  for (const auto& s : d.components) {
    const Complex v = evaluate_distribution(f, s).value;
    report.entries.push_back({s.label, v, v == Complex{}});
    if (std::abs(v) > tol * report.phi_norm) report.verdict = Verdict::Mixing;
  }
  return report;
}

double ergodic_sum_l2(const SkewShift& f, const ComponentSpectrum& s, std::int64_t N) {
  if (N < 1) throw ValidationError("ergodic_sum_l2 requires N >= 1");
  if (s.empty()) return 0.0;
  const std::int64_t lo = s.coeffs.begin()->first;
  const std::int64_t hi = s.coeffs.rbegin()->first;
  const std::int64_t w = hi - lo + 1;
  std::vector<Complex> weighted(static_cast<std::size_t>(w));
  for (const auto& [j, c] : s.coeffs)
    weighted[static_cast<std::size_t>(j - lo)] = c * distribution_weight(f, s.label, j);

  // Window sums over [l - N + 1, l] intersected with the support. Windows covering
  // the whole support all equal D and are counted in one go.
  auto window = [&](std::int64_t l) {
    const std::int64_t a = std::max(lo, l - N + 1);
    const std::int64_t b = std::min(hi, l);
    Complex sum{};
    for (std::int64_t j = a; j <= b; ++j) sum += weighted[static_cast<std::size_t>(j - lo)];
    return std::norm(sum);
  };
  double total = 0.0;
  const std::int64_t l_end = hi + N - 1;
  const std::int64_t full_lo = hi;          // first l with l >= hi
  const std::int64_t full_hi = lo + N - 1;  // last l with l - N + 1 <= lo
  if (full_lo <= full_hi) {
    for (std::int64_t l = lo; l < full_lo; ++l) total += window(l);
    Complex d{};
    for (const Complex& c : weighted) d += c;
    total += static_cast<double>(full_hi - full_lo + 1) * std::norm(d);
    for (std::int64_t l = full_hi + 1; l <= l_end; ++l) total += window(l);
  } else {
    for (std::int64_t l = lo; l <= l_end; ++l) total += window(l);
  }
  return total;
}

ConvergentTimes convergent_times(double alpha, int L) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("convergent_times requires alpha in (0,1)");
  if (L < 1) throw ValidationError("convergent_times requires L >= 1");
  int exponent = 0;
  const double mant = std::frexp(alpha, &exponent);  // alpha = mant * 2^exponent
  const int shift = 53 - exponent;
  if (shift > 126) throw ValidationError("alpha too small for exact continued fraction");
  __extension__ typedef unsigned __int128 u128;
  u128 num = static_cast<u128>(std::ldexp(mant, 53));
  u128 den = static_cast<u128>(1) << shift;

  ConvergentTimes out;
  out.alpha = alpha;
  u128 q_prev = 0;
  u128 q = 1;
  constexpr u128 kMax = static_cast<u128>(INT64_MAX);
  while (static_cast<int>(out.denominators.size()) < L) {
    if (num == 0) throw RationalAlpha(static_cast<int>(out.denominators.size()));
    const u128 a = den / num;
    const u128 r = den % num;
    den = num;
    num = r;
    const u128 q_next = a * q + q_prev;
    if (a > kMax || q_next > kMax) throw NumericError("continued-fraction denominator overflow");
    q_prev = q;
    q = q_next;
    out.partial_quotients.push_back(static_cast<std::int64_t>(a));
    out.denominators.push_back(static_cast<std::int64_t>(q));
  }
  return out;
}

double uniform_bound_scan(const SkewShift& f, const FiberedTrigPoly& phi, std::int64_t N,
                          int grid, int workers) {
  if (N < 1) throw ValidationError("uniform_bound_scan requires N >= 1");
  if (grid < 128) throw ValidationError("uniform_bound_scan requires grid >= 128");
  for (int m = -phi.degree_x(); m <= phi.degree_x(); ++m)
    if (phi.coefficient(m, 0) != Complex{}) throw NonzeroFiberAverage();
  std::vector<double> row_max(static_cast<std::size_t>(grid));
  parallel_for(row_max.size(), workers, [&](std::size_t i) {
    const TrigPoly1D g = skew::fiber_coefficients(f, phi, static_cast<double>(i) / grid, N);
    double best = 0.0;
    for (int l = 0; l < grid; ++l)
      best = std::max(best, std::abs(g.evaluate(static_cast<double>(l) / grid)));
    row_max[i] = best;
  });
  return *std::max_element(row_max.begin(), row_max.end()) / std::sqrt(static_cast<double>(N));
}

CoboundarySolution solve_coboundary(const SkewShift& f, const FiberedTrigPoly& phi, double tol) {
  const Decomposition d = decompose_components(phi);
  const skew::RotationTransfer base = skew::rotation_transfer(d.h0, f.alpha());
  FiberedTrigPoly u = FiberedTrigPoly::from_base(base.g);
  u.set_real_flag(false);
  for (const auto& s : d.components) u += reconstruct(solve_component(f, s, tol));
  if (phi.is_real()) {
    // Mirror components are solved separately; restore exact conjugate symmetry.
    FiberedTrigPoly sym(0, 0, false);
    for (const auto& mode : u.modes()) {
      const Complex c = 0.5 * (mode.c + std::conj(u.coefficient(-mode.m, -mode.k)));
      sym.set_coefficient(mode.m, mode.k, c);
      sym.set_coefficient(-mode.m, -mode.k, std::conj(c));
    }
    sym.set_coefficient(0, 0, {sym.coefficient(0, 0).real(), 0.0});
    u = FiberedTrigPoly::from_modes(sym.modes(), true);
  }
  return {u, base.mean};
}

}  // namespace mixlab::cohomology
