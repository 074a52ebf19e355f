#include "mixlab/heisenberg.hpp"

#include <cmath>

#include "mixlab/numeric.hpp"

namespace mixlab::heisenberg {
namespace {

DoubleDouble dd_mul(const DoubleDouble& a, const DoubleDouble& b) {
  DoubleDouble p = DoubleDouble::two_prod(a.hi, b.hi);
  p += a.hi * b.lo + a.lo * b.hi;
  return p;
}

DoubleDouble dd_mul(const DoubleDouble& a, double b) {
  DoubleDouble p = DoubleDouble::two_prod(a.hi, b);
  p += a.lo * b;
  return p;
}

DoubleDouble dd_neg(const DoubleDouble& a) { return {-a.hi, -a.lo}; }

// Splits v into an integer k and a remainder in [0, 1) with v = k + r.
std::pair<double, DoubleDouble> split_unit(const DoubleDouble& v) {
  const DoubleDouble r = v.frac();
  const double k = std::nearbyint((v + dd_neg(r)).value());
  return {k, r};
}

double reduce_z(double z, int euler) {
  const double period = 1.0 / euler;
  double r = z - std::floor(z * euler) / euler;
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r;
}

}  // namespace

Element group_mul(const Element& a, const Element& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z + a.x * b.y};
}

Element group_inverse(const Element& a) { return {-a.x, -a.y, -a.z + a.x * a.y}; }

Element group_exp(const AlgebraVector& w, double t) {
  return {t * w.wx, t * w.wy, t * w.wz + 0.5 * t * t * w.wx * w.wy};
}

AlgebraVector group_log(const Element& g) { return {g.x, g.y, g.z - 0.5 * g.x * g.y}; }

Reduction reduce_mod_lattice(const Element& g, const Lattice& lattice) {
  const int e = lattice.euler();
  const double b = -std::floor(g.y);
  double y = g.y + b;
  if (y >= 1.0) y -= 1.0;
  const double a = -std::floor(g.x);
  double x = g.x + a;
  if (x >= 1.0) x -= 1.0;
  const double z_shifted = g.z + a * y;
  const double c = -std::floor(z_shifted * e) / e;
  const double z = reduce_z(z_shifted, e);
  // gamma = [0,0,c] [a,0,0] [0,b,0] = [a, b, c + a b]; the output is gamma * g.
  const Element gamma{a, b, c + a * b};
  return {NilPoint{{x, y, z}}, group_inverse(gamma)};
}

NilPoint nilflow_at(const NilPoint& p, const AlgebraVector& w, double t,
                    const Lattice& lattice) {
  const DoubleDouble twx = DoubleDouble::two_prod(t, w.wx);
  const DoubleDouble twy = DoubleDouble::two_prod(t, w.wy);
  const DoubleDouble twz = DoubleDouble::two_prod(t, w.wz);

  const DoubleDouble X = twx + p.g.x;
  const DoubleDouble Y = twy + p.g.y;
  // z + t w_z + t^2 w_x w_y / 2 + x t w_y
  DoubleDouble Z = twz + p.g.z;
  Z += dd_mul(dd_mul(twx, twy), 0.5);
  Z += dd_mul(twy, p.g.x);

  const auto [ky, y] = split_unit(Y);
  (void)ky;
  const auto [kx, x] = split_unit(X);
  Z += dd_neg(dd_mul(y, kx));

  const int e = lattice.euler();
  DoubleDouble zs = e == 1 ? Z : dd_mul(Z, static_cast<double>(e));
  zs = zs.frac();
  double z = zs.value() / e;
  if (z >= lattice.z_period()) z = 0.0;
  double xv = x.value();
  double yv = y.value();
  if (xv >= 1.0) xv = 0.0;
  if (yv >= 1.0) yv = 0.0;
  return {{xv, yv, z}};
}

NilPoint section_embed(const SectionPoint& s, const Lattice& lattice) {
  return reduce_mod_lattice(Element{s.x, 0.0, s.z}, lattice).point;
}

SkewParameters section_skew_parameters(const AlgebraVector& w) {
  if (w.wy == 0.0) throw DegenerateSection();
  const double a = w.wx / w.wy;
  return {frac(a), frac(w.wz / w.wy + 0.5 * a)};
}

SectionPoint poincare_return(const AlgebraVector& w, const SectionPoint& s,
                             const Lattice& lattice) {
  if (w.wy == 0.0) throw DegenerateSection();
  const double a = w.wx / w.wy;
  const double c = w.wz / w.wy + 0.5 * a;
  return {frac(s.x + a), reduce_z(s.z + s.x + c, lattice.euler())};
}

NumericReturn poincare_return_numeric(const AlgebraVector& w, const SectionPoint& s,
                                      const Lattice& lattice) {
  if (w.wy == 0.0) throw DegenerateSection();
  const NilPoint start = section_embed(s, lattice);
  const bool forward = w.wy > 0.0;
  const double dt = (forward ? 0.125 : -0.125) / std::fabs(w.wy);

  // Flowing in the direction of sign(w_y), y = t w_y increases; it wraps to ~0 when
  // the orbit crosses y = 0 mod 1.
  auto progress = [&](double t) { return nilflow_at(start, w, t, lattice).g.y; };

  double lo = dt;
  double p_lo = progress(lo);
  double hi = lo;
  for (int step = 0; step < 64; ++step) {
    hi = lo + dt;
    const double p_hi = progress(hi);
    if (p_hi < p_lo) break;
    lo = hi;
    p_lo = p_hi;
  }
  while (std::fabs(hi - lo) > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double p_mid = progress(mid);
    if (p_mid >= p_lo) {
      lo = mid;
      p_lo = p_mid;
    } else {
      hi = mid;
    }
  }
  const double t_cross = 0.5 * (lo + hi);
  const Element g = nilflow_at(start, w, t_cross, lattice).g;
  // g = [x, y, z] with y within ~1e-12 of an integer; move it onto y = 0 by
  // left-multiplying with [0, -round(y), 0] and right-multiplying with [0, -y', 0].
  const double y_signed = g.y > 0.5 ? g.y - 1.0 : g.y;
  const double z = g.z - g.x * y_signed;
  return {{frac(g.x), reduce_z(z, lattice.euler())}, t_cross};
}

namespace {

struct SimpsonState {
  const std::function<double(double)>& f;
  int evaluations = 0;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  st.evaluations += 2;
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double timechange_return_time(const TimeChange& alpha, const AlgebraVector& w,
                              const SectionPoint& s, double tol, const Lattice& lattice) {
  if (w.wy == 0.0) throw DegenerateSection();
  const NilPoint start = section_embed(s, lattice);
  const std::function<double(double)> integrand = [&](double t) {
    const double v = alpha(nilflow_at(start, w, t, lattice));
    if (!(v > 0.0)) throw NonPositiveTimeChange(v);
    return v;
  };
  const double a = 0.0;
  const double b = 1.0 / w.wy;
  SimpsonState st{integrand};
  // Start from four panels so that integrands periodic in t are not sampled only at
  // their nodes.
  double total = 0.0;
  constexpr int kPanels = 4;
  for (int i = 0; i < kPanels; ++i) {
    const double pa = a + (b - a) * i / kPanels;
    const double pb = a + (b - a) * (i + 1) / kPanels;
    const double fa = integrand(pa);
    const double fm = integrand(0.5 * (pa + pb));
    const double fb = integrand(pb);
    total += adaptive_simpson(st, pa, pb, fa, fm, fb, simpson(pa, pb, fa, fm, fb),
                              tol / kPanels, 40);
  }
  return std::fabs(total);
}

}  // namespace mixlab::heisenberg
