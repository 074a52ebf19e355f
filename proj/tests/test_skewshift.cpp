#include <doctest.h>

#include <cmath>
#include <random>

#include "mixlab/errors.hpp"
#include "mixlab/skewshift.hpp"
#include "oracles.hpp"

using namespace mixlab;
using namespace mixlab::skew;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

FiberedTrigPoly sine_y() {
  return FiberedTrigPoly::from_modes({{0, 1, {0.0, -0.5}}, {0, -1, {0.0, 0.5}}}, true);
}

FiberedTrigPoly example1() {
  FiberedTrigPoly p = sine_y();
  p.set_coefficient(0, 0, 2.0);
  return p;
}

std::vector<oracle::Mode> oracle_modes(const FiberedTrigPoly& p) {
  std::vector<oracle::Mode> out;
  for (const auto& m : p.modes()) out.push_back({m.m, m.k, m.c});
  return out;
}

FiberedTrigPoly random_real_poly(std::mt19937_64& rng, int D, int d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<FiberedTrigPoly::Mode> modes;
  for (int k = 0; k <= d; ++k)
    for (int m = -D; m <= D; ++m) {
      if (k == 0 && m <= 0) continue;
      modes.push_back({m, k, {u(rng), u(rng)}});
    }
  FiberedTrigPoly p = FiberedTrigPoly::real_part_of(modes);
  p.set_coefficient(0, 0, u(rng));
  return p;
}

}  // namespace

TEST_CASE("trig polynomials: realness and evaluation") {
  TrigPoly1D g(2, true);
  g.set_coefficient(1, {0.5, 0.25});
  CHECK(g.coefficient(-1) == std::conj(g.coefficient(1)));
  CHECK(g.satisfies_realness());
  CHECK(std::fabs(g.evaluate(0.3).imag()) <= 1e-15);
  CHECK(g.l2_norm() == doctest::Approx(std::sqrt(2 * (0.25 + 0.0625))));

  const FiberedTrigPoly s = sine_y();
  CHECK(s.evaluate_real(0.7, 0.25) == doctest::Approx(1.0));
  CHECK(s.evaluate_real(0.1, 0.125) == doctest::Approx(std::sin(kTwoPi * 0.125)));
  CHECK_THROWS_AS(FiberedTrigPoly::from_modes({{0, 1, {1.0, 0.0}}}, true), ValidationError);

  std::mt19937_64 rng(2);
  const FiberedTrigPoly p = random_real_poly(rng, 2, 2);
  const auto modes = oracle_modes(p);
  for (double x : {0.1, 0.5, 0.93})
    for (double y : {0.0, 0.33, 0.71}) {
      const Complex v = oracle::evaluate(modes, x, y);
      CHECK(std::fabs(v.imag()) <= 1e-13);
      CHECK(p.evaluate_real(x, y) == doctest::Approx(v.real()).epsilon(1e-13));
    }
}

TEST_CASE("step, inverse and closed-form orbit") {
  const SkewShift id(0.0, 0.0);
  const TorusPoint a = step(id, {0.25, 0.5});
  CHECK(a.x == 0.25);
  CHECK(a.y == 0.75);
  const SkewShift f(0.3, 0.4);
  const TorusPoint b = step(f, {0.1, 0.2});
  CHECK(b.x == doctest::Approx(0.4));
  CHECK(b.y == doctest::Approx(0.7));
  const TorusPoint back = inverse_step(f, b);
  CHECK(back.x == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(back.y == doctest::Approx(0.2).epsilon(1e-15));

  const SkewShift g(std::sqrt(2.0) - 1.0, 0.0);
  const TorusPoint c = orbit_at(g, {0.0, 0.0}, 3);
  CHECK(c.x == doctest::Approx(0.242640687).epsilon(1e-9));
  CHECK(c.y == doctest::Approx(0.242640687).epsilon(1e-9));
  const TorusPoint p{0.37, 0.81};
  const TorusPoint z = orbit_at(f, p, 0);
  CHECK(z.x == p.x);
  CHECK(z.y == p.y);
  const TorusPoint two = orbit_at(f, p, 2);
  CHECK(circle_distance(two.y, p.y + 2 * p.x + 2 * 0.4 + 0.3) <= 1e-15);

  const SkewShift h(kGolden, 0.123);
  for (long j : {1L, 17L, 999L, 10000L}) {
    const auto o = oracle::iterate(h.alpha(), h.beta(), p.x, p.y, j);
    const TorusPoint q = orbit_at(h, p, j);
    CHECK(circle_distance(q.x, o[0]) <= 1e-9);
    CHECK(circle_distance(q.y, o[1]) <= 1e-9);
  }
  CHECK_THROWS_AS(orbit_at(h, p, -1), ValidationError);
}

TEST_CASE("phase accumulator follows the orbit in both precisions") {
  const SkewShift f(kGolden, 0.2);
  const TorusPoint p{0.3, 0.6};
  for (Precision prec : {Precision::Double, Precision::DoubleDouble}) {
    PhaseAccumulator acc(f, p, prec);
    for (int j = 0; j < 5000; ++j) acc.advance();
    const TorusPoint q = orbit_at(f, p, 5000);
    CHECK(acc.index() == 5000);
    CHECK(circle_distance(acc.point().x, q.x) <= 1e-10);
    CHECK(circle_distance(acc.point().y, q.y) <= 1e-9);
  }
  CHECK(f.precision_for(kDoubleDoubleThreshold + 1) == Precision::DoubleDouble);
  CHECK(f.precision_for(1000) == Precision::Double);
}

TEST_CASE("Birkhoff sums") {
  const SkewShift f(kGolden, 0.0);
  CHECK(birkhoff_sum(f, FiberedTrigPoly::constant(1.0), {0.3, 0.4}, 17).real() == 17.0);
  CHECK(birkhoff_sum(f, example1(), {0.3, 0.4}, 0) == Complex{});
  const SkewShift half(0.5, 0.0);
  CHECK(birkhoff_sum(half, sine_y(), {0.25, 0.0}, 2).real() == doctest::Approx(1.0));

  std::mt19937_64 rng(9);
  const FiberedTrigPoly phi = random_real_poly(rng, 2, 2);
  const auto modes = oracle_modes(phi);
  const SkewShift g(kGolden, 0.31);
  for (long n : {1L, 10L, 1000L}) {
    const Complex o = oracle::birkhoff(modes, g.alpha(), g.beta(), 0.2, 0.9, n);
    CHECK(std::fabs(birkhoff_sum(g, phi, {0.2, 0.9}, n).real() - o.real()) <= 1e-9);
  }
  const auto traj = birkhoff_trajectory(g, phi, {0.2, 0.9}, 100);
  REQUIRE(traj.size() == 101);
  CHECK(traj[0] == 0.0);
  CHECK(traj[100] == doctest::Approx(birkhoff_sum(g, phi, {0.2, 0.9}, 100).real()).epsilon(1e-12));
}

TEST_CASE("cocycle identity") {
  std::mt19937_64 rng(21);
  const FiberedTrigPoly phi = random_real_poly(rng, 1, 2);
  const SkewShift f(kGolden, 0.45);
  std::uniform_int_distribution<int> len(0, 1000);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int m = len(rng);
    const int n = len(rng);
    const TorusPoint p{u(rng), u(rng)};
    const double lhs = birkhoff_sum(f, phi, p, m + n).real();
    const double rhs =
        birkhoff_sum(f, phi, p, n).real() + birkhoff_sum(f, phi, orbit_at(f, p, n), m).real();
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("projection and composition") {
  const Projection pr = project(example1());
  CHECK(pr.phi.mean() == 0.0);
  CHECK(pr.phi_perp.coefficient(0).real() == 2.0);
  CHECK(pr.phi.evaluate_real(0.1, 0.25) == doctest::Approx(1.0));

  TrigPoly1D g(1, true);
  g.set_coefficient(1, {0.5, 0.0});
  const Projection base = project(FiberedTrigPoly::from_base(g));
  CHECK(base.phi.is_zero());
  CHECK(base.phi_perp.coefficient(1) == Complex{0.5, 0.0});

  const FiberedTrigPoly diag = FiberedTrigPoly::real_part_of({{1, 1, 1.0}});
  const Projection d = project(diag);
  CHECK(d.phi_perp.is_zero());
  CHECK(d.phi.evaluate_real(0.2, 0.3) == doctest::Approx(std::cos(kTwoPi * 0.5)));

  std::mt19937_64 rng(4);
  const FiberedTrigPoly phi = random_real_poly(rng, 2, 2);
  const SkewShift f(kGolden, 0.17);
  const FiberedTrigPoly c = compose(f, phi);
  for (double x : {0.05, 0.6})
    for (double y : {0.2, 0.77}) {
      const TorusPoint q = step(f, {x, y});
      CHECK(c.evaluate_real(x, y) == doctest::Approx(phi.evaluate_real(q.x, q.y)).epsilon(1e-12));
    }
}

TEST_CASE("fiber coefficients") {
  const SkewShift f(kGolden, 0.0);
  const TrigPoly1D one = fiber_coefficients(f, sine_y(), 0.3, 1);
  CHECK(one.coefficient(1) == Complex{0.0, -0.5});

  const SkewShift g(0.5, 0.0);
  const TrigPoly1D two = fiber_coefficients(g, sine_y(), 0.0, 2);
  // 1/(2i) * 2 = -i, so phi_2(0, y) = 2 sin(2 pi y).
  CHECK(std::abs(two.coefficient(1) - Complex{0.0, -1.0}) <= 1e-15);

  std::mt19937_64 rng(6);
  const FiberedTrigPoly phi = random_real_poly(rng, 2, 3);
  const SkewShift h(kGolden, 0.29);
  for (long n : {5L, 10000L}) {
    const TrigPoly1D c = fiber_coefficients(h, phi, 0.41, n);
    double worst = 0.0;
    for (int l = 0; l < 64; ++l) {
      const double y = l / 64.0;
      worst = std::max(worst, std::fabs(c.evaluate(y).real() - birkhoff_sum(h, phi, {0.41, y}, n).real()));
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("derivative in y commutes with Birkhoff sums") {
  std::mt19937_64 rng(12);
  const FiberedTrigPoly phi = random_real_poly(rng, 1, 2);
  const SkewShift f(kGolden, 0.3);
  const long n = 200;
  const double x = 0.27;
  const TrigPoly1D c = fiber_coefficients(f, phi, x, n);
  for (double y : {0.1, 0.45, 0.8}) {
    Complex d{};
    for (int k = -c.degree(); k <= c.degree(); ++k)
      d += c.coefficient(k) * Complex(0.0, kTwoPi * k) * unit_phasor(k * y);
    const double h = 1e-6;
    const double fd = (birkhoff_sum(f, phi, {x, y + h}, n).real() -
                       birkhoff_sum(f, phi, {x, y - h}, n).real()) /
                      (2 * h);
    CHECK(std::fabs(d.real() - fd) <= 1e-5 * std::max(1.0, std::fabs(fd)));
  }
}

TEST_CASE("decoupling identity") {
  std::mt19937_64 rng(14);
  const FiberedTrigPoly phi = random_real_poly(rng, 2, 2);
  const SkewShift f(kGolden, 0.61);
  const TorusPoint p{0.19, 0.73};
  const FiberedTrigPoly zero_mean = project(phi).phi;
  for (auto [n, N] : {std::pair{7L, 7L}, std::pair{13L, 400L}, std::pair{1000L, 3L}}) {
    const double lhs = decoupling_difference(f, phi, p, n, N);
    const double rhs = birkhoff_sum(f, zero_mean, orbit_at(f, p, N), n).real() -
                       birkhoff_sum(f, zero_mean, p, n).real();
    CHECK(std::fabs(lhs - rhs) <= 1e-8);
  }
  CHECK(decoupling_difference(f, FiberedTrigPoly::constant(3.0), p, 5, 9) == 0.0);
}

TEST_CASE("stretch") {
  const SkewShift f(kGolden, 0.0);
  CHECK(stretch(f, FiberedTrigPoly::constant(2.0), 0.3, 0.0, 1.0, 10) == 0.0);
  CHECK(stretch(f, sine_y(), 0.3, 0.0, 1.0, 1) == doctest::Approx(2.0).epsilon(1e-9));
  const SkewShift g(0.5, 0.0);
  CHECK(stretch(g, sine_y(), 0.0, 0.0, 1.0, 2) == doctest::Approx(4.0).epsilon(1e-9));
  // Arc wrapping through 0: sine on [0.9, 0.1] ranges over +-sin(0.2 pi).
  CHECK(stretch(f, sine_y(), 0.3, 0.9, 0.1, 1) ==
        doctest::Approx(2 * std::sin(kTwoPi * 0.1)).epsilon(1e-9));

  // Bounded by arc length times the largest derivative.
  const long n = 300;
  const TrigPoly1D c = fiber_coefficients(f, example1(), 0.2, n);
  double dmax = 0.0;
  for (int l = 0; l <= 2000; ++l) {
    Complex d{};
    for (int k = -c.degree(); k <= c.degree(); ++k)
      d += c.coefficient(k) * Complex(0.0, kTwoPi * k) * unit_phasor(k * 0.3 * l / 2000.0);
    dmax = std::max(dmax, std::fabs(d.real()));
  }
  CHECK(stretch(f, example1(), 0.2, 0.0, 0.3, n) <= 0.3 * dmax * (1 + 1e-9));
  CHECK_THROWS_AS(stretch(f, example1(), 0.2, 0.0, 0.3, n, 10), ValidationError);
}

TEST_CASE("sublevel measures") {
  const auto zero = sublevel_measure([](double) { return 0.0; }, 1.0, 1000, 0);
  CHECK(zero.measure == 1.0);
  const auto three =
      birkhoff_sublevel_measure(SkewShift(kGolden, 0.0), FiberedTrigPoly::constant(1.0), 3, 2.0, 64, 1);
  CHECK(three.measure == 0.0);

  TrigPoly1D s(1, false);
  s.set_coefficient(1, {0.0, -0.5});
  s.set_coefficient(-1, {0.0, 0.5});
  s.set_real_flag(true);
  const auto arc = sublevel_measure(s, 0.5, 4096);
  CHECK(std::fabs(arc.measure - 1.0 / 3.0) <= arc.error_bound);
  CHECK_THROWS_AS(sublevel_measure(s, 0.0, 4096), ValidationError);
  CHECK_THROWS_AS(sublevel_measure(s, 0.5, 32), ValidationError);

  // Invariance of Lebesgue measure under f.
  std::mt19937_64 rng(31);
  const FiberedTrigPoly phi = random_real_poly(rng, 1, 1);
  const SkewShift f(kGolden, 0.2);
  const FiberedTrigPoly phif = compose(f, phi);
  const int grid = 512;
  const double C = 0.5;
  const auto a = sublevel_measure([&](double x, double y) { return phi.evaluate_real(x, y); }, C, grid, 8, 1);
  const auto b = sublevel_measure([&](double x, double y) { return phif.evaluate_real(x, y); }, C, grid, 8, 1);
  CHECK(std::fabs(a.measure - b.measure) <= 2 * a.error_bound);

  // Row-wise curve against direct evaluation on the same grid.
  const std::vector<std::int64_t> ns{0, 1, 5, 40};
  const auto curve = birkhoff_sublevel_curve(f, phi, ns, 1.0, 64, 3);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto direct = sublevel_measure(
        [&](double x, double y) { return birkhoff_sum(f, phi, {x, y}, ns[i]).real(); }, 1.0, 64, 8, 1);
    CHECK(curve[i].measure == doctest::Approx(direct.measure).epsilon(1e-12));
  }
}

TEST_CASE("sublevel curve does not depend on the worker count") {
  const SkewShift f(kGolden, 0.0);
  const std::vector<std::int64_t> ns{100, 1000};
  const auto a = birkhoff_sublevel_curve(f, project(example1()).phi, ns, 2.0, 128, 1);
  const auto b = birkhoff_sublevel_curve(f, project(example1()).phi, ns, 2.0, 128, 4);
  for (std::size_t i = 0; i < ns.size(); ++i) CHECK(a[i].measure == b[i].measure);
}

TEST_CASE("frozen regression: stretch curve for sin(2 pi y) + 2") {
  const SkewShift f(kGolden, 0.0);
  const auto curve = birkhoff_sublevel_curve(f, project(example1()).phi, {100, 10000}, 2.0, 512, 0);
  CHECK(curve[0].measure == doctest::Approx(0.1829071044921875).epsilon(1e-12));
  CHECK(curve[1].measure == doctest::Approx(0.0180206298828125).epsilon(1e-12));
}

TEST_CASE("visit fractions") {
  const SkewShift f(kGolden, 0.0);
  CHECK(visit_fraction(f, FiberedTrigPoly::constant(1.0), {0.4, 0.1}, 0.5, 1000) == 1.0);
  CHECK(visit_fraction(f, example1(), {0.1, 0.2}, 2.0, 1) == 1.0);
  const double early = visit_fraction(f, example1(), {0.1, 0.2}, 2.0, 100);
  const double late = visit_fraction(f, example1(), {0.1, 0.2}, 2.0, 10000);
  CHECK(late < early);
  CHECK(early == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(late == doctest::Approx(0.046).epsilon(1e-12));
}

TEST_CASE("rotation transfer") {
  const RotationTransfer c = rotation_transfer(TrigPoly1D::constant(2.5), kGolden);
  CHECK(c.g.is_zero());
  CHECK(c.mean == 2.5);

  TrigPoly1D cosine(1, true);
  cosine.set_coefficient(1, 0.5);
  const RotationTransfer r = rotation_transfer(cosine, 0.25);
  CHECK(std::abs(r.g.coefficient(1) - Complex{-0.25, -0.25}) <= 1e-15);
  CHECK(std::abs(r.g.coefficient(-1) - Complex{-0.25, 0.25}) <= 1e-15);
  double worst = 0.0;
  for (int i = 0; i < 256; ++i) {
    const double x = i / 256.0;
    worst = std::max(worst, std::fabs((r.g.evaluate(x + 0.25) - r.g.evaluate(x)).real() -
                                      std::cos(kTwoPi * x)));
  }
  CHECK(worst <= 1e-9);

  TrigPoly1D resonant(4, true);
  resonant.set_coefficient(4, 1.0);
  CHECK_THROWS_AS(rotation_transfer(resonant, 0.25), SmallDivisor);
}
