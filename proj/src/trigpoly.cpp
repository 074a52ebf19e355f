#include "mixlab/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mixlab/errors.hpp"

namespace mixlab {

// ---------------------------------------------------------------------------
// TrigPoly1D

TrigPoly1D::TrigPoly1D(int degree, bool real)
    : degree_(degree), coeffs_(static_cast<std::size_t>(2 * degree + 1)), real_(real) {
  if (degree < 0) throw ValidationError("trigonometric polynomial degree must be >= 0");
}

TrigPoly1D TrigPoly1D::constant(double c) {
  TrigPoly1D p(0, true);
  p.coeffs_[0] = c;
  return p;
}

Complex TrigPoly1D::coefficient(int m) const {
  if (std::abs(m) > degree_) return {};
  return coeffs_[static_cast<std::size_t>(m + degree_)];
}

void TrigPoly1D::grow(int degree) {
  if (degree <= degree_) return;
  std::vector<Complex> next(static_cast<std::size_t>(2 * degree + 1));
  for (int m = -degree_; m <= degree_; ++m) next[m + degree] = coeffs_[m + degree_];
  coeffs_ = std::move(next);
  degree_ = degree;
}

void TrigPoly1D::set_coefficient(int m, Complex c) {
  grow(std::abs(m));
  if (real_ && m == 0) {
    if (std::fabs(c.imag()) > 1e-12 * std::max(1.0, std::abs(c)))
      throw ValidationError("real trigonometric polynomial needs a real mean");
    c = {c.real(), 0.0};
  }
  coeffs_[m + degree_] = c;
  if (real_ && m != 0) coeffs_[-m + degree_] = std::conj(c);
}

void TrigPoly1D::add_to_coefficient(int m, Complex c) {
  grow(std::abs(m));
  coeffs_[m + degree_] += c;
}

Complex TrigPoly1D::evaluate(double x) const { return evaluate_phasor(unit_phasor(x)); }

Complex TrigPoly1D::evaluate_phasor(Complex ex) const {
  Complex acc = coeffs_[degree_];
  Complex pw = 1.0;
  for (int m = 1; m <= degree_; ++m) {
    pw *= ex;
    acc += coeffs_[m + degree_] * pw + coeffs_[-m + degree_] * std::conj(pw);
  }
  if (real_) return {acc.real(), 0.0};
  return acc;
}

bool TrigPoly1D::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Complex c) { return c == Complex{}; });
}

double TrigPoly1D::l2_norm() const {
  double s = 0.0;
  for (const Complex& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

double TrigPoly1D::coefficient_sup_norm() const {
  double s = 0.0;
  for (const Complex& c : coeffs_) s = std::max(s, std::abs(c));
  return s;
}

double TrigPoly1D::coefficient_l1_norm() const {
  double s = 0.0;
  for (const Complex& c : coeffs_) s += std::abs(c);
  return s;
}

bool TrigPoly1D::satisfies_realness(double tol) const {
  for (int m = 0; m <= degree_; ++m) {
    if (std::abs(coefficient(-m) - std::conj(coefficient(m))) > tol) return false;
  }
  return true;
}

TrigPoly1D& TrigPoly1D::operator+=(const TrigPoly1D& other) {
  grow(other.degree_);
  for (int m = -other.degree_; m <= other.degree_; ++m)
    coeffs_[m + degree_] += other.coeffs_[m + other.degree_];
  real_ = real_ && other.real_;
  return *this;
}

TrigPoly1D& TrigPoly1D::operator-=(const TrigPoly1D& other) {
  grow(other.degree_);
  for (int m = -other.degree_; m <= other.degree_; ++m)
    coeffs_[m + degree_] -= other.coeffs_[m + other.degree_];
  real_ = real_ && other.real_;
  return *this;
}

TrigPoly1D& TrigPoly1D::operator*=(double s) {
  for (Complex& c : coeffs_) c *= s;
  return *this;
}

// ---------------------------------------------------------------------------
// FiberedTrigPoly

FiberedTrigPoly::FiberedTrigPoly(int degree_y, int degree_x, bool real)
    : degree_y_(degree_y),
      degree_x_(degree_x),
      coeffs_(static_cast<std::size_t>(2 * degree_y + 1) * (2 * degree_x + 1)),
      real_(real) {
  if (degree_y < 0 || degree_x < 0) throw ValidationError("degrees must be >= 0");
}

FiberedTrigPoly FiberedTrigPoly::constant(double c) {
  FiberedTrigPoly p(0, 0, true);
  p.coeffs_[0] = c;
  return p;
}

FiberedTrigPoly FiberedTrigPoly::from_modes(const std::vector<Mode>& modes, bool real) {
  FiberedTrigPoly p(0, 0, false);
  for (const Mode& mode : modes) p.add_to_coefficient(mode.m, mode.k, mode.c);
  if (real) {
    if (!p.satisfies_realness(1e-12))
      throw ValidationError("modes violate the realness invariant c(-m,-k) = conj c(m,k)");
    p.real_ = true;
  }
  return p;
}

FiberedTrigPoly FiberedTrigPoly::real_part_of(const std::vector<Mode>& modes) {
  FiberedTrigPoly p(0, 0, false);
  for (const Mode& mode : modes) {
    p.add_to_coefficient(mode.m, mode.k, 0.5 * mode.c);
    p.add_to_coefficient(-mode.m, -mode.k, 0.5 * std::conj(mode.c));
  }
  p.real_ = true;
  return p;
}

FiberedTrigPoly FiberedTrigPoly::from_base(const TrigPoly1D& g) {
  FiberedTrigPoly p(0, g.degree(), g.is_real());
  for (int m = -g.degree(); m <= g.degree(); ++m) p.coeffs_[p.index(m, 0)] = g.coefficient(m);
  return p;
}

void FiberedTrigPoly::grow(int degree_y, int degree_x) {
  degree_y = std::max(degree_y, degree_y_);
  degree_x = std::max(degree_x, degree_x_);
  if (degree_y == degree_y_ && degree_x == degree_x_) return;
  FiberedTrigPoly next(degree_y, degree_x, real_);
  for (int k = -degree_y_; k <= degree_y_; ++k)
    for (int m = -degree_x_; m <= degree_x_; ++m) next.coeffs_[next.index(m, k)] = coeffs_[index(m, k)];
  *this = std::move(next);
}

Complex FiberedTrigPoly::coefficient(int m, int k) const {
  if (std::abs(m) > degree_x_ || std::abs(k) > degree_y_) return {};
  return coeffs_[index(m, k)];
}

void FiberedTrigPoly::set_coefficient(int m, int k, Complex c) {
  grow(std::abs(k), std::abs(m));
  if (real_ && m == 0 && k == 0) {
    if (std::fabs(c.imag()) > 1e-12 * std::max(1.0, std::abs(c)))
      throw ValidationError("real polynomial needs a real mean");
    c = {c.real(), 0.0};
  }
  coeffs_[index(m, k)] = c;
  if (real_ && (m != 0 || k != 0)) coeffs_[index(-m, -k)] = std::conj(c);
}

void FiberedTrigPoly::add_to_coefficient(int m, int k, Complex c) {
  grow(std::abs(k), std::abs(m));
  coeffs_[index(m, k)] += c;
}

TrigPoly1D FiberedTrigPoly::fiber(int k) const {
  TrigPoly1D g(degree_x_, real_ && k == 0);
  if (std::abs(k) > degree_y_) return g;
  for (int m = -degree_x_; m <= degree_x_; ++m) g.add_to_coefficient(m, coeffs_[index(m, k)]);
  return g;
}

Complex FiberedTrigPoly::evaluate(double x, double y) const {
  return evaluate_phasors(unit_phasor(x), unit_phasor(y));
}

double FiberedTrigPoly::evaluate_real(double x, double y) const { return evaluate(x, y).real(); }

Complex FiberedTrigPoly::evaluate_phasors(Complex ex, Complex ey) const {
  const int D = degree_x_;
  const int d = degree_y_;
  // Powers of ex: at most a few dozen, kept on the stack for the common case.
  Complex pw_small[33];
  std::vector<Complex> pw_large;
  Complex* pw = pw_small;
  if (D + 1 > 33) {
    pw_large.resize(static_cast<std::size_t>(D + 1));
    pw = pw_large.data();
  }
  pw[0] = 1.0;
  for (int m = 1; m <= D; ++m) pw[m] = pw[m - 1] * ex;

  auto fiber_at = [&](int k) {
    const Complex* row = &coeffs_[static_cast<std::size_t>(k + d) * (2 * D + 1) + D];
    Complex c = row[0];
    for (int m = 1; m <= D; ++m) c += row[m] * pw[m] + row[-m] * std::conj(pw[m]);
    return c;
  };

  if (real_) {
    double acc = fiber_at(0).real();
    Complex eyk = 1.0;
    for (int k = 1; k <= d; ++k) {
      eyk *= ey;
      acc += 2.0 * (fiber_at(k) * eyk).real();
    }
    return {acc, 0.0};
  }
  Complex acc = fiber_at(0);
  Complex eyk = 1.0;
  for (int k = 1; k <= d; ++k) {
    eyk *= ey;
    acc += fiber_at(k) * eyk + fiber_at(-k) * std::conj(eyk);
  }
  return acc;
}

void FiberedTrigPoly::fiber_values(Complex ex, std::vector<Complex>& out) const {
  const int D = degree_x_;
  const int d = degree_y_;
  out.assign(static_cast<std::size_t>(2 * d + 1), Complex{});
  Complex pw = 1.0;
  for (int k = -d; k <= d; ++k) out[k + d] = coeffs_[index(0, k)];
  for (int m = 1; m <= D; ++m) {
    pw *= ex;
    const Complex pc = std::conj(pw);
    for (int k = -d; k <= d; ++k) out[k + d] += coeffs_[index(m, k)] * pw + coeffs_[index(-m, k)] * pc;
  }
}

std::vector<FiberedTrigPoly::Mode> FiberedTrigPoly::modes() const {
  std::vector<Mode> out;
  for (int k = -degree_y_; k <= degree_y_; ++k)
    for (int m = -degree_x_; m <= degree_x_; ++m) {
      const Complex c = coeffs_[index(m, k)];
      if (c != Complex{}) out.push_back({m, k, c});
    }
  return out;
}

int FiberedTrigPoly::max_frequency() const {
  int f = 0;
  for (const Mode& mode : modes()) f = std::max(f, std::abs(mode.m) + std::abs(mode.k));
  return f;
}

double FiberedTrigPoly::l2_norm() const {
  double s = 0.0;
  for (const Complex& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

bool FiberedTrigPoly::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Complex c) { return c == Complex{}; });
}

bool FiberedTrigPoly::satisfies_realness(double tol) const {
  for (int k = -degree_y_; k <= degree_y_; ++k)
    for (int m = -degree_x_; m <= degree_x_; ++m)
      if (std::abs(coefficient(-m, -k) - std::conj(coefficient(m, k))) > tol) return false;
  return true;
}

FiberedTrigPoly& FiberedTrigPoly::operator+=(const FiberedTrigPoly& other) {
  grow(other.degree_y_, other.degree_x_);
  for (int k = -other.degree_y_; k <= other.degree_y_; ++k)
    for (int m = -other.degree_x_; m <= other.degree_x_; ++m)
      coeffs_[index(m, k)] += other.coeffs_[other.index(m, k)];
  real_ = real_ && other.real_;
  return *this;
}

FiberedTrigPoly& FiberedTrigPoly::operator-=(const FiberedTrigPoly& other) {
  grow(other.degree_y_, other.degree_x_);
  for (int k = -other.degree_y_; k <= other.degree_y_; ++k)
    for (int m = -other.degree_x_; m <= other.degree_x_; ++m)
      coeffs_[index(m, k)] -= other.coeffs_[other.index(m, k)];
  real_ = real_ && other.real_;
  return *this;
}

FiberedTrigPoly& FiberedTrigPoly::operator*=(double s) {
  for (Complex& c : coeffs_) c *= s;
  return *this;
}

}  // namespace mixlab
