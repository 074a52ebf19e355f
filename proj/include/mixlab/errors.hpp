#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace mixlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that violates a documented contract. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A well-formed request that cannot be carried out numerically. Exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

class DegenerateSection : public ValidationError {
 public:
  DegenerateSection() : ValidationError("section is not transverse: w_y = 0") {}
};

class NonPositiveTimeChange : public ValidationError {
 public:
  explicit NonPositiveTimeChange(double value)
      : ValidationError("time-change function is not positive (sampled " +
                        std::to_string(value) + ")"),
        value_(value) {}
  double value() const { return value_; }

 private:
  double value_;
};

class NonPositiveRoof : public ValidationError {
 public:
  explicit NonPositiveRoof(double lower_bound)
      : ValidationError("roof is not certifiably positive (lower bound " +
                        std::to_string(lower_bound) + ")"),
        lower_bound_(lower_bound) {}
  double lower_bound() const { return lower_bound_; }

 private:
  double lower_bound_;
};

class NonzeroFiberAverage : public ValidationError {
 public:
  NonzeroFiberAverage() : ValidationError("function has a nonzero fiber average") {}
};

class SmallDivisor : public NumericError {
 public:
  SmallDivisor(int frequency, double divisor)
      : NumericError("small divisor |e^{2 pi i m alpha} - 1| = " + std::to_string(divisor) +
                     " at m = " + std::to_string(frequency)),
        frequency_(frequency),
        divisor_(divisor) {}
  int frequency() const { return frequency_; }
  double divisor() const { return divisor_; }

 private:
  int frequency_;
  double divisor_;
};

class ObstructionNonzero : public NumericError {
 public:
  explicit ObstructionNonzero(std::complex<double> value)
      : NumericError("invariant distribution does not vanish (|D| = " +
                     std::to_string(std::abs(value)) + ")"),
        value_(value) {}
  std::complex<double> value() const { return value_; }

 private:
  std::complex<double> value_;
};

class RationalAlpha : public NumericError {
 public:
  explicit RationalAlpha(int terms)
      : NumericError("continued fraction terminates after " + std::to_string(terms) +
                     " terms: alpha is rational at double precision"),
        terms_(terms) {}
  int terms() const { return terms_; }

 private:
  int terms_;
};

class NotACoboundary : public NumericError {
 public:
  explicit NotACoboundary(double residual)
      : NumericError("u o f - u does not match the roof minus its mean (residual " +
                     std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace mixlab
