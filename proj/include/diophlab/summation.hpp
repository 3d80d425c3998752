#pragma once

#include <cmath>
#include <complex>

namespace diophlab {

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
    return *this;
  }
  CompensatedSum& operator+=(const CompensatedSum& other) {
    *this += other.sum_;
    *this += other.carry_;
    return *this;
  }
  [[nodiscard]] double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

class CompensatedComplexSum {
 public:
  CompensatedComplexSum& operator+=(std::complex<double> v) {
    re_ += v.real();
    im_ += v.imag();
    return *this;
  }
  CompensatedComplexSum& operator+=(const CompensatedComplexSum& other) {
    re_ += other.re_;
    im_ += other.im_;
    return *this;
  }
  [[nodiscard]] std::complex<double> value() const {
    return {re_.value(), im_.value()};
  }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// e(x) = exp(2 pi i x), with the argument reduced mod 1 first.
inline std::complex<double> unit_phase(double x) {
  const double frac = x - std::round(x);
  const double angle = 2.0 * kPi * frac;
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace diophlab
