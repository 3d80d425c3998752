#pragma once

// Gamma function and the Gauss hypergeometric function 2F1.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "diophlab/errors.hpp"
#include "diophlab/quadrature.hpp"
#include "diophlab/summation.hpp"

namespace diophlab {

/// Gamma(z) for z > 0 by the Lanczos approximation (g = 7, nine terms).
/// Arguments below 1/2 are raised with Gamma(z) = Gamma(z + 1) / z; no
/// reflection or duplication identity is used.
inline double gamma_eval(double z) {
  if (!(z > 0.0)) throw DomainError("gamma_eval: argument must be positive");
  if (z < 0.5) return gamma_eval(z + 1.0) / z;
  static constexpr double kG = 7.0;
  static constexpr std::array<double, 9> kCoeffs{
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  const double x = z - 1.0;
  double series = kCoeffs[0];
  for (std::size_t i = 1; i < kCoeffs.size(); ++i) series += kCoeffs[i] / (x + static_cast<double>(i));
  const double t = x + kG + 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * series;
}

/// Power series for 2F1, |z| < 1. Throws NumericError if the terms have not
/// fallen below machine precision within `max_terms`.
inline double hypergeom_2f1_series(double a, double b, double c, double z, std::size_t max_terms = 200000) {
  if (!(std::abs(z) < 1.0)) throw DomainError("hypergeom_2f1_series: requires |z| < 1");
  if (c <= 0.0 && c == std::floor(c)) throw DomainError("hypergeom_2f1_series: c is a nonpositive integer");
  CompensatedSum sum;
  double term = 1.0;
  sum += term;
  for (std::size_t n = 0; n < max_terms; ++n) {
    const auto k = static_cast<double>(n);
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum.value()) && n > 4) return sum.value();
  }
  throw NumericError("hypergeom_2f1_series: series did not converge");
}

/// 2F1 for z < 0 through the Pfaff transformation
/// 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)), then the power series.
inline double hypergeom_2f1_pfaff(double a, double b, double c, double z) {
  if (!(z < 0.0)) throw DomainError("hypergeom_2f1_pfaff: requires z < 0");
  return std::pow(1.0 - z, -a) * hypergeom_2f1_series(a, c - b, c, z / (z - 1.0));
}

/// Euler's integral
///   2F1(a,b;c;z) = Gamma(c)/(Gamma(b)Gamma(c-b)) int_0^1 t^{b-1}(1-t)^{c-b-1}(1-tz)^{-a} dt,
/// valid for c > b > 0 and z < 1. Endpoint singularities are removed by
/// t = v^{1/b} on [0, 1/2] and 1 - t = w^{1/(c-b)} on [1/2, 1].
inline double hypergeom_2f1_euler(double a, double b, double c, double z, const QuadratureOptions& opts = {}) {
  if (!(c > b && b > 0.0)) throw DomainError("hypergeom_2f1_euler: requires c > b > 0");
  if (!(z < 1.0)) throw DomainError("hypergeom_2f1_euler: requires z < 1");
  const double e = c - b;
  auto left = [&](double v) {
    const double t = std::pow(v, 1.0 / b);
    return std::pow(1.0 - t, e - 1.0) * std::pow(1.0 - t * z, -a) / b;
  };
  auto right = [&](double w) {
    const double s = std::pow(w, 1.0 / e);
    const double t = 1.0 - s;
    return std::pow(t, b - 1.0) * std::pow(1.0 - t * z, -a) / e;
  };
  const double lhs = integrate(left, 0.0, std::pow(0.5, b), opts).value;
  const double rhs = integrate(right, 0.0, std::pow(0.5, e), opts).value;
  return gamma_eval(c) / (gamma_eval(b) * gamma_eval(e)) * (lhs + rhs);
}

/// 2F1(a,b;c;z), z < 1. Uses the Euler integral (after the a <-> b swap when
/// only that ordering satisfies c > b > 0). For |z| <= 0.9 the power series
/// is evaluated as well and the two must agree to 1e-9 relative.
inline double hypergeom_2f1(double a, double b, double c, double z) {
  if (!(z < 1.0)) throw DomainError("hypergeom_2f1: requires z < 1");
  if (z == 0.0) return 1.0;
  double value;
  if (c > b && b > 0.0) {
    value = hypergeom_2f1_euler(a, b, c, z);
  } else if (c > a && a > 0.0) {
    value = hypergeom_2f1_euler(b, a, c, z);
  } else if (std::abs(z) < 1.0) {
    return hypergeom_2f1_series(a, b, c, z);
  } else {
    throw DomainError("hypergeom_2f1: parameters outside the integral and series domains");
  }
  if (std::abs(z) <= 0.9) {
    const double series = hypergeom_2f1_series(a, b, c, z);
    if (std::abs(series - value) > 1e-9 * std::max(1.0, std::abs(value))) {
      throw NumericError("hypergeom_2f1: integral and series disagree");
    }
  }
  return value;
}

}  // namespace diophlab
