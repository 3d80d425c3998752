#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature on finite and
// half-infinite intervals.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "diophlab/errors.hpp"

namespace diophlab {

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  std::size_t max_subintervals = 20000;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  std::size_t subintervals = 0;
};

namespace detail {

struct GkSegment {
  double lo, hi, value, error;
  bool operator<(const GkSegment& other) const { return error < other.error; }
};

template <typename F>
GkSegment gauss_kronrod_15(const F& f, double lo, double hi) {
  static constexpr double kNodes[8] = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr double kKronrod[8] = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  // Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
  static constexpr double kGauss[4] = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = kKronrod[7] * fc;
  double gauss = kGauss[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrod[i] * pair;
    if (i % 2 == 1) gauss += kGauss[i / 2] * pair;
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Integral of f over [lo, hi]. Throws NumericError when the tolerance is
/// not reached within the subinterval budget.
template <typename F>
QuadratureResult integrate(const F& f, double lo, double hi, const QuadratureOptions& opts = {}) {
  std::priority_queue<detail::GkSegment> heap;
  heap.push(detail::gauss_kronrod_15(f, lo, hi));
  double total = heap.top().value;
  double error = heap.top().error;
  std::size_t evals = 15;
  while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (heap.size() >= opts.max_subintervals) {
      std::ostringstream msg;
      msg << "integrate: no convergence on [" << lo << ", " << hi << "] after " << heap.size()
          << " subintervals; value " << total << ", error estimate " << error;
      throw NumericError(msg.str());
    }
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const auto left = detail::gauss_kronrod_15(f, worst.lo, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.hi);
    evals += 30;
    heap.push(left);
    heap.push(right);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    if (heap.size() % 256 == 0) {
      // Periodic re-sum keeps the running totals from drifting.
      total = 0.0;
      error = 0.0;
      auto copy = heap;
      while (!copy.empty()) {
        total += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
  }
  return {total, error, evals, heap.size()};
}

/// Integral of f over [lo, infinity) through t = lo / (1 - w)^2, which turns
/// a t^{-3/2} tail into a bounded integrand on [0, 1).
template <typename F>
QuadratureResult integrate_to_infinity(const F& f, double lo, const QuadratureOptions& opts = {}) {
  if (!(lo > 0.0)) throw DomainError("integrate_to_infinity: lower limit must be positive");
  auto mapped = [&](double w) {
    if (w >= 1.0) return 0.0;
    const double s = 1.0 - w;
    const double t = lo / (s * s);
    if (!std::isfinite(t)) return 0.0;
    return f(t) * 2.0 * lo / (s * s * s);
  };
  return integrate(mapped, 0.0, 1.0, opts);
}

}  // namespace diophlab
