#pragma once

// Sums of nonnegative multiplicative functions: the generic engine
//   sum_{n<=y} g(n)/n  ~  c(g) (log y)^kappa
// and the four concrete sums that feed the root-equidistribution and
// quadruple-counting estimates.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "diophlab/arith.hpp"
#include "diophlab/errors.hpp"
#include "diophlab/summation.hpp"

namespace diophlab {

/// A multiplicative g given by its values at prime powers, with the
/// bound g(p^a) <= U and the expected mean value kappa of g(p).
struct MultiplicativeSpec {
  std::function<double(u64 prime, std::uint32_t exponent)> value_at_prime_power;
  double bound_u = 1.0;
  double kappa = 1.0;
};

struct MultSumOptions {
  u64 euler_prime_bound = 1'000'000;
  u64 sieve_cap = SpfSieve::kDefaultCap;
  std::size_t kappa_fit_points = 48;
};

struct MultSumResult {
  double sum_gn_over_n = 0.0;
  double euler_product_cg = 0.0;
  double fitted_kappa = 0.0;
  /// |log| of the Euler factors over primes in (P/2, P]; a convergence gauge.
  double euler_tail_estimate = 0.0;
  u64 prime_bound = 0;
};

namespace detail {

inline double checked_value(const MultiplicativeSpec& spec, u64 p, std::uint32_t e) {
  const double v = spec.value_at_prime_power(p, e);
  if (!(v >= 0.0) || v > spec.bound_u) {
    throw DomainError("MultiplicativeSpec: g(p^a) must lie in [0, U]");
  }
  return v;
}

// Ordinary least-squares slope of ys against xs.
inline double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace detail

inline MultSumResult mult_sum(const MultiplicativeSpec& spec, double y,
                              const MultSumOptions& opts = {}) {
  if (!(y >= 2.0)) throw DomainError("mult_sum: y must be at least 2");
  if (y > static_cast<double>(opts.sieve_cap)) {
    throw ResourceError("mult_sum: y exceeds the sieve cap");
  }
  const auto ymax = static_cast<u64>(std::floor(y));
  const SpfSieve sieve(std::max(ymax, opts.euler_prime_bound), opts.sieve_cap);

  MultSumResult out;
  out.prime_bound = opts.euler_prime_bound;

  CompensatedSum sum;
  for (u64 n = 1; n <= ymax; ++n) {
    double g = 1.0;
    sieve.for_each_prime_power(n, [&](u64 p, std::uint32_t e) { g *= detail::checked_value(spec, p, e); });
    if (g != 0.0) sum += g / static_cast<double>(n);
  }
  out.sum_gn_over_n = sum.value();

  // Truncated Euler product, accumulated in log space.
  CompensatedSum log_product;
  double tail = 0.0;
  for (u64 p : sieve.primes()) {
    if (p > opts.euler_prime_bound) break;
    const double pd = static_cast<double>(p);
    double local = 1.0;
    double pk = 1.0;
    for (std::uint32_t e = 1; e < 64; ++e) {
      pk /= pd;
      if (pk * spec.bound_u < 1e-18) break;
      local += detail::checked_value(spec, p, e) * pk;
    }
    const double term = spec.kappa * std::log1p(-1.0 / pd) + std::log(local);
    log_product += term;
    if (2 * p > opts.euler_prime_bound) tail += term;
  }
  out.euler_product_cg = std::exp(log_product.value()) / std::tgamma(spec.kappa + 1.0);
  out.euler_tail_estimate = std::abs(tail);

  // Slope of sum_{p<=w} g(p) log p / p against log w, on a log-spaced w grid
  // spanning [sqrt(y), y].
  const double w_lo = std::max(2.0, std::sqrt(y));
  const std::size_t points = std::max<std::size_t>(opts.kappa_fit_points, 2);
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    grid[i] = std::exp(std::log(w_lo) + t * (std::log(y) - std::log(w_lo)));
  }
  std::vector<double> xs, ys;
  CompensatedSum mertens;
  std::size_t next = 0;
  for (u64 p : sieve.primes()) {
    while (next < points && static_cast<double>(p) > grid[next]) {
      xs.push_back(std::log(grid[next]));
      ys.push_back(mertens.value());
      ++next;
    }
    if (next == points) break;
    const double pd = static_cast<double>(p);
    mertens += detail::checked_value(spec, p, 1) * std::log(pd) / pd;
  }
  while (next < points) {
    xs.push_back(std::log(grid[next]));
    ys.push_back(mertens.value());
    ++next;
  }
  out.fitted_kappa = detail::ols_slope(xs, ys);
  return out;
}

/// A lemma sum together with its reference growth function.
struct LemmaSum {
  double value = 0.0;
  double reference = 0.0;
  /// value / reference; NaN when the reference vanishes.
  double ratio = 0.0;
};

namespace detail {

inline LemmaSum make_lemma_sum(double value, double reference) {
  const double ratio = reference > 0.0 ? value / reference : std::numeric_limits<double>::quiet_NaN();
  return {value, reference, ratio};
}

inline SpfSieve sieve_for(u64 y) { return SpfSieve(std::max<u64>(y, 2)); }

}  // namespace detail

/// sum_{n<=y} sqrt(2^omega(n) / (n phi(n))), referenced to (log y)^sqrt2.
inline LemmaSum lemma_sum_sqrt2(u64 y, const SpfSieve& sieve) {
  if (y < 1) throw DomainError("lemma_sum_sqrt2: y must be positive");
  if (y > sieve.limit()) throw ResourceError("lemma_sum_sqrt2: y exceeds sieve");
  CompensatedSum sum;
  for (u64 n = 1; n <= y; ++n) {
    double two_omega = 1.0, phi = 1.0;
    sieve.for_each_prime_power(n, [&](u64 p, std::uint32_t e) {
      two_omega *= 2.0;
      phi *= static_cast<double>(ipow(p, e - 1)) * static_cast<double>(p - 1);
    });
    sum += std::sqrt(two_omega / (static_cast<double>(n) * phi));
  }
  return detail::make_lemma_sum(sum.value(), std::pow(std::log(static_cast<double>(y)), std::sqrt(2.0)));
}

inline LemmaSum lemma_sum_sqrt2(u64 y) { return lemma_sum_sqrt2(y, detail::sieve_for(y)); }

/// prod_{p | h} (1 + 7/sqrt p).
inline double payoff_product(const Factorization& f) {
  double prod = 1.0;
  for (const auto& pp : f.factors) prod *= 1.0 + 7.0 / std::sqrt(static_cast<double>(pp.prime));
  return prod;
}

struct GcdLemmaSum {
  double sum = 0.0;
  /// (log y)^sqrt2 * prod_{p | h} (1 + 7/sqrt p)
  double bound = 0.0;
  double h_product = 0.0;
};

/// sum_{n<=y} sqrt(2^omega(n) (h,n) / (n phi(n))) and its majorant.
inline GcdLemmaSum lemma_sum_gcd_h(u64 y, i64 h, const SpfSieve& sieve) {
  if (h == 0) throw DomainError("lemma_sum_gcd_h: h must be nonzero");
  if (y < 2) throw DomainError("lemma_sum_gcd_h: y must be at least 2");
  if (y > sieve.limit()) throw ResourceError("lemma_sum_gcd_h: y exceeds sieve");
  const u64 habs = static_cast<u64>(h < 0 ? -h : h);
  CompensatedSum sum;
  for (u64 n = 1; n <= y; ++n) {
    double two_omega = 1.0, phi = 1.0;
    sieve.for_each_prime_power(n, [&](u64 p, std::uint32_t e) {
      two_omega *= 2.0;
      phi *= static_cast<double>(ipow(p, e - 1)) * static_cast<double>(p - 1);
    });
    const auto g = static_cast<double>(std::gcd(habs, n));
    sum += std::sqrt(two_omega * g / (static_cast<double>(n) * phi));
  }
  GcdLemmaSum out;
  out.sum = sum.value();
  out.h_product = payoff_product(factor(habs));
  out.bound = std::pow(std::log(static_cast<double>(y)), std::sqrt(2.0)) * out.h_product;
  return out;
}

inline GcdLemmaSum lemma_sum_gcd_h(u64 y, i64 h) { return lemma_sum_gcd_h(y, h, detail::sieve_for(y)); }

/// sum_{m<=y} prod_{p|m} (1 + 7/sqrt p), referenced to y.
inline LemmaSum lemma_sum_payoff(u64 y, const SpfSieve& sieve) {
  if (y < 1) throw DomainError("lemma_sum_payoff: y must be positive");
  if (y > sieve.limit()) throw ResourceError("lemma_sum_payoff: y exceeds sieve");
  CompensatedSum sum;
  for (u64 m = 1; m <= y; ++m) {
    double prod = 1.0;
    sieve.for_each_prime_power(m, [&](u64 p, std::uint32_t) { prod *= 1.0 + 7.0 / std::sqrt(static_cast<double>(p)); });
    sum += prod;
  }
  return detail::make_lemma_sum(sum.value(), static_cast<double>(y));
}

inline LemmaSum lemma_sum_payoff(u64 y) { return lemma_sum_payoff(y, detail::sieve_for(y)); }

/// sqrt(2/(p-1)) (1 - p^{-1/2})^{-1} <= 7/sqrt(p). Returns the first prime
/// up to `limit` that violates it, if any.
inline std::optional<u64> payoff_prime_inequality_violation(const SpfSieve& sieve, u64 limit) {
  for (u64 p : sieve.primes()) {
    if (p > limit) break;
    const double pd = static_cast<double>(p);
    const double lhs = std::sqrt(2.0 / (pd - 1.0)) / (1.0 - 1.0 / std::sqrt(pd));
    if (!(lhs <= 7.0 / std::sqrt(pd))) return p;
  }
  return std::nullopt;
}

}  // namespace diophlab
