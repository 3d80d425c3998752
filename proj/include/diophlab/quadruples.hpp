#pragma once

// Doubly regular Diophantine quadruples {a, b, a+b+2r, 4r(a+r)(b+r)} with
// ab + 1 = r^2: exact enumeration two ways, the smoothed count through
// lambda(b, x), and the integral that produces the leading constant.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "diophlab/arith.hpp"
#include "diophlab/errors.hpp"
#include "diophlab/poly_roots.hpp"
#include "diophlab/quadrature.hpp"
#include "diophlab/special.hpp"
#include "diophlab/summation.hpp"

namespace diophlab {

/// {a, b, a+b+2r, 4r(a+r)(b+r)} from the pair a < b with ab + 1 = r^2.
struct DRQuadruple {
  u64 a = 0, b = 0, r = 0;

  [[nodiscard]] u64 third() const { return a + b + 2 * r; }
  [[nodiscard]] u64 largest() const { return 4 * r * (a + r) * (b + r); }
  [[nodiscard]] std::array<u64, 4> elements() const { return {a, b, third(), largest()}; }

  friend auto operator<=>(const DRQuadruple&, const DRQuadruple&) = default;
};

/// 4r(a+r)(b+r) without overflow.
inline u128 quadruple_max(u64 a, u64 b, u64 r) {
  return u128{4} * r * (static_cast<u128>(a) + r) * (static_cast<u128>(b) + r);
}

/// True iff uv + 1 is a perfect square for every pair of entries.
inline bool is_diophantine_tuple(const std::vector<u64>& elems) {
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (elems[i] == 0) throw DomainError("is_diophantine_tuple: entries must be positive");
    for (std::size_t j = 0; j < i; ++j) {
      if (elems[i] == elems[j]) throw DomainError("is_diophantine_tuple: entries must be distinct");
    }
  }
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = i + 1; j < elems.size(); ++j) {
      if (!is_perfect_square(static_cast<u128>(elems[i]) * elems[j] + 1)) return false;
    }
  }
  return true;
}

inline DRQuadruple drq_from_pair(u64 a, u64 b) {
  if (a == 0 || a >= b) throw DomainError("drq_from_pair: need 0 < a < b");
  const auto r = is_perfect_square(static_cast<u128>(a) * b + 1);
  if (!r) {
    throw NotDiophantinePairError(std::to_string(a) + "*" + std::to_string(b) + "+1 is not a square");
  }
  const u64 ru = static_cast<u64>(*r);
  if (quadruple_max(a, b, ru) > std::numeric_limits<u64>::max()) {
    throw ResourceError("drq_from_pair: largest element exceeds 64 bits");
  }
  return {a, b, ru};
}

/// Largest a with 4(a+1)(2a+1)(2a+3) <= x, the smallest quadruple with that
/// first element; 0 when none fits.
inline u64 max_first_element(u64 x) {
  auto smallest = [](u64 a) { return u128{4} * (a + 1) * (2 * static_cast<u128>(a) + 1) * (2 * static_cast<u128>(a) + 3); };
  u64 a = static_cast<u64>(std::cbrt(static_cast<double>(x) / 16.0)) + 2;
  while (a > 0 && smallest(a) > x) --a;
  while (smallest(a + 1) <= x) ++a;
  return a;
}

/// Visits every quadruple with first element in [a_lo, a_hi] and largest
/// element <= x, in (a, nu, k) order: r = nu + a k with nu in R(a), k >= 1.
template <typename Visit>
void enumerate_drq_by_a(u64 x, u64 a_lo, u64 a_hi, const SpfSieve& sieve, Visit&& visit) {
  a_hi = std::min(a_hi, max_first_element(x));
  for (u64 a = std::max<u64>(a_lo, 1); a <= a_hi; ++a) {
    const RootSet roots = unit_square_roots(sieve.factor(a));
    for (u64 nu : roots.roots) {
      for (u64 r = nu + a;; r += a) {
        const u64 b = static_cast<u64>((static_cast<u128>(r) * r - 1) / a);
        if (quadruple_max(a, b, r) > x) break;
        visit(DRQuadruple{a, b, r});
      }
    }
  }
}

template <typename Visit>
void enumerate_drq_by_a(u64 x, Visit&& visit) {
  const u64 top = max_first_element(x);
  const SpfSieve sieve(std::max<u64>(top, 2));
  enumerate_drq_by_a(x, 1, top, sieve, visit);
}

inline std::vector<DRQuadruple> enumerate_drq_by_a(u64 x) {
  std::vector<DRQuadruple> out;
  enumerate_drq_by_a(x, [&](const DRQuadruple& q) { out.push_back(q); });
  return out;
}

/// Since r^2 > b, the largest element exceeds 4b^2; b therefore stays below
/// sqrt(x)/2.
inline u64 max_second_element(u64 x) {
  u64 b = isqrt(x / 4);
  while (b > 0 && u128{4} * b * b >= x) --b;
  return b;
}

/// Visits every quadruple with largest element <= x by b ascending and
/// r in R(b), r > 1, a = (r^2 - 1)/b.
template <typename Visit>
void enumerate_drq_by_b(u64 x, Visit&& visit) {
  const u64 top = max_second_element(x);
  if (top < 2) return;
  const SpfSieve sieve(top);
  for (u64 b = 2; b <= top; ++b) {
    const RootSet roots = unit_square_roots(sieve.factor(b));
    for (u64 r : roots.roots) {
      if (r <= 1) continue;
      const u64 a = static_cast<u64>((static_cast<u128>(r) * r - 1) / b);
      if (quadruple_max(a, b, r) <= x) visit(DRQuadruple{a, b, r});
    }
  }
}

inline std::vector<DRQuadruple> enumerate_drq_by_b(u64 x) {
  std::vector<DRQuadruple> out;
  enumerate_drq_by_b(x, [&](const DRQuadruple& q) { out.push_back(q); });
  return out;
}

/// Above this the by-b stream is not run as a cross-check.
inline constexpr u64 kByBCrossCheckCap = 1'000'000;

inline u64 count_drq_by_a(u64 x, u64 a_lo, u64 a_hi, const SpfSieve& sieve) {
  u64 n = 0;
  enumerate_drq_by_a(x, a_lo, a_hi, sieve, [&](const DRQuadruple&) { ++n; });
  return n;
}

inline u64 count_drq_by_b(u64 x) {
  u64 n = 0;
  enumerate_drq_by_b(x, [&](const DRQuadruple&) { ++n; });
  return n;
}

/// Q(x). For x <= kByBCrossCheckCap the by-b count is computed as well and
/// a disagreement throws ConsistencyError.
inline u64 q_exact(u64 x) {
  if (x < 1) throw DomainError("q_exact: x must be positive");
  const u64 top = max_first_element(x);
  const u64 n = top == 0 ? 0 : count_drq_by_a(x, 1, top, SpfSieve(std::max<u64>(top, 2)));
  if (x <= kByBCrossCheckCap) {
    const u64 other = count_drq_by_b(x);
    if (other != n) {
      throw ConsistencyError("q_exact: by-a count " + std::to_string(n) + " != by-b count " + std::to_string(other));
    }
  }
  return n;
}

/// Sets {a, b}, a < b <= x, with ab + 1 square: S(x) - x for t^2 - 1.
inline u64 count_pairs(u64 x, const SpfSieve& sieve) {
  if (x < 1) throw DomainError("count_pairs: x must be positive");
  u64 total = 0;
  for (u64 k = 1; k <= x; ++k) total += rho_unit(k, sieve);
  return total - x;
}

inline u64 count_pairs(u64 x) { return count_pairs(x, SpfSieve(std::max<u64>(x, 2))); }

/// 1 for b <= (x/16)^{1/3}, else sqrt(x^{1/2} / (2 b^{3/2}) + 1/4) - 1/2.
inline double lambda_paper(double b, double x) {
  if (!(b >= 1.0) || !(x >= 3.0)) throw DomainError("lambda_paper: need b >= 1, x >= 3");
  if (b <= std::cbrt(x / 16.0)) return 1.0;
  return std::sqrt(std::sqrt(x) / (2.0 * std::pow(b, 1.5)) + 0.25) - 0.5;
}

/// Whether s = r/b satisfies s^2(1+s)^2 - s(1+s)/b^2 <= x/(4b^3), i.e.
/// 4r(a+r)(b+r) <= x.
inline bool lambda_condition(long double s, long double b, long double x) {
  const long double u = s * (1.0L + s);
  return u * u - u / (b * b) <= x / (4.0L * b * b * b);
}

/// Largest s in [0, 1] meeting lambda_condition, by bisection to 1e-12.
inline double lambda_exact(double b, double x) {
  if (!(b >= 1.0) || !(x >= 3.0)) throw DomainError("lambda_exact: need b >= 1, x >= 3");
  const long double lb = b, lx = x;
  if (lambda_condition(1.0L, lb, lx)) return 1.0;
  long double lo = 0.0L, hi = 1.0L;
  while (hi - lo > 1e-13L) {
    const long double mid = 0.5L * (lo + hi);
    (lambda_condition(mid, lb, lx) ? lo : hi) = mid;
  }
  return static_cast<double>(lo);
}

/// psi(x) = (log x)^{(2 - sqrt 2)/3} (log log x)^{-5/6}
inline double truncation_psi(double x) {
  const double lx = std::log(x);
  return std::pow(lx, (2.0 - std::sqrt(2.0)) / 3.0) * std::pow(std::log(lx), -5.0 / 6.0);
}

/// H(x) = ceil((log x)^{1 - sqrt2/2} (log log x)^{-5/4})
inline int frequency_cutoff(double x) {
  const double lx = std::log(x);
  return static_cast<int>(std::ceil(std::pow(lx, 1.0 - std::sqrt(2.0) / 2.0) * std::pow(std::log(lx), -1.25)));
}

struct WeightedSumOptions {
  std::optional<double> psi_override;
  /// Replace lambda by 1 (the sum then collapses to S(B)).
  bool unit_lambda = false;
};

struct WeightedSum {
  double value = 0.0;
  double psi = 0.0;
  u64 B = 0;
};

/// sum_{b <= B} rho(b) lambda(b, x) with B = floor(x^{1/3} psi(x)).
inline WeightedSum weighted_sum(double x, const WeightedSumOptions& opts = {}) {
  if (!(x >= 16.0)) throw DomainError("weighted_sum: x must be at least 16");
  WeightedSum out;
  out.psi = opts.psi_override.value_or(truncation_psi(x));
  out.B = static_cast<u64>(std::floor(std::cbrt(x) * out.psi));
  if (out.B < 1) return out;
  const SpfSieve sieve(std::max<u64>(out.B, 2));
  CompensatedSum acc;
  for (u64 b = 1; b <= out.B; ++b) {
    const double lam = opts.unit_lambda ? 1.0 : lambda_paper(static_cast<double>(b), x);
    acc += static_cast<double>(rho_unit(b, sieve)) * lam;
  }
  out.value = acc.value();
  return out;
}

/// Beyond this S(t) is replaced by (6/pi^2) t log t.
inline constexpr u64 kExactPairCountLimit = 10'000'000;

struct MainTermIntegral {
  double value = 0.0;
  /// Part over t <= kExactPairCountLimit with S exact (summed in closed form).
  double step_part = 0.0;
  /// Quadrature over the asymptotic tail.
  double tail_part = 0.0;
  double tail_error = 0.0;
  /// Relative change when the tail quadrature starts from twice the nodes.
  double doubling_delta = 0.0;
};

namespace detail {

// phi(t1) - phi(t2) for phi(t) = sqrt(1 + 2 sqrt(x) t^{-3/2}), t1 < t2,
// without cancellation.
inline double phi_drop(double sx, double t1, double t2) {
  const double a1 = 2.0 * sx * std::pow(t1, -1.5);
  const double a2 = 2.0 * sx * std::pow(t2, -1.5);
  const double diff = a1 * -std::expm1(-1.5 * std::log1p((t2 - t1) / t1));
  return diff / (std::sqrt(1.0 + a1) + std::sqrt(1.0 + a2));
}

}  // namespace detail

/// (3 x^{1/2}/4) int_{(x/16)^{1/3}}^infinity (1 + 2 x^{1/2}/t^{3/2})^{-1/2} S(t) t^{-5/2} dt,
/// S(t) = sum_{k <= t} |R(k)|. On [n, n+1) the integrand is -S(n) phi'(t)/2,
/// so the exact part is a finite sum; the tail uses quadrature.
inline MainTermIntegral main_term_integral(double x, const SpfSieve& sieve) {
  if (!(x >= 16.0)) throw DomainError("main_term_integral: x must be at least 16");
  const double sx = std::sqrt(x);
  const double t0 = std::cbrt(x / 16.0);
  const auto limit = static_cast<double>(std::min<u64>(kExactPairCountLimit, sieve.limit()));
  MainTermIntegral out;
  double tail_start = t0;
  if (t0 < limit) {
    CompensatedSum step;
    u64 s = 0;
    const auto n0 = static_cast<u64>(std::floor(t0));
    for (u64 k = 1; k <= n0; ++k) s += rho_unit(k, sieve);
    double lo = t0;
    for (u64 n = n0; static_cast<double>(n) < limit; ++n) {
      if (n > n0) s += rho_unit(n, sieve);
      const double hi = static_cast<double>(n + 1);
      step += 0.5 * static_cast<double>(s) * detail::phi_drop(sx, lo, hi);
      lo = hi;
    }
    out.step_part = step.value();
    tail_start = limit;
  }
  const double c6 = 6.0 / (kPi * kPi);
  auto tail = [&](double t) {
    return 0.75 * sx / std::sqrt(1.0 + 2.0 * sx * std::pow(t, -1.5)) * c6 * std::log(t) * std::pow(t, -1.5);
  };
  const auto whole = integrate_to_infinity(tail, tail_start);
  // Same tail with the first subdivision forced: [T, 4T] and [4T, infinity).
  const double split = 4.0 * tail_start;
  const double doubled = integrate(tail, tail_start, split).value + integrate_to_infinity(tail, split).value;
  out.tail_part = whole.value;
  out.tail_error = whole.abs_error;
  out.value = out.step_part + out.tail_part;
  out.doubling_delta = std::abs(doubled - whole.value) / std::abs(out.value);
  if (out.doubling_delta > 1e-6) {
    throw NumericError("main_term_integral: tail quadrature unstable, relative change " +
                       std::to_string(out.doubling_delta));
  }
  return out;
}

inline MainTermIntegral main_term_integral(double x) {
  return main_term_integral(x, SpfSieve(kExactPairCountLimit));
}

/// int_0^1 (1 + 8u)^{-1/2} u^{-2/3} du = 3 int_0^1 (1 + 8v^3)^{-1/2} dv.
inline double u_integral() {
  QuadratureOptions opts;
  opts.rel_tol = 1e-14;
  return 3.0 * integrate([](double v) { return 1.0 / std::sqrt(1.0 + 8.0 * v * v * v); }, 0.0, 1.0, opts).value;
}

/// C = 2^{4/3} / (3 Gamma(2/3)^3)
inline double constant_C() {
  const double g = gamma_eval(2.0 / 3.0);
  return std::pow(2.0, 4.0 / 3.0) / (3.0 * g * g * g);
}

struct ChainStep {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  [[nodiscard]] double residual() const { return std::abs(lhs - rhs); }
};

/// Each link from the u-integral to the closed form of C, evaluated by
/// routes that do not share the identity under test.
inline std::vector<ChainStep> chain_check() {
  const double pi = kPi;
  const double two_23 = std::pow(2.0, 2.0 / 3.0);
  const double f_minus8 = hypergeom_2f1_pfaff(0.5, 1.0 / 3.0, 4.0 / 3.0, -8.0);
  const double f_minus1 = hypergeom_2f1(1.0, 2.0 / 3.0, 4.0 / 3.0, -1.0);
  const double g13 = gamma_eval(1.0 / 3.0);
  const double g23 = gamma_eval(2.0 / 3.0);
  const double g43 = gamma_eval(4.0 / 3.0);
  const double g56 = gamma_eval(5.0 / 6.0);
  const double C = constant_C();
  std::vector<ChainStep> out;
  out.push_back({"euler_integral", u_integral(), 3.0 * f_minus8});
  out.push_back({"quadratic_transformation", f_minus8, f_minus1});
  out.push_back({"special_value_at_minus_one", f_minus1, 0.5 * std::sqrt(pi) * g43 / g56});
  out.push_back({"duplication_at_one_third", g56, std::pow(2.0, 1.0 / 3.0) * std::sqrt(pi) * g23 / g13});
  out.push_back({"reflection_at_one_third", g13 * g23, 2.0 * pi / std::sqrt(3.0)});
  out.push_back({"closed_form", g13 * g13 / (two_23 * pi * pi * g23), C});
  out.push_back({"end_to_end", two_23 / (pi * pi) * u_integral(), C});
  return out;
}

struct CountReport {
  u64 x = 0;
  u64 Q_exact = 0;
  double weighted_sum = 0.0;
  double main_term_integral = 0.0;
  /// C x^{1/3} log x
  double leading_term = 0.0;
  double dujella_low = 0.0;
  double dujella_high = 0.0;
  bool in_dujella_bracket = false;
  double psi = 0.0;
  u64 B = 0;
  int H = 0;
};

inline CountReport count_report(u64 x, const SpfSieve& sieve, std::optional<u64> known_q = std::nullopt) {
  if (x < 16) throw DomainError("count_report: x must be at least 16");
  const auto xd = static_cast<double>(x);
  CountReport r;
  r.x = x;
  r.Q_exact = known_q ? *known_q : q_exact(x);
  const auto ws = weighted_sum(xd);
  r.weighted_sum = ws.value;
  r.psi = ws.psi;
  r.B = ws.B;
  r.H = frequency_cutoff(xd);
  r.main_term_integral = main_term_integral(xd, sieve).value;
  const double scale = std::cbrt(xd) * std::log(xd);
  r.leading_term = constant_C() * scale;
  r.dujella_low = 0.1608 * scale;
  r.dujella_high = 0.5354 * scale;
  const auto q = static_cast<double>(r.Q_exact);
  r.in_dujella_bracket = r.dujella_low <= q && q <= r.dujella_high;
  return r;
}

inline std::vector<CountReport> asymptotic_report(const std::vector<u64>& xs) {
  for (u64 x : xs) {
    if (x < 16) throw DomainError("asymptotic_report: every x must be at least 16");
  }
  const SpfSieve sieve(kExactPairCountLimit);
  std::vector<CountReport> out;
  out.reserve(xs.size());
  for (u64 x : xs) out.push_back(count_report(x, sieve));
  return out;
}

}  // namespace diophlab
