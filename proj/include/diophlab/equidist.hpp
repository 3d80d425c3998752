#pragma once

// Exponential sums over the normalized roots nu/k of f(nu) = 0 mod k,
// k <= y:
//   R_f(h, y) = sum_{k<=y} sum_{f(nu) = 0 mod k, 0 < nu <= k} e(h nu / k).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <optional>
#include <thread>
#include <vector>

#include "diophlab/arith.hpp"
#include "diophlab/errors.hpp"
#include "diophlab/mult_sum.hpp"
#include "diophlab/poly_roots.hpp"
#include "diophlab/summation.hpp"

namespace diophlab {

inline constexpr u64 kWeylEnumerationCap = 10'000'000;

inline bool is_unit_square_poly(const ReducibleQuadratic& f) {
  return (f.W == 1 || f.W == -1) && f.a == 1 && f.b == -1 && f.c == 1 && f.d == 1;
}

/// Visits (k, roots of f mod k) for k in [lo, hi], k ascending.
template <typename Visit>
void for_each_root_set(const ReducibleQuadratic& f, u64 lo, u64 hi, const SpfSieve& sieve, Visit&& visit) {
  const bool unit = is_unit_square_poly(f);
  for (u64 k = lo; k <= hi; ++k) {
    const Factorization fk = sieve.factor(k);
    const RootSet rs = unit ? unit_square_roots(fk) : roots_mod(f, fk);
    visit(k, rs.roots);
  }
}

namespace detail {

// Splits [1, y] into `workers` contiguous blocks, runs body(lo, hi, slot) on
// each, and returns the per-block results in block order.
template <typename Result, typename Body>
std::vector<Result> run_blocks(u64 y, unsigned workers, Body&& body) {
  workers = std::max(1U, workers);
  std::vector<Result> results(workers);
  const u64 chunk = (y + workers - 1) / workers;
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    const u64 lo = 1 + static_cast<u64>(w) * chunk;
    const u64 hi = std::min(y, lo + chunk - 1);
    if (lo > hi) continue;
    if (workers == 1) {
      results[w] = body(lo, hi);
    } else {
      threads.emplace_back([&, w, lo, hi] { results[w] = body(lo, hi); });
    }
  }
  for (auto& t : threads) t.join();
  return results;
}

inline std::complex<double> root_phase(u64 h_mod_k, u64 nu, u64 k) {
  const u64 num = mul_mod(h_mod_k, nu, k);
  return unit_phase(static_cast<double>(num) / static_cast<double>(k));
}

inline u64 h_mod(i64 h, u64 k) { return reduce_mod(h, k); }

}  // namespace detail

/// R_f(h, y) for each h in `hs`, in one pass over k.
inline std::vector<std::complex<double>> r_f_sums(const ReducibleQuadratic& f, const std::vector<i64>& hs, u64 y,
                                                  unsigned workers = 1) {
  if (y < 1) throw DomainError("r_f_sum: y must be positive");
  if (y > kWeylEnumerationCap) throw ResourceError("r_f_sum: y over enumeration cap");
  const SpfSieve sieve(std::max<u64>(y, 2));
  using Partial = std::vector<CompensatedComplexSum>;
  auto blocks = detail::run_blocks<Partial>(y, workers, [&](u64 lo, u64 hi) {
    Partial acc(hs.size());
    for_each_root_set(f, lo, hi, sieve, [&](u64 k, const std::vector<u64>& roots) {
      for (std::size_t i = 0; i < hs.size(); ++i) {
        const u64 hk = detail::h_mod(hs[i], k);
        for (u64 nu : roots) acc[i] += detail::root_phase(hk, nu, k);
      }
    });
    return acc;
  });
  std::vector<std::complex<double>> out(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    CompensatedComplexSum total;
    for (const auto& b : blocks) {
      if (!b.empty()) total += b[i];
    }
    out[i] = total.value();
  }
  return out;
}

inline std::complex<double> r_f_sum(const ReducibleQuadratic& f, i64 h, u64 y, unsigned workers = 1) {
  return r_f_sums(f, {h}, y, workers).front();
}

/// S_f(y) = sum_{k<=y} rho_f(k).
inline u64 root_count_total(const ReducibleQuadratic& f, u64 y, const SpfSieve& sieve) {
  if (y < 1) throw DomainError("root_count_total: y must be positive");
  if (y > sieve.limit() && y > 1) throw ResourceError("root_count_total: y exceeds sieve");
  const bool unit = is_unit_square_poly(f);
  u64 total = 0;
  for (u64 k = 1; k <= y; ++k) total += unit ? rho_unit(k, sieve) : rho_fast(f, sieve.factor(k));
  return total;
}

inline u64 root_count_total(const ReducibleQuadratic& f, u64 y) {
  return root_count_total(f, y, SpfSieve(std::max<u64>(y, 2)));
}

struct LinearSumCheck {
  std::complex<double> exact;
  double main_term = 0.0;
  double residual = 0.0;
};

/// Exact sum over roots of a nu + b = 0 mod k against the Ramanujan-sum
/// prediction y (phi(a)/a) mu(a/(h,a)) / phi(a/(h,a)).
inline LinearSumCheck linear_exp_sum_check(i64 a, i64 b, i64 h, u64 y) {
  if (a < 1) throw DomainError("linear_exp_sum_check: a must be positive");
  if (std::gcd(a, b) != 1) throw DomainError("linear_exp_sum_check: gcd(a, b) must be 1");
  if (h == 0) throw DomainError("linear_exp_sum_check: h must be nonzero");
  if (y < 2) throw DomainError("linear_exp_sum_check: y must be at least 2");
  CompensatedComplexSum acc;
  for (u64 k = 1; k <= y; ++k) {
    if (std::gcd(static_cast<u64>(a), k) != 1) continue;
    // nu = -b a^{-1} mod k, represented in (0, k].
    u64 nu = reduce_mod(-static_cast<i128>(b) * inverse_mod(static_cast<u64>(a) % k, k), k);
    if (nu == 0) nu = k;
    acc += detail::root_phase(detail::h_mod(h, k), nu, k);
  }
  const u64 ua = static_cast<u64>(a);
  const u64 g = std::gcd(ua, static_cast<u64>(h < 0 ? -h : h));
  const auto whole = multiplicative_values(ua);
  const auto part = multiplicative_values(ua / g);
  LinearSumCheck out;
  out.exact = acc.value();
  out.main_term = static_cast<double>(y) * static_cast<double>(whole.phi) / static_cast<double>(ua) *
                  static_cast<double>(part.mu) / static_cast<double>(part.phi);
  out.residual = std::abs(out.exact - out.main_term);
  return out;
}

/// Star discrepancy of the multiset { nu/k : k <= y } in (0, 1].
inline double star_discrepancy_of_roots(const ReducibleQuadratic& f, u64 y) {
  if (y < 1) throw DomainError("star_discrepancy_of_roots: y must be positive");
  if (y > kWeylEnumerationCap) throw ResourceError("star_discrepancy_of_roots: y over enumeration cap");
  const SpfSieve sieve(std::max<u64>(y, 2));
  std::vector<double> pts;
  for_each_root_set(f, 1, y, sieve, [&](u64 k, const std::vector<u64>& roots) {
    for (u64 nu : roots) pts.push_back(static_cast<double>(nu) / static_cast<double>(k));
  });
  if (pts.empty()) throw DomainError("star_discrepancy_of_roots: no roots up to y");
  std::sort(pts.begin(), pts.end());
  const double n = static_cast<double>(pts.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double above = static_cast<double>(i + 1) / n - pts[i];
    const double below = pts[i] - static_cast<double>(i) / n;
    worst = std::max({worst, above, below});
  }
  return worst;
}

struct WeylRow {
  i64 h = 1;
  u64 y = 1;
  std::complex<double> R;
  double abs_R = 0.0;
  double trivial_count = 0.0;
  /// abs_R / (y ln y)
  double ratio = 0.0;
  /// R - 2y for t^2 - 1 (conjectural second-order term); absent otherwise.
  std::optional<double> probe_residual;
  /// probe_residual / y^0.6
  std::optional<double> probe_ratio;
  /// sqrtD prod_{p|h}(1 + 7/sqrt p) y (log y)^{sqrt2 - 1} (log log y)^{5/2}
  double theorem_curve = 0.0;
};

struct WeylReport {
  ReducibleQuadratic f;
  std::vector<u64> y_grid;
  std::vector<WeylRow> rows;
};

/// Rows for h = 1..h_max at every y in the ascending grid, from a single
/// sweep over k up to the largest y.
inline WeylReport cancellation_report(const ReducibleQuadratic& f, const std::vector<u64>& y_grid, int h_max) {
  if (h_max < 1) throw DomainError("cancellation_report: h_max must be positive");
  if (y_grid.empty()) throw DomainError("cancellation_report: empty y grid");
  if (!std::is_sorted(y_grid.begin(), y_grid.end()) || y_grid.front() < 2) {
    throw DomainError("cancellation_report: grid must be ascending with y >= 2");
  }
  const u64 ymax = y_grid.back();
  if (ymax > kWeylEnumerationCap) throw ResourceError("cancellation_report: y over enumeration cap");
  const SpfSieve sieve(ymax);
  const bool unit = is_unit_square_poly(f);

  std::vector<CompensatedComplexSum> acc(static_cast<std::size_t>(h_max));
  u64 trivial = 0;
  std::size_t next = 0;
  WeylReport report{f, y_grid, {}};
  auto snapshot = [&](u64 y) {
    const double yd = static_cast<double>(y);
    const double log_y = std::log(yd);
    for (int h = 1; h <= h_max; ++h) {
      WeylRow row;
      row.h = h;
      row.y = y;
      row.R = acc[static_cast<std::size_t>(h - 1)].value();
      row.abs_R = std::abs(row.R);
      row.trivial_count = static_cast<double>(trivial);
      row.ratio = row.abs_R / (yd * log_y);
      if (unit) {
        row.probe_residual = row.R.real() - 2.0 * yd;
        row.probe_ratio = *row.probe_residual / std::pow(yd, 0.6);
      }
      row.theorem_curve = static_cast<double>(f.sqrtD) * payoff_product(factor(h)) * yd *
                          std::pow(log_y, std::sqrt(2.0) - 1.0) * std::pow(std::log(log_y), 2.5);
      report.rows.push_back(row);
    }
  };
  for_each_root_set(f, 1, ymax, sieve, [&](u64 k, const std::vector<u64>& roots) {
    trivial += roots.size();
    for (int h = 1; h <= h_max; ++h) {
      const u64 hk = static_cast<u64>(h) % k;
      for (u64 nu : roots) acc[static_cast<std::size_t>(h - 1)] += detail::root_phase(hk, nu, k);
    }
    while (next < y_grid.size() && y_grid[next] == k) {
      snapshot(k);
      ++next;
    }
  });
  return report;
}

}  // namespace diophlab
