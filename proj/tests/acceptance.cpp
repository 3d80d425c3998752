// Acceptance run: one PASS/FAIL line per criterion. With --only N a single
// criterion runs; the exit status is nonzero iff any selected criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "diophlab/equidist.hpp"
#include "diophlab/erdos_turan.hpp"
#include "diophlab/mult_sum.hpp"
#include "diophlab/poly_roots.hpp"
#include "diophlab/quadruples.hpp"

using namespace diophlab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED[" << what << "]";
    }
  }
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Constant reproduction.
void constant_reproduction(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const double C = constant_C();
  const double via_integral = std::pow(2.0, 2.0 / 3.0) / (kPi * kPi) * u_integral();
  double worst = 0.0;
  for (const auto& step : chain_check()) worst = std::max(worst, step.residual());
  out.require(std::abs(C - 0.338285) <= 5e-7, "C within 5e-7 of 0.338285");
  out.require(std::abs(via_integral - C) <= 1e-8, "u-integral route within 1e-8");
  out.require(worst < 1e-8, "chain residuals < 1e-8");
  const double secs = elapsed_since(t0);
  out.require(secs < 1.0, "runtime < 1 s");
  out.detail << "C=" << fmt(C, 12) << " integral_route=" << fmt(via_integral, 12) << " max_chain_residual=" << fmt(worst, 3);
}

// 2. rho oracle equivalence.
void rho_equivalence(Outcome& out) {
  const std::vector<std::array<i64, 3>> corpus = {
      {1, 0, -1},   {3, 0, -3},   {1, -5, 4},     {9, 9, 2},    {2, 5, 3},      {1, -8, 0},     {1, -29, 28},
      {12, 72, 60}, {6, 5, 1},    {5, 17, 6},     {1, 0, -25},  {1, 0, -81},    {10, -16, -42}, {1, 1, 0},
      {-1, 0, 1},   {16, -8, -3}, {14, -29, -15}, {6, 48, -120}, {1, -245, 244}, {3, 14, -5},    {5, -125, 0},
  };
  std::size_t mismatches = 0, checked = 0;
  std::set<int> cases;
  bool content = false;
  for (const auto& [c2, c1, c0] : corpus) {
    const auto f = decompose(c2, c1, c0);
    content = content || std::abs(f.W) > 1;
    for (u64 m = 1; m <= 5000; ++m) {
      std::vector<u64> scanned;
      for (u64 r = 1; r <= m; ++r) {
        const i128 t = static_cast<i128>(r);
        if ((static_cast<i128>(c2) * t * t + static_cast<i128>(c1) * t + c0) % static_cast<i128>(m) == 0) {
          scanned.push_back(r);
        }
      }
      const auto fm = factor(m);
      if (rho_fast(f, fm) != rho_brute(f, m) || rho_fast(f, fm) != scanned.size() || roots_mod(f, fm).roots != scanned) {
        ++mismatches;
      }
      ++checked;
      for (const auto& [p, e] : fm.factors) {
        const std::uint32_t gamma = ord_p(static_cast<i128>(f.W), p);
        if (e <= gamma) continue;
        const bool pa = f.a % static_cast<i64>(p) == 0 || f.c % static_cast<i64>(p) == 0;
        const std::uint32_t delta = f.delta % p == 0 ? ord_p(static_cast<i128>(f.delta), p) : 0;
        if (!pa && delta == 0) cases.insert(1);
        else if (pa && delta > 0) cases.insert(2);
        else if (pa) cases.insert(3);
        else cases.insert(e - gamma <= 2 * delta ? 4 : 5);
      }
    }
  }
  out.require(mismatches == 0, "rho_fast = rho_brute = scan and roots_mod = scan");
  out.require(cases.size() == 5, "all five prime-power cases exercised");
  out.require(content, "nontrivial content present");
  out.detail << "polys=" << corpus.size() << " moduli_checked=" << checked << " mismatches=" << mismatches
             << " cases_seen=" << cases.size();
}

// 3. Erdos-Turan inequality.
void erdos_turan_inequality(Outcome& out) {
  std::mt19937_64 rng(20240601);
  std::size_t instances = 0, violations = 0;
  double tightest = 0.0;
  auto check = [&](const et::TargetSequence& t, int H) {
    const auto r = et::et_bound(t, H);
    ++instances;
    if (!r.holds) ++violations;
    tightest = std::max(tightest, std::abs(r.D_N) / r.bound);
    return r;
  };
  for (int i = 0; i < 200; ++i) {
    const std::size_t N = 1 + rng() % 2000;
    const int H = 1 + static_cast<int>(rng() % 50);
    check(et::random_instance(rng, N), H);
  }
  bool obliging_ok = true;
  for (std::size_t N : {50U, 500U, 2000U}) {
    for (int H : {5, 50}) {
      const auto lin = et::obliging_linear(N);
      const auto r = check(lin, H);
      obliging_ok = obliging_ok && r.D_N >= static_cast<double>(N) - 2.0 - et::kSlack;
      check(et::complement(lin), H);
      check(et::obliging_power(N, 0.5), H);
      check(et::complement(et::obliging_power(N, 0.5)), H);
    }
  }
  out.require(violations == 0, "|D_N| <= bound + 1e-9 on every instance");
  out.require(obliging_ok, "obliging instance D_N >= N - 2");
  out.detail << "instances=" << instances << " violations=" << violations << " max|D_N|/bound=" << fmt(tightest, 4);
}

// 4. Selberg sandwich and coefficient bounds.
void selberg_bounds(Outcome& out) {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t sandwich_fail = 0;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int H = 1 + static_cast<int>(rng() % 30);
    const double a = 2.0 * unit(rng) - 1.0;
    const double b = a + unit(rng);
    const et::SelbergApproximant approx(H);
    for (int j = 0; j < 1000; ++j) {
      const double y = j / 1000.0 + 0.5 * unit(rng) / 1000.0;
      const auto [lo, hi] = approx.bounds(a, b, y);
      const double chi = et::in_interval_mod1(a, b, y) ? 1.0 : 0.0;
      worst_gap = std::max({worst_gap, lo - chi, chi - hi});
      if (lo > chi + et::kSlack || hi < chi - et::kSlack) ++sandwich_fail;
    }
  }
  std::size_t coeff_fail = 0;
  const double c = et::kSelbergConstant;
  for (int H = 1; H <= 100; ++H) {
    for (long h = 1; h <= H; ++h) {
      if (!(std::abs(et::bh_hat(H, h)) < 0.25 * ((2.0 - c) / (H + 1) + c / static_cast<double>(h)))) ++coeff_fail;
    }
  }
  std::size_t lemma_fail = 0;
  for (int i = 0; i < 10000; ++i) {
    const double y = 0.001 + 0.998 * i / 9999.0;
    const double lhs = kPi / std::tan(kPi * y) + 1.0 / (1.0 - y);
    const double rhs = 1.0 / y + 1.5 * (1.0 - y) - 1.0 / (2.0 - y);
    if (!(lhs < rhs)) ++lemma_fail;
    if (!(std::abs(et::selberg_f(y)) < c / 2.0 * (1.0 / y - 1.0))) ++lemma_fail;
  }
  out.require(sandwich_fail == 0, "sandwich on 10^3 x 10^3 grid");
  out.require(coeff_fail == 0, "Fourier coefficient bound for H <= 100");
  out.require(lemma_fail == 0, "cotangent and f-bound inequalities");
  out.detail << "sandwich_failures=" << sandwich_fail << " max_violation=" << fmt(worst_gap, 3)
             << " coeff_failures=" << coeff_fail << " lemma_failures=" << lemma_fail;
}

// 5. Quadruple counting exactness.
void quadruple_exactness(Outcome& out) {
  out.require(q_exact(119) == 0, "Q(119) = 0");
  out.require(q_exact(120) == 1, "Q(120) = 1");

  const u64 n = 600;
  auto linked = [](u64 u, u64 v) { return is_perfect_square(static_cast<u128>(u) * v + 1).has_value(); };
  std::vector<std::vector<u64>> up(n + 1);
  for (u64 u = 1; u <= n; ++u) {
    for (u64 v = u + 1; v <= n; ++v) {
      if (linked(u, v)) up[u].push_back(v);
    }
  }
  std::vector<std::array<u64, 4>> oracle;
  std::size_t all_quadruples = 0;
  for (u64 a = 1; a <= n; ++a) {
    for (u64 b : up[a]) {
      for (u64 c : up[b]) {
        if (!linked(a, c)) continue;
        for (u64 d : up[c]) {
          if (!linked(a, d) || !linked(b, d)) continue;
          ++all_quadruples;
          const u64 r = static_cast<u64>(*is_perfect_square(static_cast<u128>(a) * b + 1));
          if (c == a + b + 2 * r && static_cast<u128>(d) == quadruple_max(a, b, r)) oracle.push_back({a, b, c, d});
        }
      }
    }
  }
  std::vector<std::array<u64, 4>> by_a;
  for (const auto& q : enumerate_drq_by_a(n)) by_a.push_back(q.elements());
  std::sort(by_a.begin(), by_a.end());
  std::sort(oracle.begin(), oracle.end());
  out.require(by_a == oracle, "by-a equals subset oracle up to 600");

  bool dual = true;
  for (u64 x : {10000ULL, 100000ULL, 1000000ULL}) {
    auto a = enumerate_drq_by_a(x), b = enumerate_drq_by_b(x);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    dual = dual && a == b;
    out.detail << "Q(" << x << ")=" << a.size() << " ";
  }
  out.require(dual, "by-a and by-b identical for 10^4..10^6");
  out.detail << "oracle_quadruples<=600=" << all_quadruples << " doubly_regular=" << oracle.size();
}

// 6. Pair-count asymptotics.
void pair_asymptotics(Outcome& out) {
  const SpfSieve sieve(10'000'000);
  u64 s = 0;
  bool identity = true;
  for (u64 x = 1; x <= 100000; ++x) {
    s += rho_unit(x, sieve);
    if (x % 1000 == 0 || x <= 2000) identity = identity && count_pairs(x, sieve) == s - x;
  }
  // Cumulative S on a log grid, then OLS of S(y)/y against ln y.
  const std::vector<u64> grid{10000, 31623, 100000, 316228, 1000000, 3162278, 10000000};
  std::vector<double> xs, ys;
  s = 0;
  std::size_t next = 0;
  for (u64 k = 1; k <= grid.back(); ++k) {
    s += rho_unit(k, sieve);
    if (k == grid[next]) {
      xs.push_back(std::log(static_cast<double>(k)));
      ys.push_back(static_cast<double>(s) / static_cast<double>(k));
      ++next;
    }
  }
  const double slope = detail::ols_slope(xs, ys);
  const double target = 6.0 / (kPi * kPi);
  out.require(identity, "count_pairs = S - x for x <= 10^5");
  out.require(std::abs(slope / target - 1.0) <= 0.03, "slope within 3% of 6/pi^2");
  out.detail << "S(1e7)=" << s << " fitted_slope=" << fmt(slope, 6) << " target=" << fmt(target, 6)
             << " rel_err=" << fmt(slope / target - 1.0, 3);
}

// 7. Equidistribution cancellation.
void equidistribution(Outcome& out) {
  const auto f = decompose(1, 0, -1);
  const auto rep = cancellation_report(f, {10000, 100000, 1000000}, 5);
  auto row = [&](int h, u64 y) {
    for (const auto& r : rep.rows) {
      if (r.h == h && r.y == y) return r;
    }
    throw std::logic_error("missing row");
  };
  bool halved = true;
  for (int h = 1; h <= 5; ++h) {
    const auto lo = row(h, 10000), hi = row(h, 1000000);
    halved = halved && hi.ratio < 0.5 * lo.ratio;
    out.detail << "h=" << h << ":" << fmt(lo.ratio, 4) << "->" << fmt(hi.ratio, 4) << " ";
  }
  const auto probe = row(1, 1000000);
  out.detail << "R(1,1e6)/y=" << fmt(probe.R.real() / 1e6, 4) << " curve(1,1e6)=" << fmt(probe.theorem_curve, 4) << " ";

  bool zero_ok = true;
  for (u64 y : {10000ULL, 100000ULL, 1000000ULL}) {
    zero_ok = zero_ok && r_f_sum(f, 0, y).real() == static_cast<double>(root_count_total(f, y));
  }
  double worst = 0.0;
  for (i64 h : {1, 2, 3, 5}) {
    for (u64 y : {10ULL, 250ULL, 2000ULL}) {
      std::complex<double> scan{0.0, 0.0};
      for (u64 k = 1; k <= y; ++k) {
        for (u64 nu = 1; nu <= k; ++nu) {
          if ((nu * nu - 1) % k == 0) scan += std::polar(1.0, 2.0 * kPi * static_cast<double>(h * static_cast<i64>(nu)) / static_cast<double>(k));
        }
      }
      worst = std::max(worst, std::abs(r_f_sum(f, h, y) - scan));
    }
  }
  out.require(halved, "ratio at 1e6 below half of ratio at 1e4 for h=1..5");
  out.require(zero_ok, "r_f_sum(f,0,y) = root_count_total");
  out.require(worst <= 1e-9, "residue-scan agreement for y <= 2000");
  out.detail << "scan_max_err=" << fmt(worst, 3);
}

// 8. Linear baseline.
void linear_baseline(Outcome& out) {
  const u64 y = 10000;
  const double ly = std::log(static_cast<double>(y));
  double fitted = 0.0;
  std::size_t cases = 0;
  for (i64 a = 1; a <= 20; ++a) {
    for (i64 b = -a; b <= a; ++b) {
      if (std::gcd(a, b) != 1) continue;
      for (i64 h = 1; h <= 5; ++h) {
        const auto r = linear_exp_sum_check(a, b, h, y);
        fitted = std::max(fitted, r.residual / (static_cast<double>(h) * ly));
        ++cases;
      }
    }
  }
  out.require(fitted <= 10.0, "fitted C <= 10");
  out.detail << "cases=" << cases << " fitted_C=" << fmt(fitted, 4);
}

// 9. Main-term consistency.
void main_term_consistency(Outcome& out) {
  std::size_t lambda_mismatch = 0;
  for (double x : {1e4, 1e6}) {
    for (u64 b = 1; b <= 200; ++b) {
      const double lam = lambda_exact(static_cast<double>(b), x);
      std::size_t direct = 0, threshold = 0;
      for (u64 r : unit_square_roots(b).roots) {
        direct += quadruple_max((r * r - 1) / b, b, r) <= static_cast<u128>(x);
        threshold += static_cast<double>(r) / static_cast<double>(b) <= lam;
      }
      lambda_mismatch += direct != threshold;
    }
  }
  out.require(lambda_mismatch == 0, "lambda_exact threshold = direct condition");

  const double q6 = static_cast<double>(q_exact(1'000'000));
  const double q10 = static_cast<double>(q_exact(10'000'000'000ULL));
  const double gap6 = std::abs(weighted_sum(1e6).value - q6) / q6;
  const double gap10 = std::abs(weighted_sum(1e10).value - q10) / q10;
  out.require(gap10 < gap6, "weighted-sum gap smaller at 1e10 than 1e6");
  out.detail << "gap(1e6)=" << fmt(gap6, 4) << " gap(1e10)=" << fmt(gap10, 4) << " ";

  const SpfSieve sieve(kExactPairCountLimit);
  std::vector<double> ratios;
  for (double x : {1e8, 1e10, 1e12}) {
    const auto m = main_term_integral(x, sieve);
    ratios.push_back(m.value / (constant_C() * std::cbrt(x) * std::log(x)));
  }
  const bool toward_one = std::abs(ratios[2] - 1.0) < std::abs(ratios[1] - 1.0) &&
                          std::abs(ratios[1] - 1.0) < std::abs(ratios[0] - 1.0);
  out.require(ratios[2] >= 0.8 && ratios[2] <= 1.2, "main-term ratio in [0.8, 1.2] at 1e12");
  out.require(toward_one, "main-term ratio moves toward 1");
  out.detail << "main_ratio(1e8,1e10,1e12)=" << fmt(ratios[0], 4) << "," << fmt(ratios[1], 4) << ","
             << fmt(ratios[2], 4) << " ";

  const auto t0 = std::chrono::steady_clock::now();
  const u64 q12 = q_exact(1'000'000'000'000ULL);
  const double secs = elapsed_since(t0);
  out.require(secs < 10.0, "Q(1e12) in < 10 s");
  out.detail << "Q(1e12)=" << q12 << " in " << fmt(secs, 3) << "s";
}

// 10. Lemma sums.
void lemma_sums(Outcome& out) {
  const SpfSieve sieve(1'000'000);
  const auto violation = payoff_prime_inequality_violation(sieve, 1'000'000);
  out.require(!violation.has_value(), "7/sqrt(p) inequality for p <= 10^6");

  std::vector<double> sqrt2, payoff;
  for (u64 y : {1000ULL, 10000ULL, 100000ULL, 1000000ULL}) {
    sqrt2.push_back(lemma_sum_sqrt2(y, sieve).ratio);
    payoff.push_back(lemma_sum_payoff(y, sieve).ratio);
  }
  const bool sqrt2_monotone = std::is_sorted(sqrt2.begin(), sqrt2.end()) || std::is_sorted(sqrt2.rbegin(), sqrt2.rend());
  const double sqrt2_max = *std::max_element(sqrt2.begin(), sqrt2.end());
  const double payoff_max = *std::max_element(payoff.begin(), payoff.end());
  // sum_{m<=y} g(m) = sum_{d<=y} (g*mu)(d) floor(y/d) <= y prod_p (1 + 7 p^{-3/2}); primes past
  // 10^6 add at most exp(7 * 2 / (1000 ln 10^6)) < exp(0.002).
  double mean_bound = std::exp(0.002);
  for (u64 p = 2; p <= 1'000'000; ++p) {
    if (sieve.spf(p) == p) mean_bound *= 1.0 + 7.0 * std::pow(static_cast<double>(p), -1.5);
  }
  out.require(sqrt2_monotone && sqrt2_max < 10.0, "sqrt2 sum / (log y)^sqrt2 monotone and bounded");
  out.require(payoff_max <= mean_bound, "payoff sum / y below its mean-value constant");

  std::size_t identity_fail = 0;
  for (u64 m = 1; m <= 10000; ++m) {
    const double lhs = payoff_product(sieve.factor(m));
    double rhs = 0.0;
    for (u64 d = 1; d * d <= m; ++d) {
      if (m % d) continue;
      for (u64 e : {d, m / d}) {
        const auto v = multiplicative_values(sieve.factor(e));
        if (v.mu != 0) rhs += std::pow(7.0, static_cast<double>(v.omega)) / std::sqrt(static_cast<double>(e));
        if (d * d == m) break;
      }
    }
    if (std::abs(lhs - rhs) > 1e-9 * rhs) ++identity_fail;
  }
  out.require(identity_fail == 0, "divisor-sum identity for m <= 10^4");
  out.detail << "sqrt2_ratios=";
  for (double r : sqrt2) out.detail << fmt(r, 4) << ' ';
  out.detail << "payoff_ratios=";
  for (double r : payoff) out.detail << fmt(r, 4) << ' ';
  out.detail << "mean_bound=" << fmt(mean_bound, 5) << " identity_failures=" << identity_fail;
}

struct Criterion {
  int id;
  const char* title;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "constant reproduction", constant_reproduction},
      {2, "rho oracle equivalence", rho_equivalence},
      {3, "Erdos-Turan inequality", erdos_turan_inequality},
      {4, "Selberg sandwich and coefficient bounds", selberg_bounds},
      {5, "quadruple counting exactness", quadruple_exactness},
      {6, "pair-count asymptotics", pair_asymptotics},
      {7, "equidistribution cancellation", equidistribution},
      {8, "linear baseline", linear_baseline},
      {9, "main-term consistency", main_term_consistency},
      {10, "lemma sums", lemma_sums},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::stoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only N]\n";
      return 2;
    }
  }
  int failures = 0;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " exception: " << e.what();
    }
    const double secs = elapsed_since(t0);
    std::cout << (out.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.title << ")  "
              << fmt(secs, 3) << " s  " << out.detail.str() << std::endl;
    failures += !out.pass;
  }
  return failures == 0 ? 0 : 1;
}
