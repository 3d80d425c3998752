#pragma once

// Discrepancy of a sequence against moving target intervals mod 1, and the
// exponential-sum bound for it built from Selberg's one-sided trigonometric
// approximants.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "diophlab/errors.hpp"
#include "diophlab/summation.hpp"

namespace diophlab::et {

/// 16 / (7 pi)
inline constexpr double kSelbergConstant = 16.0 / (7.0 * kPi);

/// Absolute slack for sandwich and bound comparisons.
inline constexpr double kSlack = 1e-9;

/// Sequences u, alpha, beta of common length N >= 1 with
/// alpha_n <= beta_n <= alpha_n + 1.
class TargetSequence {
 public:
  TargetSequence(std::vector<double> u, std::vector<double> alpha, std::vector<double> beta)
      : u_(std::move(u)), alpha_(std::move(alpha)), beta_(std::move(beta)) {
    if (u_.empty()) throw DomainError("TargetSequence: N must be at least 1");
    if (alpha_.size() != u_.size() || beta_.size() != u_.size()) {
      throw DomainError("TargetSequence: u, alpha, beta must have equal length");
    }
    for (std::size_t n = 0; n < u_.size(); ++n) {
      if (!(alpha_[n] <= beta_[n] && beta_[n] <= alpha_[n] + 1.0)) {
        throw DomainError("TargetSequence: need alpha <= beta <= alpha + 1 at index " + std::to_string(n));
      }
    }
  }

  [[nodiscard]] std::size_t size() const { return u_.size(); }
  [[nodiscard]] const std::vector<double>& u() const { return u_; }
  [[nodiscard]] const std::vector<double>& alpha() const { return alpha_; }
  [[nodiscard]] const std::vector<double>& beta() const { return beta_; }

 private:
  std::vector<double> u_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
};

/// f(y) = -(1 - y) cot(pi y) - 1/pi on (0, 1).
inline double selberg_f(double y) {
  if (!(y > 0.0 && y < 1.0)) throw DomainError("selberg_f: y must lie in (0, 1)");
  constexpr double kCut = 1e-6;
  const double eps = 1.0 - y;
  if (eps < kCut) {
    // pi e cot(pi e) = 1 - (pi e)^2/3 - (pi e)^4/45 - ...
    const double pe2 = kPi * eps * kPi * eps;
    return -(kPi * eps * eps / 3.0) * (1.0 + pe2 / 15.0);
  }
  if (y < kCut) {
    // cot(pi y) = 1/(pi y) - pi y/3 - (pi y)^3/45 - ...
    const double py = kPi * y;
    return -eps * (1.0 / py - py / 3.0 - py * py * py / 45.0) - 1.0 / kPi;
  }
  return -eps / std::tan(kPi * y) - 1.0 / kPi;
}

/// Fourier coefficient hat{B}_H(h).
inline std::complex<double> bh_hat(int H, long h) {
  if (H < 1) throw DomainError("bh_hat: H must be positive");
  const double scale = 1.0 / (2.0 * (H + 1));
  if (h == 0) return {scale, 0.0};
  const long ah = h < 0 ? -h : h;
  if (ah >= H + 1) return {0.0, 0.0};
  const double y = static_cast<double>(ah) / (H + 1);
  const double im = h > 0 ? -selberg_f(y) : selberg_f(y);
  return {scale * (1.0 - y), scale * im};
}

/// B_H and the approximants S_H^{+-} for a fixed degree H, with the
/// coefficient tables computed once.
class SelbergApproximant {
 public:
  explicit SelbergApproximant(int H) : H_(H) {
    if (H < 1) throw DomainError("SelbergApproximant: H must be positive");
    sine_.resize(static_cast<std::size_t>(H) + 1);
    fejer_.resize(static_cast<std::size_t>(H) + 1);
    for (int h = 1; h <= H; ++h) {
      const double y = static_cast<double>(h) / (H + 1);
      sine_[h] = selberg_f(y) / (H + 1);
      fejer_[h] = (1.0 - y) / (H + 1);
    }
  }

  [[nodiscard]] int degree() const { return H_; }

  /// B_H(x) from its two-sum definition.
  [[nodiscard]] double eval(double x) const {
    const std::complex<double> step = unit_phase(x);
    std::complex<double> rot = step;
    double sine_sum = 0.0, cosine_sum = 0.0;
    for (int h = 1; h <= H_; ++h) {
      sine_sum += sine_[h] * rot.imag();
      cosine_sum += fejer_[h] * rot.real();
      if ((h & 31) == 0) {
        rot = unit_phase(static_cast<double>(h + 1) * (x - std::round(x)));
      } else {
        rot *= step;
      }
    }
    return sine_sum + 1.0 / (2.0 * (H_ + 1)) + cosine_sum;
  }

  /// (S_H^-, S_H^+) at y for the interval [alpha, beta] mod 1.
  [[nodiscard]] std::pair<double, double> bounds(double alpha, double beta, double y) const {
    if (!(alpha <= beta && beta <= alpha + 1.0)) {
      throw DomainError("s_pm_eval: need alpha <= beta <= alpha + 1");
    }
    const double len = beta - alpha;
    const double plus = len + eval(y - beta) + eval(alpha - y);
    const double minus = len - eval(beta - y) - eval(y - alpha);
    return {minus, plus};
  }

 private:
  int H_;
  std::vector<double> sine_;
  std::vector<double> fejer_;
};

inline double bh_eval(int H, double x) { return SelbergApproximant(H).eval(x); }

inline std::pair<double, double> s_pm_eval(int H, double alpha, double beta, double y) {
  return SelbergApproximant(H).bounds(alpha, beta, y);
}

/// Characteristic function of [alpha, beta] mod 1: some integer z has
/// alpha <= y + z <= beta.
inline bool in_interval_mod1(double alpha, double beta, double y) {
  const double d = y - alpha;
  const double offset = d - std::floor(d);
  return offset <= beta - alpha;
}

struct CountResult {
  std::size_t Z_N = 0;
  double D_N = 0.0;
};

inline CountResult count_and_discrepancy(const TargetSequence& t) {
  CountResult out;
  CompensatedSum lengths;
  for (std::size_t n = 0; n < t.size(); ++n) {
    if (in_interval_mod1(t.alpha()[n], t.beta()[n], t.u()[n])) ++out.Z_N;
    lengths += t.beta()[n] - t.alpha()[n];
  }
  out.D_N = static_cast<double>(out.Z_N) - lengths.value();
  return out;
}

/// ||y||, distance to the nearest integer.
inline double dist_to_int(double y) { return std::abs(y - std::round(y)); }

/// sum_{n<N} || s_{n+1} - s_n ||
inline double total_variation(const std::vector<double>& s) {
  if (s.empty()) throw DomainError("total_variation: sequence must be nonempty");
  CompensatedSum v;
  for (std::size_t n = 1; n < s.size(); ++n) v += dist_to_int(s[n] - s[n - 1]);
  return v.value();
}

/// max_{1<=T<=N} | sum_{n<=T} e(h u_n) |
inline double prefix_max_exp_sum(const std::vector<double>& u, long h) {
  if (u.empty()) throw DomainError("prefix_max_exp_sum: sequence must be nonempty");
  std::complex<double> acc{0.0, 0.0};
  double best = 0.0;
  for (double un : u) {
    acc += unit_phase(static_cast<double>(h) * un);
    best = std::max(best, std::abs(acc));
  }
  return best;
}

/// Both sides of the partial-summation inequality
///   | sum e(h u_n) e(-h s_n) | <= (1 + 2 pi |h| V_N(s)) M_N(h).
inline std::pair<double, double> partial_summation_sides(const std::vector<double>& u,
                                                         const std::vector<double>& s, long h) {
  if (u.size() != s.size()) throw DomainError("partial_summation_sides: length mismatch");
  CompensatedComplexSum acc;
  for (std::size_t n = 0; n < u.size(); ++n) {
    acc += unit_phase(static_cast<double>(h) * u[n] - static_cast<double>(h) * s[n]);
  }
  const double ah = static_cast<double>(h < 0 ? -h : h);
  return {std::abs(acc.value()), (1.0 + 2.0 * kPi * ah * total_variation(s)) * prefix_max_exp_sum(u, h)};
}

struct DiscrepancyReport {
  std::size_t N = 0;
  int H = 1;
  std::size_t Z_N = 0;
  double D_N = 0.0;
  double V_alpha = 0.0;
  double V_beta = 0.0;
  /// M[h - 1] = M_N(h), 1 <= h <= H.
  std::vector<double> M;
  double bound = 0.0;
  /// N/H + (1 + |alpha_N - alpha_1| + |beta_N - beta_1|) sum_h M_N(h); the
  /// monotone-endpoint corollary carries an unspecified constant, so this is
  /// reported only.
  double corollary_rhs = 0.0;
  /// |D_N| <= bound + kSlack
  bool holds = false;
};

inline DiscrepancyReport et_bound(const TargetSequence& t, int H) {
  if (H < 1) throw DomainError("et_bound: H must be positive");
  DiscrepancyReport r;
  r.N = t.size();
  r.H = H;
  const auto counted = count_and_discrepancy(t);
  r.Z_N = counted.Z_N;
  r.D_N = counted.D_N;
  r.V_alpha = total_variation(t.alpha());
  r.V_beta = total_variation(t.beta());
  const double c = kSelbergConstant;
  const double n = static_cast<double>(r.N);
  CompensatedSum bound, m_sum;
  bound += n / (H + 1);
  r.M.reserve(static_cast<std::size_t>(H));
  for (int h = 1; h <= H; ++h) {
    const double m = prefix_max_exp_sum(t.u(), h);
    r.M.push_back(m);
    m_sum += m;
    bound += (1.0 + kPi * h * (r.V_alpha + r.V_beta)) * ((2.0 - c) / (H + 1) + c / h) * m;
  }
  r.bound = bound.value();
  const auto& a = t.alpha();
  const auto& b = t.beta();
  r.corollary_rhs =
      n / H + (1.0 + std::abs(a.back() - a.front()) + std::abs(b.back() - b.front())) * m_sum.value();
  r.holds = std::abs(r.D_N) <= r.bound + kSlack;
  return r;
}

/// u_n = n/(N+1) with intervals [u_n - 2^{-n}, u_n + 2^{-n}].
inline TargetSequence obliging_linear(std::size_t N) {
  std::vector<double> u(N), a(N), b(N);
  for (std::size_t n = 1; n <= N; ++n) {
    u[n - 1] = static_cast<double>(n) / static_cast<double>(N + 1);
    const double w = std::ldexp(1.0, -static_cast<int>(n));
    a[n - 1] = u[n - 1] - w;
    // From a rather than u, so that n = 1 gives beta = alpha + 1 exactly.
    b[n - 1] = a[n - 1] + 2.0 * w;
  }
  return {std::move(u), std::move(a), std::move(b)};
}

/// u_n = n^gamma with the same shrinking intervals around each point.
inline TargetSequence obliging_power(std::size_t N, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("obliging_power: gamma must lie in (0, 1)");
  std::vector<double> u(N), a(N), b(N);
  for (std::size_t n = 1; n <= N; ++n) {
    u[n - 1] = std::pow(static_cast<double>(n), gamma);
    const double w = std::ldexp(1.0, -static_cast<int>(n));
    a[n - 1] = u[n - 1] - w;
    b[n - 1] = a[n - 1] + 2.0 * w;
  }
  return {std::move(u), std::move(a), std::move(b)};
}

/// Replaces every [alpha_n, beta_n] by its complement [beta_n, alpha_n + 1].
inline TargetSequence complement(const TargetSequence& t) {
  std::vector<double> a(t.size()), b(t.size());
  for (std::size_t n = 0; n < t.size(); ++n) {
    a[n] = t.beta()[n];
    b[n] = t.alpha()[n] + 1.0;
  }
  return {t.u(), std::move(a), std::move(b)};
}

/// Seeded test instance: u_n = n theta + (jitter), target intervals whose
/// endpoints drift by random steps of a random scale, lengths in [0, 1].
inline TargetSequence random_instance(std::mt19937_64& rng, std::size_t N) {
  if (N < 1) throw DomainError("random_instance: N must be at least 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double theta = unit(rng);
  const double jitter = unit(rng) < 0.5 ? 0.0 : unit(rng);
  const double drift = std::pow(10.0, -4.0 * unit(rng));
  std::vector<double> u(N), a(N), b(N);
  double left = unit(rng);
  double len = unit(rng);
  for (std::size_t n = 0; n < N; ++n) {
    u[n] = theta * static_cast<double>(n + 1) + jitter * unit(rng);
    left += drift * (2.0 * unit(rng) - 1.0);
    len = std::clamp(len + drift * (2.0 * unit(rng) - 1.0), 0.0, 1.0);
    a[n] = left;
    b[n] = left + len;
  }
  return {std::move(u), std::move(a), std::move(b)};
}

}  // namespace diophlab::et
