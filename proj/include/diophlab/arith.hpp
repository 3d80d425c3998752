#pragma once

// Integer substrate: factorization, primality, smallest-prime-factor sieve,
// the classical multiplicative functions and exact square roots.
//
// Integers are 64-bit with 128-bit intermediates. Every workload in this
// library stays below 10^13, so products of two operands never overflow.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "diophlab/errors.hpp"

namespace diophlab {

using u64 = std::uint64_t;
using i64 = std::int64_t;
__extension__ using u128 = unsigned __int128;
__extension__ using i128 = __int128;

struct PrimePower {
  u64 prime = 0;
  std::uint32_t exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime-power decomposition of n; primes strictly increasing, empty iff n = 1.
struct Factorization {
  u64 n = 1;
  std::vector<PrimePower> factors;

  [[nodiscard]] std::size_t omega() const { return factors.size(); }

  /// Exponent of p in n (0 when p does not divide n).
  [[nodiscard]] std::uint32_t ord(u64 p) const {
    for (const auto& pp : factors) {
      if (pp.prime == p) return pp.exponent;
    }
    return 0;
  }

  [[nodiscard]] u64 product() const {
    u64 acc = 1;
    for (const auto& pp : factors) {
      for (std::uint32_t i = 0; i < pp.exponent; ++i) acc *= pp.prime;
    }
    return acc;
  }

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

/// Reduces a signed value into [0, m).
inline u64 reduce_mod(i128 v, u64 m) {
  i128 r = v % static_cast<i128>(m);
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

/// Inverse of a modulo m; requires gcd(a, m) = 1.
inline u64 inverse_mod(u64 a, u64 m) {
  if (m == 1) return 0;
  i128 old_r = static_cast<i128>(a % m), r = m;
  i128 old_s = 1, s = 0;
  while (r != 0) {
    const i128 q = old_r / r;
    i128 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw DomainError("inverse_mod: argument not invertible");
  return reduce_mod(old_s, m);
}

/// Deterministic Miller-Rabin for the full 64-bit range.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr std::array<u64, 12> kBases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : kBases) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (u64 a : kBases) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace detail {

// Brent's cycle-finding variant of Pollard rho; n odd composite.
inline u64 brent_split(u64 n) {
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    const u64 m = 128;
    u64 r = 1;
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1U;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void split_into(u64 n, std::vector<u64>& primes) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  const u64 d = brent_split(n);
  split_into(d, primes);
  split_into(n / d, primes);
}

inline Factorization collect(u64 n, std::vector<u64> primes) {
  std::sort(primes.begin(), primes.end());
  Factorization out;
  out.n = n;
  for (u64 p : primes) {
    if (!out.factors.empty() && out.factors.back().prime == p) {
      ++out.factors.back().exponent;
    } else {
      out.factors.push_back({p, 1});
    }
  }
  return out;
}

}  // namespace detail

/// Factorization of a single value: trial division by small primes, then
/// Miller-Rabin plus Brent splitting for whatever cofactor remains.
template <std::integral Int>
Factorization factor(Int value) {
  if (value <= 0) throw DomainError("factor: argument must be positive");
  const u64 n = static_cast<u64>(value);
  std::vector<u64> primes;
  u64 rest = n;
  for (u64 p = 2; p < 1000 && p * p <= rest; p += (p == 2 ? 1 : 2)) {
    while (rest % p == 0) {
      primes.push_back(p);
      rest /= p;
    }
  }
  detail::split_into(rest, primes);
  return detail::collect(n, std::move(primes));
}

/// Smallest-prime-factor table for 2..limit. Read-only after construction.
class SpfSieve {
 public:
  static constexpr u64 kDefaultCap = 100'000'000;

  explicit SpfSieve(u64 limit, u64 cap = kDefaultCap) : limit_(limit) {
    if (limit < 2) throw DomainError("SpfSieve: limit must be at least 2");
    if (limit > cap) {
      throw ResourceError("SpfSieve: limit " + std::to_string(limit) +
                          " exceeds cap " + std::to_string(cap));
    }
    spf_.assign(limit + 1, 0);
    for (u64 i = 2; i <= limit; ++i) {
      if (spf_[i] != 0) continue;
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(static_cast<std::uint32_t>(i));
      if (i * i > limit) continue;
      for (u64 j = i * i; j <= limit; j += i) {
        if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
      }
    }
  }

  [[nodiscard]] u64 limit() const { return limit_; }
  [[nodiscard]] u64 spf(u64 n) const { return spf_.at(n); }
  [[nodiscard]] const std::vector<std::uint32_t>& primes() const { return primes_; }

  /// Calls visit(p, e) for each p^e || n, primes ascending. n <= limit.
  template <typename Visit>
  void for_each_prime_power(u64 n, Visit&& visit) const {
    while (n > 1) {
      const u64 p = spf_[n];
      std::uint32_t e = 0;
      do {
        n /= p;
        ++e;
      } while (n % p == 0);
      visit(p, e);
    }
  }

  [[nodiscard]] Factorization factor(u64 n) const {
    if (n == 0) throw DomainError("factor: argument must be positive");
    if (n > limit_) return diophlab::factor(n);
    Factorization out;
    out.n = n;
    for_each_prime_power(n, [&](u64 p, std::uint32_t e) { out.factors.push_back({p, e}); });
    return out;
  }

 private:
  u64 limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

inline u64 ipow(u64 base, std::uint32_t e) {
  u64 r = 1;
  for (std::uint32_t i = 0; i < e; ++i) r *= base;
  return r;
}

struct MultiplicativeValues {
  std::size_t omega = 0;
  int mu = 1;
  u64 phi = 1;

  friend bool operator==(const MultiplicativeValues&, const MultiplicativeValues&) = default;
};

inline MultiplicativeValues multiplicative_values(const Factorization& f) {
  MultiplicativeValues v;
  v.omega = f.factors.size();
  bool squarefree = true;
  for (const auto& [p, e] : f.factors) {
    if (e > 1) squarefree = false;
    v.phi *= ipow(p, e - 1) * (p - 1);
  }
  v.mu = squarefree ? (v.omega % 2 == 0 ? 1 : -1) : 0;
  return v;
}

template <std::integral Int>
MultiplicativeValues multiplicative_values(Int n) {
  return multiplicative_values(factor(n));
}

inline u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline u128 isqrt(u128 n) {
  if (n <= static_cast<u128>(~u64{0})) return isqrt(static_cast<u64>(n));
  // Newton from above.
  u128 x = static_cast<u128>(std::sqrt(static_cast<long double>(n))) + 2;
  while (true) {
    const u128 y = (x + n / x) / 2;
    if (y >= x) break;
    x = y;
  }
  while (x * x > n) --x;
  while ((x + 1) * (x + 1) <= n) ++x;
  return x;
}

/// Exact square root when n is a perfect square.
inline std::optional<u128> is_perfect_square(u128 n) {
  // Quadratic residues mod 64 reject most non-squares cheaply.
  static constexpr u64 kSquareMask64 = 0x0202021202030213ULL;
  if (((kSquareMask64 >> static_cast<unsigned>(n & 63U)) & 1U) == 0) return std::nullopt;
  const u128 r = isqrt(n);
  if (r * r == n) return r;
  return std::nullopt;
}

/// p-adic valuation of a nonzero integer.
inline std::uint32_t ord_p(i128 value, u64 p) {
  if (value == 0) throw DomainError("ord_p: zero has infinite valuation");
  if (value < 0) value = -value;
  std::uint32_t e = 0;
  while (value % p == 0) {
    value /= p;
    ++e;
  }
  return e;
}

}  // namespace diophlab
