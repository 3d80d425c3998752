#pragma once

// Roots of reducible, nonsquare quadratics modulo m.
//
// A quadratic f = c2 t^2 + c1 t + c0 that splits over Q is stored as
// W (a t + b)(c t + d) with (a,b) = (c,d) = 1 and a, c > 0. Counting is
// multiplicative in m; per prime power the content is peeled off first,
// then the primitive part falls into one of five cases determined by
// whether p divides ac and Delta = |ad - bc|.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "diophlab/arith.hpp"
#include "diophlab/errors.hpp"

namespace diophlab {

struct ReducibleQuadratic {
  i64 c2 = 1, c1 = 0, c0 = -1;
  /// Content with the sign of the leading coefficient.
  i64 W = 1;
  i64 a = 1, b = -1, c = 1, d = 1;
  /// |ad - bc| of the primitive part.
  u64 delta = 2;
  /// |W| * delta; the discriminant is sqrtD^2.
  u64 sqrtD = 2;

  [[nodiscard]] u128 discriminant() const { return static_cast<u128>(sqrtD) * sqrtD; }

  /// f(t) mod m, in [0, m).
  [[nodiscard]] u64 eval_mod(i64 t, u64 m) const {
    const i128 tt = t;
    const i128 v = static_cast<i128>(c2) * tt % static_cast<i128>(m) * tt + static_cast<i128>(c1) * tt + c0;
    return reduce_mod(v, m);
  }

  friend bool operator==(const ReducibleQuadratic&, const ReducibleQuadratic&) = default;
};

inline std::string to_string(const ReducibleQuadratic& f) {
  auto lin = [](i64 x, i64 y) {
    return "(" + std::to_string(x) + "t" + (y < 0 ? "" : "+") + std::to_string(y) + ")";
  };
  return std::to_string(f.W) + lin(f.a, f.b) + lin(f.c, f.d);
}

/// Roots of f modulo `modulus`, as sorted representatives in (0, modulus].
struct RootSet {
  u64 modulus = 1;
  std::vector<u64> roots;

  friend bool operator==(const RootSet&, const RootSet&) = default;
};

inline ReducibleQuadratic decompose(i64 c2, i64 c1, i64 c0) {
  if (c2 == 0) throw DegreeError("leading coefficient is zero");
  const i64 content = std::gcd(std::gcd(c2, c1), c0);
  const i64 W = c2 > 0 ? content : -content;
  const i128 A = c2 / W, B = c1 / W, C = c0 / W;  // A > 0, primitive

  const i128 disc = B * B - 4 * A * C;
  if (disc < 0) throw IrreducibleError("discriminant is negative");
  const auto root = is_perfect_square(static_cast<u128>(disc));
  if (!root) throw IrreducibleError("discriminant is not a perfect square");
  if (*root == 0) throw SquarePolynomialError("polynomial is a constant times a square");

  // One rational root is (-B + s)/(2A) = num/den in lowest terms, giving the
  // primitive factor (den t - num).
  const i128 s = static_cast<i128>(*root);
  i128 num = -B + s, den = 2 * A;
  const i128 g = std::gcd(static_cast<i64>(num < 0 ? -num : num), static_cast<i64>(den));
  num /= g;
  den /= g;
  const i128 a = den, b = -num;
  // Gauss's lemma: the cofactor is integral and primitive.
  const i128 c = A / a;
  const i128 d = (B - b * c) / a;
  if (a * c != A || a * d + b * c != B || b * d != C) {
    throw DomainError("decompose: internal factorization mismatch");
  }

  ReducibleQuadratic f;
  f.c2 = c2;
  f.c1 = c1;
  f.c0 = c0;
  f.W = W;
  auto lhs = std::make_pair(static_cast<i64>(a), static_cast<i64>(b));
  auto rhs = std::make_pair(static_cast<i64>(c), static_cast<i64>(d));
  if (rhs < lhs) std::swap(lhs, rhs);
  std::tie(f.a, f.b) = lhs;
  std::tie(f.c, f.d) = rhs;
  const i128 det = static_cast<i128>(f.a) * f.d - static_cast<i128>(f.b) * f.c;
  f.delta = static_cast<u64>(det < 0 ? -det : det);
  f.sqrtD = static_cast<u64>(content) * f.delta;
  return f;
}

inline constexpr u64 kBruteForceModulusCap = 10'000'000;

/// rho_f(m) by scanning every residue.
inline u64 rho_brute(const ReducibleQuadratic& f, u64 m) {
  if (m < 1) throw DomainError("rho_brute: modulus must be positive");
  if (m > kBruteForceModulusCap) throw ResourceError("rho_brute: modulus over oracle cap");
  u64 count = 0;
  for (u64 r = 1; r <= m; ++r) {
    if (f.eval_mod(static_cast<i64>(r), m) == 0) ++count;
  }
  return count;
}

/// Five-case count for the primitive part g at p^alpha.
inline u64 rho_primitive_prime_power(const ReducibleQuadratic& f, u64 p, std::uint32_t alpha) {
  const bool p_a = f.a % static_cast<i64>(p) == 0;
  const bool p_c = f.c % static_cast<i64>(p) == 0;
  const bool p_delta = f.delta % p == 0;
  if (!p_a && !p_c && !p_delta) return 2;
  if ((p_a || p_c) && p_delta) return 0;
  if (p_a || p_c) return 1;
  const std::uint32_t delta_ord = ord_p(static_cast<i128>(f.delta), p);
  if (alpha <= 2 * delta_ord) return ipow(p, alpha / 2);
  return 2 * ipow(p, delta_ord);
}

/// rho_f(p^alpha) after removing the content.
inline u64 rho_prime_power(const ReducibleQuadratic& f, u64 p, std::uint32_t alpha) {
  const std::uint32_t gamma = ord_p(static_cast<i128>(f.W), p);
  if (alpha <= gamma) return ipow(p, alpha);
  return ipow(p, gamma) * rho_primitive_prime_power(f, p, alpha - gamma);
}

inline u64 rho_fast(const ReducibleQuadratic& f, const Factorization& m) {
  u64 count = 1;
  for (const auto& [p, e] : m.factors) {
    count *= rho_prime_power(f, p, e);
    if (count == 0) return 0;
  }
  return count;
}

inline u64 rho_fast(const ReducibleQuadratic& f, u64 m) { return rho_fast(f, factor(m)); }

/// Roots of f modulo p^alpha in [0, p^alpha), unsorted.
inline std::vector<u64> roots_prime_power(const ReducibleQuadratic& f, u64 p, std::uint32_t alpha) {
  const u64 full = ipow(p, alpha);
  const std::uint32_t gamma = ord_p(static_cast<i128>(f.W), p);
  std::vector<u64> out;
  if (alpha <= gamma) {
    out.resize(full);
    std::iota(out.begin(), out.end(), u64{0});
    return out;
  }
  const std::uint32_t beta = alpha - gamma;
  const u64 q = ipow(p, beta);
  std::vector<u64> base;

  const bool p_a = f.a % static_cast<i64>(p) == 0;
  const bool p_c = f.c % static_cast<i64>(p) == 0;
  const bool p_delta = f.delta % p == 0;
  auto linear_root = [&](i64 lead, i64 constant) {
    return reduce_mod(-static_cast<i128>(constant) * inverse_mod(reduce_mod(lead, q), q), q);
  };
  if (!p_a && !p_c && !p_delta) {
    base = {linear_root(f.a, f.b), linear_root(f.c, f.d)};
  } else if ((p_a || p_c) && p_delta) {
    // p divides both leading coefficients: no roots.
  } else if (p_a || p_c) {
    base = {p_a ? linear_root(f.c, f.d) : linear_root(f.a, f.b)};
  } else {
    // Translate so the congruence reads s (s + shift) = 0 mod q.
    const u64 r0 = linear_root(f.a, f.b);
    const u64 shift = (linear_root(f.a, f.b) + q - linear_root(f.c, f.d)) % q;
    const std::uint32_t delta_ord = ord_p(static_cast<i128>(f.delta), p);
    if (beta <= 2 * delta_ord) {
      const u64 step = ipow(p, (beta + 1) / 2);
      for (u64 s = 0; s < q; s += step) base.push_back((r0 + s) % q);
    } else {
      const u64 step = ipow(p, beta - delta_ord);
      for (u64 s = 0; s < q; s += step) {
        base.push_back((r0 + s) % q);
        base.push_back((r0 + s + q - shift) % q);
      }
    }
  }
  // Lift each root mod p^beta to the p^gamma residues above it.
  out.reserve(base.size() * (full / q));
  for (u64 r : base) {
    for (u64 lift = r; lift < full; lift += q) out.push_back(lift);
  }
  return out;
}

namespace detail {

// Combines residue sets modulo coprime m1, m2 into the set modulo m1*m2.
inline std::vector<u64> crt_combine(const std::vector<u64>& r1, u64 m1, const std::vector<u64>& r2, u64 m2) {
  std::vector<u64> out;
  out.reserve(r1.size() * r2.size());
  const u64 inv = inverse_mod(m1 % m2, m2);
  for (u64 x1 : r1) {
    for (u64 x2 : r2) {
      const u64 t = mul_mod((x2 + m2 - x1 % m2) % m2, inv, m2);
      out.push_back(x1 + m1 * t);
    }
  }
  return out;
}

template <typename PerPrime>
RootSet assemble_roots(const Factorization& m, PerPrime&& per_prime) {
  std::vector<u64> acc{0};
  u64 modulus = 1;
  for (const auto& [p, e] : m.factors) {
    const u64 pe = ipow(p, e);
    acc = crt_combine(acc, modulus, per_prime(p, e), pe);
    modulus *= pe;
    if (acc.empty()) break;
  }
  RootSet out;
  out.modulus = m.n;
  out.roots = std::move(acc);
  if (out.roots.empty()) return out;
  for (auto& r : out.roots) {
    if (r == 0) r = m.n;
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

}  // namespace detail

inline constexpr u64 kEnumerationModulusCap = u64{1} << 62;

inline RootSet roots_mod(const ReducibleQuadratic& f, const Factorization& m) {
  if (m.n > kEnumerationModulusCap) throw ResourceError("roots_mod: modulus over enumeration cap");
  return detail::assemble_roots(m, [&](u64 p, std::uint32_t e) { return roots_prime_power(f, p, e); });
}

inline RootSet roots_mod(const ReducibleQuadratic& f, u64 m) {
  if (m < 1) throw DomainError("roots_mod: modulus must be positive");
  return roots_mod(f, factor(m));
}

/// Square roots of unity modulo p^e, in [0, p^e).
inline std::vector<u64> unit_roots_prime_power(u64 p, std::uint32_t e) {
  const u64 q = ipow(p, e);
  if (p != 2) return {1, q - 1};
  if (e == 1) return {1};
  if (e == 2) return {1, 3};
  const u64 half = q / 2;
  return {1, half - 1, half + 1, q - 1};
}

/// R(m) = { nu in [1, m] : nu^2 = 1 mod m }.
inline RootSet unit_square_roots(const Factorization& m) {
  return detail::assemble_roots(m, [](u64 p, std::uint32_t e) { return unit_roots_prime_power(p, e); });
}

inline RootSet unit_square_roots(u64 m) {
  if (m < 1) throw DomainError("unit_square_roots: modulus must be positive");
  return unit_square_roots(factor(m));
}

/// |R(m)| from the closed form in omega(m) and the power of 2 dividing m.
inline u64 rho_unit(const Factorization& m) {
  const std::uint32_t two = m.ord(2);
  const auto omega = static_cast<std::uint32_t>(m.omega());
  if (two == 1) return u64{1} << (omega - 1);
  if (two >= 3) return u64{1} << (omega + 1);
  return u64{1} << omega;
}

/// |R(n)| straight from the sieve, without building a Factorization.
inline u64 rho_unit(u64 n, const SpfSieve& sieve) {
  if (n == 0) throw DomainError("rho_unit: argument must be positive");
  if (n > sieve.limit()) return rho_unit(factor(n));
  std::uint32_t omega = 0, two = 0;
  sieve.for_each_prime_power(n, [&](u64 p, std::uint32_t e) {
    ++omega;
    if (p == 2) two = e;
  });
  if (two == 1) return u64{1} << (omega - 1);
  if (two >= 3) return u64{1} << (omega + 1);
  return u64{1} << omega;
}

/// rho_f(m) <= sqrtD * 2^omega(m).
inline bool rho_bound_check(const ReducibleQuadratic& f, const Factorization& m) {
  const u128 rhs = static_cast<u128>(f.sqrtD) << m.omega();
  return static_cast<u128>(rho_fast(f, m)) <= rhs;
}

inline bool rho_bound_check(const ReducibleQuadratic& f, u64 m) { return rho_bound_check(f, factor(m)); }

}  // namespace diophlab
