#pragma once

#include <cmath>
#include <vector>

#include "sqfree/analytic/euler.hpp"
#include "sqfree/analytic/zeta.hpp"
#include "sqfree/arith.hpp"

namespace sqfree {

// g(l^q): 1/((l-1)(l+1)^2), l/((l-1)(l+1)^2), then 0 for q >= 3.
inline Rational g_factor(u64 ell, unsigned q) {
  if (q == 0) throw DomainError("g_factor: exponent must be at least 1");
  if (ell < 2 || !is_prime_u64(ell)) throw DomainError("g_factor: l must be prime");
  if (q >= 3) return 0;
  const BigInt l = static_cast<unsigned long>(ell);
  Rational r(q == 1 ? BigInt(1) : l, (l - 1) * (l + 1) * (l + 1));
  r.canonicalize();
  return r;
}

namespace detail {

inline long double b_single(long double l) { return 1.0L + 1.0L / ((l - 1) * (l + 1) * (l + 1)); }
inline long double b_square(long double l) { return 1.0L + 1.0L / (l * l - 1); }

}  // namespace detail

// b(k) = zeta(2)^{-2} prod_{l || k} (1 + 1/((l-1)(l+1)^2)) prod_{l^2 | k} (1 + 1/(l^2 - 1)).
inline long double b_of_k(const BigInt& k) {
  if (k <= 0) throw DomainError("b_of_k: k must be positive");
  long double v = inv_zeta2_squared();
  for (const auto& [p, e] : factorize(k).factors) {
    const long double l = static_cast<long double>(p.get_d());
    v *= e == 1 ? detail::b_single(l) : detail::b_square(l);
  }
  return v;
}

// b(1..K) from a smallest-prime-factor sieve; index 0 unused.
inline std::vector<long double> b_table(u64 K) {
  std::vector<long double> b(K + 1, 0);
  if (K == 0) return b;
  b[1] = inv_zeta2_squared();
  if (K < 2) return b;
  const SieveTables t = build_sieve(K);
  for (u64 k = 2; k <= K; ++k) {
    const u32 p = t.smallest_prime_factor[k];
    u64 m = k / p;
    unsigned e = 1;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    b[k] = b[m] * (e == 1 ? detail::b_single(p) : detail::b_square(p));
  }
  return b;
}

inline long double c_pair(const BigInt& m, const BigInt& n) {
  if (m == n) throw DomainError("c_pair: m and n must differ");
  return b_of_k(abs(m - n));
}

struct EulerProductValue {
  long double value = 0;
  long double tail_bound = 0;
};

// c(m, n) = prod over l of (1 - 2/l^2 + l^{-2} e_l), e_l = l^{-2}, l^{-1}, 1 as v_l(m - n) = 0, 1, >= 2.
inline EulerProductValue c_pair_euler(const BigInt& m, const BigInt& n, u64 prime_limit) {
  if (m == n) throw DomainError("c_pair_euler: m and n must differ");
  const BigInt diff = abs(m - n);
  long double v = 1;
  for (u32 p : primes_up_to(prime_limit)) {
    const long double l = p;
    long double e = 1.0L / (l * l);
    if (mpz_divisible_ui_p(diff.get_mpz_t(), p)) {
      e = mpz_divisible_ui_p(diff.get_mpz_t(), static_cast<unsigned long>(p) * p) ? 1.0L : 1.0L / l;
    }
    v *= 1.0L - 2.0L / (l * l) + e / (l * l);
  }
  // Each omitted factor lies in [1 - 2/l^2, 1].
  const long double s = 2 * prime_tail_power_sum(static_cast<long double>(prime_limit), 2);
  return {v, v * s};
}

// C(x) = sum over 1 <= m != n <= x of c(m, n) = 2 sum over k < x of (x - k) b(k), compensated.
inline long double cesaro_direct(u64 x) {
  if (x < 2) throw DomainError("cesaro_direct: x must be at least 2");
  const auto b = b_table(x - 1);
  long double sum = 0, comp = 0;
  for (u64 k = 1; k < x; ++k) {
    const long double y = static_cast<long double>(x - k) * b[k] - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return 2 * sum;
}

struct ConstantsReport {
  long double gamma0 = 0, gamma1 = 0, gamma2 = 0, gamma_mid = 0;
  long double gamma0_tail = 0, gamma1_tail = 0, gamma2_tail = 0, gamma_mid_tail = 0;
  long double gamma_mid_cubic = 0;  // variant with /l^3 in place of /l^4, for comparison only
  u64 prime_limit = 0;
};

// gamma0 = -4 zeta(-1/2) G(-1/2) / zeta(2)^2 with G(-1/2) = prod (1 - (2 - l^{-1/2} + l^{-1}) / (l+1)^2),
// gamma1 = -1/zeta(2), gamma2 = zeta(2)^{-2} prod (1 + 2/((l-1)(l+1)^2 l)),
// gamma_mid = prod (1 - 2/l^2 + (3 - 2/l)/l^4).
inline ConstantsReport gamma_constants(u64 prime_limit) {
  if (prime_limit < 100) throw DomainError("gamma_constants: prime limit must be at least 100");
  ConstantsReport r;
  r.prime_limit = prime_limit;
  long double g_half = 1, prod2 = 1, mid = 1, cubic = 1;
  for (u32 p : primes_up_to(prime_limit)) {
    const long double l = p;
    const long double l2 = l * l;
    g_half *= 1.0L - (2.0L - 1.0L / std::sqrt(l) + 1.0L / l) / ((l + 1) * (l + 1));
    prod2 *= 1.0L + 2.0L / ((l - 1) * (l + 1) * (l + 1) * l);
    mid *= 1.0L - 2.0L / l2 + (3.0L - 2.0L / l) / (l2 * l2);
    cubic *= 1.0L - 2.0L / l2 + (3.0L - 2.0L / l) / (l2 * l);
  }
  const long double L = static_cast<long double>(prime_limit);
  const long double zeta2 = zeta_real(2);
  const long double zeta_mhalf = zeta_real(-0.5L);
  r.gamma0 = -4.0L * zeta_mhalf * g_half / (zeta2 * zeta2);
  // Omitted G(-1/2) factors lie in [1 - 2/l^2, 1].
  r.gamma0_tail = std::fabs(r.gamma0) * 2 * prime_tail_power_sum(L, 2);
  r.gamma1 = -1.0L / zeta2;
  r.gamma1_tail = 0;
  r.gamma2 = prod2 / (zeta2 * zeta2);
  // Omitted factors lie in [1, 1 + 2/l^4]; expm1 bounds the product.
  r.gamma2_tail = r.gamma2 * std::expm1(2 * prime_tail_power_sum(L, 4));
  r.gamma_mid = mid;
  // Omitted factors lie in [1 - 2/l^2, 1].
  r.gamma_mid_tail = mid * 2 * prime_tail_power_sum(L, 2);
  r.gamma_mid_cubic = cubic;
  return r;
}

}  // namespace sqfree
