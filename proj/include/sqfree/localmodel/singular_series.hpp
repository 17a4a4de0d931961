#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "sqfree/arith.hpp"
#include "sqfree/localmodel/local_table.hpp"
#include "sqfree/poly.hpp"

namespace sqfree {

struct SingularSeriesOptions {
  u64 prime_limit = 100000;       // L: exact local factors for every prime <= L
  u64 trial_limit = 10000000;     // L2: D_P is trial-divided by primes <= L2
  u64 factor_budget = u64{1} << 20;  // rho iterations for the part of D_P above L2
};

struct SingularSeriesValue {
  long double value = 0;
  long double tail_bound = 0;  // |S_P - value| <= tail_bound
  u64 prime_limit = 0;
  std::vector<BigInt> ramified_primes_checked;  // primes > L given an exact local factor
  bool exact_zero = false;                      // some local factor vanishes, or D_P = 0
  long double generic_tail = 0;                 // sum over omitted primes of d / l^2
  long double fallback_tail = 0;                // worst case for unresolved square factors of D_P
  bool fallback_used = false;
  bool flagged = false;  // fallback_tail exceeds generic_tail
};

namespace detail {

inline long double local_factor(const BigInt& rho, const BigInt& ell) {
  Rational u(rho, ell * ell);
  u.canonicalize();
  return 1.0L - static_cast<long double>(u.get_d());
}

}  // namespace detail

// Product over l <= L of exact local factors, times accounting for l > L:
//  * primes dividing the content are factored out and treated exactly;
//  * for l not dividing the content, rho(l^2) > d forces l^2 | D_R (R = P / content),
//    so only square factors of D_R above L need exact treatment;
//  * every other omitted prime has 1 - d/l^2 <= factor <= 1.
// `table` may supply precomputed PrimeLocal data for the primes <= L.
inline SingularSeriesValue singular_series(const IntPolynomial& P, const SingularSeriesOptions& opts = {},
                                           const std::vector<PrimeLocal>* table = nullptr) {
  const int d = P.degree();
  if (d < 1) throw DomainError("singular_series: degree must be at least 1");
  const u64 L = std::max<u64>(opts.prime_limit, 5);
  SingularSeriesValue out;
  out.prime_limit = L;
  const BigInt c = content(P);
  BigInt rest = abs(discriminant(P.divide_exact(c)));  // D_P = c^(2d-2) D_R
  if (rest == 0) {
    // A repeated factor Q^2 makes rho(l^2) >= l at every prime where Q has a root.
    out.exact_zero = true;
    return out;
  }
  const auto primes = PrimeCache::get(std::max(L, opts.trial_limit));
  long double value = 1;
  std::size_t idx = 0;
  for (; idx < primes->size() && (*primes)[idx] <= L; ++idx) {
    const u32 p = (*primes)[idx];
    u64 rho;
    if (table && idx < table->size() && (*table)[idx].ell == p) {
      rho = (*table)[idx].rho2;
    } else {
      rho = prime_local(P.coefficients(), p).rho2;
    }
    const u64 p2 = static_cast<u64>(p) * p;
    if (rho == p2) {
      out.exact_zero = true;
      out.value = 0;
      return out;
    }
    value *= static_cast<long double>(p2 - rho) / static_cast<long double>(p2);
  }

  auto exact_large = [&](const BigInt& ell) {
    const LocalCount lc = rho_prime_square(P, ell);
    value *= detail::local_factor(lc.count, ell);
    out.ramified_primes_checked.push_back(ell);
  };

  const Factorization cf = factorize(c);
  std::vector<BigInt> content_primes;
  for (const auto& [p, e] : cf.factors) {
    content_primes.push_back(p);
    if (p > L) exact_large(p);
  }
  auto divides_content = [&](const BigInt& p) {
    return mpz_divisible_p(c.get_mpz_t(), p.get_mpz_t()) != 0;
  };

  // Square factors of D_R above L.
  for (std::size_t i = 0; i < primes->size() && rest > 1; ++i) {
    const u32 p = (*primes)[i];
    if (p > opts.trial_limit) break;
    const BigInt bp = static_cast<unsigned long>(p);
    if (bp * bp > rest) {
      rest = 1;  // what remains is 1 or a prime
      break;
    }
    if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
    unsigned e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    }
    if (p > L && e >= 2 && !divides_content(bp)) exact_large(bp);
  }
  if (rest > 1 && !is_prime(rest)) {
    const BigInt L2 = static_cast<unsigned long>(std::max<u64>(opts.trial_limit, L));
    BigInt s;
    if (mpz_perfect_square_p(rest.get_mpz_t())) {
      mpz_sqrt(s.get_mpz_t(), rest.get_mpz_t());
    }
    if (s > 0 && is_prime(s)) {
      if (!divides_content(s)) exact_large(s);
    } else if (rest >= L2 * L2 * L2) {
      const Factorization rf = factorize(rest, opts.factor_budget);
      for (const auto& [p, e] : rf.factors)
        if (e >= 2 && !divides_content(p)) exact_large(p);
      if (!rf.complete) {
        // Each unresolved prime square costs at least 2 log L2 bits of the cofactor.
        const long double bits = static_cast<long double>(mpz_sizeinbase(rf.cofactor.get_mpz_t(), 2));
        const long double k = std::floor(bits * std::log(2.0L) / (2.0L * std::log(static_cast<long double>(L2.get_d()))));
        const long double l = static_cast<long double>(L2.get_d());
        out.fallback_used = true;
        out.fallback_tail = k * d * (l + 1) / (l * l);
      }
    }
  }

  // Generic omitted primes: exact prefix up to L2 plus a bound beyond it.
  long double generic = 0;
  for (; idx < primes->size(); ++idx) {
    const long double p = (*primes)[idx];
    generic += 1.0L / (p * p);
  }
  const long double top = primes->empty() ? static_cast<long double>(L) : std::max<long double>((*primes).back(), L);
  generic += prime_tail_power_sum(top, 2.0L);
  out.generic_tail = d * generic;
  out.flagged = out.fallback_used && out.fallback_tail > out.generic_tail;
  out.value = value;
  out.tail_bound = value * (out.generic_tail + out.fallback_tail) + 64 * std::numeric_limits<long double>::epsilon();
  return out;
}

struct TruncatedSeries {
  Rational exact;
  long double value = 0;
};

// S_P(z) = sum over k <= z of mu(k) rho_P(k^2) / k^2.
inline TruncatedSeries singular_series_truncated(const IntPolynomial& P, u64 z) {
  if (P.degree() < 1) throw DomainError("singular_series_truncated: degree must be at least 1");
  TruncatedSeries out;
  out.exact = 1;
  if (z >= 2) {
    const SieveTables t = build_sieve(std::max<u64>(z, 2));
    std::vector<BigInt> rho_at(z + 1, 0);
    for (u32 p : t.primes) rho_at[p] = static_cast<unsigned long>(prime_local(P.coefficients(), p).rho2);
    Rational acc = 0;
    for (u64 k = 2; k <= z; ++k) {
      if (t.mobius[k] == 0) continue;
      BigInt rho = 1;
      u64 m = k;
      while (m > 1) {
        const u32 p = t.smallest_prime_factor[m];
        rho *= rho_at[p];
        m /= p;
      }
      if (rho == 0) continue;
      Rational term(rho, BigInt(static_cast<unsigned long>(k)) * static_cast<unsigned long>(k));
      term.canonicalize();
      if (t.mobius[k] < 0) term = -term;
      acc += term;
    }
    out.exact += acc;
  }
  out.value = static_cast<long double>(out.exact.get_d());
  return out;
}

}  // namespace sqfree
