#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "sqfree/arith.hpp"
#include "sqfree/localmodel/local_table.hpp"
#include "sqfree/localmodel/singular_series.hpp"
#include "sqfree/localmodel/squarefree_sieve.hpp"
#include "sqfree/poly.hpp"

namespace sqfree {

enum class Method { Formula, Brute };

inline constexpr u64 kDefaultEnumerationBudget = 10000000;

struct PairDensity {
  u64 prime = 0;
  int d = 0;
  BigInt n, m;
  BigInt count;      // #{g mod l^2, deg g <= d : g(n) = g(m) = 0 mod l^2}
  Rational density;  // count / l^{2(d+1)}
};

namespace detail {

inline u64 ipow(u64 b, unsigned e) {
  u64 r = 1;
  while (e--) r *= b;
  return r;
}

inline unsigned valuation(BigInt v, u64 ell) {
  if (v == 0) return ~0u;
  unsigned k = 0;
  while (mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(ell))) {
    mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(ell));
    ++k;
  }
  return k;
}

// Visits every coefficient vector mod q of length d+1 (odometer order).
template <class Fn>
void enumerate_polys_mod(u64 q, int d, u64 budget, Fn&& f) {
  const u64 total = ipow(q, static_cast<unsigned>(d + 1));
  if (std::pow(static_cast<long double>(q), d + 1) > static_cast<long double>(budget))
    throw ResourceError("enumeration of " + std::to_string(total) + " polynomials exceeds budget");
  std::vector<u64> g(static_cast<std::size_t>(d + 1), 0);
  for (u64 idx = 0; idx < total; ++idx) {
    f(g);
    for (auto& c : g) {
      if (++c < q) break;
      c = 0;
    }
  }
}

inline u64 eval_mod(const std::vector<u64>& g, u64 t, u64 q) {
  u64 acc = 0;
  for (std::size_t i = g.size(); i-- > 0;) acc = (acc * t + g[i]) % q;
  return acc;
}

inline u64 rho_mod(const std::vector<u64>& g, u64 q) {
  u64 c = 0;
  for (u64 t = 0; t < q; ++t) c += eval_mod(g, t, q) == 0;
  return c;
}

}  // namespace detail

// Count of degree <= d polynomials mod l^2 vanishing mod l^2 at both n and m.
inline PairDensity pair_count(u64 ell, int d, const BigInt& n, const BigInt& m, Method method,
                              u64 budget = kDefaultEnumerationBudget) {
  if (d < 1) throw DomainError("pair_count: degree must be at least 1");
  if (ell < 2 || !is_prime_u64(ell)) throw DomainError("pair_count: l must be prime");
  PairDensity out;
  out.prime = ell;
  out.d = d;
  out.n = n;
  out.m = m;
  const u64 q = ell * ell;
  BigInt total = 1;
  for (int i = 0; i < 2 * (d + 1); ++i) total *= static_cast<unsigned long>(ell);
  if (method == Method::Formula) {
    // Density l^-4, l^-3, l^-2 as v_l(m - n) = 0, 1, >= 2.
    const unsigned v = std::min(2u, detail::valuation(m - n, ell));
    BigInt denom = 1;
    for (unsigned i = 0; i < 4 - v; ++i) denom *= static_cast<unsigned long>(ell);
    out.count = total / denom;
  } else {
    const u64 nn = mpz_fdiv_ui(n.get_mpz_t(), static_cast<unsigned long>(q));
    const u64 mm = mpz_fdiv_ui(m.get_mpz_t(), static_cast<unsigned long>(q));
    u64 c = 0;
    detail::enumerate_polys_mod(q, d, budget, [&](const std::vector<u64>& g) {
      c += detail::eval_mod(g, nn, q) == 0 && detail::eval_mod(g, mm, q) == 0;
    });
    out.count = static_cast<unsigned long>(c);
  }
  out.density = Rational(out.count, total);
  out.density.canonicalize();
  return out;
}

// (sum over g with l^2 | g(n) of rho_g(l^2), sum over all g of rho_g(l^2)^2), g mod l^2 of degree <= d.
inline std::pair<Rational, Rational> local2_sums(u64 ell, int d, const BigInt& n, Method method,
                                                 u64 budget = kDefaultEnumerationBudget) {
  if (d < 1) throw DomainError("local2_sums: degree must be at least 1");
  if (ell < 2 || !is_prime_u64(ell)) throw DomainError("local2_sums: l must be prime");
  if (method == Method::Formula) {
    // l^{2d}(3 - 2/l) and l^{2d+2}(3 - 2/l).
    BigInt l2d = 1;
    for (int i = 0; i < 2 * d; ++i) l2d *= static_cast<unsigned long>(ell);
    const Rational base = Rational(3) - Rational(2, static_cast<unsigned long>(ell));
    Rational s1 = Rational(l2d) * base;
    Rational s2 = Rational(l2d * static_cast<unsigned long>(ell * ell)) * base;
    s1.canonicalize();
    s2.canonicalize();
    return {s1, s2};
  }
  const u64 q = ell * ell;
  const u64 nn = mpz_fdiv_ui(n.get_mpz_t(), static_cast<unsigned long>(q));
  BigInt s1 = 0, s2 = 0;
  detail::enumerate_polys_mod(q, d, budget, [&](const std::vector<u64>& g) {
    const u64 r = detail::rho_mod(g, q);
    s2 += static_cast<unsigned long>(r * r);
    if (detail::eval_mod(g, nn, q) == 0) s1 += static_cast<unsigned long>(r);
  });
  return {Rational(s1), Rational(s2)};
}

// Sum of mu(k) over square-free k <= z built from the given distinct primes.
inline long mobius_subset_sum(const std::vector<u64>& primes, u64 z) {
  long total = 0;
  auto rec = [&](auto&& self, std::size_t i, u64 prod, int sign) -> void {
    total += sign;
    for (std::size_t j = i; j < primes.size(); ++j) {
      if (prod > z / primes[j]) continue;
      self(self, j + 1, prod * primes[j], -sign);
    }
  };
  rec(rec, 0, 1, 1);
  return total;
}

// mu^2_model(n) = sum over k <= z with k^2 | n of mu(k).
inline long mu2_model(const BigInt& n, u64 z) {
  if (n == 0) throw DomainError("mu2_model: n must be nonzero");
  const BigInt a = abs(n);
  std::vector<u64> hits;
  if (z >= 2) {
    const auto primes = PrimeCache::get(std::max<u64>(z, 2));
    for (u32 p : *primes) {
      if (p > z) break;
      const BigInt p2 = BigInt(static_cast<unsigned long>(p)) * p;
      if (p2 > a) break;
      if (mpz_divisible_p(a.get_mpz_t(), p2.get_mpz_t())) hits.push_back(p);
    }
  }
  return mobius_subset_sum(hits, z);
}

// S_P(x, z) = sum over n <= x of mu^2_model(P(n)); roots n of P contribute 0, as in S_P(x).
inline BigInt count_model(const IntPolynomial& P, u64 x, u64 z) {
  if (P.degree() < 0) throw DomainError("count_model: zero polynomial");
  // l^2 | P(n) != 0 needs l^2 <= max |P(n)|.
  BigInt maxabs = 0;
  for (const auto& c : P.coefficients()) maxabs += abs(c);
  BigInt xpow = 1;
  for (int i = 0; i < P.degree(); ++i) xpow *= static_cast<unsigned long>(x);
  maxabs *= xpow;
  BigInt root;
  mpz_sqrt(root.get_mpz_t(), maxabs.get_mpz_t());
  const u64 limit = root < BigInt(static_cast<unsigned long>(z)) ? root.get_ui() : z;
  std::vector<std::vector<u64>> hits(x + 1);
  if (limit >= 2) {
    const auto primes = PrimeCache::get(limit);
    for (u32 p : *primes) {
      if (p > limit) break;
      const PrimeLocal loc = prime_local(P.coefficients(), p);
      for_each_square_hit(loc, x, [&](u64 n) { hits[n].push_back(p); });
    }
  }
  BigInt total = 0;
  for (u64 n = 1; n <= x; ++n) {
    if (P.evaluate(BigInt(static_cast<unsigned long>(n))) == 0) continue;
    total += mobius_subset_sum(hits[n], z);
  }
  return total;
}

struct ErrorTerm {
  long double value = 0;        // S_P(x) - S x
  BigInt count;                 // S_P(x)
  SingularSeriesValue singular;
  long double uncertainty = 0;  // x * singular.tail_bound
};

inline ErrorTerm error_term(const IntPolynomial& P, u64 x, const SingularSeriesOptions& opts = {}) {
  ErrorTerm e;
  e.singular = singular_series(P, opts);
  e.count = count_squarefree_values(P, x);
  e.value = static_cast<long double>(e.count.get_d()) - e.singular.value * static_cast<long double>(x);
  e.uncertainty = static_cast<long double>(x) * e.singular.tail_bound;
  return e;
}

}  // namespace sqfree
