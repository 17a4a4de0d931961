#pragma once

#include <vector>

#include "sqfree/arith.hpp"
#include "sqfree/localmodel/local_table.hpp"
#include "sqfree/poly.hpp"

namespace sqfree {

struct SquarefreeCountOptions {
  u64 sieve_bound = 10000;            // B: primes <= B are sieved along roots of P mod l^2
  u64 rho_budget = kUnlimitedBudget;  // per-value rho iterations for cofactors above B^3
};

struct SquarefreeCount {
  BigInt count;      // n in [1, x] with P(n) square-free, unknown values counted as square-free
  u64 uncertified = 0;  // values whose cofactor could not be fully factored within rho_budget
  u64 zero_values = 0;  // n in [1, x] with P(n) = 0
};

// Sieve over n in [1, x]: with R = P / content, P(n) is square-free iff the content is,
// gcd(content, R(n)) = 1 and R(n) is. Primes l <= B are removed from R(n) along the roots
// of R mod l and l^2; the rough cofactors left over are classified exactly.
// `table` may hold PrimeLocal data of P for consecutive primes from 2; it is used when P is primitive.
inline SquarefreeCount count_squarefree_detailed(const IntPolynomial& P, u64 x, const SquarefreeCountOptions& opts = {},
                                                 const std::vector<PrimeLocal>* table = nullptr) {
  if (P.is_zero()) throw DomainError("count_squarefree: zero polynomial");
  SquarefreeCount out;
  out.count = 0;
  if (x == 0) return out;
  const BigInt c = content(P);
  const IntPolynomial R = P.divide_exact(c);
  std::vector<BigInt> v(x + 1);
  std::vector<char> bad(x + 1, 0);
  for (u64 n = 1; n <= x; ++n) {
    v[n] = abs(R.evaluate(BigInt(static_cast<unsigned long>(n))));
    if (v[n] == 0) {
      bad[n] = 1;
      ++out.zero_values;
    }
  }
  if (!is_squarefree(c)) return out;
  if (c > 1) {
    BigInt g;
    for (u64 n = 1; n <= x; ++n) {
      if (bad[n]) continue;
      mpz_gcd(g.get_mpz_t(), c.get_mpz_t(), v[n].get_mpz_t());
      if (g != 1) bad[n] = 1;
    }
  }
  if (R.degree() == 0) {
    // R = +-1.
    for (u64 n = 1; n <= x; ++n) out.count += bad[n] ? 0 : 1;
    return out;
  }
  const u64 B = std::max<u64>(opts.sieve_bound, 2);
  const auto primes = PrimeCache::get(B);
  const bool use_table = table != nullptr && c == 1;
  for (std::size_t i = 0; i < primes->size() && (*primes)[i] <= B; ++i) {
    const u32 p = (*primes)[i];
    PrimeLocal computed;
    const PrimeLocal* loc;
    if (use_table && i < table->size() && (*table)[i].ell == p) {
      loc = &(*table)[i];
    } else {
      computed = prime_local(R.coefficients(), p);
      loc = &computed;
    }
    // R is primitive, so loc->kind is Normal.
    for_each_square_hit(*loc, x, [&](u64 n) { bad[n] = 1; });
    for (u64 r : loc->roots1) {
      for (u64 n = r == 0 ? p : r; n <= x; n += p) {
        if (bad[n]) continue;
        mpz_divexact_ui(v[n].get_mpz_t(), v[n].get_mpz_t(), p);  // l exactly once, since l^2 does not divide
      }
    }
  }
  for (u64 n = 1; n <= x; ++n) {
    if (bad[n]) continue;
    switch (classify_rough_cofactor(v[n], B, opts.rho_budget)) {
      case SquarefreeStatus::SquareFree: out.count += 1; break;
      case SquarefreeStatus::NotSquareFree: break;
      case SquarefreeStatus::Unknown:
        out.count += 1;
        ++out.uncertified;
        break;
    }
  }
  return out;
}

// S_P(x) = #{n in [1, x] : P(n) square-free}; n with P(n) = 0 are not counted.
inline BigInt count_squarefree_values(const IntPolynomial& P, u64 x, const SquarefreeCountOptions& opts = {}) {
  return count_squarefree_detailed(P, x, opts).count;
}

}  // namespace sqfree
