#pragma once

#include <algorithm>
#include <vector>

#include "sqfree/poly.hpp"

namespace sqfree {

// Local data of P at one prime l < 2^32.
struct PrimeLocal {
  enum class Kind : unsigned char { Normal, PrimeDividesP, PrimeSquareDividesP };
  u32 ell = 0;
  Kind kind = Kind::Normal;
  // Normal: roots of P mod l. PrimeDividesP: roots of P/l mod l. Otherwise empty.
  boost::container::small_vector<u64, 4> roots1;
  // Normal only: sorted residues s mod l^2 with l^2 | P(s).
  boost::container::small_vector<u64, 4> roots2;
  u64 rho2 = 0;  // rho_P(l^2)
};

// Computes PrimeLocal from the coefficients of P (constant first).
inline PrimeLocal prime_local(const std::vector<BigInt>& coeffs, u32 ell) {
  PrimeLocal out;
  out.ell = ell;
  const u64 l = ell;
  const u64 l2 = l * l;
  FpSmall::poly c2;  // coefficients mod l^2
  bool div1 = true, div2 = true;
  for (const auto& c : coeffs) {
    const u64 r = mpz_fdiv_ui(c.get_mpz_t(), static_cast<unsigned long>(l2));
    c2.push_back(r);
    if (r != 0) div2 = false;
    if (r % l != 0) div1 = false;
  }
  if (div2) {
    out.kind = PrimeLocal::Kind::PrimeSquareDividesP;
    out.rho2 = l2;
    return out;
  }
  FpSmall::poly c1;
  if (div1) {
    for (u64 v : c2) c1.push_back(v / l);
    bool all = false;
    out.roots1 = roots_mod_small_prime(c1, l, all);
    out.kind = PrimeLocal::Kind::PrimeDividesP;
    out.rho2 = l * out.roots1.size();
    return out;
  }
  for (u64 v : c2) c1.push_back(v % l);
  bool all = false;
  out.roots1 = roots_mod_small_prime(c1, l, all);
  for (u64 r : out.roots1) {
    u64 pv = 0;  // P(r) mod l^2
    for (std::size_t i = c2.size(); i-- > 0;) pv = static_cast<u64>((static_cast<u128>(pv) * r + c2[i]) % l2);
    u64 dv = 0;  // P'(r) mod l
    for (std::size_t i = c1.size(); i-- > 1;) dv = (dv * r + (c1[i] * (i % l)) % l) % l;
    if (dv != 0) {
      const u64 k = (l - (pv / l) % l) % l * invmod64(dv, l) % l;
      out.roots2.push_back(r + l * k);
    } else if (pv == 0) {
      for (u64 k = 0; k < l; ++k) out.roots2.push_back(r + l * k);
    }
  }
  std::sort(out.roots2.begin(), out.roots2.end());
  out.rho2 = out.roots2.size();
  return out;
}

// Local data at every prime in `primes` (ascending, < 2^32).
inline std::vector<PrimeLocal> local_table(const IntPolynomial& P, const std::vector<u32>& primes, u64 limit) {
  std::vector<PrimeLocal> out;
  for (u32 p : primes) {
    if (p > limit) break;
    out.push_back(prime_local(P.coefficients(), p));
  }
  return out;
}

// Calls f(n) for every n in [1, x] with l^2 | P(n), in increasing order within each progression.
template <class Fn>
void for_each_square_hit(const PrimeLocal& loc, u64 x, Fn&& f) {
  const u64 l = loc.ell, l2 = l * l;
  auto progression = [&](u64 r, u64 step) {
    u64 n = r == 0 ? step : r;
    for (; n <= x; n += step) f(n);
  };
  switch (loc.kind) {
    case PrimeLocal::Kind::PrimeSquareDividesP:
      for (u64 n = 1; n <= x; ++n) f(n);
      break;
    case PrimeLocal::Kind::PrimeDividesP:
      for (u64 r : loc.roots1) progression(r, l);
      break;
    case PrimeLocal::Kind::Normal:
      for (u64 s : loc.roots2) progression(s, l2);
      break;
  }
}

}  // namespace sqfree
