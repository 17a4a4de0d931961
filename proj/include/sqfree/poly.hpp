#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sqfree/arith/factor.hpp"
#include "sqfree/poly/finite_field.hpp"
#include "sqfree/poly/int_polynomial.hpp"

namespace sqfree {

struct RootSet {
  bool all = false;            // P vanishes identically mod p
  std::vector<BigInt> roots;   // sorted, in [0, p); empty when `all`
};

namespace detail {

template <class F>
typename F::poly reduce_poly(const F& f, const IntPolynomial& P) {
  typename F::poly a;
  for (const auto& c : P.coefficients()) a.push_back(f.from_big(c));
  ff::trim(f, a);
  return a;
}

// Splitting seed from (P mod p, p).
template <class F>
u64 split_seed(const F& f, const typename F::poly& a) {
  u64 h = hash_big(f.order());
  for (const auto& c : a) h = hash_combine(h, hash_big(f.to_big(c)));
  return h;
}

}  // namespace detail

// Roots mod a prime of the residues of coeffs (constant first); 32-bit fast path.
inline boost::container::small_vector<u64, 8> roots_mod_small_prime(const FpSmall::poly& coeffs, u64 p, bool& all) {
  FpSmall f(p);
  auto a = coeffs;
  ff::trim(f, a);
  const auto r = ff::roots(f, a, detail::split_seed(f, a), all);
  return boost::container::small_vector<u64, 8>(r.begin(), r.end());
}

inline RootSet roots_mod_prime(const IntPolynomial& P, const BigInt& p) {
  RootSet out;
  if (p < 2) throw DomainError("roots_mod_prime: modulus must be prime");
  if (p < (BigInt(1) << 32)) {
    FpSmall f(p.get_ui());
    const auto a = detail::reduce_poly(f, P);
    for (u64 r : ff::roots(f, a, detail::split_seed(f, a), out.all)) out.roots.emplace_back(static_cast<unsigned long>(r));
  } else {
    FpBig f(p);
    const auto a = detail::reduce_poly(f, P);
    out.roots = ff::roots(f, a, detail::split_seed(f, a), out.all);
  }
  return out;
}

enum class LocalCase { PrimeSquareDividesP, PrimeDividesP, Unramified, Ramified };

inline std::string to_string(LocalCase c) {
  switch (c) {
    case LocalCase::PrimeSquareDividesP: return "prime-square-divides-P";
    case LocalCase::PrimeDividesP: return "prime-divides-P";
    case LocalCase::Unramified: return "unramified";
    case LocalCase::Ramified: return "ramified";
  }
  return "?";
}

struct LocalCount {
  BigInt prime;
  BigInt count;  // rho_P(prime^2)
  LocalCase case_tag;
};

// rho_P(l^2) given l does not divide every coefficient: simple roots lift uniquely,
// a root with P'(r) = 0 mod l contributes l residues when l^2 | P(r) and none otherwise.
inline BigInt lifted_root_count(const IntPolynomial& P, const IntPolynomial& dP, const BigInt& ell,
                                const std::vector<BigInt>& roots_mod_ell) {
  const BigInt ell2 = ell * ell;
  BigInt count = 0;
  for (const auto& r : roots_mod_ell) {
    BigInt dv = dP.evaluate(r);
    if (!mpz_divisible_p(dv.get_mpz_t(), ell.get_mpz_t())) {
      count += 1;
      continue;
    }
    BigInt v = P.evaluate(r);
    if (mpz_divisible_p(v.get_mpz_t(), ell2.get_mpz_t())) count += ell;
  }
  return count;
}

// Exact rho_P(l^2). `disc` (when known) is only used for the case tag.
inline LocalCount rho_prime_square(const IntPolynomial& P, const BigInt& ell, const std::optional<BigInt>& disc = std::nullopt) {
  if (P.is_zero()) throw DomainError("rho_prime_square: zero polynomial");
  LocalCount out{ell, 0, LocalCase::Unramified};
  const BigInt ell2 = ell * ell;
  bool div1 = true, div2 = true;
  for (const auto& c : P.coefficients()) {
    if (!mpz_divisible_p(c.get_mpz_t(), ell.get_mpz_t())) div1 = false;
    if (!mpz_divisible_p(c.get_mpz_t(), ell2.get_mpz_t())) div2 = false;
  }
  if (div2) {
    out.count = ell2;
    out.case_tag = LocalCase::PrimeSquareDividesP;
    return out;
  }
  if (div1) {
    // P = l Q: l^2 | P(t) iff l | Q(t), so each root of Q mod l gives l residues mod l^2.
    const RootSet rs = roots_mod_prime(P.divide_exact(ell), ell);
    out.count = ell * static_cast<unsigned long>(rs.roots.size());
    out.case_tag = LocalCase::PrimeDividesP;
    return out;
  }
  const RootSet rs = roots_mod_prime(P, ell);
  out.count = lifted_root_count(P, P.derivative(), ell, rs.roots);
  if (P.degree() >= 1) {
    const BigInt D = disc ? *disc : discriminant(P);
    out.case_tag = mpz_divisible_p(D.get_mpz_t(), ell.get_mpz_t()) ? LocalCase::Ramified : LocalCase::Unramified;
  }
  return out;
}

// rho_P(k^2) for square-free k, by multiplicativity over the primes of k.
inline BigInt rho_square(const IntPolynomial& P, const BigInt& k) {
  if (k < 1) throw DomainError("rho_square: k must be positive");
  const Factorization f = factorize(k);
  BigInt r = 1;
  for (const auto& [p, e] : f.factors) {
    if (e > 1) throw DomainError("rho_square: k must be square-free");
    r *= rho_prime_square(P, p).count;
  }
  return r;
}

inline constexpr u64 kDefaultBruteScanBound = 1000000;

// #{t mod m : P(t) = 0 mod m} by scanning every residue.
inline u64 rho_brute(const IntPolynomial& P, u64 m, u64 scan_bound = kDefaultBruteScanBound) {
  if (m == 0) throw DomainError("rho_brute: modulus must be positive");
  if (m > scan_bound) throw ResourceError("rho_brute: modulus " + std::to_string(m) + " exceeds scan bound");
  std::vector<u64> c;
  for (const auto& v : P.coefficients()) c.push_back(mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(m)));
  u64 count = 0;
  for (u64 t = 0; t < m; ++t) {
    u64 acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) acc = static_cast<u64>((static_cast<u128>(acc) * t + c[i]) % m);
    if (acc == 0) ++count;
  }
  return count;
}

}  // namespace sqfree
