#pragma once

#include <array>

#include "sqfree/arith/montgomery.hpp"

namespace sqfree {

inline constexpr std::array<u32, 13> kWitnessPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

// The first 13 prime bases are a deterministic witness set below 3317044064679887385961981.
inline const u128 kDeterministicMrBound = (static_cast<u128>(179817ULL) << 64) | 0x51adc5b22410a5fdULL;

inline constexpr int kProbabilisticRounds = 40;

namespace detail {

template <class M>
bool mr_round(const M& mt, typename M::value_type d, int s, typename M::value_type a) {
  using V = typename M::value_type;
  const V n = mt.modulus();
  a %= n;
  if (a == 0) return true;
  const V one = mt.one();
  const V minus_one = mt.sub(V{0}, one);
  V x = mt.pow(mt.to(a), d);
  if (x == one || x == minus_one) return true;
  for (int r = 1; r < s; ++r) {
    x = mt.mul(x, x);
    if (x == minus_one) return true;
    if (x == one) return false;
  }
  return false;
}

inline bool small_prime_screen(u64 n, bool& decided) {
  decided = true;
  if (n < 2) return false;
  for (u32 p : kWitnessPrimes) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  decided = false;
  return false;
}

}  // namespace detail

// Deterministic for every 64-bit input.
inline bool is_prime_u64(u64 n) {
  bool decided;
  const bool r = detail::small_prime_screen(n, decided);
  if (decided) return r;
  if (n < 43 * 43) return true;
  Mont64 mt(n);
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (int i = 0; i < 12; ++i)
    if (!detail::mr_round(mt, d, s, static_cast<u64>(kWitnessPrimes[i]))) return false;
  return true;
}

// Deterministic below kDeterministicMrBound, 40 strong rounds above it. Requires n < 2^127.
inline bool is_prime_u128(u128 n) {
  if ((n >> 64) == 0) return is_prime_u64(static_cast<u64>(n));
  for (u32 p : kWitnessPrimes)
    if (n % p == 0) return false;
  Mont128 mt(n);
  u128 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u32 p : kWitnessPrimes)
    if (!detail::mr_round(mt, d, s, static_cast<u128>(p))) return false;
  if (n < kDeterministicMrBound) return true;
  u64 h = mix64(static_cast<u64>(n) ^ mix64(static_cast<u64>(n >> 64)));
  for (int i = static_cast<int>(kWitnessPrimes.size()); i < kProbabilisticRounds; ++i) {
    h = mix64(h + static_cast<u64>(i));
    const u128 a = ((static_cast<u128>(mix64(h)) << 64) | h) % (n - 3) + 2;
    if (!detail::mr_round(mt, d, s, a)) return false;
  }
  return true;
}

inline bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 126) return is_prime_u128(to_u128(n));
  return mpz_probab_prime_p(n.get_mpz_t(), kProbabilisticRounds) > 0;
}

}  // namespace sqfree
