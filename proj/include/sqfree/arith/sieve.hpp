#pragma once

#include <cmath>
#include <memory>
#include <mutex>
#include <vector>

#include "sqfree/common.hpp"

namespace sqfree {

inline constexpr u64 kDefaultSieveMemoryBudget = u64{1} << 31;

// Smallest prime factor and Moebius tables on [0, limit].
struct SieveTables {
  u64 limit = 0;
  std::vector<u32> smallest_prime_factor;
  std::vector<signed char> mobius;
  std::vector<u32> primes;

  bool is_prime(u64 n) const { return n >= 2 && n <= limit && smallest_prime_factor[n] == n; }

  // (prime, exponent) pairs of n in increasing prime order, 1 <= n <= limit.
  std::vector<std::pair<u64, unsigned>> factor(u64 n) const {
    std::vector<std::pair<u64, unsigned>> out;
    while (n > 1) {
      const u64 p = smallest_prime_factor[n];
      unsigned e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
    return out;
  }
};

inline SieveTables build_sieve(u64 limit, u64 memory_budget = kDefaultSieveMemoryBudget) {
  if (limit < 2) throw DomainError("build_sieve: limit must be at least 2");
  const long double bytes = static_cast<long double>(limit + 1) * (sizeof(u32) + 1) +
                            static_cast<long double>(limit) / std::log(static_cast<long double>(limit)) * 1.3L * sizeof(u32);
  if (bytes > static_cast<long double>(memory_budget) || limit >= (u64{1} << 32))
    throw ResourceError("build_sieve: limit " + std::to_string(limit) + " exceeds the memory budget");
  SieveTables t;
  t.limit = limit;
  t.smallest_prime_factor.assign(limit + 1, 0);
  t.mobius.assign(limit + 1, 0);
  t.mobius[1] = 1;
  auto& spf = t.smallest_prime_factor;
  auto& mu = t.mobius;
  // Linear sieve: each composite is visited once, from its smallest prime factor.
  for (u64 i = 2; i <= limit; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<u32>(i);
      mu[i] = -1;
      t.primes.push_back(static_cast<u32>(i));
    }
    for (u32 p : t.primes) {
      const u64 ip = i * p;
      if (p > spf[i] || ip > limit) break;
      spf[ip] = p;
      mu[ip] = (p == spf[i]) ? 0 : static_cast<signed char>(-mu[i]);
    }
  }
  return t;
}

// Odd-only Eratosthenes; primes <= limit.
inline std::vector<u32> primes_up_to(u64 limit) {
  std::vector<u32> out;
  if (limit < 2) return out;
  if (limit >= (u64{1} << 32)) throw ResourceError("primes_up_to: limit too large");
  out.push_back(2);
  const u64 half = (limit - 1) / 2;  // index i <-> 2i+1, i in [1, half]
  std::vector<bool> composite(half + 1, false);
  for (u64 i = 1; i <= half; ++i) {
    if (composite[i]) continue;
    const u64 p = 2 * i + 1;
    out.push_back(static_cast<u32>(p));
    for (u64 j = (p * p - 1) / 2; j <= half; j += p) composite[j] = true;
  }
  return out;
}

// Process-wide cache of the primes up to the largest limit requested so far.
class PrimeCache {
 public:
  static std::shared_ptr<const std::vector<u32>> get(u64 limit) {
    static std::mutex mu;
    static std::shared_ptr<const std::vector<u32>> table;
    static u64 covered = 0;
    std::lock_guard<std::mutex> lock(mu);
    if (!table || covered < limit) {
      const u64 target = std::max<u64>(limit, 1u << 16);
      table = std::make_shared<const std::vector<u32>>(primes_up_to(target));
      covered = target;
    }
    return table;
  }
};

// Upper bound for sum over primes p > L of p^(-alpha), alpha > 1, L >= 5.
// Primes above 3 are +-1 mod 6, so at most two candidates in each block of six.
inline long double prime_tail_power_sum(long double L, long double alpha) {
  return 2.0L * std::pow(L, -alpha) + std::pow(L, 1.0L - alpha) / (3.0L * (alpha - 1.0L));
}

}  // namespace sqfree
