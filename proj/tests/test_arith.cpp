#include <catch_amalgamated.hpp>

#include <random>

#include "sqfree/arith.hpp"

using namespace sqfree;

namespace {

// Segmented sieve of Eratosthenes, independent of build_sieve and primes_up_to.
u64 segmented_prime_count(u64 limit) {
  std::vector<u64> base;
  for (u64 p = 2; p * p <= limit; ++p) {
    bool prime = true;
    for (u64 q = 2; q * q <= p; ++q)
      if (p % q == 0) prime = false;
    if (prime) base.push_back(p);
  }
  const u64 seg = 1 << 15;
  u64 count = 0;
  std::vector<char> mark(seg);
  for (u64 lo = 2; lo <= limit; lo += seg) {
    const u64 hi = std::min(lo + seg - 1, limit);
    std::fill(mark.begin(), mark.end(), 1);
    for (u64 p : base) {
      u64 start = std::max(p * p, (lo + p - 1) / p * p);
      for (u64 m = start; m <= hi; m += p) mark[m - lo] = 0;
    }
    for (u64 n = lo; n <= hi; ++n) count += mark[n - lo];
  }
  return count;
}

}  // namespace

TEST_CASE("build_sieve small tables", "[arith]") {
  const auto t = build_sieve(10);
  const std::vector<int> mu = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1};
  for (int n = 1; n <= 10; ++n) CHECK(t.mobius[n] == mu[n - 1]);
  const auto t2 = build_sieve(2);
  REQUIRE(t2.primes == std::vector<u32>{2});
  CHECK_THROWS_AS(build_sieve(1), DomainError);
  CHECK_THROWS_AS(build_sieve(100000000, 1 << 20), ResourceError);
}

TEST_CASE("prime counts agree with an independent segmented sieve", "[arith]") {
  const u64 frozen = 78498;
  REQUIRE(segmented_prime_count(1000000) == frozen);
  const auto t = build_sieve(1000000);
  CHECK(t.primes.size() == frozen);
  CHECK(primes_up_to(1000000).size() == frozen);
  for (u64 p : {2ULL, 3ULL, 999983ULL}) CHECK(t.smallest_prime_factor[p] == p);
  CHECK(t.smallest_prime_factor[999999] == 3);
}

TEST_CASE("Montgomery multiplication matches GMP", "[arith]") {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 2000; ++i) {
    const u128 n = ((static_cast<u128>(rng()) << 64) | rng()) >> 1 | 1;
    const u128 a = ((static_cast<u128>(rng()) << 64) | rng()) % n;
    const u128 b = ((static_cast<u128>(rng()) << 64) | rng()) % n;
    Mont128 mt(n);
    const u128 got = mt.from(mt.mul(mt.to(a), mt.to(b)));
    const BigInt want = to_big(a) * to_big(b) % to_big(n);
    REQUIRE(to_big(got) == want);
    const u64 n64 = rng() | 1;
    Mont64 m64(n64);
    const u64 a64 = rng() % n64, b64 = rng() % n64;
    REQUIRE(m64.from(m64.mul(m64.to(a64), m64.to(b64))) == mulmod64(a64, b64, n64));
  }
}

TEST_CASE("primality on pseudoprimes and Mersenne numbers", "[arith]") {
  CHECK_FALSE(is_prime_u64(3215031751ULL));        // strong pseudoprime to bases 2, 3, 5, 7
  CHECK_FALSE(is_prime_u64(3825123056546413051ULL));  // strong pseudoprime to bases up to 23
  CHECK_FALSE(is_prime_u64(561));
  CHECK(is_prime_u64(18446744073709551557ULL));  // largest 64-bit prime
  CHECK(is_prime((BigInt(1) << 61) - 1));
  CHECK(is_prime((BigInt(1) << 89) - 1));
  CHECK(is_prime((BigInt(1) << 107) - 1));
  CHECK(is_prime((BigInt(1) << 127) - 1));
  CHECK_FALSE(is_prime((BigInt(1) << 101) - 1));
  // Random inputs below 2^108 against GMP.
  std::mt19937_64 rng(7);
  for (int i = 0; i < 3000; ++i) {
    const BigInt n = to_big((static_cast<u128>(rng() >> 20) << 64) | rng());
    REQUIRE(is_prime(n) == (mpz_probab_prime_p(n.get_mpz_t(), 50) > 0));
  }
}

TEST_CASE("factorize examples", "[arith]") {
  const auto f28 = factorize(28);
  REQUIRE(f28.complete);
  REQUIRE(f28.factors.size() == 2);
  CHECK(f28.factors[0] == std::make_pair(BigInt(2), 2u));
  CHECK(f28.factors[1] == std::make_pair(BigInt(7), 1u));
  const auto f1 = factorize(1);
  CHECK(f1.factors.empty());
  CHECK(f1.cofactor == 1);
  CHECK_THROWS_AS(factorize(0), DomainError);

  const BigInt m61 = (BigInt(1) << 61) - 1, m89 = (BigInt(1) << 89) - 1;
  const auto fm = factorize(m61 * m89);
  REQUIRE(fm.complete);
  REQUIRE(fm.factors.size() == 2);
  CHECK(fm.factors[0].first == m61);
  CHECK(fm.factors[1].first == m89);

  const BigInt sq = BigInt(1000003) * 1000003 * 999983;
  const auto fs = factorize(-sq);
  REQUIRE(fs.complete);
  CHECK(fs.product() == sq);
}

TEST_CASE("factorize honors the rho budget", "[arith]") {
  // Safe primes: p - 1 = 2 * prime, so the p-1 stage cannot split the product.
  const BigInt p = BigInt("1152921504606873143"), q = BigInt("1152923504606873807");
  REQUIRE(is_prime(p));
  REQUIRE(is_prime(q));
  REQUIRE(is_prime((p - 1) / 2));
  REQUIRE(is_prime((q - 1) / 2));
  const auto f = factorize(p * q, 10);
  CHECK_FALSE(f.complete);
  CHECK(f.cofactor == p * q);
  CHECK(f.product() == p * q);
}

TEST_CASE("factorize and is_squarefree agree with sieve oracles up to 1e5", "[arith]") {
  const u64 N = 100000;
  const auto t = build_sieve(N);
  std::vector<char> sqfree(N + 1, 1);
  for (u64 k = 2; k * k <= N; ++k)
    for (u64 m = k * k; m <= N; m += k * k) sqfree[m] = 0;
  for (u64 n = 1; n <= N; ++n) {
    const bool sf = is_squarefree(BigInt(static_cast<unsigned long>(n)));
    REQUIRE(sf == static_cast<bool>(sqfree[n]));
    REQUIRE((t.mobius[n] == 0) == !sf);
    const auto f = factorize(BigInt(static_cast<unsigned long>(n)));
    REQUIRE(f.complete);
    REQUIRE(f.product() == n);
    const auto g = t.factor(n);
    REQUIRE(f.factors.size() == g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      REQUIRE(f.factors[i].first == g[i].first);
      REQUIRE(f.factors[i].second == g[i].second);
    }
  }
  CHECK(is_squarefree(30));
  CHECK_FALSE(is_squarefree(12));
  CHECK(is_squarefree(1));
  CHECK_THROWS_AS(is_squarefree(0), DomainError);
}

TEST_CASE("is_squarefree on large structured inputs", "[arith]") {
  const BigInt p = BigInt("1000000007"), q = BigInt("998244353"), r = (BigInt(1) << 61) - 1;
  CHECK_FALSE(is_squarefree(p * p * q));
  CHECK(is_squarefree(p * q * r));
  CHECK_FALSE(is_squarefree(r * r));
  CHECK_FALSE(is_squarefree(BigInt(6) * p * q * q * r));
  CHECK(is_squarefree(-BigInt(30) * p));
}
