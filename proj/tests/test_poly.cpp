#include <catch_amalgamated.hpp>

#include <random>

#include "sqfree/poly.hpp"

using namespace sqfree;

namespace {

std::vector<IntPolynomial> small_corpus() {
  std::vector<IntPolynomial> out;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c)
        for (int d = -2; d <= 2; ++d) {
          IntPolynomial P{a, b, c, d};
          if (!P.is_zero()) out.push_back(P);
        }
  return out;
}

// Degree of gcd(P, P') over Q via rational Euclid.
int rational_gcd_degree(const IntPolynomial& P) {
  using V = std::vector<mpq_class>;
  auto trim = [](V& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  V a, b;
  for (const auto& c : P.coefficients()) a.emplace_back(c);
  const IntPolynomial dP = P.derivative();
  for (const auto& c : dP.coefficients()) b.emplace_back(c);
  trim(a);
  trim(b);
  while (!b.empty()) {
    while (a.size() >= b.size() && !a.empty()) {
      const mpq_class q = a.back() / b.back();
      const std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
      trim(a);
    }
    std::swap(a, b);
  }
  return static_cast<int>(a.size()) - 1;
}

}  // namespace

TEST_CASE("parse, evaluate and content", "[poly]") {
  const auto P = IntPolynomial::parse("1,0,0,1");
  CHECK(P.degree() == 3);
  CHECK(P.evaluate(2) == 9);
  CHECK(IntPolynomial().evaluate(7) == 0);
  CHECK(IntPolynomial::parse("-3,2,5").evaluate(10) == 517);
  CHECK(IntPolynomial::parse("1,2,0,0").degree() == 1);
  CHECK(P.to_string() == "1,0,0,1");
  CHECK_THROWS_AS(IntPolynomial::parse("1,,2"), DomainError);
  CHECK_THROWS_AS(IntPolynomial::parse("1,x"), DomainError);
  CHECK(content(IntPolynomial{6, 4, 2}) == 2);
  CHECK(content(IntPolynomial{1, 0, 1}) == 1);
  CHECK(content(IntPolynomial{12, 18, 30}) == 6);
  CHECK_THROWS_AS(content(IntPolynomial()), DomainError);
}

TEST_CASE("discriminant examples and closed forms", "[poly]") {
  CHECK(discriminant(IntPolynomial{1, 0, 1}) == -4);
  CHECK(discriminant(IntPolynomial{0, -1, 0, 1}) == 4);
  CHECK(discriminant(IntPolynomial{1, -2, 1}) == 0);
  CHECK(discriminant(IntPolynomial{5, 3}) == 1);
  CHECK_THROWS_AS(discriminant(IntPolynomial{7}), DomainError);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> U(-1000000, 1000000);
  for (int i = 0; i < 300; ++i) {
    const BigInt d = U(rng), c = U(rng), b = U(rng);
    BigInt a = U(rng);
    if (a == 0) a = 1;
    // Cubic a t^3 + b t^2 + c t + d.
    const BigInt cubic = b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d;
    CHECK(discriminant(IntPolynomial(std::vector<BigInt>{d, c, b, a})) == cubic);
    CHECK(discriminant(IntPolynomial(std::vector<BigInt>{c, b, a})) == b * b - 4 * a * c);
  }
}

TEST_CASE("discriminant vanishes exactly when gcd(P, P') is nonconstant", "[poly]") {
  int zero_count = 0;
  for (const auto& P : small_corpus()) {
    if (P.degree() < 1) continue;
    const bool repeated = rational_gcd_degree(P) > 0;
    REQUIRE((discriminant(P) == 0) == repeated);
    zero_count += repeated;
  }
  CHECK(zero_count > 0);
}

TEST_CASE("roots_mod_prime examples", "[poly]") {
  const IntPolynomial P{1, 0, 1};
  CHECK(roots_mod_prime(P, 5).roots == std::vector<BigInt>{2, 3});
  CHECK(roots_mod_prime(P, 3).roots.empty());
  CHECK(roots_mod_prime(IntPolynomial{0, 1}, 7).roots == std::vector<BigInt>{0});
  const auto all = roots_mod_prime(IntPolynomial{7, 14}, 7);
  CHECK(all.all);
  CHECK(all.roots.empty());
}

TEST_CASE("root finding matches residue scans beyond the scan bound", "[poly]") {
  std::mt19937_64 rng(11);
  const auto primes = primes_up_to(3000);
  for (u32 p : primes) {
    if (p < 60) continue;
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<BigInt> c;
      const int d = 1 + static_cast<int>(rng() % 5);
      for (int i = 0; i <= d; ++i) c.emplace_back(static_cast<long>(rng() % 2001) - 1000);
      if (c.back() == 0) c.back() = 1;
      const IntPolynomial P(c);
      std::vector<BigInt> want;
      for (u64 t = 0; t < p; ++t) {
        BigInt v = P.evaluate(BigInt(static_cast<unsigned long>(t)));
        if (mpz_divisible_ui_p(v.get_mpz_t(), p)) want.emplace_back(static_cast<unsigned long>(t));
      }
      const auto got = roots_mod_prime(P, p);
      if (got.all) {
        REQUIRE(want.size() == p);
      } else {
        REQUIRE(got.roots == want);
      }
    }
  }
}

TEST_CASE("root finding over a 61-bit prime field", "[poly]") {
  const BigInt p = (BigInt(1) << 61) - 1;
  const BigInt a = 123456789, b = p - 5, c = BigInt("987654321987654321");
  // (t - a)(t - b)(t - c)(t^2 + 1) has exactly the three linear roots when -1 is a non-residue mod p.
  const IntPolynomial L1(std::vector<BigInt>{-a, 1}), L2(std::vector<BigInt>{-b, 1}), L3(std::vector<BigInt>{-c, 1});
  auto mul = [](const IntPolynomial& x, const IntPolynomial& y) {
    std::vector<BigInt> r(x.coefficients().size() + y.coefficients().size() - 1, 0);
    for (std::size_t i = 0; i < x.coefficients().size(); ++i)
      for (std::size_t j = 0; j < y.coefficients().size(); ++j) r[i + j] += x.coefficients()[i] * y.coefficients()[j];
    return IntPolynomial(r);
  };
  const IntPolynomial P = mul(mul(mul(L1, L2), L3), IntPolynomial{1, 0, 1});
  REQUIRE(p % 4 == 3);
  const auto got = roots_mod_prime(P, p);
  CHECK(got.roots == std::vector<BigInt>{a, c, b});
}

TEST_CASE("rho_prime_square examples", "[poly]") {
  CHECK(rho_prime_square(IntPolynomial{1, 0, 1}, 5).count == 2);
  CHECK(rho_prime_square(IntPolynomial{0, 0, 1}, 3).count == 3);
  CHECK(rho_prime_square(IntPolynomial{3, 0, 1}, 3).count == 0);
  CHECK(rho_prime_square(IntPolynomial{0, 4}, 2).count == 4);
  CHECK(rho_prime_square(IntPolynomial{0, 4}, 2).case_tag == LocalCase::PrimeSquareDividesP);
  CHECK(rho_prime_square(IntPolynomial{2, 2}, 2).case_tag == LocalCase::PrimeDividesP);
  CHECK(rho_prime_square(IntPolynomial{1, 0, 1}, 2).case_tag == LocalCase::Ramified);
  CHECK(rho_prime_square(IntPolynomial{1, 0, 1}, 5).case_tag == LocalCase::Unramified);
}

TEST_CASE("rho_prime_square equals rho_brute on the small corpus with case bounds", "[poly]") {
  for (const auto& P : small_corpus()) {
    const int d = P.degree();
    const std::optional<BigInt> D = d >= 1 ? std::optional<BigInt>(discriminant(P)) : std::nullopt;
    for (u64 ell : {2, 3, 5, 7}) {
      const auto lc = rho_prime_square(P, ell, D);
      REQUIRE(lc.count == rho_brute(P, ell * ell));
      const BigInt L = ell;
      switch (lc.case_tag) {
        case LocalCase::PrimeSquareDividesP: REQUIRE(lc.count <= L * L); break;
        case LocalCase::PrimeDividesP: REQUIRE(lc.count <= L * d); break;
        case LocalCase::Unramified: REQUIRE(lc.count <= d); break;
        case LocalCase::Ramified: REQUIRE(lc.count <= d * (L + 1)); break;
      }
    }
  }
}

TEST_CASE("rho_prime_square equals rho_brute on random polynomials", "[poly]") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 400; ++i) {
    std::vector<BigInt> c;
    const int d = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k <= d; ++k) c.emplace_back(static_cast<long>(rng() % 4001) - 2000);
    if (c.back() == 0) c.back() = 3;
    const IntPolynomial P(c);
    for (u64 ell : {2, 3, 5, 7, 11, 13, 67, 101, 331}) REQUIRE(rho_prime_square(P, ell).count == rho_brute(P, ell * ell));
  }
  const IntPolynomial Q{9 * 67 * 67, 0, 1};  // t^2 + 9*67^2 is ramified at 67 with a double root at 0
  CHECK(rho_prime_square(Q, 67).count == rho_brute(Q, 67 * 67));
  CHECK(rho_prime_square(Q, 67).count == 67);
}

TEST_CASE("rho_square multiplicativity and examples", "[poly]") {
  CHECK(rho_square(IntPolynomial{0, 1}, 6) == 1);
  CHECK(rho_square(IntPolynomial{1, 0, 1}, 5) == 2);
  CHECK(rho_square(IntPolynomial{3, 1, 4}, 1) == 1);
  CHECK_THROWS_AS(rho_square(IntPolynomial{0, 1}, 12), DomainError);
  const std::vector<u64> ks = {2, 3, 5, 7, 11, 13};
  for (const auto& P : {IntPolynomial{1, 0, 1}, IntPolynomial{2, 1, 0, 1}, IntPolynomial{0, 0, 1}, IntPolynomial{6, 0, 3}}) {
    for (std::size_t i = 0; i < ks.size(); ++i)
      for (std::size_t j = i + 1; j < ks.size(); ++j) {
        const u64 k1 = ks[i], k2 = ks[j];
        const BigInt r = rho_square(P, k1 * k2);
        CHECK(r == rho_square(P, k1) * rho_square(P, k2));
        CHECK(r == rho_brute(P, k1 * k1 * k2 * k2));
      }
  }
}

TEST_CASE("rho_brute examples and scan bound", "[poly]") {
  CHECK(rho_brute(IntPolynomial{1, 0, 1}, 25) == 2);
  CHECK(rho_brute(IntPolynomial{0, 0, 1}, 4) == 2);
  CHECK(rho_brute(IntPolynomial{5, 1}, 9) == 1);
  CHECK_THROWS_AS(rho_brute(IntPolynomial{5, 1}, 2000000), ResourceError);
}
