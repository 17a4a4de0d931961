#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <vector>

#include "sqfree/arith/primality.hpp"
#include "sqfree/arith/sieve.hpp"

namespace sqfree {

inline constexpr u64 kUnlimitedBudget = std::numeric_limits<u64>::max();

// Trial division covers primes below this bound before rho starts.
inline constexpr u32 kTrialDivisionBound = 1024;

// Stage-one bound of the p-1 pass run ahead of rho on inputs above 63 bits.
inline constexpr u32 kPm1Bound = 20000;

struct Factorization {
  std::vector<std::pair<BigInt, unsigned>> factors;  // increasing primes
  BigInt cofactor = 1;                               // unfactored composite part, 1 when complete
  bool complete = true;

  BigInt product() const {
    BigInt r = cofactor;
    for (const auto& [p, e] : factors) {
      BigInt pe;
      mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
      r *= pe;
    }
    return r;
  }
};

// Modular arithmetic over GMP integers with the Mont64/Mont128 interface.
class ModBig {
 public:
  using value_type = BigInt;
  explicit ModBig(BigInt n) : n_(std::move(n)) {}
  const BigInt& modulus() const { return n_; }
  BigInt one() const { return 1; }
  BigInt to(const BigInt& a) const {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), n_.get_mpz_t());
    return r;
  }
  BigInt from(const BigInt& a) const { return a; }
  BigInt mul(const BigInt& a, const BigInt& b) const {
    BigInt r = a * b;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), n_.get_mpz_t());
    return r;
  }
  BigInt add(const BigInt& a, const BigInt& b) const {
    BigInt r = a + b;
    if (r >= n_) r -= n_;
    return r;
  }
  BigInt sub(const BigInt& a, const BigInt& b) const {
    BigInt r = a - b;
    if (r < 0) r += n_;
    return r;
  }
  BigInt pow(const BigInt& a, const BigInt& e) const {
    BigInt r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), n_.get_mpz_t());
    return r;
  }

 private:
  BigInt n_;
};

namespace detail {

inline u64 gcd_mod(const Mont64& mt, u64 v) { return gcd_u64(v, mt.modulus()); }
inline u128 gcd_mod(const Mont128& mt, u128 v) { return gcd_u128(v, mt.modulus()); }
inline BigInt gcd_mod(const ModBig& mt, const BigInt& v) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), v.get_mpz_t(), mt.modulus().get_mpz_t());
  return g;
}

inline u64 from_hash(const Mont64&, u64 h) { return h; }
inline u128 from_hash(const Mont128&, u64 h) { return (static_cast<u128>(mix64(h)) << 64) | h; }
inline BigInt from_hash(const ModBig&, u64 h) { return to_big((static_cast<u128>(mix64(h)) << 64) | h); }

// Brent's cycle-finding rho on an odd composite modulus; parameters come from `seed`.
// Returns a nontrivial factor, or 0 (as value_type) when the iteration budget runs out.
template <class M>
typename M::value_type brent_rho(const M& mt, u64 seed, u64& budget) {
  using V = typename M::value_type;
  const V n = mt.modulus();
  constexpr u64 kBatch = 128;
  for (u64 attempt = 0;; ++attempt) {
    const u64 h = hash_combine(seed, attempt);
    const V c = mt.to(from_hash(mt, mix64(h)) % (n - 1) + 1);
    V y = mt.to(from_hash(mt, mix64(h + 1)));
    V x = y, ys = y, q = mt.one();
    V g = V{1};
    auto f = [&](const V& v) { return mt.add(mt.mul(v, v), c); };
    u64 r = 1;
    while (g == V{1}) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == V{1}; k += kBatch) {
        ys = y;
        const u64 steps = std::min(kBatch, r - k);
        if (budget != kUnlimitedBudget) {
          if (budget < steps) {
            budget = 0;
            return V{0};
          }
          budget -= steps;
        }
        for (u64 i = 0; i < steps; ++i) {
          y = f(y);
          q = mt.mul(q, x > y ? mt.sub(x, y) : mt.sub(y, x));
        }
        g = gcd_mod(mt, q);
      }
      r <<= 1;
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd_mod(mt, x > ys ? mt.sub(x, ys) : mt.sub(ys, x));
      } while (g == V{1});
    }
    if (g != n) return g;
  }
}

// Pollard p-1 with base 3 and smoothness bound B1; returns a nontrivial factor or 1.
// When every prime factor is caught at once the exponent is replayed one prime at a time.
template <class M>
typename M::value_type pollard_pm1(const M& mt, u32 B1) {
  using V = typename M::value_type;
  static const std::vector<u32> primes = primes_up_to(kPm1Bound);
  auto prime_power = [&](u32 q) {
    u64 qk = q;
    while (qk <= B1 / q) qk *= q;
    return qk;
  };
  const V start = mt.to(V{3});
  V a = start;
  for (u32 q : primes) {
    if (q > B1) break;
    a = mt.pow(a, V{prime_power(q)});
  }
  V g = gcd_mod(mt, mt.sub(a, mt.one()));
  if (g == V{1}) return V{1};
  if (g != mt.modulus()) return g;
  a = start;
  for (u32 q : primes) {
    if (q > B1) break;
    a = mt.pow(a, V{prime_power(q)});
    g = gcd_mod(mt, mt.sub(a, mt.one()));
    if (g == mt.modulus()) return V{1};
    if (g != V{1}) return g;
  }
  return V{1};
}

template <class M>
typename M::value_type split(const M& mt, u64 seed, u64& budget) {
  using V = typename M::value_type;
  const V f = pollard_pm1(mt, kPm1Bound);
  if (f != V{1}) return f;
  return brent_rho(mt, seed, budget);
}

// One nontrivial factor of an odd composite n that is not a perfect power; 0 on budget exhaustion.
inline BigInt find_factor(const BigInt& n, u64& budget) {
  const u64 seed = hash_big(n);
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  if (bits <= 63) {
    Mont64 mt(static_cast<u64>(to_u128(n)));
    return to_big(static_cast<u128>(brent_rho(mt, seed, budget)));
  }
  if (bits <= 126) {
    Mont128 mt(to_u128(n));
    return to_big(split(mt, seed, budget));
  }
  ModBig mt(n);
  return split(mt, seed, budget);
}

}  // namespace detail

// Trial division to kTrialDivisionBound, then p-1 and Brent rho recursing on composites.
// `budget` caps the total number of rho iterations; kUnlimitedBudget always completes.
inline Factorization factorize(const BigInt& n, u64 budget = kUnlimitedBudget) {
  if (n == 0) throw DomainError("factorize: n must be nonzero");
  BigInt m = abs(n);
  std::map<BigInt, unsigned> found;
  static const std::vector<u32> small = primes_up_to(kTrialDivisionBound);
  for (u32 p : small) {
    if (m == 1) break;
    if (BigInt(p) * p > m) break;
    unsigned e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      ++e;
    }
    if (e) found[BigInt(p)] += e;
  }
  Factorization out;
  std::vector<std::pair<BigInt, unsigned>> work;
  if (m > 1) work.emplace_back(m, 1);
  while (!work.empty()) {
    auto [c, mult] = work.back();
    work.pop_back();
    if (c == 1) continue;
    if (is_prime(c)) {
      found[c] += mult;
      continue;
    }
    // Perfect powers defeat rho's cycle structure; peel them with exact roots.
    bool split = false;
    for (unsigned k = 2; k <= 64 && !split; ++k) {
      if (mpz_sizeinbase(c.get_mpz_t(), 2) < 2 * k) break;
      BigInt root;
      if (mpz_root(root.get_mpz_t(), c.get_mpz_t(), k) != 0) {
        work.emplace_back(root, mult * k);
        split = true;
      }
    }
    if (split) continue;
    const BigInt f = detail::find_factor(c, budget);
    if (f == 0) {
      BigInt cm;
      mpz_pow_ui(cm.get_mpz_t(), c.get_mpz_t(), mult);
      out.cofactor *= cm;
      out.complete = false;
      continue;
    }
    BigInt g = c / f;
    // Pull shared factors apart so the two pieces are handled independently.
    BigInt common;
    mpz_gcd(common.get_mpz_t(), f.get_mpz_t(), g.get_mpz_t());
    if (common == 1) {
      work.emplace_back(f, mult);
      work.emplace_back(g, mult);
    } else {
      work.emplace_back(common, mult * 2);
      work.emplace_back(f / common, mult);
      work.emplace_back(g / common, mult);
    }
  }
  for (const auto& [p, e] : found) out.factors.emplace_back(p, e);
  return out;
}

enum class SquarefreeStatus { SquareFree, NotSquareFree, Unknown };

// Classifies m > 0 whose prime factors all exceed `bound`.
// Unknown only when factorization runs out of `budget` without finding a square;
// budget 0 stops after the size and perfect-square tests.
inline SquarefreeStatus classify_rough_cofactor(const BigInt& m, u64 bound, u64 budget = kUnlimitedBudget) {
  if (m == 1) return SquarefreeStatus::SquareFree;
  const BigInt b = static_cast<unsigned long>(bound);
  if (m < b * b) return SquarefreeStatus::SquareFree;
  if (mpz_perfect_square_p(m.get_mpz_t())) return SquarefreeStatus::NotSquareFree;
  if (m < b * b * b) return SquarefreeStatus::SquareFree;  // p or pq with p != q
  if (budget == 0) return SquarefreeStatus::Unknown;
  if (is_prime(m)) return SquarefreeStatus::SquareFree;
  const Factorization f = factorize(m, budget);
  for (const auto& [p, e] : f.factors)
    if (e > 1) return SquarefreeStatus::NotSquareFree;
  return f.complete ? SquarefreeStatus::SquareFree : SquarefreeStatus::Unknown;
}

// Exact: every prime square divisor of |n| is detected.
inline bool is_squarefree(const BigInt& n) {
  if (n == 0) throw DomainError("is_squarefree: 0 is divisible by every square");
  BigInt m = abs(n);
  static const std::vector<u32> small = primes_up_to(kTrialDivisionBound);
  for (u32 p : small) {
    if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      if (mpz_divisible_ui_p(m.get_mpz_t(), p)) return false;
    }
  }
  return classify_rough_cofactor(m, kTrialDivisionBound) == SquarefreeStatus::SquareFree;
}

}  // namespace sqfree
