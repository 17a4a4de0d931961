#pragma once

#include <algorithm>
#include <boost/container/small_vector.hpp>
#include <vector>

#include "sqfree/arith/montgomery.hpp"
#include "sqfree/common.hpp"

namespace sqfree {

// Prime field with p < 2^32; products fit in 64 bits.
struct FpSmall {
  using elem = u64;
  using poly = boost::container::small_vector<u64, 8>;
  u64 p;

  explicit FpSmall(u64 prime) : p(prime) {}
  elem zero() const { return 0; }
  elem one() const { return 1 % p; }
  elem add(elem a, elem b) const {
    const u64 s = a + b;
    return s >= p ? s - p : s;
  }
  elem sub(elem a, elem b) const { return a >= b ? a - b : a + p - b; }
  elem neg(elem a) const { return a ? p - a : 0; }
  elem mul(elem a, elem b) const { return a * b % p; }
  elem inv(elem a) const { return invmod64(a, p); }
  elem from_big(const BigInt& v) const { return mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(p)); }
  elem from_u64(u64 v) const { return v % p; }
  BigInt to_big(elem a) const { return BigInt(static_cast<unsigned long>(a)); }
  BigInt half_order() const { return BigInt(static_cast<unsigned long>((p - 1) / 2)); }
  BigInt order() const { return BigInt(static_cast<unsigned long>(p)); }
};

// Prime field of arbitrary size.
struct FpBig {
  using elem = BigInt;
  using poly = std::vector<BigInt>;
  BigInt p;

  explicit FpBig(BigInt prime) : p(std::move(prime)) {}
  elem zero() const { return 0; }
  elem one() const { return 1; }
  elem reduce(BigInt v) const {
    mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
    return v;
  }
  elem add(const elem& a, const elem& b) const { return reduce(a + b); }
  elem sub(const elem& a, const elem& b) const { return reduce(a - b); }
  elem neg(const elem& a) const { return reduce(-a); }
  elem mul(const elem& a, const elem& b) const { return reduce(a * b); }
  elem inv(const elem& a) const {
    BigInt r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()) == 0) throw DomainError("FpBig: not invertible");
    return r;
  }
  elem from_big(const BigInt& v) const { return reduce(v); }
  elem from_u64(u64 v) const { return reduce(sqfree::to_big(static_cast<u128>(v))); }
  BigInt to_big(const elem& a) const { return a; }
  BigInt half_order() const { return (p - 1) / 2; }
  BigInt order() const { return p; }
};

namespace ff {

template <class F>
bool is_zero_elem(const F& f, const typename F::elem& a) {
  return a == f.zero();
}

template <class F>
void trim(const F& f, typename F::poly& a) {
  while (!a.empty() && is_zero_elem(f, a.back())) a.pop_back();
}

template <class F>
int deg(const typename F::poly& a) {
  return static_cast<int>(a.size()) - 1;
}

template <class F>
void make_monic(const F& f, typename F::poly& a) {
  if (a.empty()) return;
  const auto li = f.inv(a.back());
  for (auto& c : a) c = f.mul(c, li);
}

// a mod m with m monic and nonzero.
template <class F>
void reduce_mod(const F& f, typename F::poly& a, const typename F::poly& m) {
  const int dm = deg<F>(m);
  trim(f, a);
  for (int i = deg<F>(a); i >= dm; --i) {
    const auto c = a[i];
    if (is_zero_elem(f, c)) continue;
    for (int j = 0; j < dm; ++j) a[i - dm + j] = f.sub(a[i - dm + j], f.mul(c, m[j]));
    a[i] = f.zero();
  }
  if (static_cast<int>(a.size()) > dm) a.resize(static_cast<std::size_t>(std::max(dm, 0)));
  trim(f, a);
}

template <class F>
typename F::poly mul(const F& f, const typename F::poly& a, const typename F::poly& b) {
  typename F::poly r;
  if (a.empty() || b.empty()) return r;
  r.assign(a.size() + b.size() - 1, f.zero());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
  return r;
}

template <class F>
typename F::poly mulmod(const F& f, const typename F::poly& a, const typename F::poly& b, const typename F::poly& m) {
  auto r = mul(f, a, b);
  reduce_mod(f, r, m);
  return r;
}

// base^e mod m for monic m.
template <class F>
typename F::poly powmod(const F& f, typename F::poly base, BigInt e, const typename F::poly& m) {
  typename F::poly r{f.one()};
  reduce_mod(f, r, m);
  reduce_mod(f, base, m);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = mulmod(f, r, r, m);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = mulmod(f, r, base, m);
  }
  return r;
}

// Quotient and remainder of a by nonzero b.
template <class F>
void divmod(const F& f, typename F::poly a, const typename F::poly& b, typename F::poly& q, typename F::poly& r) {
  trim(f, a);
  const int db = deg<F>(b);
  const auto li = f.inv(b.back());
  q.assign(static_cast<std::size_t>(std::max(0, deg<F>(a) - db + 1)), f.zero());
  for (int i = deg<F>(a); i >= db; --i) {
    const auto c = f.mul(a[i], li);
    q[i - db] = c;
    if (is_zero_elem(f, c)) continue;
    for (int j = 0; j <= db; ++j) a[i - db + j] = f.sub(a[i - db + j], f.mul(c, b[j]));
  }
  trim(f, a);
  r = std::move(a);
  trim(f, q);
}

// Monic gcd.
template <class F>
typename F::poly gcd(const F& f, typename F::poly a, typename F::poly b) {
  trim(f, a);
  trim(f, b);
  while (!b.empty()) {
    typename F::poly q, r;
    divmod(f, a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  make_monic(f, a);
  return a;
}

template <class F>
typename F::elem eval(const F& f, const typename F::poly& a, const typename F::elem& t) {
  typename F::elem acc = f.zero();
  for (std::size_t i = a.size(); i-- > 0;) acc = f.add(f.mul(acc, t), a[i]);
  return acc;
}

// Roots of a monic polynomial that splits into distinct linear factors (equal-degree splitting).
template <class F>
void split_linear(const F& f, const typename F::poly& g, u64 seed, std::vector<typename F::elem>& out) {
  const int d = deg<F>(g);
  if (d <= 0) return;
  if (d == 1) {
    out.push_back(f.neg(g[0]));
    return;
  }
  const BigInt half = f.half_order();
  for (u64 k = 0;; ++k) {
    const u64 h = hash_combine(seed, k);
    typename F::poly shifted{f.from_u64(h), f.one()};  // t + a
    auto w = powmod(f, shifted, half, g);
    if (w.empty()) w.push_back(f.zero());
    w[0] = f.sub(w[0], f.one());
    trim(f, w);
    auto c = gcd(f, g, w);
    const int dc = deg<F>(c);
    if (dc > 0 && dc < d) {
      typename F::poly q, r;
      divmod(f, g, c, q, r);
      make_monic(f, q);
      split_linear(f, c, mix64(seed + 2 * k + 1), out);
      split_linear(f, q, mix64(seed + 2 * k + 2), out);
      return;
    }
  }
}

// Below this prime size roots are found by scanning every residue.
inline constexpr u64 kRootScanBound = 64;

// Sorted distinct roots in [0, p) of a polynomial given mod p; `all` is set when it vanishes identically.
template <class F>
std::vector<typename F::elem> roots(const F& f, typename F::poly a, u64 seed, bool& all) {
  trim(f, a);
  all = a.empty();
  std::vector<typename F::elem> out;
  if (all || deg<F>(a) == 0) return out;
  if (f.order() < kRootScanBound) {
    const u64 p = f.order().get_ui();
    for (u64 t = 0; t < p; ++t)
      if (is_zero_elem(f, eval(f, a, f.from_u64(t)))) out.push_back(f.from_u64(t));
    return out;
  }
  make_monic(f, a);
  typename F::poly x{f.zero(), f.one()};
  auto xp = powmod(f, x, f.order(), a);  // t^p mod a
  xp.resize(std::max<std::size_t>(xp.size(), 2), f.zero());
  xp[1] = f.sub(xp[1], f.one());
  trim(f, xp);
  auto g = gcd(f, a, xp);
  split_linear(f, g, seed, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ff
}  // namespace sqfree
