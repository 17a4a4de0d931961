#pragma once

#include "sqfree/common.hpp"

namespace sqfree {

// 64x64 -> 128 and 128x128 -> 256 helpers.
struct U256 {
  u128 hi, lo;
};

inline U256 mul_full(u128 a, u128 b) {
  const u64 a0 = static_cast<u64>(a), a1 = static_cast<u64>(a >> 64);
  const u64 b0 = static_cast<u64>(b), b1 = static_cast<u64>(b >> 64);
  const u128 p00 = static_cast<u128>(a0) * b0;
  const u128 p01 = static_cast<u128>(a0) * b1;
  const u128 p10 = static_cast<u128>(a1) * b0;
  const u128 p11 = static_cast<u128>(a1) * b1;
  const u128 mid = (p00 >> 64) + static_cast<u64>(p01) + static_cast<u64>(p10);
  U256 r;
  r.lo = (mid << 64) | static_cast<u64>(p00);
  r.hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
  return r;
}

// Montgomery arithmetic modulo an odd n < 2^64, R = 2^64.
class Mont64 {
 public:
  using value_type = u64;

  explicit Mont64(u64 n) : n_(n) {
    u64 inv = n;
    for (int i = 0; i < 5; ++i) inv *= 2 - n * inv;
    ninv_ = inv;
    const u64 r1 = static_cast<u64>(-n) % n;
    r2_ = static_cast<u64>((static_cast<u128>(r1) * r1) % n);
    one_ = r1;
  }

  u64 modulus() const { return n_; }
  u64 one() const { return one_; }

  // Signed REDC: T - m*n has zero low word, result lands in (-n, n).
  u64 reduce(u128 t) const {
    const u64 m = static_cast<u64>(t) * ninv_;
    const u64 th = static_cast<u64>(t >> 64);
    const u64 mh = static_cast<u64>((static_cast<u128>(m) * n_) >> 64);
    return th >= mh ? th - mh : th - mh + n_;
  }
  u64 mul(u64 a, u64 b) const { return reduce(static_cast<u128>(a) * b); }
  u64 to(u64 a) const { return mul(a % n_, r2_); }
  u64 from(u64 a) const { return reduce(a); }
  u64 add(u64 a, u64 b) const {
    const u64 s = a + b;
    return (s < a || s >= n_) ? s - n_ : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a - b + n_; }
  u64 pow(u64 a, u64 e) const {
    u64 r = one_;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

 private:
  u64 n_, ninv_, r2_, one_;
};

// Montgomery arithmetic modulo an odd n < 2^127, R = 2^128.
class Mont128 {
 public:
  using value_type = u128;

  explicit Mont128(u128 n) : n_(n) {
    u128 inv = n;
    for (int i = 0; i < 6; ++i) inv *= 2 - n * inv;
    ninv_ = inv;
    u128 r = (-n) % n;
    one_ = r;
    for (int i = 0; i < 128; ++i) r = add(r, r);
    r2_ = r;
  }

  u128 modulus() const { return n_; }
  u128 one() const { return one_; }

  u128 reduce(U256 t) const {
    const u128 m = t.lo * ninv_;
    const u128 mh = mul_full(m, n_).hi;
    return t.hi >= mh ? t.hi - mh : t.hi - mh + n_;
  }
  u128 mul(u128 a, u128 b) const { return reduce(mul_full(a, b)); }
  u128 to(u128 a) const { return mul(a % n_, r2_); }
  u128 from(u128 a) const { return reduce(U256{0, a}); }
  u128 add(u128 a, u128 b) const {
    const u128 s = a + b;
    return s >= n_ ? s - n_ : s;
  }
  u128 sub(u128 a, u128 b) const { return a >= b ? a - b : a - b + n_; }
  u128 pow(u128 a, u128 e) const {
    u128 r = one_;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

 private:
  u128 n_, ninv_, r2_, one_;
};

inline u64 gcd_u64(u64 a, u64 b) {
  while (b) {
    const u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline int ctz128(u128 v) {
  const u64 lo = static_cast<u64>(v);
  return lo ? __builtin_ctzll(lo) : 64 + __builtin_ctzll(static_cast<u64>(v >> 64));
}

// Binary gcd.
inline u128 gcd_u128(u128 a, u128 b) {
  if (a == 0) return b;
  if (b == 0) return a;
  const int za = ctz128(a), zb = ctz128(b);
  const int k = za < zb ? za : zb;
  a >>= za;
  b >>= zb;
  while (a != b) {
    if (a > b) {
      a -= b;
      a >>= ctz128(a);
    } else {
      b -= a;
      b >>= ctz128(b);
    }
  }
  return a << k;
}

inline u64 mulmod64(u64 a, u64 b, u64 m) { return static_cast<u64>((static_cast<u128>(a) * b) % m); }

inline u64 powmod64(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

inline u64 invmod64(u64 a, u64 m) {
  i128 t = 0, nt = 1;
  i128 r = m, nr = a % m;
  while (nr != 0) {
    const i128 q = r / nr;
    i128 tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw DomainError("invmod64: not invertible");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

}  // namespace sqfree
