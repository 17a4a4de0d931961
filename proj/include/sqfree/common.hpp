#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sqfree {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;
using BigInt = mpz_class;
using Rational = mpq_class;

// Invalid mathematical input (n = 0 where n != 0 is required, pole of zeta, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A configured memory or enumeration budget would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical procedure failed to meet its tolerance within its evaluation cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr u64 mix64(u64 z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr u64 hash_combine(u64 h, u64 v) { return mix64(h ^ mix64(v)); }

inline u64 hash_big(const BigInt& n) {
  u64 h = mix64(static_cast<u64>(mpz_sgn(n.get_mpz_t())) + 7);
  const std::size_t limbs = mpz_size(n.get_mpz_t());
  for (std::size_t i = 0; i < limbs; ++i)
    h = hash_combine(h, static_cast<u64>(mpz_getlimbn(n.get_mpz_t(), i)));
  return h;
}

inline BigInt to_big(u128 v) {
  BigInt r = static_cast<unsigned long>(v >> 64);
  r <<= 64;
  r += static_cast<unsigned long>(static_cast<u64>(v));
  return r;
}

inline BigInt to_big(i128 v) {
  if (v >= 0) return to_big(static_cast<u128>(v));
  return -to_big(static_cast<u128>(-(v + 1)) + 1);
}

// Requires 0 <= v < 2^128.
inline bool fits_u128(const BigInt& v) {
  return mpz_sgn(v.get_mpz_t()) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 128;
}

inline bool fits_i128(const BigInt& v) {
  return mpz_sizeinbase(v.get_mpz_t(), 2) <= 126;
}

inline u128 to_u128(const BigInt& v) {
  u128 r = 0;
  const std::size_t limbs = mpz_size(v.get_mpz_t());
  for (std::size_t i = limbs; i-- > 0;)
    r = (r << 64) | static_cast<u64>(mpz_getlimbn(v.get_mpz_t(), i));
  return r;
}

inline i128 to_i128(const BigInt& v) {
  const i128 mag = static_cast<i128>(to_u128(abs(v)));
  return mpz_sgn(v.get_mpz_t()) < 0 ? -mag : mag;
}

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

inline std::string to_string(i128 v) {
  if (v < 0) return "-" + to_string(static_cast<u128>(-(v + 1)) + 1);
  return to_string(static_cast<u128>(v));
}

inline std::string to_string(const BigInt& v) { return v.get_str(); }

inline BigInt parse_big(const std::string& s) {
  BigInt r;
  std::string t = s;
  if (!t.empty() && t.front() == '+') t.erase(t.begin());
  if (t.empty() || r.set_str(t, 10) != 0) throw DomainError("not an integer: '" + s + "'");
  return r;
}

}  // namespace sqfree
