#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "sqfree/common.hpp"

namespace sqfree {

using Complex = std::complex<long double>;

inline constexpr long double kPi = 3.141592653589793238462643383279502884L;

namespace detail {

// B_{2k} / (2k)! for k = 1..15.
inline const std::array<long double, 15>& bernoulli_over_factorial() {
  static const std::array<long double, 15> table = [] {
    const long double num[15] = {1.0L,         -1.0L,        1.0L,           -1.0L,          5.0L,
                                 -691.0L,      7.0L,         -3617.0L,       43867.0L,       -174611.0L,
                                 854513.0L,    -236364091.0L, 8553103.0L,    -23749461029.0L, 8615841276005.0L};
    const long double den[15] = {6.0L,   30.0L, 42.0L,   30.0L, 66.0L,   2730.0L, 6.0L,    510.0L,
                                 798.0L, 330.0L, 138.0L, 2730.0L, 6.0L, 870.0L, 14322.0L};
    std::array<long double, 15> out{};
    long double fact = 1;
    for (int k = 1; k <= 15; ++k) {
      fact *= static_cast<long double>((2 * k - 1) * (2 * k));
      out[k - 1] = num[k - 1] / den[k - 1] / fact;
    }
    return out;
  }();
  return table;
}

// log n for n < size, grown on demand; one table per thread.
inline const std::vector<long double>& log_table(long size) {
  thread_local std::vector<long double> logs{0.0L};
  while (static_cast<long>(logs.size()) < size) logs.push_back(std::log(static_cast<long double>(logs.size())));
  return logs;
}

inline constexpr long double kTwoPi = 6.283185307179586476925286766559005768L;

// Phase reduced to [-pi, pi] in extended precision, so the double-precision
// trigonometry downstream sees an O(1) argument. Terms of the Dirichlet sums are
// formed in double (about 1e-16 relative each) and accumulated in long double.
inline long double reduce_phase(long double ph) { return ph - kTwoPi * std::nearbyint(ph / kTwoPi); }

// Euler-Maclaurin with N direct terms and 15 Bernoulli corrections; used for Re(s) >= 1/2.
inline Complex zeta_em(Complex s) {
  const long double t = std::fabs(s.imag());
  const long N = static_cast<long>(std::ceil(t / 2)) + 20;
  const auto& logs = log_table(N);
  long double re = 0, im = 0;
  for (long n = N - 1; n >= 1; --n) {
    const double mag = std::exp(static_cast<double>(-s.real() * logs[n]));
    const double ph = static_cast<double>(reduce_phase(s.imag() * logs[n]));
    re += mag * std::cos(ph);
    im -= mag * std::sin(ph);
  }
  Complex sum(re, im);
  const long double lnN = std::log(static_cast<long double>(N));
  const Complex Ns = std::exp(-s * lnN);  // N^{-s}
  sum += Ns * static_cast<long double>(N) / (s - 1.0L) + Ns / 2.0L;
  // Term k: B_2k/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}.
  const auto& bf = bernoulli_over_factorial();
  Complex rising = s;
  Complex power = Ns / static_cast<long double>(N);
  const long double invN2 = 1.0L / (static_cast<long double>(N) * N);
  for (int k = 1; k <= 15; ++k) {
    sum += bf[k - 1] * rising * power;
    rising *= (s + static_cast<long double>(2 * k - 1)) * (s + static_cast<long double>(2 * k));
    power *= invN2;
  }
  return sum;
}

// log sin(z) without overflow for large |Im z|; any branch.
inline Complex log_sin(Complex z) {
  const Complex I(0, 1);
  if (z.imag() > 1) return -I * z + std::log(0.5L * I) + std::log(1.0L - std::exp(2.0L * I * z));
  if (z.imag() < -1) return I * z - std::log(2.0L * I) + std::log(1.0L - std::exp(-2.0L * I * z));
  return std::log(std::sin(z));
}

}  // namespace detail

// log Gamma(z) by Stirling's series after shifting Re z up when |Im z| is small; any branch.
inline Complex log_gamma(Complex z) {
  Complex shift = 0;
  if (std::fabs(z.imag()) < 15) {
    if (z.real() <= 0 && z.imag() == 0 && std::floor(z.real()) == z.real())
      throw DomainError("log_gamma: pole at a non-positive integer");
    while (z.real() < 15) {
      shift += std::log(z);
      z += 1.0L;
    }
  }
  const long double B[8] = {1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30, 5.0L / 66, -691.0L / 2730, 7.0L / 6, -3617.0L / 510};
  Complex series = 0;
  const Complex inv = 1.0L / z, inv2 = inv * inv;
  Complex p = inv;
  for (int k = 1; k <= 8; ++k) {
    series += B[k - 1] / static_cast<long double>((2 * k) * (2 * k - 1)) * p;
    p *= inv2;
  }
  return (z - 0.5L) * std::log(z) - z + 0.5L * std::log(2 * kPi) + series - shift;
}

inline bool is_positive_integer(Complex s) {
  return s.imag() == 0 && s.real() >= 1 && std::floor(s.real()) == s.real();
}

// chi(s) = 2^s pi^{s-1} Gamma(1-s) sin(pi s / 2), so that zeta(s) = chi(s) zeta(1-s).
// Positive integers are rejected: Gamma(1-s) has poles there.
inline Complex chi(Complex s) {
  if (is_positive_integer(s)) throw DomainError("chi: s must not be a positive integer");
  const Complex logv = s * std::log(2.0L) + (s - 1.0L) * std::log(kPi) + log_gamma(1.0L - s) + detail::log_sin(kPi * s / 2.0L);
  return std::exp(logv);
}

// Riemann zeta: Euler-Maclaurin for Re(s) >= 1/2, the functional equation below.
inline Complex zeta(Complex s) {
  if (s == Complex(1, 0)) throw DomainError("zeta: pole at s = 1");
  if (s.imag() == 0) {
    const long double r = s.real();
    if (r == 0) return -0.5L;
    if (r < 0 && std::fmod(r, 2.0L) == 0) return 0;  // trivial zeros
  }
  if (s.real() >= 0.5L) return detail::zeta_em(s);
  return chi(s) * detail::zeta_em(1.0L - s);
}

inline long double zeta_real(long double s) { return zeta(Complex(s, 0)).real(); }

}  // namespace sqfree
