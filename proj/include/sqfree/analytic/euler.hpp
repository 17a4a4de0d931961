#pragma once

#include <cmath>
#include <vector>

#include "sqfree/analytic/zeta.hpp"
#include "sqfree/arith/sieve.hpp"

namespace sqfree {

// Margin kept from the abscissa -3/4 below which the G product stops converging.
inline constexpr long double kGMargin = 0.05L;

struct EulerValue {
  Complex value;
  long double tail_bound = 0;  // |G(s) - value| <= tail_bound
};

// Truncated product G_L(s) = prod over l <= L of (1 + w_l(s)) with u = l^{-s} and
//   w_l = a u + c u^2 - (a / l^2) u^3 - (a / l) u^4,
//   a = 1 / ((l-1)(l+1)^2),  c = (1 + l - l^2) / (l^2 (l-1)(l+1)^2).
// G_L is entire, so contour identities hold for it exactly.
class GProduct {
 public:
  explicit GProduct(u64 prime_limit) : limit_(prime_limit) {
    if (prime_limit < 2) throw DomainError("G: prime limit must be at least 2");
    for (u32 p : primes_up_to(prime_limit)) {
      const long double l = p;
      const long double a = 1.0L / ((l - 1) * (l + 1) * (l + 1));
      terms_.push_back({std::log(l), static_cast<double>(a),
                        static_cast<double>((1 + l - l * l) / (l * l * (l - 1) * (l + 1) * (l + 1))),
                        static_cast<double>(a / (l * l)), static_cast<double>(a / l)});
    }
  }

  u64 prime_limit() const { return limit_; }

  Complex truncated(Complex s) const {
    Complex prod = 1;
    for (const auto& t : terms_) {
      const double mag = std::exp(static_cast<double>(-s.real() * t.log_l));
      const double ph = static_cast<double>(detail::reduce_phase(s.imag() * t.log_l));
      // The factor is 1 + O(l^{-3 - sigma}); forming w in double costs about 1e-16 relative per factor.
      const std::complex<double> u(mag * std::cos(ph), -mag * std::sin(ph));
      const std::complex<double> w = u * (t.a + u * t.c) - u * u * u * (t.a_l2 + u * t.a_l);
      prod *= Complex(1.0L + w.real(), w.imag());
      if (prod == Complex(0, 0)) break;
    }
    return prod;
  }

  // |G - G_L| <= |G_L| (exp(sum over l > L of |w_l|) - 1), with
  // |w_l| <= 2 l^{-3-sigma} + 2 l^{-3-2 sigma} + 2 l^{-5-3 sigma} + 2 l^{-4-4 sigma}.
  long double tail_factor(long double sigma) const {
    const long double L = static_cast<long double>(limit_);
    const long double s = 2 * (prime_tail_power_sum(L, 3 + sigma) + prime_tail_power_sum(L, 3 + 2 * sigma) +
                               prime_tail_power_sum(L, 5 + 3 * sigma) + prime_tail_power_sum(L, 4 + 4 * sigma));
    return std::expm1(s);
  }

  EulerValue operator()(Complex s) const {
    if (s.real() < -0.75L + kGMargin) throw DomainError("G: Re(s) too close to -3/4");
    EulerValue out;
    out.value = truncated(s);
    out.tail_bound = std::abs(out.value) * tail_factor(s.real());
    return out;
  }

 private:
  struct Term {
    long double log_l;
    double a, c, a_l2, a_l;
  };
  u64 limit_;
  std::vector<Term> terms_;
};

inline EulerValue G_euler(Complex s, u64 prime_limit) { return GProduct(prime_limit)(s); }

// 1 / zeta(2)^2 = 36 / pi^4.
inline long double inv_zeta2_squared() { return 36.0L / (kPi * kPi * kPi * kPi); }

struct DirichletValue {
  Complex value;
  long double tail_bound = 0;  // propagated from the G tail only
};

// sum over k of b(k) k^{-s} = zeta(s) zeta(2 + 2s) G(s) / zeta(2)^2.
inline DirichletValue dirichlet_b(Complex s, const GProduct& G) {
  if (s == Complex(1, 0)) throw DomainError("dirichlet_b: pole of zeta(s) at s = 1");
  if (s == Complex(-0.5L, 0)) throw DomainError("dirichlet_b: pole of zeta(2 + 2s) at s = -1/2");
  const EulerValue g = G(s);
  const Complex z = zeta(s) * zeta(2.0L + 2.0L * s) * inv_zeta2_squared();
  return {z * g.value, std::abs(z) * g.tail_bound};
}

inline DirichletValue dirichlet_b(Complex s, u64 prime_limit) { return dirichlet_b(s, GProduct(prime_limit)); }

}  // namespace sqfree
