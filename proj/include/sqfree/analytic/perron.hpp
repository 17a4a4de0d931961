#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "sqfree/analytic/euler.hpp"
#include "sqfree/analytic/quadrature.hpp"
#include "sqfree/analytic/zeta.hpp"
#include "sqfree/constants.hpp"

namespace sqfree {

inline constexpr u64 kDefaultContourPrimeLimit = 1000;

struct ContourSpec {
  u64 x = 0;
  long double theta = 0;  // abscissa of the Perron line, > 1
  long double T = 0;      // height
  long double delta = 0;  // left edge at Re(s) = -1/2 - delta
  long double quad_tol = 0;

  // theta = 1 + 1/log x, T = x^omega with omega = (delta + 3/2)/(delta + 2), quad_tol = 1e-8 x^2.
  static ContourSpec defaults(u64 x, long double delta = 0.25L - 1e-3L) {
    if (x < 2) throw DomainError("contour: x must be at least 2");
    ContourSpec c;
    c.x = x;
    c.delta = delta;
    const long double lx = std::log(static_cast<long double>(x));
    c.theta = 1 + 1 / lx;
    c.T = std::pow(static_cast<long double>(x), (delta + 1.5L) / (delta + 2));
    c.quad_tol = 1e-8L * static_cast<long double>(x) * static_cast<long double>(x);
    return c;
  }

  void validate() const {
    if (x < 2) throw DomainError("contour: x must be at least 2");
    if (!(theta > 1 && theta <= 2)) throw DomainError("contour: theta must lie in (1, 2]");
    if (!(T >= 2)) throw DomainError("contour: T must be at least 2");
    if (!(delta > 0 && delta < 0.25L)) throw DomainError("contour: delta must lie in (0, 1/4)");
    if (!(quad_tol > 0)) throw DomainError("contour: quad_tol must be positive");
  }
};

// F(s) = zeta(s) zeta(2 + 2s) G_L(s) x^{s+1} / (s (s+1)).
class PerronIntegrand {
 public:
  PerronIntegrand(u64 x, u64 prime_limit) : lnx_(std::log(static_cast<long double>(x))), G_(prime_limit) {}

  Complex operator()(Complex s) const {
    return zeta(s) * zeta(2.0L + 2.0L * s) * G_.truncated(s) * std::exp((s + 1.0L) * lnx_) / (s * (s + 1.0L));
  }

  const GProduct& G() const { return G_; }
  long double log_x() const { return lnx_; }

 private:
  long double lnx_;
  GProduct G_;
};

// (1/2 pi i) integral over theta - iT .. theta + iT of y^s / (s (s+1)) ds.
inline QuadratureResult kernel_integral(long double y, long double theta, long double T, long double tol = 1e-10L) {
  if (!(y > 0)) throw DomainError("kernel_integral: y must be positive");
  if (!(theta > 1 && theta <= 2)) throw DomainError("kernel_integral: theta must lie in (1, 2]");
  if (!(T >= 2)) throw DomainError("kernel_integral: T must be at least 2");
  const long double ly = std::log(y);
  auto f = [&](long double t) {
    const Complex s(theta, t);
    return std::exp(s * ly) / (s * (s + 1.0L));
  };
  QuadratureOptions o;
  o.abs_tol = tol * 2 * kPi;
  if (ly != 0) o.max_panel = kPi / std::fabs(ly);
  QuadratureResult r = integrate(f, -T, T, o);
  r.value /= 2 * kPi;
  r.error /= 2 * kPi;
  return r;
}

struct PerronResult {
  long double value = 0;  // real part of the truncated integral
  long double imag = 0;   // vanishes by conjugate symmetry up to quadrature error
  long double error = 0;
  u64 evaluations = 0;
};

namespace detail {

inline long double perron_scale() { return inv_zeta2_squared() / kPi; }

inline QuadratureOptions contour_options(const ContourSpec& c, long double tol) {
  QuadratureOptions o;
  o.abs_tol = tol;
  o.max_panel = kPi / std::log(static_cast<long double>(c.x));
  return o;
}

}  // namespace detail

// (1 / (pi i zeta(2)^2)) integral over theta - iT .. theta + iT of F(s) ds, approximating
// 2 sum over k < x of (x - k) b(k).
inline PerronResult perron_truncated(const ContourSpec& c, u64 prime_limit = kDefaultContourPrimeLimit) {
  c.validate();
  const PerronIntegrand F(c.x, prime_limit);
  const long double scale = detail::perron_scale();
  auto f = [&](long double t) { return F(Complex(c.theta, t)); };
  const QuadratureResult q = integrate(f, -c.T, c.T, detail::contour_options(c, c.quad_tol / scale));
  PerronResult out;
  out.value = scale * q.value.real();
  out.imag = scale * q.value.imag();
  out.error = scale * q.error;
  out.evaluations = q.evaluations;
  return out;
}

struct ContourDecomposition {
  // Residues at s = 1, 0, -1/2, already scaled by 2 / zeta(2)^2.
  std::array<long double, 3> residues{};
  // Segments scaled by 1 / (pi i zeta(2)^2):
  // J1 from -1/2 - delta + iT to theta + iT, J2 from -1/2 - delta - iT to -1/2 - delta + iT,
  // J3 from -1/2 - delta - iT to theta - iT.
  Complex J1, J2, J3;
  // J1 split at -1/2 - 1/log T, 1/log T, 1 - 1/log T and 1 - 1/log x, clamped to the segment (sum = J1).
  std::array<Complex, 5> J1_pieces{};
  long double error = 0;
  u64 evaluations = 0;

  long double residue_sum() const { return residues[0] + residues[1] + residues[2]; }
  // Cauchy: the Perron integral equals residues + J1 + J2 - J3.
  Complex total() const { return residue_sum() + J1 + J2 - J3; }
};

inline ContourDecomposition contour_decomposition(const ContourSpec& c, u64 prime_limit = kDefaultContourPrimeLimit) {
  c.validate();
  const PerronIntegrand F(c.x, prime_limit);
  const long double lnx = F.log_x();
  const long double x = static_cast<long double>(c.x);
  const long double z2 = inv_zeta2_squared();
  ContourDecomposition out;
  out.residues[0] = zeta_real(4) * F.G().truncated(Complex(1, 0)).real() * x * x * z2;
  out.residues[1] = -x / zeta_real(2);
  out.residues[2] = -4 * zeta_real(-0.5L) * F.G().truncated(Complex(-0.5L, 0)).real() * std::sqrt(x) * z2;

  const Complex scale = 1.0L / (Complex(0, kPi) / z2);  // 1 / (pi i zeta(2)^2)
  const long double sabs = std::abs(scale);
  const long double left = -0.5L - c.delta;
  const long double lT = std::log(c.T);
  std::array<long double, 6> cuts = {left, -0.5L - 1 / lT, 1 / lT, 1 - 1 / lT, 1 - 1 / lnx, c.theta};
  // For small T the nominal cuts leave [left, theta]; clamped pieces may be empty.
  for (auto& v : cuts) v = std::clamp(v, left, c.theta);
  std::sort(cuts.begin(), cuts.end());
  const long double seg_tol = c.quad_tol / sabs;

  for (std::size_t i = 0; i < 5; ++i) {
    auto top = [&](long double sigma) { return F(Complex(sigma, c.T)); };
    const QuadratureResult q = integrate(top, cuts[i], cuts[i + 1], detail::contour_options(c, seg_tol / 5));
    out.J1_pieces[i] = scale * q.value;
    out.J1 += out.J1_pieces[i];
    out.error += sabs * q.error;
    out.evaluations += q.evaluations;
  }
  {
    auto side = [&](long double t) { return F(Complex(left, t)) * Complex(0, 1); };
    const QuadratureResult q = integrate(side, -c.T, c.T, detail::contour_options(c, seg_tol));
    out.J2 = scale * q.value;
    out.error += sabs * q.error;
    out.evaluations += q.evaluations;
  }
  {
    auto bottom = [&](long double sigma) { return F(Complex(sigma, -c.T)); };
    const QuadratureResult q = integrate(bottom, left, c.theta, detail::contour_options(c, seg_tol));
    out.J3 = scale * q.value;
    out.error += sabs * q.error;
    out.evaluations += q.evaluations;
  }
  return out;
}

// gamma2 x^2 + gamma1 x + gamma0 sqrt(x).
inline long double asymptotic_cesaro(long double x, const ConstantsReport& k) {
  if (!(x >= 2)) throw DomainError("asymptotic_cesaro: x must be at least 2");
  return k.gamma2 * x * x + k.gamma1 * x + k.gamma0 * std::sqrt(x);
}

}  // namespace sqfree
