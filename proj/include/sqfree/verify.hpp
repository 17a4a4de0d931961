#pragma once

#include <cmath>
#include <functional>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "sqfree/analytic.hpp"
#include "sqfree/localmodel.hpp"

namespace sqfree {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline std::string fmt(long double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", static_cast<double>(v));
  return buf;
}

inline CheckResult run_check(const std::string& name, const std::function<std::string(bool&)>& body) {
  CheckResult r{name, false, ""};
  try {
    r.detail = body(r.pass);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

}  // namespace detail

// pair_count formula against enumeration for every residue pair (n, m) mod l^2.
inline CheckResult check_pair_density(u64 ell, int d) {
  return detail::run_check("pair density l=" + std::to_string(ell) + " d=" + std::to_string(d), [&](bool& ok) {
    const u64 q = ell * ell;
    u64 pairs = 0, bad = 0;
    for (u64 n = 0; n < q; ++n)
      for (u64 m = 0; m < q; ++m) {
        const auto f = pair_count(ell, d, n, m, Method::Formula);
        const auto b = pair_count(ell, d, n, m, Method::Brute);
        ++pairs;
        bad += f.count != b.count;
      }
    ok = bad == 0;
    return std::to_string(pairs) + " pairs, " + std::to_string(bad) + " mismatches";
  });
}

// local2_sums formula against enumeration for every residue n mod l^2.
inline CheckResult check_local2(u64 ell, int d) {
  return detail::run_check("local2 sums l=" + std::to_string(ell) + " d=" + std::to_string(d), [&](bool& ok) {
    const u64 q = ell * ell;
    u64 bad = 0;
    for (u64 n = 0; n < q; ++n) bad += local2_sums(ell, d, n, Method::Formula) != local2_sums(ell, d, n, Method::Brute);
    ok = bad == 0;
    return std::to_string(q) + " residues, " + std::to_string(bad) + " mismatches";
  });
}

// rho_prime_square against direct scanning mod l^2 over all nonzero P with |coefficients| <= 2, deg <= 3.
inline CheckResult check_rho_corpus() {
  return detail::run_check("rho corpus |c| <= 2, deg <= 3, l in {2,3,5,7}", [&](bool& ok) {
    u64 polys = 0, bad = 0;
    for (long i = 0; i < 625; ++i) {
      std::vector<BigInt> c(4);
      long k = i;
      for (auto& v : c) {
        v = k % 5 - 2;
        k /= 5;
      }
      const IntPolynomial P(c);
      if (P.is_zero()) continue;
      ++polys;
      for (u64 ell : {2, 3, 5, 7}) bad += rho_prime_square(P, ell).count != rho_brute(P, ell * ell);
    }
    ok = bad == 0;
    return std::to_string(polys) + " polynomials, " + std::to_string(bad) + " mismatches";
  });
}

inline std::vector<CheckResult> verify_local() {
  std::vector<CheckResult> out;
  for (u64 ell : {2, 3})
    for (int d : {1, 2, 3}) {
      out.push_back(check_pair_density(ell, d));
      out.push_back(check_local2(ell, d));
    }
  out.push_back(check_rho_corpus());
  out.push_back(detail::run_check("truncated series of t at z = 3 is 1 - 1/4 - 1/9", [](bool& ok) {
    const auto t = singular_series_truncated(IntPolynomial{0, 1}, 3);
    ok = t.exact == Rational(23, 36);
    return "value " + t.exact.get_str();
  }));
  return out;
}

// zeta(s) = chi(s) zeta(1 - s) on 50 points with sigma in [-2, 3], |t| <= 200.
inline CheckResult check_functional_equation() {
  return detail::run_check("functional equation grid", [](bool& ok) {
    long double worst = 0;
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 5; ++j) {
        const Complex s(-2.0L + 5.0L * i / 9, -200.0L + 100.0L * j + 0.37L);
        worst = std::max(worst, std::abs(zeta(s) - chi(s) * zeta(1.0L - s)));
      }
    ok = worst < 1e-9L;
    return "50 points, worst deviation " + detail::fmt(worst);
  });
}

// kernel_integral(y, theta, T) against max(0, 1 - 1/y) within 3 y^theta / (T^2 |log y|) + 1e-6.
inline CheckResult check_kernel(long double theta, long double T) {
  return detail::run_check("kernel identity T=" + std::to_string(static_cast<long>(T)), [&](bool& ok) {
    ok = true;
    long double worst = 0;
    for (long double y : {0.1L, 0.5L, 2.0L, 10.0L, 100.0L}) {
      const long double err = std::abs(kernel_integral(y, theta, T).value - std::max(0.0L, 1 - 1 / y));
      const long double bound = 3 * std::pow(y, theta) / (T * T * std::fabs(std::log(y))) + 1e-6L;
      ok = ok && err <= bound;
      worst = std::max(worst, err / bound);
    }
    return "worst error / bound " + detail::fmt(worst);
  });
}

// Perron integral against residues plus the three shifted segments.
inline CheckResult check_cauchy(u64 x, long double T, long double delta) {
  return detail::run_check("Cauchy consistency x=" + std::to_string(x) + " T=" + std::to_string(static_cast<long>(T)),
                           [&](bool& ok) {
                             auto c = ContourSpec::defaults(x, delta);
                             c.T = T;
                             const auto p = perron_truncated(c);
                             const auto d = contour_decomposition(c);
                             const long double diff = std::abs(d.total() - p.value);
                             ok = diff <= 10 * c.quad_tol;
                             return "difference " + detail::fmt(diff) + ", allowed " +
                                    detail::fmt(10 * c.quad_tol);
                           });
}

inline std::vector<CheckResult> verify_analytic() {
  std::vector<CheckResult> out;
  out.push_back(check_functional_equation());
  out.push_back(check_kernel(1.5L, 500));
  out.push_back(check_cauchy(30, 100, 0.2L));
  out.push_back(detail::run_check("zeta(-1/2)", [](bool& ok) {
    const long double v = zeta_real(-0.5L);
    ok = std::fabs(v + 0.207886224977354566L) < 1e-12L;
    return detail::fmt(v);
  }));
  return out;
}

inline std::vector<CheckResult> verify_constants(u64 prime_limit = 10000000) {
  std::vector<CheckResult> out;
  const ConstantsReport k = gamma_constants(prime_limit);
  out.push_back(detail::run_check("gamma0 begins 0.192", [&](bool& ok) {
    ok = std::floor(k.gamma0 * 1000) == 192 && k.gamma0_tail < 1e-6L;
    return "gamma0 " + detail::fmt(k.gamma0);
  }));
  out.push_back(detail::run_check("gamma_mid equals gamma2", [&](bool& ok) {
    const long double diff = std::fabs(k.gamma_mid - k.gamma2);
    ok = diff < 1e-8L;
    return "difference " + detail::fmt(diff);
  }));
  out.push_back(detail::run_check("b(k) zeta(2)^2 multiplicative up to 1600", [](bool& ok) {
    const auto b = b_table(1600);
    auto f = [&](u64 k) { return b[k] / b[1]; };
    u64 bad = 0;
    for (u64 m = 1; m <= 40; ++m)
      for (u64 n = 1; n <= 40; ++n)
        if (std::gcd(m, n) == 1) bad += std::fabs(f(m * n) - f(m) * f(n)) > 1e-15L * f(m * n);
    ok = bad == 0;
    return std::to_string(bad) + " mismatches";
  }));
  out.push_back(detail::run_check("Dirichlet series of b at s = 2", [](bool& ok) {
    const u64 K = 100000;
    const auto b = b_table(K);
    long double partial = 0;
    for (u64 k = K; k >= 1; --k) partial += b[k] / (static_cast<long double>(k) * k);
    const auto v = dirichlet_b(Complex(2, 0), GProduct(100000));
    const long double diff = std::fabs(partial - v.value.real());
    ok = diff <= 2.0L / K + 1e-6L;
    return "difference " + detail::fmt(diff);
  }));
  return out;
}

}  // namespace sqfree
