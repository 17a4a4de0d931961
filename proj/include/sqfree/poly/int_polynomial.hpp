#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "sqfree/common.hpp"

namespace sqfree {

// Integer polynomial, constant term first; trailing zero coefficients are stripped.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { normalize(); }
  IntPolynomial(std::initializer_list<long> coeffs) {
    for (long v : coeffs) c_.emplace_back(v);
    normalize();
  }

  // "1,0,1" is t^2 + 1.
  static IntPolynomial parse(const std::string& text) {
    std::vector<BigInt> coeffs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto b = item.find_first_not_of(" \t");
      const auto e = item.find_last_not_of(" \t");
      if (b == std::string::npos) throw DomainError("empty coefficient in '" + text + "'");
      coeffs.push_back(parse_big(item.substr(b, e - b + 1)));
    }
    if (coeffs.empty()) throw DomainError("no coefficients in '" + text + "'");
    return IntPolynomial(std::move(coeffs));
  }

  const std::vector<BigInt>& coefficients() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for the zero polynomial
  bool is_zero() const { return c_.empty(); }
  const BigInt& leading() const { return c_.back(); }
  BigInt coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : BigInt(0); }

  BigInt evaluate(const BigInt& n) const {
    BigInt acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) {
      acc *= n;
      acc += c_[i];
    }
    return acc;
  }

  IntPolynomial derivative() const {
    std::vector<BigInt> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<unsigned long>(i));
    return IntPolynomial(std::move(d));
  }

  // Every coefficient divided exactly by k.
  IntPolynomial divide_exact(const BigInt& k) const {
    std::vector<BigInt> d = c_;
    for (auto& v : d) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), k.get_mpz_t());
    return IntPolynomial(std::move(d));
  }

  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) s += ',';
      s += c_[i].get_str();
    }
    return s;
  }

  bool operator==(const IntPolynomial& o) const { return c_ == o.c_; }

 private:
  void normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<BigInt> c_;
};

inline BigInt content(const IntPolynomial& P) {
  if (P.is_zero()) throw DomainError("content of the zero polynomial");
  BigInt g = 0;
  for (const auto& c : P.coefficients()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

// Exact determinant by fraction-free Bareiss elimination.
inline BigInt bareiss_determinant(std::vector<std::vector<BigInt>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt v = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = v;
      }
    }
    prev = a[k][k];
  }
  return sign > 0 ? a[n - 1][n - 1] : BigInt(-a[n - 1][n - 1]);
}

// Resultant of P and Q via the Sylvester matrix.
inline BigInt resultant(const IntPolynomial& P, const IntPolynomial& Q) {
  const int m = P.degree(), n = Q.degree();
  if (m < 0 || n < 0) return 0;
  const std::size_t N = static_cast<std::size_t>(m + n);
  if (N == 0) return 1;
  std::vector<std::vector<BigInt>> s(N, std::vector<BigInt>(N, 0));
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) s[r][r + i] = P.coeff(m - i);
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i) s[n + r][r + i] = Q.coeff(n - i);
  return bareiss_determinant(std::move(s));
}

// D_P = (-1)^{d(d-1)/2} Res(P, P') / lc(P).
inline BigInt discriminant(const IntPolynomial& P) {
  const int d = P.degree();
  if (d < 1) throw DomainError("discriminant needs degree at least 1");
  BigInt r = resultant(P, P.derivative());
  mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), P.leading().get_mpz_t());
  if ((static_cast<long>(d) * (d - 1) / 2) % 2 == 1) r = -r;
  return r;
}

}  // namespace sqfree
