#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "sqfree/analytic/zeta.hpp"

namespace sqfree {

struct QuadratureResult {
  Complex value;
  long double error = 0;  // sum of per-panel Gauss-Kronrod error estimates
  u64 evaluations = 0;
};

struct QuadratureOptions {
  long double abs_tol = 1e-10L;
  long double max_panel = INFINITY;  // initial panels are no wider than this
  u64 max_evaluations = 20000000;
};

namespace detail {

inline constexpr long double kGkNodes[8] = {
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L, 0.864864423359769072789712788640926L,
    0.741531185599394439863864773280788L, 0.586087235467691130294144838258730L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.0L};
// Gauss weights for nodes 1, 3, 5 and 7.
inline constexpr long double kGaussWeights[4] = {0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
                                                 0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};
inline constexpr long double kKronrodWeights[8] = {
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L, 0.104790010322250183839876322541518L,
    0.140653259715525918745189590510238L, 0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};

struct Panel {
  long double a, b;
  Complex value;
  long double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F& f, long double a, long double b) {
  const long double c = (a + b) / 2, h = (b - a) / 2;
  const Complex fc = f(c);
  Complex kron = kKronrodWeights[7] * fc;
  Complex gauss = kGaussWeights[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const long double dx = h * kGkNodes[j];
    const Complex s = f(c - dx) + f(c + dx);
    kron += kKronrodWeights[j] * s;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * s;
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7, 15) integration of f over [a, b]; the panel with the
// largest error estimate is bisected until the summed estimate is below abs_tol.
// Throws ConvergenceError when max_evaluations is reached first.
template <class F>
QuadratureResult integrate(F&& f, long double a, long double b, const QuadratureOptions& opts = {}) {
  QuadratureResult out;
  if (a == b) return out;
  const long double sign = b > a ? 1 : -1;
  const long double lo = std::min(a, b), hi = std::max(a, b);
  std::size_t n0 = 1;
  if (std::isfinite(opts.max_panel) && opts.max_panel > 0)
    n0 = static_cast<std::size_t>(std::ceil((hi - lo) / opts.max_panel));
  n0 = std::max<std::size_t>(n0, 1);
  std::vector<detail::Panel> panels;
  panels.reserve(n0);
  long double total_err = 0;
  for (std::size_t i = 0; i < n0; ++i) {
    const long double pa = lo + (hi - lo) * i / n0, pb = i + 1 == n0 ? hi : lo + (hi - lo) * (i + 1) / n0;
    panels.push_back(detail::gk15(f, pa, pb));
    total_err += panels.back().error;
  }
  out.evaluations = 15 * n0;
  std::priority_queue<detail::Panel> heap(std::less<detail::Panel>(), std::move(panels));
  while (total_err > opts.abs_tol) {
    if (out.evaluations >= opts.max_evaluations) throw ConvergenceError("integrate: evaluation budget exhausted");
    const detail::Panel p = heap.top();
    heap.pop();
    const long double m = (p.a + p.b) / 2;
    if (!(m > p.a && m < p.b)) throw ConvergenceError("integrate: panel width underflow");
    detail::Panel l = detail::gk15(f, p.a, m), r = detail::gk15(f, m, p.b);
    out.evaluations += 30;
    total_err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
  }
  // Sum in ascending order of position for a reproducible result.
  std::vector<detail::Panel> done;
  done.reserve(heap.size());
  total_err = 0;
  while (!heap.empty()) {
    done.push_back(heap.top());
    heap.pop();
  }
  std::sort(done.begin(), done.end(), [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
  for (const auto& p : done) {
    out.value += p.value;
    total_err += p.error;
  }
  out.value *= sign;
  out.error = total_err;
  return out;
}

}  // namespace sqfree
