#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <queue>
#include <vector>

#include "graphcurv/errors.hpp"

namespace graphcurv {

struct QuadratureConfig {
  double relTol = 1e-9;
  int maxSubdivisions = 2000;
  /// Absolute floor on the accepted error, for integrals that vanish.
  double absTol = 1e-14;
  /// Step for finite-difference metric coefficients (cone areas).
  double differentiationStep = 1e-5;

  void check() const {
    if (!(relTol > 0.0 && relTol <= 1e-3))
      throw Error(ErrorCode::BadParams, "quadrature tolerance must lie in (0, 1e-3]");
    if (maxSubdivisions < 1) throw Error(ErrorCode::BadParams, "maxSubdivisions must be positive");
    if (!(differentiationStep > 0.0 && differentiationStep < 0.1))
      throw Error(ErrorCode::BadParams, "differentiation step must lie in (0, 0.1)");
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;  // integral of |f|
  int intervals = 0;

  QuadratureResult& operator+=(const QuadratureResult& o) {
    value += o.value;
    error += o.error;
    l1 += o.l1;
    intervals += o.intervals;
    return *this;
  }
};

namespace detail {

struct GkPanel {
  double a, b, value, error, l1;
  bool operator<(const GkPanel& o) const { return error < o.error; }
};

template <class F>
GkPanel gk15(F& f, double a, double b) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  static const auto& x = Rule::abscissa();
  static const auto& wk = Rule::weights();
  static const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const double f0 = f(mid);
  double k = wk[0] * f0, g = wg[0] * f0, l1 = wk[0] * std::abs(f0);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fl = f(mid - half * x[i]), fr = f(mid + half * x[i]);
    k += wk[i] * (fl + fr);
    l1 += wk[i] * (std::abs(fl) + std::abs(fr));
    if (i % 2 == 0) g += wg[i / 2] * (fl + fr);
  }
  return {a, b, k * half, std::abs((k - g) * half), l1 * std::abs(half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature: bisects the panel with
/// the largest error until the summed error drops below
/// max(absTol, relTol * integral of |f|). Throws QUADRATURE_NONCONVERGED when
/// the subdivision budget runs out first.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
  QuadratureResult out;
  if (a == b) return out;
  std::priority_queue<detail::GkPanel> heap;
  auto first = detail::gk15(f, a, b);
  double value = first.value, error = first.error, l1 = first.l1;
  heap.push(first);
  int intervals = 1;
  auto done = [&] { return error <= std::max(cfg.absTol, cfg.relTol * l1); };
  while (!done()) {
    if (intervals >= cfg.maxSubdivisions)
      throw Error(ErrorCode::QuadratureNonconverged,
                  "error estimate " + std::to_string(error) + " after " + std::to_string(intervals) + " panels");
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::gk15(f, worst.a, mid), right = detail::gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum to shed the drift of the running updates.
  out.intervals = intervals;
  while (!heap.empty()) {
    out.value += heap.top().value;
    out.error += heap.top().error;
    out.l1 += heap.top().l1;
    heap.pop();
  }
  return out;
}

}  // namespace graphcurv
