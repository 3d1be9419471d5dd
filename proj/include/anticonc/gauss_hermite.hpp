// Gauss-Hermite quadrature (physicists' weight exp(-x^2)) with cached rules,
// plus an adaptive expectation helper for integrals against the standard
// normal density.
#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "anticonc/special_functions.hpp"

namespace anticonc {

struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// Orthonormal Hermite value and derivative at x via the three-term
// recurrence; returns (H~_n(x), H~_n'(x)).
inline std::pair<double, double> hermite_orthonormal(int n, double x) {
  constexpr double kPiQuarterInv = 0.7511255444649425;  // pi^{-1/4}
  double p1 = kPiQuarterInv;
  double p2 = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double p3 = p2;
    p2 = p1;
    p1 = x * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
  }
  return {p1, std::sqrt(2.0 * n) * p2};
}

// Roots by scanning for sign changes and polishing each bracket. The root
// density of H_n is sqrt(2n - x^2)/pi, so a scan step of pi/(3 sqrt(2n))
// cannot skip a pair of roots; this stays reliable for the large rules
// where ladder-style initial guesses break down.
inline GaussHermiteRule make_gauss_hermite_rule(int n) {
  if (n < 1 || n > 2048) {
    throw std::invalid_argument("gauss_hermite: node count must lie in [1, 2048]");
  }
  GaussHermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);

  int found = 0;
  auto emit = [&](double root, double derivative) {
    // Roots come in +/- pairs (plus 0 for odd n); fill from the outside in.
    const double w = 2.0 / (derivative * derivative);
    if (root == 0.0) {
      rule.nodes[n / 2] = 0.0;
      rule.weights[n / 2] = w;
      return;
    }
    rule.nodes[found] = root;
    rule.weights[found] = w;
    rule.nodes[n - 1 - found] = -root;
    rule.weights[n - 1 - found] = w;
    ++found;
  };

  if (n % 2 == 1) {
    emit(0.0, hermite_orthonormal(n, 0.0).second);
  }

  const double upper = std::sqrt(2.0 * n + 1.0);
  const double step = kPi / (3.0 * std::sqrt(2.0 * n));
  double x_prev = n % 2 == 1 ? 0.5 * step : 0.0;
  double f_prev = hermite_orthonormal(n, x_prev).first;
  for (double x = x_prev + step; x < upper + 2.0 * step; x += step) {
    const double f = hermite_orthonormal(n, x).first;
    if ((f_prev < 0.0) != (f < 0.0)) {
      double lo = x_prev;
      double hi = x;
      for (int i = 0; i < 20; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = hermite_orthonormal(n, mid).first;
        if ((fm < 0.0) == (f_prev < 0.0)) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      double root = 0.5 * (lo + hi);
      double derivative = 0.0;
      for (int i = 0; i < 8; ++i) {
        const auto [value, deriv] = hermite_orthonormal(n, root);
        derivative = deriv;
        const double newton = value / deriv;
        root -= newton;
        if (std::fabs(newton) <= 1e-15 * std::fmax(1.0, std::fabs(root))) break;
      }
      emit(root, derivative);
    }
    x_prev = x;
    f_prev = f;
  }

  if (found != n / 2) {
    throw std::runtime_error("gauss_hermite: root scan lost nodes");
  }
  return rule;
}

}  // namespace detail

// Cached rule lookup; rules are immutable once built.
inline const GaussHermiteRule& gauss_hermite_rule(int n) {
  static std::map<int, GaussHermiteRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, detail::make_gauss_hermite_rule(n)).first;
  }
  return it->second;
}

// E[f(W)] for W standard normal with a fixed n-node rule:
// integral phi(w) f(w) dw = sum_i (w_i / sqrt(pi)) f(sqrt(2) x_i).
template <class F>
double normal_expectation_fixed(F&& f, int n) {
  const GaussHermiteRule& rule = gauss_hermite_rule(n);
  const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += rule.weights[i] * f(kSqrt2 * rule.nodes[i]);
  }
  return sum * inv_sqrt_pi;
}

// Adaptive version: starts at n_start nodes and doubles until two
// successive rules agree to abs_tol; returns the finer value once they do.
// Returns NaN when even n_max nodes have not settled, so callers can fall
// back to a locally adaptive rule instead of accepting a bad value.
template <class F>
double normal_expectation_gauss_hermite(F&& f, double abs_tol = 1e-10,
                                        int n_start = 128, int n_max = 512) {
  double prev = normal_expectation_fixed(f, n_start);
  for (int n = 2 * n_start; n <= n_max; n *= 2) {
    const double next = normal_expectation_fixed(f, n);
    if (std::fabs(next - prev) < abs_tol) return next;
    prev = next;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace detail {

template <class F>
double simpson_panel(F&& f, double a, double fa, double b, double fb, double m,
                     double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson_step(F&& f, double a, double fa, double b, double fb, double m,
                             double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_panel(f, a, fa, m, fm, lm, flm);
  const double right = simpson_panel(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// E[f(W)] by adaptive Simpson on [-9, 9] (the tail mass beyond is below
// 2.3e-19). Slower than Gauss-Hermite but refines locally, which matters
// when f is a near-step sigmoid raised to a large power.
template <class F>
double normal_expectation_adaptive(F&& f, double abs_tol = 1e-11) {
  auto integrand = [&f](double w) { return normal_pdf(w) * f(w); };
  constexpr int panels = 16;
  constexpr double lo = -9.0;
  constexpr double hi = 9.0;
  double total = 0.0;
  double a = lo;
  double fa = integrand(a);
  for (int p = 1; p <= panels; ++p) {
    const double b = lo + (hi - lo) * p / panels;
    const double fb = integrand(b);
    const double m = 0.5 * (a + b);
    const double fm = integrand(m);
    total += detail::adaptive_simpson_step(
        integrand, a, fa, b, fb, m, fm,
        detail::simpson_panel(integrand, a, fa, b, fb, m, fm), abs_tol / panels, 32);
    a = b;
    fa = fb;
  }
  return total;
}

// Gauss-Hermite first (128 nodes, doubled adaptively); adaptive Simpson
// refinement when the doubling has not settled to abs_tol.
template <class F>
double normal_expectation(F&& f, double abs_tol = 1e-10) {
  const double gh = normal_expectation_gauss_hermite(f, abs_tol);
  if (!std::isnan(gh)) return gh;
  return normal_expectation_adaptive(f, 0.1 * abs_tol);
}

}  // namespace anticonc
