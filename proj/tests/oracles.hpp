// Independent oracles for the test suites. Everything here is computed from
// first principles using only <cmath>, deliberately avoiding the library's
// own code paths: the normal CDF comes from a power series plus a
// continued fraction, quantiles from bisection against that CDF, and
// integrals from adaptive Simpson quadrature.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

inline constexpr double kSqrtPi = 1.7724538509055160273;

// erf by Maclaurin series; adequate to ~1e-15 absolute for |z| <= 3.
inline double erf_series(double z) {
  double term = z;
  double sum = z;
  const double z2 = z * z;
  for (int n = 1; n < 200; ++n) {
    term *= -z2 / n;
    const double contribution = term / (2.0 * n + 1.0);
    sum += contribution;
    if (std::fabs(contribution) < 1e-18 * std::fabs(sum)) break;
  }
  return 2.0 / kSqrtPi * sum;
}

// erfc for z >= 3 by the Laplace continued fraction, evaluated backward.
inline double erfc_continued_fraction(double z) {
  double f = 0.0;
  for (int k = 120; k >= 1; --k) {
    f = (0.5 * k) / (z + f);
  }
  return std::exp(-z * z) / (kSqrtPi * (z + f));
}

inline double erfc_positive(double z) {
  return z < 3.0 ? 1.0 - erf_series(z) : erfc_continued_fraction(z);
}

inline double normal_cdf(double x) {
  const double z = std::fabs(x) / std::sqrt(2.0);
  const double tail = 0.5 * erfc_positive(z);
  return x >= 0.0 ? 1.0 - tail : tail;
}

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

inline double normal_quantile(double p) {
  double lo = -42.0, hi = 42.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Adaptive Simpson quadrature with a recursion-depth cap.
namespace detail {
inline double simpson(const std::function<double(double)>& f, double a, double fa,
                      double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_step(const std::function<double(double)>& f, double a, double fa,
                            double b, double fb, double m, double fm, double whole,
                            double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int depth = 40) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  return detail::adaptive_step(f, a, fa, b, fb, m, fm,
                               detail::simpson(f, a, fa, b, fb, m, fm), tol, depth);
}

// Kolmogorov-Smirnov statistic against the uniform CDF; consumes a sorted
// copy of the sample.
inline double ks_statistic_uniform(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double hi = (i + 1.0) / n - samples[i];
    const double lo = samples[i] - static_cast<double>(i) / n;
    worst = std::fmax(worst, std::fmax(hi, lo));
  }
  return worst;
}

}  // namespace oracle
