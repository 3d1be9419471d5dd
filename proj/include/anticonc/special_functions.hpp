// Scalar special functions used across the library: standard normal
// pdf/cdf/quantile, the normal hazard (inverse Mills ratio), and the
// regularized incomplete gamma functions.
//
// Everything here is a pure function of doubles and is safe to call
// concurrently.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace anticonc {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kSqrt2Pi = 2.50662827463100050242;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double normal_pdf(double x) {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

// Survival function 1 - Phi(x), computed without cancellation.
inline double normal_sf(double x) {
  return 0.5 * std::erfc(x * kInvSqrt2);
}

// Quantile of the standard normal. Acklam's rational approximation
// followed by one Halley step against the erfc-based CDF, which brings
// the result to full double precision away from the extreme tails.
inline double normal_quantile(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("normal_quantile: p must lie in [0, 1]");
  }
  if (p == 0.0) return -kInf;
  if (p == 1.0) return kInf;

  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double dd[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  }

  // Halley refinement; skipped in the far tail where exp(x^2/2) overflows.
  if (0.5 * x * x < 700.0) {
    const double e = normal_cdf(x) - p;
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

// Hazard (inverse Mills ratio) phi(x) / (1 - Phi(x)). The erfc route is
// exact until the survival function underflows around x = 37; past x = 20
// the asymptotic continued-fraction expansion is already at full double
// precision, so switch there.
inline double normal_hazard(double x) {
  if (x < 20.0) {
    return normal_pdf(x) / normal_sf(x);
  }
  // Mills ratio asymptotic: (1-Phi(x))/phi(x) ~ (1/x)(1 - 1/x^2 + 3/x^4 - ...)
  const double r = 1.0 / (x * x);
  double mills = 1.0;
  double term = 1.0;
  for (int k = 1; k <= 8; ++k) {
    term *= -(2.0 * k - 1.0) * r;
    mills += term;
  }
  return x / mills;
}

inline double log_gamma(double x) { return std::lgamma(x); }

namespace detail {

// Series expansion of the regularized lower incomplete gamma P(a, x),
// accurate for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 1000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-17) {
      return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
    }
  }
  throw std::runtime_error("gamma_p: series failed to converge");
}

// Modified Lentz continued fraction for the regularized upper incomplete
// gamma Q(a, x), accurate for x >= a + 1.
inline double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) {
      return h * std::exp(-x + a * std::log(x) - log_gamma(a));
    }
  }
  throw std::runtime_error("gamma_q: continued fraction failed to converge");
}

}  // namespace detail

// Regularized lower incomplete gamma P(a, x); the series/continued-fraction
// switch sits at x = a + 1.
inline double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("gamma_p: shape must be positive");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return detail::gamma_p_series(a, x);
  return 1.0 - detail::gamma_q_continued_fraction(a, x);
}

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
inline double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("gamma_q: shape must be positive");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_continued_fraction(a, x);
}

// x^n for integer n >= 0 by squaring; keeps diagonal evaluation cheap for
// large dimensions.
inline double pow_int(double x, int n) {
  double result = 1.0;
  double base = x;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

}  // namespace anticonc
