// Bracketed root finding for monotone functions: generalized inverses via
// predicate bisection and quantile inversion with geometric bracket
// expansion.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

namespace anticonc {

// Least s in [lo, hi] with f(s) >= target, for nondecreasing f. The
// predicate form makes flat stretches of f resolve to their left endpoint,
// which is the generalized-inverse convention used throughout. Requires
// f(hi) >= target.
template <class F>
double monotone_least_point(F&& f, double lo, double hi, double target,
                            int max_iter = 200) {
  if (f(lo) >= target) return lo;
  for (int i = 0; i < max_iter && hi - lo > 0.0; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;  // bracket is one ulp wide
    if (f(mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Quantile of a continuous CDF by bisection on the t-scale, refined with
// guarded Newton steps when a density is available. The bracket starts at
// center +/- 12 scale units and expands geometrically until it straddles t.
template <class Cdf, class Pdf>
double invert_cdf(Cdf&& cdf, Pdf&& pdf, double t, double center, double scale,
                  double support_lo, double support_hi) {
  double lo = std::fmax(center - 12.0 * scale, support_lo);
  double hi = std::fmin(center + 12.0 * scale, support_hi);
  double width = std::fmax(hi - lo, scale);
  for (int i = 0; i < 200 && cdf(lo) > t && lo > support_lo; ++i) {
    lo = std::fmax(lo - width, support_lo);
    width *= 2.0;
  }
  width = std::fmax(hi - lo, scale);
  for (int i = 0; i < 200 && cdf(hi) < t && hi < support_hi; ++i) {
    hi = std::fmin(hi + width, support_hi);
    width *= 2.0;
  }

  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    const double fx = cdf(x);
    if (std::fabs(fx - t) <= 1e-12 && i >= 20) break;
    if (fx >= t) {
      hi = x;
    } else {
      lo = x;
    }
    if (hi - lo <= std::fabs(x) * 4e-16 + 1e-300) break;
    x = 0.5 * (lo + hi);
  }
  // Newton polish inside the final bracket.
  for (int i = 0; i < 4; ++i) {
    const double dens = pdf(x);
    if (!(dens > 0.0) || !std::isfinite(dens)) break;
    const double step = (cdf(x) - t) / dens;
    const double next = x - step;
    if (!(next > lo && next < hi)) break;
    x = next;
    if (std::fabs(step) <= std::fabs(x) * 1e-16 + 1e-300) break;
  }
  return x;
}

// Unique crossing of an increasing and a decreasing continuous function on
// [lo, hi]; assumes rising(lo) < falling(lo) and rising(hi) > falling(hi).
template <class Rising, class Falling>
double crossing_point(Rising&& rising, Falling&& falling, double lo, double hi,
                      double x_tol = 1e-10) {
  while (hi - lo > x_tol) {
    const double mid = 0.5 * (lo + hi);
    if (rising(mid) < falling(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace anticonc
