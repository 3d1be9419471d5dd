// Closed-form bounds on the pointwise concentration probability
// P(x < max_i X_i <= x + eps) for d identically distributed variables.
//
// Three families of results are exposed:
//   * sharp upper/lower bounds over arbitrary copulas ("thm1-upper/lower"),
//   * the sharp upper bound over copulas with convex diagonal sections
//     ("thm2"), and
//   * per-marginal closed forms obtained from the convex-class bound
//     (Gaussian, Weibull, reverse Gumbel, Pareto, Gamma, Gaussian mixture),
//     plus the benchmark Gaussian bound (eps/sigma)(sqrt(2 log d) + 2).
//
// Every min/max in a formula is tagged with which branch fired, since the
// active regime is what distinguishes local concentration from the capped
// one and is worth surfacing in reports.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "anticonc/marginals.hpp"
#include "anticonc/rootfind.hpp"
#include "anticonc/special_functions.hpp"

namespace anticonc {

enum class BoundFormula {
  AnyCopulaUpper,
  AnyCopulaLower,
  ConvexClassUpper,
  Nazarov,
  ClosedFormGaussian,
  ClosedFormJointGaussianAbs,
  ClosedFormWeibull,
  ClosedFormReverseGumbel,
  ClosedFormPareto,
  ClosedFormGamma,
  ClosedFormChiSquared,
  GaussianMixture,
};

inline const char* formula_id(BoundFormula f) {
  switch (f) {
    case BoundFormula::AnyCopulaUpper: return "thm1-upper";
    case BoundFormula::AnyCopulaLower: return "thm1-lower";
    case BoundFormula::ConvexClassUpper: return "thm2";
    case BoundFormula::Nazarov: return "nazarov";
    case BoundFormula::ClosedFormGaussian: return "closed-form-gaussian";
    case BoundFormula::ClosedFormJointGaussianAbs: return "closed-form-gaussian-abs";
    case BoundFormula::ClosedFormWeibull: return "closed-form-weibull";
    case BoundFormula::ClosedFormReverseGumbel: return "closed-form-reverse-gumbel";
    case BoundFormula::ClosedFormPareto: return "closed-form-pareto";
    case BoundFormula::ClosedFormGamma: return "closed-form-gamma";
    case BoundFormula::ClosedFormChiSquared: return "closed-form-chi-squared";
    case BoundFormula::GaussianMixture: return "gmm";
  }
  return "?";
}

inline bool is_lower_bound(BoundFormula f) { return f == BoundFormula::AnyCopulaLower; }

enum class BoundRegime {
  DimensionTerm,      // the d-proportional branch of a min was active
  CdfTerm,            // capped by the CDF level
  HazardTerm,         // capped by 1 / (1 - F(x))
  Zero,               // lower bound clipped at zero
  Positive,           // lower bound strictly positive
  MixtureBranch,      // mixture-structure branch of the mixture bound
  ConditioningBranch, // conditioning benchmark branch of the mixture bound
  NotApplicable,
};

inline const char* to_string(BoundRegime r) {
  switch (r) {
    case BoundRegime::DimensionTerm: return "dimension_term";
    case BoundRegime::CdfTerm: return "cdf_term";
    case BoundRegime::HazardTerm: return "hazard_term";
    case BoundRegime::Zero: return "zero";
    case BoundRegime::Positive: return "positive";
    case BoundRegime::MixtureBranch: return "mixture_branch";
    case BoundRegime::ConditioningBranch: return "conditioning_branch";
    case BoundRegime::NotApplicable: return "n/a";
  }
  return "?";
}

struct BoundQuery {
  double x = 0.0;
  double epsilon = 0.0;
  int d = 1;
  MarginalDistribution marginal = MarginalDistribution::uniform01();

  void validate() const {
    if (!(epsilon >= 0.0)) throw std::invalid_argument("bound query: epsilon must be >= 0");
    if (d < 1) throw std::invalid_argument("bound query: d must be >= 1");
  }
};

struct BoundResult {
  double value = 0.0;
  BoundRegime regime = BoundRegime::NotApplicable;
  BoundFormula formula = BoundFormula::AnyCopulaUpper;
};

namespace detail {

// F(x + eps) - F(x) through the survival function when both points sit in
// the upper tail, avoiding cancellation there.
inline double cdf_increment(const MarginalDistribution& m, double x, double eps) {
  const double fx = m.cdf(x);
  if (fx > 0.5) return std::fmax(0.0, m.sf(x) - m.sf(x + eps));
  return std::fmax(0.0, m.cdf(x + eps) - fx);
}

}  // namespace detail

// Sharp upper bound over all copulas: min(d (F(x+eps) - F(x)), F(x+eps)).
inline BoundResult any_copula_upper(const BoundQuery& q) {
  q.validate();
  const double inc = detail::cdf_increment(q.marginal, q.x, q.epsilon);
  const double linear = q.d * inc;
  const double cap = q.marginal.cdf(q.x + q.epsilon);
  BoundResult r;
  r.formula = BoundFormula::AnyCopulaUpper;
  if (linear <= cap) {
    r.value = linear;
    r.regime = BoundRegime::DimensionTerm;
  } else {
    r.value = cap;
    r.regime = BoundRegime::CdfTerm;
  }
  return r;
}

// Sharp lower bound over all copulas: max(0, 1 - F(x) - d (1 - F(x+eps))).
inline BoundResult any_copula_lower(const BoundQuery& q) {
  q.validate();
  const double raw = q.marginal.sf(q.x) - q.d * q.marginal.sf(q.x + q.epsilon);
  BoundResult r;
  r.formula = BoundFormula::AnyCopulaLower;
  if (raw > 0.0) {
    r.value = raw;
    r.regime = BoundRegime::Positive;
  } else {
    r.value = 0.0;
    r.regime = BoundRegime::Zero;
  }
  return r;
}

// Sharp upper bound over diagonally convex copulas:
// (F(x+eps) - F(x)) * min(1 / (1 - F(x)), d). When F(x) = 1 the increment
// vanishes and the min resolves to the d branch.
inline BoundResult convex_class_upper(const BoundQuery& q) {
  q.validate();
  const double inc = detail::cdf_increment(q.marginal, q.x, q.epsilon);
  const double sx = q.marginal.sf(q.x);
  const double hazard_factor = sx > 0.0 ? 1.0 / sx : kInf;
  BoundResult r;
  r.formula = BoundFormula::ConvexClassUpper;
  if (hazard_factor <= static_cast<double>(q.d)) {
    r.value = inc * hazard_factor;
    r.regime = BoundRegime::HazardTerm;
  } else {
    r.value = inc * q.d;
    r.regime = BoundRegime::DimensionTerm;
  }
  return r;
}

// Benchmark Gaussian bound (eps / sigma)(sqrt(2 log d) + 2).
inline double nazarov_bound(double sigma, int d, double epsilon) {
  if (!(sigma > 0.0)) throw std::invalid_argument("nazarov_bound: sigma must be > 0");
  if (d < 1) throw std::invalid_argument("nazarov_bound: d must be >= 1");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("nazarov_bound: epsilon must be >= 0");
  return (epsilon / sigma) * (std::sqrt(2.0 * std::log(static_cast<double>(d))) + 2.0);
}

// Convex-class closed forms for specific marginals. These hold uniformly in
// x, so they take no location argument.

inline double gaussian_bound(double sigma, int d, double epsilon) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_bound: sigma must be > 0");
  if (d < 1) throw std::invalid_argument("gaussian_bound: d must be >= 1");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("gaussian_bound: epsilon must be >= 0");
  return (epsilon / sigma) * (std::sqrt(2.0 * std::log(static_cast<double>(d))) + 1.0);
}

// Same bound for max_i |X_i - mu| with jointly Gaussian X: dimension 2d.
inline double joint_gaussian_abs_bound(double sigma, int d, double epsilon) {
  if (!(sigma > 0.0)) throw std::invalid_argument("joint_gaussian_abs_bound: sigma must be > 0");
  if (d < 1) throw std::invalid_argument("joint_gaussian_abs_bound: d must be >= 1");
  if (!(epsilon >= 0.0)) {
    throw std::invalid_argument("joint_gaussian_abs_bound: epsilon must be >= 0");
  }
  return (epsilon / sigma) * (std::sqrt(2.0 * std::log(2.0 * d)) + 1.0);
}

inline double weibull_bound(double alpha, double lambda, int d, double epsilon) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("weibull_bound: alpha must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("weibull_bound: lambda must be > 0");
  if (d < 1) throw std::invalid_argument("weibull_bound: d must be >= 1");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("weibull_bound: epsilon must be >= 0");
  const double logd1 = std::log(static_cast<double>(d)) + 1.0;
  return (epsilon * alpha / lambda) * std::pow(logd1, (alpha - 1.0) / alpha);
}

inline double reverse_gumbel_bound(double lambda, int d, double epsilon) {
  if (!(lambda > 0.0)) throw std::invalid_argument("reverse_gumbel_bound: lambda must be > 0");
  if (d < 1) throw std::invalid_argument("reverse_gumbel_bound: d must be >= 1");
  if (!(epsilon >= 0.0)) {
    throw std::invalid_argument("reverse_gumbel_bound: epsilon must be >= 0");
  }
  return (epsilon / lambda) * (1.0 + std::log(static_cast<double>(d)));
}

// Dimension-independent: the Pareto hazard is decreasing.
inline double pareto_bound(double alpha, double lambda, double epsilon) {
  if (!(alpha > 0.0)) throw std::invalid_argument("pareto_bound: alpha must be > 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("pareto_bound: lambda must be > 0");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("pareto_bound: epsilon must be >= 0");
  return alpha * epsilon / lambda;
}

// Dimension-independent: the Gamma hazard is bounded by 1/lambda for
// alpha >= 1. For alpha < 1 the density is unbounded near zero and no such
// bound exists.
inline double gamma_bound(double alpha, double lambda, double epsilon) {
  if (!(alpha >= 1.0)) {
    throw std::invalid_argument(
        "gamma_bound: alpha must be >= 1 (density unbounded near zero otherwise)");
  }
  if (!(lambda > 0.0)) throw std::invalid_argument("gamma_bound: lambda must be > 0");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("gamma_bound: epsilon must be >= 0");
  return epsilon / lambda;
}

// Chi-squared with p degrees of freedom is Gamma(alpha = p/2, lambda = 2);
// p >= 2 keeps the shape at or above one.
inline double chi_squared_bound(int p, double epsilon) {
  if (p < 2) {
    throw std::invalid_argument("chi_squared_bound: degrees of freedom p must be >= 2");
  }
  return gamma_bound(0.5 * p, 2.0, epsilon);
}

struct GaussianMixtureBound {
  double value = 0.0;
  double mixture_branch = 0.0;       // (eps/p_1)(sqrt(2 log d) + 2 sum p_k / sigma_k)
  double conditioning_branch = 0.0;  // (eps/min sigma_k)(sqrt(2 log d) + 2)
  BoundRegime regime = BoundRegime::MixtureBranch;
};

// Bound for the maximum of d iid scale mixtures of centered Gaussians with
// sigma_1 = 1 and all sigma_k <= 1: the minimum of the mixture-structure
// branch and the conditioning benchmark at the smallest component scale.
inline GaussianMixtureBound gmm_bound(const std::vector<double>& p,
                                      const std::vector<double>& sigma, int d,
                                      double epsilon) {
  if (p.empty() || p.size() != sigma.size()) {
    throw std::invalid_argument("gmm_bound: p and sigma must be nonempty and equal length");
  }
  double total = 0.0;
  for (double pk : p) {
    if (!(pk > 0.0 && pk <= 1.0)) {
      throw std::invalid_argument("gmm_bound: weights must lie in (0, 1]");
    }
    total += pk;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("gmm_bound: weights must sum to 1 within 1e-12");
  }
  if (std::fabs(sigma.front() - 1.0) > 1e-12) {
    throw std::invalid_argument("gmm_bound: sigma_1 must equal 1");
  }
  double sigma_min = kInf;
  double ratio_sum = 0.0;
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    if (!(sigma[k] > 0.0 && sigma[k] <= 1.0)) {
      throw std::invalid_argument("gmm_bound: sigmas must lie in (0, 1]");
    }
    sigma_min = std::fmin(sigma_min, sigma[k]);
    ratio_sum += p[k] / sigma[k];
  }
  if (d < 1) throw std::invalid_argument("gmm_bound: d must be >= 1");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("gmm_bound: epsilon must be >= 0");

  const double root = std::sqrt(2.0 * std::log(static_cast<double>(d)));
  GaussianMixtureBound r;
  r.mixture_branch = (epsilon / p.front()) * (root + 2.0 * ratio_sum);
  r.conditioning_branch = nazarov_bound(sigma_min, d, epsilon);
  if (r.mixture_branch <= r.conditioning_branch) {
    r.value = r.mixture_branch;
    r.regime = BoundRegime::MixtureBranch;
  } else {
    r.value = r.conditioning_branch;
    r.regime = BoundRegime::ConditioningBranch;
  }
  return r;
}

// Dispatch the per-family closed form off a marginal specification.
inline BoundResult closed_form_bound(const MarginalDistribution& m, int d,
                                     double epsilon) {
  BoundResult r;
  r.regime = BoundRegime::NotApplicable;
  switch (m.family()) {
    case MarginalFamily::Gaussian:
      r.value = gaussian_bound(m.sigma(), d, epsilon);
      r.formula = BoundFormula::ClosedFormGaussian;
      return r;
    case MarginalFamily::Weibull:
      r.value = weibull_bound(m.alpha(), m.lambda(), d, epsilon);
      r.formula = BoundFormula::ClosedFormWeibull;
      return r;
    case MarginalFamily::ReverseGumbel:
      r.value = reverse_gumbel_bound(m.lambda(), d, epsilon);
      r.formula = BoundFormula::ClosedFormReverseGumbel;
      return r;
    case MarginalFamily::Pareto:
      r.value = pareto_bound(m.alpha(), m.lambda(), epsilon);
      r.formula = BoundFormula::ClosedFormPareto;
      return r;
    case MarginalFamily::Gamma:
      r.value = gamma_bound(m.alpha(), m.lambda(), epsilon);
      r.formula = BoundFormula::ClosedFormGamma;
      return r;
    case MarginalFamily::GaussianMixture: {
      const GaussianMixtureBound g =
          gmm_bound(m.mixture_weights(), m.mixture_sigmas(), d, epsilon);
      r.value = g.value;
      r.regime = g.regime;
      r.formula = BoundFormula::GaussianMixture;
      return r;
    }
    case MarginalFamily::Uniform01:
      throw std::invalid_argument("closed_form_bound: no closed form for uniform01");
  }
  throw std::invalid_argument("closed_form_bound: unknown family");
}

// Location x* = F^{-1}(1 - 1/d) where the hazard and the scaled density
// d * f cross for increasing-hazard families; the convex-class bound is
// largest there. For d = 1 this is the lower end of the support.
inline double hazard_crossing(const MarginalDistribution& m, int d) {
  if (d < 1) throw std::invalid_argument("hazard_crossing: d must be >= 1");
  if (d == 1) return m.support_lower();
  return m.quantile(1.0 - 1.0 / static_cast<double>(d));
}

// sup_{x >= 0} min(x + 1, d * phi(x)), located by bisecting the crossing of
// the increasing and decreasing branches. When d * phi(0) <= 1 the minimum
// is the decreasing branch everywhere, so the supremum sits at x = 0. The
// result never exceeds sqrt(2 log d) + 1.
inline double sup_min_envelope(int d) {
  if (d < 1) throw std::invalid_argument("sup_min_envelope: d must be >= 1");
  const double dd = static_cast<double>(d);
  if (dd * normal_pdf(0.0) <= 1.0) return dd * normal_pdf(0.0);
  double hi = 1.0;
  while (dd * normal_pdf(hi) > hi + 1.0) hi *= 2.0;
  const double x_star = crossing_point([](double x) { return x + 1.0; },
                                       [dd](double x) { return dd * normal_pdf(x); },
                                       0.0, hi, 1e-10);
  return std::fmin(x_star + 1.0, dd * normal_pdf(x_star));
}

}  // namespace anticonc
