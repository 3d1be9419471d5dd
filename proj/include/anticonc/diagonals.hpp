// Diagonal sections of d-dimensional copulas: the function
// Delta(u) = C(u, ..., u), which is exactly the CDF of the maximum of d
// uniforms coupled by C. A function is a valid d-dimensional diagonal iff
//   (i)   Delta(1) = 1,
//   (ii)  Delta(u) <= u on [0, 1],
//   (iii) 0 <= Delta(u') - Delta(u) <= d (u' - u) for u <= u'.
//
// This header provides the standard comparison diagonals (independence and
// the two Frechet-Hoeffding extremes), the piecewise-linear extremal
// diagonals that maximize or minimize the increment over a window starting
// at u (both for arbitrary copulas and within the convex-diagonal class),
// Archimedean diagonals, the equicorrelated Gaussian diagonal evaluated by
// Gauss-Hermite quadrature, mixtures, and tabulated diagonals, together
// with grid validators for the three conditions above, a numerical
// convexity check, and the generator-ratio monotonicity test.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "anticonc/archimedean.hpp"
#include "anticonc/gauss_hermite.hpp"
#include "anticonc/rootfind.hpp"
#include "anticonc/special_functions.hpp"

namespace anticonc {

enum class DiagonalKind {
  Independence,
  FrechetUpper,
  FrechetLower,
  UpperEnvelope,   // maximal increment over (u, u + delta], any copula
  LowerEnvelope,   // minimal increment over (u, u + delta], any copula
  ConvexEnvelope,  // maximal increment within the convex-diagonal class
  Archimedean,
  GaussianEquicorr,
  Mixture,
  Tabulated,
};

inline const char* to_string(DiagonalKind k) {
  switch (k) {
    case DiagonalKind::Independence: return "independence";
    case DiagonalKind::FrechetUpper: return "frechet_upper";
    case DiagonalKind::FrechetLower: return "frechet_lower";
    case DiagonalKind::UpperEnvelope: return "delta_up";
    case DiagonalKind::LowerEnvelope: return "delta_lo";
    case DiagonalKind::ConvexEnvelope: return "delta_convex_max";
    case DiagonalKind::Archimedean: return "archimedean";
    case DiagonalKind::GaussianEquicorr: return "gaussian_equicorr";
    case DiagonalKind::Mixture: return "mixture";
    case DiagonalKind::Tabulated: return "tabulated";
  }
  return "?";
}

class DiagonalSection {
 public:
  static DiagonalSection independence(int d) {
    return DiagonalSection(DiagonalKind::Independence, check_dim(d));
  }

  static DiagonalSection frechet_upper(int d) {
    return DiagonalSection(DiagonalKind::FrechetUpper, check_dim(d));
  }

  static DiagonalSection frechet_lower(int d) {
    return DiagonalSection(DiagonalKind::FrechetLower, check_dim(d));
  }

  // Piecewise-linear diagonal attaining the maximal increment over
  // (u, u + delta] for every delta: flat at zero until u ^ (d-1)/d, then a
  // slope-d ramp, then the identity. For d = 1 the only diagonal is the
  // identity.
  static DiagonalSection upper_envelope(int d, double u) {
    DiagonalSection diag(DiagonalKind::UpperEnvelope, check_dim(d));
    diag.u_ = check_prob(u, "u");
    return diag;
  }

  // Piecewise-linear diagonal attaining the minimal increment: identity up
  // to u, flat at height u until (d + u - 1)/d, then a slope-d ramp to 1.
  static DiagonalSection lower_envelope(int d, double u) {
    DiagonalSection diag(DiagonalKind::LowerEnvelope, check_dim(d));
    diag.u_ = check_prob(u, "u");
    return diag;
  }

  // Convex diagonal attaining the maximal increment within the
  // convex-diagonal class: flat at zero until u ^ (d-1)/d, then a single
  // ramp of slope (1/(1-u)) ^ d up to 1.
  static DiagonalSection convex_envelope(int d, double u) {
    DiagonalSection diag(DiagonalKind::ConvexEnvelope, check_dim(d));
    diag.u_ = check_prob(u, "u");
    return diag;
  }

  static DiagonalSection archimedean(int d, ArchimedeanGenerator generator) {
    DiagonalSection diag(DiagonalKind::Archimedean, check_dim(d));
    diag.generator_ = std::move(generator);
    return diag;
  }

  static DiagonalSection gaussian_equicorr(int d, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
      throw std::invalid_argument("gaussian_equicorr: rho must lie in [0, 1]");
    }
    DiagonalSection diag(DiagonalKind::GaussianEquicorr, check_dim(d));
    diag.rho_ = rho;
    return diag;
  }

  static DiagonalSection mixture(std::vector<double> weights,
                                 std::vector<DiagonalSection> components) {
    if (weights.empty() || weights.size() != components.size()) {
      throw std::invalid_argument(
          "mixture: weights and components must be nonempty and equal length");
    }
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw std::invalid_argument("mixture: weights must be nonnegative");
      total += w;
    }
    if (std::fabs(total - 1.0) > 1e-12) {
      throw std::invalid_argument("mixture: weights must sum to 1 within 1e-12");
    }
    const int d = components.front().dim();
    for (const DiagonalSection& c : components) {
      if (c.dim() != d) {
        throw std::invalid_argument("mixture: components must share the same dimension");
      }
    }
    DiagonalSection diag(DiagonalKind::Mixture, d);
    diag.weights_ = std::move(weights);
    diag.components_ = std::move(components);
    return diag;
  }

  // Knots must start at t = 0, end at t = 1, be strictly increasing in t,
  // and have nondecreasing values in [0, 1]. Whether the interpolant is a
  // valid diagonal (conditions (i)-(iii)) is the validator's job, not the
  // constructor's.
  static DiagonalSection tabulated(int d, std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) throw std::invalid_argument("tabulated: need at least 2 knots");
    if (knots.front().first != 0.0 || knots.back().first != 1.0) {
      throw std::invalid_argument("tabulated: knots must span t = 0 to t = 1");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
      if (!(knots[i].second >= 0.0 && knots[i].second <= 1.0)) {
        throw std::invalid_argument("tabulated: values must lie in [0, 1]");
      }
      if (i > 0) {
        if (!(knots[i].first > knots[i - 1].first)) {
          throw std::invalid_argument("tabulated: knot abscissae must be strictly increasing");
        }
        if (knots[i].second < knots[i - 1].second) {
          throw std::invalid_argument("tabulated: knot values must be nondecreasing");
        }
      }
    }
    DiagonalSection diag(DiagonalKind::Tabulated, check_dim(d));
    diag.knots_ = std::move(knots);
    return diag;
  }

  DiagonalKind kind() const { return kind_; }
  int dim() const { return d_; }
  double anchor_u() const { return u_; }
  double rho() const { return rho_; }
  const ArchimedeanGenerator& generator() const {
    if (!generator_) throw std::logic_error("diagonal has no Archimedean generator");
    return *generator_;
  }
  const std::vector<double>& mixture_weights() const { return weights_; }
  const std::vector<DiagonalSection>& mixture_components() const { return components_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

  // True when the diagonal's inverse is evaluated in closed form (or exact
  // piecewise-linear arithmetic) rather than by bisection.
  bool has_fast_inverse() const {
    switch (kind_) {
      case DiagonalKind::GaussianEquicorr:
        return rho_ == 0.0 || rho_ == 1.0;
      case DiagonalKind::Mixture:
        return false;
      default:
        return true;
    }
  }

  double eval(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("eval: t must lie in [0, 1]");
    switch (kind_) {
      case DiagonalKind::Independence:
        return pow_int(t, d_);
      case DiagonalKind::FrechetUpper:
        return t;
      case DiagonalKind::FrechetLower:
        return std::fmax(0.0, d_ * t - (d_ - 1.0));
      case DiagonalKind::UpperEnvelope: {
        if (d_ == 1) return t;
        const double m = std::fmin(u_, (d_ - 1.0) / d_);
        const double b = d_ * u_ / (d_ - 1.0);
        if (t <= m) return 0.0;
        if (t <= b) return d_ * (t - m);
        return t;
      }
      case DiagonalKind::LowerEnvelope: {
        const double c = (d_ + u_ - 1.0) / d_;
        if (t <= u_) return t;
        if (t <= c) return u_;
        return 1.0 - d_ * (1.0 - t);
      }
      case DiagonalKind::ConvexEnvelope: {
        const double m = std::fmin(u_, (d_ - 1.0) / d_);
        const double slope = std::fmin(1.0 / (1.0 - u_), static_cast<double>(d_));
        if (t <= m) return 0.0;
        return slope * (t - m);
      }
      case DiagonalKind::Archimedean:
        return generator_->diagonal(d_, t);
      case DiagonalKind::GaussianEquicorr:
        return eval_equicorr(t);
      case DiagonalKind::Mixture: {
        double sum = 0.0;
        for (std::size_t k = 0; k < weights_.size(); ++k) {
          sum += weights_[k] * components_[k].eval(t);
        }
        return sum;
      }
      case DiagonalKind::Tabulated:
        return eval_tabulated(t);
    }
    return 0.0;
  }

  // Delta(u + delta) - Delta(u); the probability that the maximum of d
  // coupled uniforms lands in (u, u + delta].
  double increment(double u, double delta) const {
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("increment: u must lie in [0, 1]");
    if (!(delta >= 0.0 && delta <= 1.0 - u + 1e-15)) {
      throw std::domain_error("increment: delta must lie in [0, 1 - u]");
    }
    const double hi = std::fmin(u + delta, 1.0);
    return std::fmax(0.0, eval(hi) - eval(u));
  }

  // Generalized inverse inf{s in [0, 1] : Delta(s) >= t}; flat segments
  // resolve to their left endpoint. Exact for the piecewise-linear and
  // Archimedean kinds; bisection to machine tolerance otherwise.
  double inverse(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("inverse: t must lie in [0, 1]");
    switch (kind_) {
      case DiagonalKind::Independence:
        return std::pow(t, 1.0 / d_);
      case DiagonalKind::FrechetUpper:
        return t;
      case DiagonalKind::FrechetLower:
        return t <= 0.0 ? 0.0 : (t + d_ - 1.0) / d_;
      case DiagonalKind::UpperEnvelope: {
        if (d_ == 1) return t;
        if (t <= 0.0) return 0.0;
        const double m = std::fmin(u_, (d_ - 1.0) / d_);
        const double b = d_ * u_ / (d_ - 1.0);
        if (b < 1.0 && t > b) return t;
        return m + t / d_;
      }
      case DiagonalKind::LowerEnvelope:
        return t <= u_ ? t : (t + d_ - 1.0) / d_;
      case DiagonalKind::ConvexEnvelope: {
        if (t <= 0.0) return 0.0;
        const double m = std::fmin(u_, (d_ - 1.0) / d_);
        const double slope = std::fmin(1.0 / (1.0 - u_), static_cast<double>(d_));
        return m + t / slope;
      }
      case DiagonalKind::Archimedean:
        return generator_->diagonal_inverse(d_, t);
      case DiagonalKind::GaussianEquicorr:
        if (rho_ == 0.0) return std::pow(t, 1.0 / d_);
        if (rho_ == 1.0) return t;
        return monotone_least_point([this](double s) { return eval_equicorr(s); },
                                    0.0, 1.0, t);
      case DiagonalKind::Mixture:
        if (t <= 0.0) return 0.0;
        return monotone_least_point([this](double s) { return eval(s); }, 0.0, 1.0, t);
      case DiagonalKind::Tabulated:
        return inverse_tabulated(t);
    }
    return 0.0;
  }

  std::string describe() const {
    std::ostringstream os;
    os << to_string(kind_) << "(d=" << d_;
    switch (kind_) {
      case DiagonalKind::UpperEnvelope:
      case DiagonalKind::LowerEnvelope:
      case DiagonalKind::ConvexEnvelope: os << ", u=" << u_; break;
      case DiagonalKind::Archimedean: os << ", " << generator_->describe(); break;
      case DiagonalKind::GaussianEquicorr: os << ", rho=" << rho_; break;
      case DiagonalKind::Mixture: os << ", K=" << components_.size(); break;
      case DiagonalKind::Tabulated: os << ", knots=" << knots_.size(); break;
      default: break;
    }
    os << ")";
    return os.str();
  }

 private:
  DiagonalSection(DiagonalKind kind, int d) : kind_(kind), d_(d) {}

  static int check_dim(int d) {
    if (d < 1) throw std::invalid_argument("diagonal: dimension d must be >= 1");
    return d;
  }

  static double check_prob(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument(std::string("diagonal: ") + name +
                                  " must lie in [0, 1]");
    }
    return p;
  }

  // One-factor representation: conditional on the shared factor W = w, the
  // d coordinates are independent Gaussians, so
  //   Delta(t) = E[ Phi((Phi^{-1}(t) - sqrt(rho) W) / sqrt(1 - rho))^d ].
  double eval_equicorr(double t) const {
    if (t == 0.0) return 0.0;
    if (t == 1.0) return 1.0;
    if (rho_ == 0.0) return pow_int(t, d_);
    if (rho_ == 1.0) return t;
    const double z = normal_quantile(t);
    const double sr = std::sqrt(rho_);
    const double s1r = std::sqrt(1.0 - rho_);
    return normal_expectation([this, z, sr, s1r](double w) {
      return pow_int(normal_cdf((z - sr * w) / s1r), d_);
    });
  }

  double eval_tabulated(double t) const {
    // Binary search for the cell containing t; exact at knots.
    auto it = std::lower_bound(
        knots_.begin(), knots_.end(), t,
        [](const std::pair<double, double>& knot, double v) { return knot.first < v; });
    if (it == knots_.begin()) return it->second;
    if (it == knots_.end()) return knots_.back().second;
    if (it->first == t) return it->second;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (t - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
  }

  double inverse_tabulated(double t) const {
    // First knot whose value reaches t; interpolate inside the cell below
    // it. Flat cells are skipped entirely, which lands on the left endpoint.
    auto it = std::lower_bound(
        knots_.begin(), knots_.end(), t,
        [](const std::pair<double, double>& knot, double v) { return knot.second < v; });
    if (it == knots_.begin()) return knots_.front().first;
    if (it == knots_.end()) return 1.0;  // t above Delta(1); nothing reaches it
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (hi.second == lo.second) return lo.first;
    const double w = (t - lo.second) / (hi.second - lo.second);
    return lo.first + w * (hi.first - lo.first);
  }

  DiagonalKind kind_;
  int d_;
  double u_ = 0.0;
  double rho_ = 0.0;
  std::optional<ArchimedeanGenerator> generator_;
  std::vector<double> weights_;
  std::vector<DiagonalSection> components_;
  std::vector<std::pair<double, double>> knots_;
};

// ---------------------------------------------------------------------------
// Validators
// ---------------------------------------------------------------------------

enum class DiagonalCondition {
  BoundaryValue,       // Delta(1) = 1
  DominatedByIdentity, // Delta(t) <= t
  Nondecreasing,       // Delta(t') >= Delta(t)
  LipschitzInD,        // Delta(t') - Delta(t) <= d (t' - t)
};

inline const char* to_string(DiagonalCondition c) {
  switch (c) {
    case DiagonalCondition::BoundaryValue: return "boundary_value";
    case DiagonalCondition::DominatedByIdentity: return "dominated_by_identity";
    case DiagonalCondition::Nondecreasing: return "nondecreasing";
    case DiagonalCondition::LipschitzInD: return "lipschitz_in_d";
  }
  return "?";
}

struct DiagonalConditionViolation {
  DiagonalCondition condition;
  double t_low = 0.0;
  double t_high = 0.0;
  double slack = 0.0;  // magnitude of the violation
};

struct DiagonalValidationReport {
  bool pass = true;
  int grid_size = 0;
  double tol = 0.0;
  std::optional<DiagonalConditionViolation> first_violation;
};

// Checks the three diagonal conditions on a uniform grid with grid_size
// cells. A failure reports the first violating point (or adjacent pair) in
// grid order together with the violation magnitude.
inline DiagonalValidationReport validate_diagonal(const DiagonalSection& diag, int grid_size,
                                      double tol = 1e-9) {
  if (grid_size < 2) throw std::invalid_argument("validate_diagonal: grid_size must be >= 2");
  DiagonalValidationReport report;
  report.grid_size = grid_size;
  report.tol = tol;
  const int d = diag.dim();

  auto fail = [&](DiagonalCondition c, double t_low, double t_high, double slack) {
    report.pass = false;
    report.first_violation = DiagonalConditionViolation{c, t_low, t_high, slack};
  };

  double prev_t = 0.0;
  double prev_v = diag.eval(0.0);
  if (prev_v > tol) {
    fail(DiagonalCondition::DominatedByIdentity, 0.0, 0.0, prev_v);
    return report;
  }
  for (int i = 1; i <= grid_size; ++i) {
    const double t = static_cast<double>(i) / grid_size;
    const double v = diag.eval(t);
    if (v > t + tol) {
      fail(DiagonalCondition::DominatedByIdentity, t, t, v - t);
      return report;
    }
    const double inc = v - prev_v;
    if (inc < -tol) {
      fail(DiagonalCondition::Nondecreasing, prev_t, t, -inc);
      return report;
    }
    if (inc > d * (t - prev_t) + tol) {
      fail(DiagonalCondition::LipschitzInD, prev_t, t, inc - d * (t - prev_t));
      return report;
    }
    prev_t = t;
    prev_v = v;
  }
  if (std::fabs(prev_v - 1.0) > tol) {
    fail(DiagonalCondition::BoundaryValue, 1.0, 1.0, std::fabs(prev_v - 1.0));
  }
  return report;
}

struct ConvexityReport {
  bool convex = true;
  int grid_size = 0;
  double tol = 0.0;
  double witness_t = 0.0;           // interior grid point of the worst violation
  double second_difference = 0.0;   // its (negative) second difference
};

// Certifies convexity numerically: second differences on a uniform grid must
// stay above -tol. When tol < 0 it defaults to 1e-9 scaled by the dimension,
// which absorbs quadrature noise in the equicorrelated Gaussian diagonal.
inline ConvexityReport check_convexity(const DiagonalSection& diag,
                                       int grid_size = 10000, double tol = -1.0) {
  if (grid_size < 3) throw std::invalid_argument("check_convexity: grid_size must be >= 3");
  if (tol < 0.0) tol = 1e-9 * diag.dim();
  ConvexityReport report;
  report.grid_size = grid_size;
  report.tol = tol;

  double v_prev = diag.eval(0.0);
  double v_mid = diag.eval(1.0 / grid_size);
  for (int i = 1; i < grid_size; ++i) {
    const double t_next = static_cast<double>(i + 1) / grid_size;
    const double v_next = diag.eval(t_next);
    const double second = v_prev - 2.0 * v_mid + v_next;
    if (second < -tol && (report.convex || second < report.second_difference)) {
      report.convex = false;
      report.witness_t = static_cast<double>(i) / grid_size;
      report.second_difference = second;
    }
    v_prev = v_mid;
    v_mid = v_next;
  }
  return report;
}

struct PsiMonotonicityReport {
  bool non_increasing = true;
  double witness_x_low = 0.0;
  double witness_x_high = 0.0;
  double ratio_low = 0.0;
  double ratio_high = 0.0;
};

// Tests whether Psi(x) = (psi^{-1})'(d x) / (psi^{-1})'(x) is non-increasing
// on a log-spaced grid over (0, x_max], where x_max = psi(1e-8) clipped to
// 1e12. Non-increasing Psi certifies a convex diagonal section; the converse
// need not hold, so a failure here only reports the witnessing pair.
inline PsiMonotonicityReport psi_monotonicity_check(const ArchimedeanGenerator& gen,
                                                    int d, int grid_size = 512,
                                                    double tol = 1e-10) {
  if (d < 1) throw std::invalid_argument("psi_monotonicity_check: d must be >= 1");
  if (grid_size < 2) {
    throw std::invalid_argument("psi_monotonicity_check: grid_size must be >= 2");
  }
  PsiMonotonicityReport report;
  if (d == 1) return report;  // Psi is identically 1

  const double x_lo = 1e-8;
  double x_hi = gen.psi(1e-8);
  if (!std::isfinite(x_hi) || x_hi > 1e12) x_hi = 1e12;

  const double log_lo = std::log(x_lo);
  const double step = (std::log(x_hi) - log_lo) / (grid_size - 1);
  double prev_x = x_lo;
  double prev_ratio = gen.psi_ratio(d, x_lo);
  for (int i = 1; i < grid_size; ++i) {
    const double x = std::exp(log_lo + i * step);
    const double ratio = gen.psi_ratio(d, x);
    if (ratio > prev_ratio + tol) {
      report.non_increasing = false;
      report.witness_x_low = prev_x;
      report.witness_x_high = x;
      report.ratio_low = prev_ratio;
      report.ratio_high = ratio;
      return report;
    }
    prev_x = x;
    prev_ratio = ratio;
  }
  return report;
}

}  // namespace anticonc
