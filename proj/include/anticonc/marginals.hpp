// Parametrized one-dimensional distribution families: CDF, generalized
// inverse quantile, Lebesgue density, and hazard function. These are the
// common marginal laws fed to every bound and sampler.
//
// All families are continuous. Scale parameters must be strictly positive;
// Weibull and Gamma shapes must satisfy alpha >= 1, since a shape below one
// makes the density unbounded near zero and rules out the bounds computed
// elsewhere in this library.
#pragma once

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "anticonc/rootfind.hpp"
#include "anticonc/special_functions.hpp"

namespace anticonc {

enum class MarginalFamily {
  Uniform01,
  Gaussian,
  Weibull,
  ReverseGumbel,
  Pareto,
  Gamma,
  GaussianMixture,
};

inline const char* to_string(MarginalFamily f) {
  switch (f) {
    case MarginalFamily::Uniform01: return "uniform01";
    case MarginalFamily::Gaussian: return "gaussian";
    case MarginalFamily::Weibull: return "weibull";
    case MarginalFamily::ReverseGumbel: return "reverse_gumbel";
    case MarginalFamily::Pareto: return "pareto";
    case MarginalFamily::Gamma: return "gamma";
    case MarginalFamily::GaussianMixture: return "gaussian_mixture";
  }
  return "?";
}

class MarginalDistribution {
 public:
  static MarginalDistribution uniform01() {
    return MarginalDistribution(MarginalFamily::Uniform01, 0.0, 1.0);
  }

  static MarginalDistribution gaussian(double mu, double sigma) {
    require(sigma > 0.0, "gaussian: sigma must be > 0");
    return MarginalDistribution(MarginalFamily::Gaussian, mu, sigma);
  }

  static MarginalDistribution weibull(double alpha, double lambda) {
    require(alpha >= 1.0, "weibull: shape alpha must be >= 1");
    require(lambda > 0.0, "weibull: scale lambda must be > 0");
    return MarginalDistribution(MarginalFamily::Weibull, alpha, lambda);
  }

  static MarginalDistribution reverse_gumbel(double lambda) {
    require(lambda > 0.0, "reverse_gumbel: scale lambda must be > 0");
    return MarginalDistribution(MarginalFamily::ReverseGumbel, 0.0, lambda);
  }

  static MarginalDistribution pareto(double alpha, double lambda) {
    require(alpha > 0.0, "pareto: shape alpha must be > 0");
    require(lambda > 0.0, "pareto: scale lambda must be > 0");
    return MarginalDistribution(MarginalFamily::Pareto, alpha, lambda);
  }

  static MarginalDistribution gamma(double alpha, double lambda) {
    require(alpha >= 1.0,
            "gamma: shape alpha must be >= 1 (for alpha < 1 the density is "
            "unbounded near zero)");
    require(lambda > 0.0, "gamma: scale lambda must be > 0");
    return MarginalDistribution(MarginalFamily::Gamma, alpha, lambda);
  }

  static MarginalDistribution gaussian_mixture(std::vector<double> weights,
                                               std::vector<double> sigmas) {
    require(!weights.empty() && weights.size() == sigmas.size(),
            "gaussian_mixture: p and sigma must be nonempty and equal length");
    double total = 0.0;
    for (double w : weights) {
      require(w >= 0.0, "gaussian_mixture: weights must be nonnegative");
      total += w;
    }
    require(std::fabs(total - 1.0) <= 1e-12,
            "gaussian_mixture: weights must sum to 1 within 1e-12");
    for (double s : sigmas) {
      require(s > 0.0, "gaussian_mixture: sigmas must be > 0");
    }
    MarginalDistribution m(MarginalFamily::GaussianMixture, 0.0, 1.0);
    m.weights_ = std::move(weights);
    m.sigmas_ = std::move(sigmas);
    return m;
  }

  MarginalFamily family() const { return family_; }

  // Family parameters; meaningful fields depend on the family.
  double mu() const { return a_; }
  double sigma() const { return b_; }
  double alpha() const { return a_; }
  double lambda() const { return b_; }
  const std::vector<double>& mixture_weights() const { return weights_; }
  const std::vector<double>& mixture_sigmas() const { return sigmas_; }

  double support_lower() const {
    switch (family_) {
      case MarginalFamily::Uniform01: return 0.0;
      case MarginalFamily::Gaussian: return -kInf;
      case MarginalFamily::Weibull: return 0.0;
      case MarginalFamily::ReverseGumbel: return -kInf;
      case MarginalFamily::Pareto: return b_;
      case MarginalFamily::Gamma: return 0.0;
      case MarginalFamily::GaussianMixture: return -kInf;
    }
    return -kInf;
  }

  double support_upper() const {
    return family_ == MarginalFamily::Uniform01 ? 1.0 : kInf;
  }

  double cdf(double x) const {
    switch (family_) {
      case MarginalFamily::Uniform01:
        return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : x);
      case MarginalFamily::Gaussian:
        return normal_cdf((x - a_) / b_);
      case MarginalFamily::Weibull:
        return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / b_, a_));
      case MarginalFamily::ReverseGumbel:
        return -std::expm1(-std::exp(x / b_));
      case MarginalFamily::Pareto:
        return x <= b_ ? 0.0 : 1.0 - std::pow(b_ / x, a_);
      case MarginalFamily::Gamma:
        return x <= 0.0 ? 0.0 : gamma_p(a_, x / b_);
      case MarginalFamily::GaussianMixture: {
        double sum = 0.0;
        for (std::size_t k = 0; k < weights_.size(); ++k) {
          sum += weights_[k] * normal_cdf(x / sigmas_[k]);
        }
        return sum;
      }
    }
    return 0.0;
  }

  // Survival function 1 - F(x), without cancellation where it matters.
  double sf(double x) const {
    switch (family_) {
      case MarginalFamily::Uniform01:
        return x <= 0.0 ? 1.0 : (x >= 1.0 ? 0.0 : 1.0 - x);
      case MarginalFamily::Gaussian:
        return normal_sf((x - a_) / b_);
      case MarginalFamily::Weibull:
        return x <= 0.0 ? 1.0 : std::exp(-std::pow(x / b_, a_));
      case MarginalFamily::ReverseGumbel:
        return std::exp(-std::exp(x / b_));
      case MarginalFamily::Pareto:
        return x <= b_ ? 1.0 : std::pow(b_ / x, a_);
      case MarginalFamily::Gamma:
        return x <= 0.0 ? 1.0 : gamma_q(a_, x / b_);
      case MarginalFamily::GaussianMixture: {
        double sum = 0.0;
        for (std::size_t k = 0; k < weights_.size(); ++k) {
          sum += weights_[k] * normal_sf(x / sigmas_[k]);
        }
        return sum;
      }
    }
    return 0.0;
  }

  double pdf(double x) const {
    switch (family_) {
      case MarginalFamily::Uniform01:
        return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
      case MarginalFamily::Gaussian:
        return normal_pdf((x - a_) / b_) / b_;
      case MarginalFamily::Weibull: {
        if (x < 0.0) return 0.0;
        if (x == 0.0) return a_ == 1.0 ? 1.0 / b_ : 0.0;
        const double z = x / b_;
        return (a_ / b_) * std::pow(z, a_ - 1.0) * std::exp(-std::pow(z, a_));
      }
      case MarginalFamily::ReverseGumbel: {
        const double t = x / b_;
        const double w = std::exp(t);
        return std::exp(t - w) / b_;
      }
      case MarginalFamily::Pareto:
        return x < b_ ? 0.0 : (a_ / x) * std::pow(b_ / x, a_);
      case MarginalFamily::Gamma: {
        if (x < 0.0) return 0.0;
        if (x == 0.0) return a_ == 1.0 ? 1.0 / b_ : 0.0;
        const double z = x / b_;
        return std::exp((a_ - 1.0) * std::log(z) - z - log_gamma(a_)) / b_;
      }
      case MarginalFamily::GaussianMixture: {
        double sum = 0.0;
        for (std::size_t k = 0; k < weights_.size(); ++k) {
          sum += weights_[k] / sigmas_[k] * normal_pdf(x / sigmas_[k]);
        }
        return sum;
      }
    }
    return 0.0;
  }

  // Hazard f(x) / (1 - F(x)). Uses the analytic simplification where one
  // exists; throws once the survival function is exactly zero (point at or
  // beyond the end of the support).
  double hazard(double x) const {
    switch (family_) {
      case MarginalFamily::Uniform01:
        if (x >= 1.0) throw std::domain_error("hazard: F(x) = 1, point beyond support");
        return x < 0.0 ? 0.0 : 1.0 / (1.0 - x);
      case MarginalFamily::Gaussian:
        return normal_hazard((x - a_) / b_) / b_;
      case MarginalFamily::Weibull:
        if (x < 0.0) return 0.0;
        if (x == 0.0) return a_ == 1.0 ? 1.0 / b_ : 0.0;
        return (a_ / b_) * std::pow(x / b_, a_ - 1.0);
      case MarginalFamily::ReverseGumbel:
        return std::exp(x / b_) / b_;
      case MarginalFamily::Pareto:
        return x < b_ ? 0.0 : a_ / x;
      case MarginalFamily::Gamma: {
        const double s = sf(x);
        if (s <= 0.0) throw std::domain_error("hazard: F(x) = 1, point beyond support");
        return pdf(x) / s;
      }
      case MarginalFamily::GaussianMixture: {
        const double s = sf(x);
        if (s <= 0.0) throw std::domain_error("hazard: F(x) = 1, point beyond support");
        return pdf(x) / s;
      }
    }
    return 0.0;
  }

  // Generalized inverse inf{s : F(s) >= t}. Closed form for all families
  // except Gamma and the Gaussian mixture, which bisect to 1e-12 on the
  // t-scale and then polish with Newton.
  double quantile(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) {
      throw std::domain_error("quantile: t must lie in [0, 1]");
    }
    if (t == 0.0) return support_lower();
    if (t == 1.0) return support_upper();
    switch (family_) {
      case MarginalFamily::Uniform01:
        return t;
      case MarginalFamily::Gaussian:
        return a_ + b_ * normal_quantile(t);
      case MarginalFamily::Weibull:
        return b_ * std::pow(-std::log1p(-t), 1.0 / a_);
      case MarginalFamily::ReverseGumbel:
        return b_ * std::log(-std::log1p(-t));
      case MarginalFamily::Pareto:
        return b_ * std::pow(1.0 - t, -1.0 / a_);
      case MarginalFamily::Gamma: {
        const double mean = a_ * b_;
        const double sd = std::sqrt(a_) * b_;
        return invert_cdf([this](double s) { return cdf(s); },
                          [this](double s) { return pdf(s); }, t, mean, sd, 0.0,
                          kInf);
      }
      case MarginalFamily::GaussianMixture: {
        double sd = 0.0;
        for (double s : sigmas_) sd = std::fmax(sd, s);
        return invert_cdf([this](double s) { return cdf(s); },
                          [this](double s) { return pdf(s); }, t, 0.0, sd, -kInf,
                          kInf);
      }
    }
    return 0.0;
  }

  std::string describe() const {
    std::ostringstream os;
    os << to_string(family_);
    switch (family_) {
      case MarginalFamily::Uniform01: break;
      case MarginalFamily::Gaussian: os << "(mu=" << a_ << ", sigma=" << b_ << ")"; break;
      case MarginalFamily::Weibull:
      case MarginalFamily::Pareto:
      case MarginalFamily::Gamma: os << "(alpha=" << a_ << ", lambda=" << b_ << ")"; break;
      case MarginalFamily::ReverseGumbel: os << "(lambda=" << b_ << ")"; break;
      case MarginalFamily::GaussianMixture: os << "(K=" << weights_.size() << ")"; break;
    }
    return os.str();
  }

 private:
  MarginalDistribution(MarginalFamily family, double a, double b)
      : family_(family), a_(a), b_(b) {}

  static void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
  }

  MarginalFamily family_;
  double a_;  // mu (gaussian) or alpha (weibull/pareto/gamma)
  double b_;  // sigma (gaussian) or lambda (scale families)
  std::vector<double> weights_;
  std::vector<double> sigmas_;
};

}  // namespace anticonc
