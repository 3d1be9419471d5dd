// Archimedean copula generators: psi, its inverse and derivatives, and the
// ratio Psi(x) = (psi^-1)'(d x) / (psi^-1)'(x) whose monotonicity certifies
// a convex diagonal section.
//
// Families: Clayton and Frank for theta > 0, Gumbel-Hougaard for theta >= 1,
// and the generator psi(x) = e^{1/x} - e, whose inverse is completely
// monotone yet whose diagonal sections are not convex. The latter serves as
// a negative control for the convexity checks.
#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "anticonc/special_functions.hpp"

namespace anticonc {

enum class ArchimedeanFamily { Clayton, Frank, GumbelHougaard, ExpCounterexample };

inline const char* to_string(ArchimedeanFamily f) {
  switch (f) {
    case ArchimedeanFamily::Clayton: return "clayton";
    case ArchimedeanFamily::Frank: return "frank";
    case ArchimedeanFamily::GumbelHougaard: return "gumbel_hougaard";
    case ArchimedeanFamily::ExpCounterexample: return "exp_counterexample";
  }
  return "?";
}

class ArchimedeanGenerator {
 public:
  static ArchimedeanGenerator clayton(double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("clayton: theta must be > 0");
    return ArchimedeanGenerator(ArchimedeanFamily::Clayton, theta);
  }

  static ArchimedeanGenerator frank(double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("frank: theta must be > 0");
    return ArchimedeanGenerator(ArchimedeanFamily::Frank, theta);
  }

  static ArchimedeanGenerator gumbel_hougaard(double theta) {
    if (!(theta >= 1.0)) {
      throw std::invalid_argument("gumbel_hougaard: theta must be >= 1");
    }
    return ArchimedeanGenerator(ArchimedeanFamily::GumbelHougaard, theta);
  }

  static ArchimedeanGenerator exp_counterexample() {
    return ArchimedeanGenerator(ArchimedeanFamily::ExpCounterexample, 0.0);
  }

  ArchimedeanFamily family() const { return family_; }
  double theta() const { return theta_; }

  // psi: (0, 1] -> [0, inf), continuous, strictly decreasing, psi(1) = 0.
  double psi(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("psi: x must lie in [0, 1]");
    if (x == 0.0) return kInf;
    switch (family_) {
      case ArchimedeanFamily::Clayton:
        return std::pow(x, -theta_) - 1.0;
      case ArchimedeanFamily::Frank:
        // log{(e^{-theta} - 1) / (e^{-theta x} - 1)}; both factors negative.
        return std::log(std::expm1(-theta_) / std::expm1(-theta_ * x));
      case ArchimedeanFamily::GumbelHougaard:
        return std::pow(-std::log(x), theta_);
      case ArchimedeanFamily::ExpCounterexample:
        return std::exp(1.0 / x) - std::exp(1.0);
    }
    return 0.0;
  }

  // psi^{-1}: [0, inf] -> [0, 1], with psi_inverse(0) = 1 and
  // psi_inverse(inf) = 0.
  double psi_inverse(double y) const {
    if (!(y >= 0.0)) throw std::domain_error("psi_inverse: y must be >= 0");
    switch (family_) {
      case ArchimedeanFamily::Clayton:
        return std::pow(1.0 + y, -1.0 / theta_);
      case ArchimedeanFamily::Frank:
        // -(1/theta) log{1 - (1 - e^{-theta}) e^{-y}}
        return -std::log1p(std::expm1(-theta_) * std::exp(-y)) / theta_;
      case ArchimedeanFamily::GumbelHougaard:
        return std::exp(-std::pow(y, 1.0 / theta_));
      case ArchimedeanFamily::ExpCounterexample:
        return 1.0 / std::log(y + std::exp(1.0));
    }
    return 0.0;
  }

  double psi_prime(double x) const {
    if (!(x > 0.0 && x <= 1.0)) throw std::domain_error("psi_prime: x must lie in (0, 1]");
    switch (family_) {
      case ArchimedeanFamily::Clayton:
        return -theta_ * std::pow(x, -theta_ - 1.0);
      case ArchimedeanFamily::Frank:
        return -theta_ / std::expm1(theta_ * x);
      case ArchimedeanFamily::GumbelHougaard:
        return -theta_ * std::pow(-std::log(x), theta_ - 1.0) / x;
      case ArchimedeanFamily::ExpCounterexample:
        return -std::exp(1.0 / x) / (x * x);
    }
    return 0.0;
  }

  double psi_inverse_prime(double y) const {
    if (!(y >= 0.0)) throw std::domain_error("psi_inverse_prime: y must be >= 0");
    switch (family_) {
      case ArchimedeanFamily::Clayton:
        return -std::pow(1.0 + y, -1.0 / theta_ - 1.0) / theta_;
      case ArchimedeanFamily::Frank: {
        const double a = -std::expm1(-theta_);  // 1 - e^{-theta} in (0, 1)
        const double ae = a * std::exp(-y);
        return -ae / (theta_ * (1.0 - ae));
      }
      case ArchimedeanFamily::GumbelHougaard:
        return -std::pow(y, 1.0 / theta_ - 1.0) *
               std::exp(-std::pow(y, 1.0 / theta_)) / theta_;
      case ArchimedeanFamily::ExpCounterexample: {
        const double l = std::log(y + std::exp(1.0));
        return -1.0 / ((y + std::exp(1.0)) * l * l);
      }
    }
    return 0.0;
  }

  // Psi(x) = (psi^{-1})'(d x) / (psi^{-1})'(x), evaluated in a form that
  // stays finite when d*x is large (the raw derivative ratio under/overflows
  // for Frank and Gumbel-Hougaard).
  double psi_ratio(int d, double x) const {
    if (d < 1) throw std::invalid_argument("psi_ratio: d must be >= 1");
    if (!(x > 0.0)) throw std::domain_error("psi_ratio: x must be > 0");
    if (d == 1) return 1.0;
    const double dx = static_cast<double>(d) * x;
    switch (family_) {
      case ArchimedeanFamily::Clayton:
        return std::pow((1.0 + x) / (1.0 + dx), 1.0 / theta_ + 1.0);
      case ArchimedeanFamily::Frank: {
        // (e^x - a) / (e^{dx} - a) via logs: log(e^y - a) = y + log1p(-a e^{-y}).
        const double a = -std::expm1(-theta_);
        const double log_num = x + std::log1p(-a * std::exp(-x));
        const double log_den = dx + std::log1p(-a * std::exp(-dx));
        return std::exp(log_num - log_den);
      }
      case ArchimedeanFamily::GumbelHougaard: {
        const double r = 1.0 / theta_;
        return std::pow(static_cast<double>(d), r - 1.0) *
               std::exp(std::pow(x, r) * (1.0 - std::pow(static_cast<double>(d), r)));
      }
      case ArchimedeanFamily::ExpCounterexample: {
        const double e = std::exp(1.0);
        const double ln = std::log(x + e);
        const double ld = std::log(dx + e);
        return ((x + e) * ln * ln) / ((dx + e) * ld * ld);
      }
    }
    return 0.0;
  }

  // Diagonal section of the d-dimensional copula: psi^{-1}(d psi(t)).
  double diagonal(int d, double t) const {
    if (d < 1) throw std::invalid_argument("diagonal: d must be >= 1");
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("diagonal: t must lie in [0, 1]");
    if (t == 0.0) return 0.0;
    if (t == 1.0) return 1.0;
    return psi_inverse(static_cast<double>(d) * psi(t));
  }

  // Inverse of the diagonal: psi^{-1}(psi(t) / d). Exact because the
  // diagonal is strictly increasing for these generators.
  double diagonal_inverse(int d, double t) const {
    if (d < 1) throw std::invalid_argument("diagonal_inverse: d must be >= 1");
    if (!(t >= 0.0 && t <= 1.0)) {
      throw std::domain_error("diagonal_inverse: t must lie in [0, 1]");
    }
    if (t == 0.0) return 0.0;
    if (t == 1.0) return 1.0;
    return psi_inverse(psi(t) / static_cast<double>(d));
  }

  std::string describe() const {
    std::ostringstream os;
    os << to_string(family_);
    if (family_ != ArchimedeanFamily::ExpCounterexample) os << "(theta=" << theta_ << ")";
    return os.str();
  }

 private:
  ArchimedeanGenerator(ArchimedeanFamily family, double theta)
      : family_(family), theta_(theta) {}

  ArchimedeanFamily family_;
  double theta_;
};

}  // namespace anticonc
