#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "anticonc/marginals.hpp"
#include "oracles.hpp"

using namespace anticonc;

namespace {

std::vector<MarginalDistribution> all_families() {
  return {
      MarginalDistribution::uniform01(),
      MarginalDistribution::gaussian(0.0, 1.0),
      MarginalDistribution::gaussian(-1.5, 2.5),
      MarginalDistribution::weibull(2.0, 1.0),
      MarginalDistribution::weibull(1.0, 0.7),
      MarginalDistribution::reverse_gumbel(1.0),
      MarginalDistribution::pareto(3.0, 2.0),
      MarginalDistribution::gamma(2.0, 1.0),
      MarginalDistribution::gamma(1.0, 3.0),
      MarginalDistribution::gaussian_mixture({0.5, 0.5}, {1.0, 0.2}),
  };
}

}  // namespace

TEST_CASE("cdf point values", "[marginals]") {
  CHECK(MarginalDistribution::uniform01().cdf(0.3) == 0.3);
  CHECK(MarginalDistribution::pareto(1.0, 1.0).cdf(2.0) == 0.5);
  // Standard normal at 0.1, against the independent oracle.
  const double expected = oracle::normal_cdf(0.1);
  CHECK(MarginalDistribution::gaussian(0.0, 1.0).cdf(0.1) ==
        Catch::Approx(expected).margin(1e-14));
  CHECK(expected == Catch::Approx(0.5398278).margin(5e-8));
  // Gamma through the incomplete-gamma path.
  CHECK(MarginalDistribution::gamma(2.0, 1.0).cdf(2.0) ==
        Catch::Approx(0.59399415029016192).epsilon(1e-12));
}

TEST_CASE("quantile point values and sentinels", "[marginals]") {
  CHECK(MarginalDistribution::uniform01().quantile(0.3) == 0.3);
  CHECK(MarginalDistribution::pareto(1.0, 1.0).quantile(0.5) == Catch::Approx(2.0));
  CHECK(MarginalDistribution::gaussian_mixture({0.5, 0.5}, {1.0, 0.2}).quantile(0.5) ==
        Catch::Approx(0.0).margin(1e-12));

  const auto gauss = MarginalDistribution::gaussian(0.0, 1.0);
  CHECK(gauss.quantile(0.0) == -kInf);
  CHECK(gauss.quantile(1.0) == kInf);
  CHECK(MarginalDistribution::pareto(2.0, 1.5).quantile(0.0) == 1.5);
  CHECK(MarginalDistribution::weibull(2.0, 1.0).quantile(0.0) == 0.0);
  CHECK(MarginalDistribution::weibull(2.0, 1.0).quantile(1.0) == kInf);
  CHECK(MarginalDistribution::reverse_gumbel(1.0).quantile(0.0) == -kInf);
  CHECK_THROWS_AS(gauss.quantile(-0.01), std::domain_error);
  CHECK_THROWS_AS(gauss.quantile(1.01), std::domain_error);
}

TEST_CASE("pdf point values", "[marginals]") {
  CHECK(MarginalDistribution::gaussian(0.0, 1.0).pdf(0.0) ==
        Catch::Approx(0.39894228040143268).epsilon(1e-14));
  CHECK(MarginalDistribution::pareto(3.0, 2.0).pdf(2.0) == Catch::Approx(1.5));
  CHECK(MarginalDistribution::weibull(2.0, 1.0).pdf(1.0) ==
        Catch::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("hazard point values", "[marginals]") {
  CHECK(MarginalDistribution::reverse_gumbel(1.0).hazard(0.0) == Catch::Approx(1.0));
  CHECK(MarginalDistribution::pareto(3.0, 1.0).hazard(2.0) == Catch::Approx(1.5));
  // Weibull with alpha = 1 is exponential: constant hazard.
  CHECK(MarginalDistribution::weibull(1.0, 1.0).hazard(5.0) == Catch::Approx(1.0));
  CHECK_THROWS_AS(MarginalDistribution::uniform01().hazard(1.0), std::domain_error);
  // Below the support the density vanishes, so the hazard does too.
  CHECK(MarginalDistribution::weibull(1.0, 1.0).hazard(-1.0) == 0.0);
  CHECK(MarginalDistribution::pareto(3.0, 1.0).hazard(0.5) == 0.0);
}

TEST_CASE("quantile/cdf round trip on a grid", "[marginals]") {
  for (const auto& m : all_families()) {
    for (int i = 1; i < 1000; ++i) {
      const double t = i / 1000.0;
      const double x = m.quantile(t);
      CHECK(std::fabs(m.cdf(x) - t) < 1e-10);
    }
  }
}

TEST_CASE("cdf and quantile are nondecreasing", "[marginals]") {
  for (const auto& m : all_families()) {
    double prev_q = -kInf;
    for (int i = 1; i < 1000; ++i) {
      const double q = m.quantile(i / 1000.0);
      CHECK(q >= prev_q);
      prev_q = q;
    }
    const double lo = std::isfinite(m.support_lower()) ? m.support_lower() - 1.0
                                                       : m.quantile(1e-6) - 1.0;
    const double hi = m.quantile(1.0 - 1e-6) + 1.0;
    double prev_f = -1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double f = m.cdf(lo + (hi - lo) * i / 1000.0);
      CHECK(f >= prev_f);
      CHECK((f >= 0.0 && f <= 1.0));
      prev_f = f;
    }
  }
}

TEST_CASE("cdf limits at the ends of the line", "[marginals]") {
  for (const auto& m : all_families()) {
    CHECK(m.cdf(-kInf) == 0.0);
    CHECK(m.cdf(kInf) == 1.0);
    CHECK(m.sf(-kInf) == 1.0);
    CHECK(m.sf(kInf) == 0.0);
  }
}

TEST_CASE("hazard times survival equals density", "[marginals]") {
  for (const auto& m : all_families()) {
    for (int i = 1; i < 200; ++i) {
      const double x = m.quantile(i / 200.0);
      if (m.cdf(x) >= 1.0 - 1e-12) continue;
      CHECK(std::fabs(m.hazard(x) * (1.0 - m.cdf(x)) - m.pdf(x)) < 1e-10);
    }
  }
}

TEST_CASE("mixture cdf is the weighted sum of component normals", "[marginals]") {
  const std::vector<double> p = {0.2, 0.5, 0.3};
  const std::vector<double> s = {1.0, 0.5, 0.1};
  const auto m = MarginalDistribution::gaussian_mixture(p, s);
  for (double x = -4.0; x <= 4.0; x += 0.13) {
    double expected = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) expected += p[k] * oracle::normal_cdf(x / s[k]);
    CHECK(std::fabs(m.cdf(x) - expected) < 1e-12);
  }
}

TEST_CASE("densities integrate to one", "[marginals]") {
  for (const auto& m : all_families()) {
    const double lo = m.quantile(1e-12);
    const double hi = m.quantile(1.0 - 1e-12);
    const double a = std::isfinite(lo) ? lo : m.quantile(1e-10);
    const double b = std::isfinite(hi) ? hi : m.quantile(1.0 - 1e-10);
    const double mass =
        oracle::integrate([&m](double x) { return m.pdf(x); }, a, b, 1e-10);
    CHECK(mass == Catch::Approx(1.0).margin(1e-6));
  }
}

TEST_CASE("parameter validation", "[marginals]") {
  CHECK_THROWS_AS(MarginalDistribution::gaussian(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(MarginalDistribution::weibull(0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MarginalDistribution::gamma(0.9, 1.0), std::invalid_argument);
  CHECK_THROWS_WITH(MarginalDistribution::gamma(0.9, 1.0),
                    Catch::Matchers::ContainsSubstring("unbounded"));
  CHECK_THROWS_AS(MarginalDistribution::pareto(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MarginalDistribution::pareto(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(MarginalDistribution::reverse_gumbel(-2.0), std::invalid_argument);
  CHECK_THROWS_AS(MarginalDistribution::gaussian_mixture({0.5, 0.6}, {1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MarginalDistribution::gaussian_mixture({0.5, 0.5}, {1.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MarginalDistribution::gaussian_mixture({1.0}, {1.0, 2.0}),
                  std::invalid_argument);
}
