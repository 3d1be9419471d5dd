#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "anticonc/inference.hpp"

using namespace anticonc;

namespace {
const MarginalDistribution kUniform = MarginalDistribution::uniform01();
const MarginalDistribution kGauss = MarginalDistribution::gaussian(0.0, 1.0);
}  // namespace

TEST_CASE("test-statistic quantiles", "[inference]") {
  CHECK(quantile_qalpha(DiagonalSection::independence(2), kUniform, 0.19) ==
        Catch::Approx(0.9).margin(1e-12));
  CHECK(quantile_qalpha(DiagonalSection::frechet_upper(10), kGauss, 0.5) ==
        Catch::Approx(0.0).margin(1e-12));
  CHECK(quantile_qalpha(DiagonalSection::independence(1), kUniform, 0.25) ==
        Catch::Approx(0.75).margin(1e-12));
  CHECK_THROWS_AS(quantile_qalpha(DiagonalSection::independence(2), kUniform, 0.0),
                  std::domain_error);
  CHECK_THROWS_AS(quantile_qalpha(DiagonalSection::independence(2), kUniform, 1.0),
                  std::domain_error);
}

TEST_CASE("q_alpha is the least level-(1-alpha) point", "[inference]") {
  const std::vector<DiagonalSection> diagonals = {
      DiagonalSection::independence(1),
      DiagonalSection::independence(2),
      DiagonalSection::independence(5),
      DiagonalSection::archimedean(3, ArchimedeanGenerator::clayton(1.0)),
      DiagonalSection::archimedean(4, ArchimedeanGenerator::gumbel_hougaard(2.0)),
      DiagonalSection::gaussian_equicorr(2, 0.5),
  };
  const std::vector<MarginalDistribution> marginals = {
      kUniform, kGauss, MarginalDistribution::weibull(2.0, 1.0)};
  for (const auto& diag : diagonals) {
    for (const auto& marginal : marginals) {
      for (double alpha : {0.01, 0.1, 0.19, 0.5, 0.9}) {
        const double q = quantile_qalpha(diag, marginal, alpha);
        const double at_q = diag.eval(marginal.cdf(q));
        CHECK(at_q >= 1.0 - alpha - 1e-9);
        // Just below q the level has not been reached yet.
        const double below = diag.eval(marginal.cdf(q - 1e-9 * std::fmax(1.0, std::fabs(q))));
        CHECK(below < 1.0 - alpha + 1e-12);
      }
    }
  }
}

TEST_CASE("coupling profile step semantics", "[inference]") {
  const auto profile = CouplingProfile::from_table({{0.1, 0.5}, {0.2, 0.1}});
  CHECK(profile.at(0.05) == 1.0);   // nothing certified below the first knot
  CHECK(profile.at(0.1) == 0.5);
  CHECK(profile.at(0.15) == 0.5);   // the certified value at 0.1 still applies
  CHECK(profile.at(0.2) == 0.1);
  CHECK(profile.at(5.0) == 0.1);    // p is decreasing, so the last knot extends

  CHECK_THROWS_AS(CouplingProfile::from_table({}), std::invalid_argument);
  CHECK_THROWS_AS(CouplingProfile::from_table({{0.1, 0.2}, {0.2, 0.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(CouplingProfile::from_table({{0.2, 0.5}, {0.1, 0.2}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(CouplingProfile::from_table({{-0.1, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(CouplingProfile::from_table({{0.1, 1.5}}), std::invalid_argument);
}

TEST_CASE("size distortion minimization over the window grid", "[inference]") {
  // Coupling p = 1 below 0.1 and 0 from 0.1 on; the window term at 0.1 is
  // 1 - 0.81 = 0.19 on the right, 0.81 - 0.64 = 0.17 on the left.
  InferenceScenario scenario{
      DiagonalSection::independence(2),
      kUniform,
      0.19,
      CouplingProfile::from_table({{0.05, 1.0}, {0.1, 0.0}}),
      {0.05, 0.1},
  };
  const auto result = size_distortion_bound(scenario);
  CHECK(result.q_alpha == Catch::Approx(0.9).margin(1e-12));
  CHECK(result.argmin_epsilon == 0.1);
  CHECK(result.bound == Catch::Approx(0.19).margin(1e-12));
  REQUIRE(result.rows.size() == 2);
  CHECK(result.rows[1].below_term == Catch::Approx(0.17).margin(1e-12));
  CHECK(result.rows[1].above_term == Catch::Approx(0.19).margin(1e-12));
  CHECK(result.rows[0].total == Catch::Approx(1.0));

  // Perfect coupling with a zero-width window: distortion bound collapses.
  InferenceScenario perfect{
      DiagonalSection::independence(2), kUniform, 0.19,
      CouplingProfile::perfect(),      {0.0, 0.05},
  };
  const auto zero = size_distortion_bound(perfect);
  CHECK(zero.bound == 0.0);
  CHECK(zero.argmin_epsilon == 0.0);

  // Vacuous coupling: the bound saturates at one.
  InferenceScenario vacuous{
      DiagonalSection::independence(2), kUniform, 0.19,
      CouplingProfile::from_table({{0.0, 1.0}}), {0.05, 0.1},
  };
  CHECK(size_distortion_bound(vacuous).bound == 1.0);

  InferenceScenario empty_grid{
      DiagonalSection::independence(2), kUniform, 0.19,
      CouplingProfile::perfect(),      {},
  };
  CHECK_THROWS_AS(size_distortion_bound(empty_grid), std::invalid_argument);
}

TEST_CASE("window terms never exceed the universal sanity envelope", "[inference]") {
  InferenceScenario scenario{
      DiagonalSection::independence(3),
      kUniform,
      0.1,
      CouplingProfile::from_table({{0.0, 0.3}, {0.05, 0.2}, {0.15, 0.05}}),
      {0.01, 0.05, 0.1, 0.2},
  };
  const auto result = size_distortion_bound(scenario);
  for (const auto& row : result.rows) {
    const double cap =
        row.coupling_p +
        2.0 * any_copula_upper({result.q_alpha - row.epsilon, 2.0 * row.epsilon, 3, kUniform})
                  .value;
    CHECK(row.total <= cap + 1e-12);
  }
}

TEST_CASE("convex-class fallback mode dominates the exact mode", "[inference]") {
  InferenceScenario exact{
      DiagonalSection::independence(3),
      kUniform,
      0.1,
      CouplingProfile::perfect(),
      {0.01, 0.05, 0.1},
  };
  InferenceScenario fallback = exact;
  fallback.mode = AntiConcentrationMode::ConvexClassBound;
  const auto exact_result = size_distortion_bound(exact);
  const auto fallback_result = size_distortion_bound(fallback);
  CHECK(fallback_result.mode == AntiConcentrationMode::ConvexClassBound);
  REQUIRE(exact_result.rows.size() == fallback_result.rows.size());
  for (std::size_t i = 0; i < exact_result.rows.size(); ++i) {
    CHECK(fallback_result.rows[i].total >= exact_result.rows[i].total - 1e-12);
  }
}

TEST_CASE("perfect coupling keeps the empirical size at alpha", "[inference]") {
  const double alpha = 0.19;
  const auto diag = DiagonalSection::independence(2);
  const double q = quantile_qalpha(diag, kUniform, alpha);
  const SampleConfig cfg{200000, 42, 2};
  const auto samples = sample_max_via_diagonal(diag, kUniform, cfg);
  std::size_t exceed = 0;
  for (double s : samples) exceed += s > q;
  const double rate = static_cast<double>(exceed) / cfg.n;
  const double se = std::sqrt(alpha * (1.0 - alpha) / cfg.n);
  CHECK(std::fabs(rate - alpha) <= 5.0 * se);
}

TEST_CASE("factor-model comparison report", "[inference]") {
  const SampleConfig cfg{100000, 42, 2};
  const auto report = factor_model_scenario({0.5, 0.5}, {1.0, 0.2}, 100, 0.01, cfg);
  CHECK(report.bound.mixture_branch == Catch::Approx(0.18069708517540585).epsilon(1e-13));
  CHECK(report.bound.conditioning_branch ==
        Catch::Approx(0.25174271293851462).epsilon(1e-13));
  CHECK(report.bound.value < report.bound.conditioning_branch);
  CHECK(report.bound.regime == BoundRegime::MixtureBranch);
  REQUIRE(report.mc_checks.size() == 5);
  CHECK(report.mc_pass);
  for (const auto& check : report.mc_checks) {
    CHECK(check.pass);
    CHECK(check.p_hat <= report.bound.value + 4.0 * check.stderr_value);
  }

  // All unit scales: the mixture branch is the conditioning branch divided
  // by the first weight.
  const auto flat = factor_model_scenario({0.5, 0.5}, {1.0, 1.0}, 50, 0.01,
                                          SampleConfig{1000, 1, 1});
  CHECK(flat.bound.mixture_branch ==
        Catch::Approx(flat.bound.conditioning_branch / 0.5).epsilon(1e-13));
  CHECK(flat.bound.regime == BoundRegime::ConditioningBranch);

  // K = 1 degenerate: both branches coincide.
  const auto one = factor_model_scenario({1.0}, {1.0}, 100, 0.01, SampleConfig{1000, 1, 1});
  CHECK(one.bound.mixture_branch == Catch::Approx(one.bound.conditioning_branch).epsilon(1e-14));
}
