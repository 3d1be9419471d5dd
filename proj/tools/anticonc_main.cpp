// anticonc: bounds, extremal diagonals, and Monte Carlo verification for
// the concentration of maximum statistics under dependence.
//
// Subcommands:
//   bound     evaluate a bound formula at a point
//   diagonal  validate a diagonal section (validity / convexity / psi checks)
//   verify    Monte Carlo check of a bound against sampled maxima
//   sweep     verify over a grid of dimensions and locations, CSV output
//   infer     size-distortion bound for a coupled test statistic
//
// Exit codes: 0 success / PASS, 1 FAIL verdict, 2 usage or parameter error.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anticonc/anticonc.hpp"

namespace {

using namespace anticonc;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ANTICONC_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return static_cast<std::uint64_t>(v);
    throw ConfigError("ANTICONC_SEED", "not an unsigned integer");
  }
  return 42;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ConfigError("out", "cannot open output file '" + out_path + "'");
  out << text << "\n";
}

json parse_json_arg(const std::string& text, const char* flag) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(flag, std::string("malformed JSON: ") + e.what());
  }
}

std::vector<double> split_doubles(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError(flag, "expected comma-separated numbers, got '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(flag, "expected at least one value");
  return out;
}

std::vector<int> split_ints(const std::string& text, const char* flag) {
  std::vector<int> out;
  for (double v : split_doubles(text, flag)) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw ConfigError(flag, "expected integers");
    out.push_back(i);
  }
  return out;
}

// Replace the dimension throughout a diagonal spec (recursing into mixture
// components) so one template serves a sweep over d.
void override_dimension(json& spec, int d) {
  if (spec.is_object() && spec.value("kind", "") == "mixture") {
    for (json& c : spec.at("components")) override_dimension(c, d);
    return;
  }
  if (spec.is_object()) spec["d"] = d;
}

struct BoundRequest {
  std::string kind;
  std::optional<MarginalDistribution> marginal;
  int d = 1;
  double x = 0.0;
  double eps = 0.0;
  std::string variant;  // "", "abs", or "chi2" for closed-form
  int chi2_p = 0;
};

BoundResult compute_bound(const BoundRequest& req) {
  auto need_marginal = [&]() -> const MarginalDistribution& {
    if (!req.marginal) throw ConfigError("marginal", "this bound kind requires --marginal");
    return *req.marginal;
  };
  if (req.kind == "thm1-upper") {
    return any_copula_upper({req.x, req.eps, req.d, need_marginal()});
  }
  if (req.kind == "thm1-lower") {
    return any_copula_lower({req.x, req.eps, req.d, need_marginal()});
  }
  if (req.kind == "thm2") {
    return convex_class_upper({req.x, req.eps, req.d, need_marginal()});
  }
  if (req.kind == "nazarov") {
    const MarginalDistribution& m = need_marginal();
    if (m.family() != MarginalFamily::Gaussian) {
      throw ConfigError("marginal", "nazarov requires a gaussian marginal (sigma)");
    }
    return BoundResult{nazarov_bound(m.sigma(), req.d, req.eps),
                       BoundRegime::NotApplicable, BoundFormula::Nazarov};
  }
  if (req.kind == "closed-form") {
    if (req.variant == "chi2") {
      if (req.chi2_p < 2) throw ConfigError("chi2-p", "chi-squared variant requires --chi2-p >= 2");
      return BoundResult{chi_squared_bound(req.chi2_p, req.eps), BoundRegime::NotApplicable,
                         BoundFormula::ClosedFormChiSquared};
    }
    if (req.variant == "abs") {
      const MarginalDistribution& m = need_marginal();
      if (m.family() != MarginalFamily::Gaussian) {
        throw ConfigError("marginal", "variant 'abs' requires a gaussian marginal");
      }
      return BoundResult{joint_gaussian_abs_bound(m.sigma(), req.d, req.eps),
                         BoundRegime::NotApplicable, BoundFormula::ClosedFormJointGaussianAbs};
    }
    if (!req.variant.empty()) throw ConfigError("variant", "expected '', 'abs', or 'chi2'");
    return closed_form_bound(need_marginal(), req.d, req.eps);
  }
  if (req.kind == "gmm") {
    const MarginalDistribution& m = need_marginal();
    if (m.family() != MarginalFamily::GaussianMixture) {
      throw ConfigError("marginal", "gmm requires a gaussian_mixture marginal");
    }
    const GaussianMixtureBound g =
        gmm_bound(m.mixture_weights(), m.mixture_sigmas(), req.d, req.eps);
    return BoundResult{g.value, g.regime, BoundFormula::GaussianMixture};
  }
  throw ConfigError("kind", "unknown bound kind '" + req.kind + "'");
}

void write_estimate(JsonWriter& w, const EstimateResult& est) {
  w.key("estimate").begin_object();
  w.key("p_hat").value(est.p_hat);
  w.key("stderr").value(est.stderr_value);
  w.key("ci_low").value(est.ci_low);
  w.key("ci_high").value(est.ci_high);
  w.key("n").value(est.n);
  w.key("seed").value(est.seed);
  w.end_object();
}

int run_bound(const BoundRequest& req, const std::string& out_path) {
  const BoundResult result = compute_bound(req);
  JsonWriter w;
  w.begin_object();
  w.key("subcommand").value("bound");
  w.key("kind").value(req.kind);
  w.key("formula_id").value(formula_id(result.formula));
  w.key("value").value(result.value);
  w.key("regime").value(to_string(result.regime));
  w.key("d").value(req.d);
  w.key("x").value(req.x);
  w.key("eps").value(req.eps);
  w.end_object();
  write_output(w.str(), out_path);
  return 0;
}

int run_diagonal_check(const json& spec, const std::string& check, int grid, double tol,
                       const std::string& out_path) {
  const DiagonalSection diag = parse_diagonal(spec);
  JsonWriter w;
  w.begin_object();
  w.key("subcommand").value("diagonal");
  w.key("check").value(check);
  w.key("diagonal").value(diag.describe());
  bool pass = false;
  if (check == "lemma1" || check == "validity") {
    const DiagonalValidationReport report =
        validate_diagonal(diag, grid, tol > 0 ? tol : 1e-9);
    pass = report.pass;
    w.key("pass").value(report.pass);
    w.key("grid").value(report.grid_size);
    w.key("tol").value(report.tol);
    if (report.first_violation) {
      const auto& v = *report.first_violation;
      w.key("violation").begin_object();
      w.key("condition").value(to_string(v.condition));
      w.key("t_low").value(v.t_low);
      w.key("t_high").value(v.t_high);
      w.key("slack").value(v.slack);
      w.end_object();
    }
  } else if (check == "convexity") {
    const ConvexityReport report = check_convexity(diag, grid, tol);
    pass = report.convex;
    w.key("pass").value(report.convex);
    w.key("grid").value(report.grid_size);
    w.key("tol").value(report.tol);
    if (!report.convex) {
      w.key("witness_t").value(report.witness_t);
      w.key("second_difference").value(report.second_difference);
    }
  } else if (check == "psi") {
    if (diag.kind() != DiagonalKind::Archimedean) {
      throw ConfigError("check", "psi check requires an archimedean diagonal");
    }
    const PsiMonotonicityReport report =
        psi_monotonicity_check(diag.generator(), diag.dim(), grid > 2 ? grid : 512);
    pass = report.non_increasing;
    w.key("pass").value(report.non_increasing);
    if (!report.non_increasing) {
      w.key("witness_x_low").value(report.witness_x_low);
      w.key("witness_x_high").value(report.witness_x_high);
      w.key("ratio_low").value(report.ratio_low);
      w.key("ratio_high").value(report.ratio_high);
    }
  } else {
    throw ConfigError("check", "expected lemma1|validity|convexity|psi");
  }
  w.end_object();
  write_output(w.str(), out_path);
  return pass ? 0 : 1;
}

int run_verify(const json& diag_spec, const MarginalDistribution& marginal, double x,
               double eps, BoundRequest req, const SampleConfig& cfg, double k_sigma,
               std::optional<double> override_bound, const std::string& out_path) {
  const DiagonalSection diag = parse_diagonal(diag_spec);
  req.d = diag.dim();
  req.marginal = marginal;
  req.x = x;
  req.eps = eps;
  BoundResult bound = compute_bound(req);
  if (override_bound) bound.value = *override_bound;

  const std::vector<double> samples = sample_max_via_diagonal(diag, marginal, cfg);
  const EstimateResult est = estimate_concentration(samples, x, eps, cfg);
  const Verdict verdict = verify_bound(bound, est, k_sigma);

  JsonWriter w;
  w.begin_object();
  w.key("subcommand").value("verify");
  w.key("diagonal").value(diag.describe());
  w.key("bound").begin_object();
  w.key("kind").value(req.kind);
  w.key("formula_id").value(formula_id(bound.formula));
  w.key("value").value(bound.value);
  w.key("regime").value(to_string(bound.regime));
  w.key("override").value(static_cast<bool>(override_bound));
  w.end_object();
  write_estimate(w, est);
  w.key("verdict").begin_object();
  w.key("pass").value(verdict.pass);
  w.key("slack").value(verdict.slack);
  w.key("k_sigma").value(verdict.k_sigma);
  w.key("direction").value(verdict.lower_bound ? "lower" : "upper");
  w.end_object();
  w.key("x").value(x);
  w.key("eps").value(eps);
  w.end_object();
  write_output(w.str(), out_path);
  return verdict.pass ? 0 : 1;
}

int run_sweep(json diag_spec, const MarginalDistribution& marginal,
              const std::string& bound_kind, const std::vector<int>& d_list,
              const std::vector<double>& x_grid, double eps, const SampleConfig& cfg,
              double k_sigma, const std::string& out_path) {
  std::string csv = "d,x,eps,kind,bound,p_hat,stderr,verdict\n";
  bool all_pass = true;
  for (int d : d_list) {
    json spec = diag_spec;
    override_dimension(spec, d);
    const DiagonalSection diag = parse_diagonal(spec);
    const std::vector<double> samples = sample_max_via_diagonal(diag, marginal, cfg);
    for (double x : x_grid) {
      BoundRequest req;
      req.kind = bound_kind;
      req.marginal = marginal;
      req.d = d;
      req.x = x;
      req.eps = eps;
      const BoundResult bound = compute_bound(req);
      const EstimateResult est = estimate_concentration(samples, x, eps, cfg);
      const Verdict verdict = verify_bound(bound, est, k_sigma);
      all_pass = all_pass && verdict.pass;
      csv += std::to_string(d) + "," + format_double_csv(x) + "," + format_double_csv(eps) +
             "," + bound_kind + "," + format_double_csv(bound.value) + "," +
             format_double_csv(est.p_hat) + "," + format_double_csv(est.stderr_value) +
             "," + (verdict.pass ? "PASS" : "FAIL") + "\n";
    }
  }
  csv.pop_back();  // trailing newline added back by write_output
  write_output(csv, out_path);
  return all_pass ? 0 : 1;
}

int run_infer(const std::string& scenario_path, const std::string& csv_path,
              const std::string& out_path) {
  std::ifstream in(scenario_path);
  if (!in) throw ConfigError("scenario", "cannot open scenario file '" + scenario_path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario", std::string("malformed JSON: ") + e.what());
  }
  const InferenceScenario scenario = parse_scenario(j);
  const SizeDistortionResult result = size_distortion_bound(scenario);

  JsonWriter w;
  w.begin_object();
  w.key("subcommand").value("infer");
  w.key("q_alpha").value(result.q_alpha);
  w.key("bound").value(result.bound);
  w.key("argmin_epsilon").value(result.argmin_epsilon);
  w.key("mode").value(to_string(result.mode));
  w.key("rows").begin_array();
  for (const SizeDistortionRow& row : result.rows) {
    w.begin_object();
    w.key("eps").value(row.epsilon);
    w.key("coupling_p").value(row.coupling_p);
    w.key("below_term").value(row.below_term);
    w.key("above_term").value(row.above_term);
    w.key("total").value(row.total);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  write_output(w.str(), out_path);

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw ConfigError("csv", "cannot open output file '" + csv_path + "'");
    csv << "eps,coupling_p,below_term,above_term,total\n";
    for (const SizeDistortionRow& row : result.rows) {
      csv << format_double_csv(row.epsilon) << "," << format_double_csv(row.coupling_p)
          << "," << format_double_csv(row.below_term) << ","
          << format_double_csv(row.above_term) << "," << format_double_csv(row.total)
          << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anti-concentration bounds for maximum statistics via copula diagonals"};
  app.require_subcommand(1);

  std::string out_path;
  app.add_option("--out", out_path, "Write output to this path instead of stdout");

  // bound
  auto* bound_cmd = app.add_subcommand("bound", "Evaluate a bound formula");
  std::string bound_kind, bound_marginal, bound_variant;
  int bound_d = 1, bound_chi2p = 0;
  double bound_x = 0.0, bound_eps = 0.0;
  bound_cmd->add_option("--kind", bound_kind,
                        "thm1-upper|thm1-lower|thm2|nazarov|closed-form|gmm")
      ->required();
  bound_cmd->add_option("--marginal", bound_marginal, "Marginal spec (JSON)");
  bound_cmd->add_option("--d", bound_d, "Dimension");
  bound_cmd->add_option("--x", bound_x, "Window location");
  bound_cmd->add_option("--eps", bound_eps, "Window width");
  bound_cmd->add_option("--variant", bound_variant, "closed-form variant: abs|chi2");
  bound_cmd->add_option("--chi2-p", bound_chi2p, "Degrees of freedom for variant chi2");

  // diagonal
  auto* diag_cmd = app.add_subcommand("diagonal", "Check a diagonal section");
  std::string diag_spec_text, diag_check = "lemma1";
  int diag_grid = 10000;
  double diag_tol = -1.0;
  diag_cmd->add_option("--spec", diag_spec_text, "Diagonal spec (JSON)")->required();
  diag_cmd->add_option("--check", diag_check, "lemma1|validity|convexity|psi");
  diag_cmd->add_option("--grid", diag_grid, "Grid size");
  diag_cmd->add_option("--tol", diag_tol, "Tolerance (default per check)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Monte Carlo bound verification");
  std::string verify_diag, verify_marginal, verify_kind, verify_variant;
  double verify_x = 0.0, verify_eps = 0.0, verify_k = 4.0;
  int verify_chi2p = 0;
  SampleConfig verify_cfg;
  verify_cfg.seed = 0;  // resolved after parse (env default)
  bool verify_seed_set = false;
  std::optional<double> override_bound;
  double override_value = 0.0;
  verify_cmd->add_option("--diagonal", verify_diag, "Diagonal spec (JSON)")->required();
  verify_cmd->add_option("--marginal", verify_marginal, "Marginal spec (JSON)")->required();
  verify_cmd->add_option("--x", verify_x, "Window location")->required();
  verify_cmd->add_option("--eps", verify_eps, "Window width")->required();
  verify_cmd->add_option("--bound-kind", verify_kind, "Bound to verify")->required();
  verify_cmd->add_option("--variant", verify_variant, "closed-form variant: abs|chi2");
  verify_cmd->add_option("--chi2-p", verify_chi2p, "Degrees of freedom for variant chi2");
  verify_cmd->add_option("--n", verify_cfg.n, "Sample count");
  auto* verify_seed_opt = verify_cmd->add_option("--seed", verify_cfg.seed, "RNG seed");
  verify_cmd->add_option("--workers", verify_cfg.workers, "Worker threads");
  verify_cmd->add_option("--k-sigma", verify_k, "Stderr multiples of slack");
  auto* override_opt =
      verify_cmd->add_option("--override-bound", override_value,
                             "Replace the bound value (negative control)");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Verify over a (d, x) grid, CSV output");
  std::string sweep_diag, sweep_marginal, sweep_kind, sweep_dlist, sweep_xgrid;
  double sweep_eps = 0.0, sweep_k = 4.0;
  SampleConfig sweep_cfg;
  sweep_cfg.seed = 0;
  sweep_cmd->add_option("--diagonal", sweep_diag, "Diagonal spec template (JSON)")->required();
  sweep_cmd->add_option("--marginal", sweep_marginal, "Marginal spec (JSON)")->required();
  sweep_cmd->add_option("--bound-kind", sweep_kind, "Bound to verify")->required();
  sweep_cmd->add_option("--d-list", sweep_dlist, "Comma-separated dimensions")->required();
  sweep_cmd->add_option("--x-grid", sweep_xgrid, "Comma-separated locations")->required();
  sweep_cmd->add_option("--eps", sweep_eps, "Window width")->required();
  sweep_cmd->add_option("--n", sweep_cfg.n, "Sample count");
  auto* sweep_seed_opt = sweep_cmd->add_option("--seed", sweep_cfg.seed, "RNG seed");
  sweep_cmd->add_option("--workers", sweep_cfg.workers, "Worker threads");
  sweep_cmd->add_option("--k-sigma", sweep_k, "Stderr multiples of slack");

  // infer
  auto* infer_cmd = app.add_subcommand("infer", "Size-distortion bound from a scenario file");
  std::string infer_scenario, infer_csv;
  infer_cmd->add_option("--scenario", infer_scenario, "Scenario file (JSON)")->required();
  infer_cmd->add_option("--csv", infer_csv, "Also write the per-epsilon table to this CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    verify_seed_set = verify_seed_opt->count() > 0;
    if (bound_cmd->parsed()) {
      BoundRequest req;
      req.kind = bound_kind;
      if (!bound_marginal.empty()) {
        req.marginal = parse_marginal(parse_json_arg(bound_marginal, "marginal"));
      }
      req.d = bound_d;
      req.x = bound_x;
      req.eps = bound_eps;
      req.variant = bound_variant;
      req.chi2_p = bound_chi2p;
      return run_bound(req, out_path);
    }
    if (diag_cmd->parsed()) {
      return run_diagonal_check(parse_json_arg(diag_spec_text, "spec"), diag_check,
                                diag_grid, diag_tol, out_path);
    }
    if (verify_cmd->parsed()) {
      if (!verify_seed_set) verify_cfg.seed = default_seed();
      if (override_opt->count() > 0) override_bound = override_value;
      BoundRequest req;
      req.kind = verify_kind;
      req.variant = verify_variant;
      req.chi2_p = verify_chi2p;
      return run_verify(parse_json_arg(verify_diag, "diagonal"),
                        parse_marginal(parse_json_arg(verify_marginal, "marginal")),
                        verify_x, verify_eps, req, verify_cfg, verify_k, override_bound,
                        out_path);
    }
    if (sweep_cmd->parsed()) {
      if (sweep_seed_opt->count() == 0) sweep_cfg.seed = default_seed();
      return run_sweep(parse_json_arg(sweep_diag, "diagonal"),
                       parse_marginal(parse_json_arg(sweep_marginal, "marginal")),
                       sweep_kind, split_ints(sweep_dlist, "d-list"),
                       split_doubles(sweep_xgrid, "x-grid"), sweep_eps, sweep_cfg, sweep_k,
                       out_path);
    }
    if (infer_cmd->parsed()) {
      return run_infer(infer_scenario, infer_csv, out_path);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
