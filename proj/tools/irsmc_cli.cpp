// Command-line front end: single scenarios, radius sweeps and gradient checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irsmc/config_io.hpp"
#include "irsmc/experiment.hpp"
#include "irsmc/gradient_check.hpp"

namespace {

using irsmc::ScenarioConfig;

// Flags that override individual ScenarioConfig fields after the preset and config file.
struct Overrides {
  std::string preset = "desk";
  std::string config_path;
  std::optional<double> frequency_hz;
  std::optional<std::size_t> n_tx, n_rx;
  std::optional<double> aperture_lambda, radius_lambda, tx_spacing_lambda;
  std::optional<double> distance_ts, distance_sr, pathloss;
  std::optional<std::size_t> paths_ts, paths_sr;
  std::optional<double> reference_ohm, element_resistance, power_scale;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> alignment, init;
  std::optional<double> eta, grad_tol, expand, armijo;
  std::optional<int> max_iters;
  bool no_backtracking = false;

  void attach(CLI::App* app) {
    app->add_option("--preset", preset, "Base configuration")->check(CLI::IsMember({"desk", "paper-fig5"}));
    app->add_option("--config", config_path, "JSON file overlaid on the preset")->check(CLI::ExistingFile);
    app->add_option("--frequency", frequency_hz, "Carrier frequency [Hz]");
    app->add_option("--nt", n_tx, "Transmit antennas N_T");
    app->add_option("--nr", n_rx, "Single-antenna users N_R");
    app->add_option("--aperture-lambda", aperture_lambda, "Surface side length [wavelengths]");
    app->add_option("--radius-lambda", radius_lambda, "Element radius a_S as lambda/<value>");
    app->add_option("--tx-spacing-lambda", tx_spacing_lambda, "Transmit ULA pitch [wavelengths]");
    app->add_option("--d-ts", distance_ts, "Base station to surface distance [m]");
    app->add_option("--d-sr", distance_sr, "Surface to user distance [m]");
    app->add_option("--pathloss", pathloss, "Path-loss exponent");
    app->add_option("--paths-ts", paths_ts, "Paths between base station and surface");
    app->add_option("--paths-sr", paths_sr, "Paths between surface and each user");
    app->add_option("--r0", reference_ohm, "Reference impedance R0 [ohm]");
    app->add_option("--element-resistance", element_resistance, "Chu ladder resistance R [ohm]");
    app->add_option("--rho", power_scale, "Power scale rho in R_T = rho/N_T I");
    app->add_option("--seed", seed, "Random seed (first seed of a sweep)");
    app->add_option("--dipole-alignment", alignment, "first-axis | second-axis");
    app->add_option("--init", init, "uniform | zero");
    app->add_option("--eta", eta, "Ascent step size");
    app->add_option("--max-iters", max_iters, "Ascent iteration limit");
    app->add_option("--grad-tol", grad_tol, "Stop when the gradient infinity norm drops below this");
    app->add_option("--expand", expand, "Step growth after an accepted step (1 = fixed initial step)");
    app->add_option("--armijo", armijo, "Sufficient-increase fraction for backtracking");
    app->add_flag("--no-backtracking", no_backtracking, "Plain fixed-step ascent");
  }

  ScenarioConfig resolve() const {
    ScenarioConfig cfg = preset == "paper-fig5" ? ScenarioConfig::paper_fig5() : ScenarioConfig::desk();
    if (!config_path.empty()) cfg = irsmc::load_scenario_config(config_path, cfg);

    nlohmann::json patch = nlohmann::json::object();
    nlohmann::json opt = nlohmann::json::object();
    if (frequency_hz) patch["frequency_hz"] = *frequency_hz;
    if (alignment) patch["dipole_alignment"] = *alignment;
    if (init) patch["init"] = *init;
    if (eta) opt["step_size"] = *eta;
    if (max_iters) opt["max_iters"] = *max_iters;
    if (grad_tol) opt["grad_tol"] = *grad_tol;
    if (expand) opt["expand"] = *expand;
    if (armijo) opt["armijo"] = *armijo;
    if (no_backtracking) opt["backtracking"] = false;
    if (!opt.empty()) patch["optimizer"] = opt;
    cfg = irsmc::scenario_config_from_json(patch, cfg);

    // Wavelength-relative flags are resolved after the frequency is known.
    const double lambda = cfg.wavelength_m();
    if (n_tx) cfg.n_tx = *n_tx;
    if (n_rx) cfg.n_rx = *n_rx;
    if (aperture_lambda) cfg.aperture_m = *aperture_lambda * lambda;
    if (radius_lambda) cfg.radius_m = lambda / *radius_lambda;
    if (tx_spacing_lambda) cfg.tx_spacing_m = *tx_spacing_lambda * lambda;
    if (distance_ts) cfg.distance_ts_m = *distance_ts;
    if (distance_sr) cfg.distance_sr_m = *distance_sr;
    if (pathloss) cfg.pathloss_exponent = *pathloss;
    if (paths_ts) cfg.paths_ts = *paths_ts;
    if (paths_sr) cfg.paths_sr = *paths_sr;
    if (reference_ohm) cfg.reference_ohm = *reference_ohm;
    if (element_resistance) cfg.element_resistance_ohm = *element_resistance;
    if (power_scale) cfg.power_scale = *power_scale;
    if (seed) cfg.rng_seed = *seed;
    cfg.validate();
    return cfg;
  }
};

void print_rows(const std::vector<irsmc::SweepRow>& rows, double lambda) {
  for (const auto& r : rows) {
    std::printf("a_S=lambda/%-6.3g grid=%zux%zu %-20s seed=%llu rate=%.6f bits/s/Hz iters=%zu %s\n",
                lambda / r.radius_m, r.n1, r.n2, std::string(irsmc::scenario_name(r.scenario)).c_str(),
                static_cast<unsigned long long>(r.seed), r.rate, r.iterations, r.status.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circuit-theoretic IRS-assisted MIMO downlink simulator"};
  app.require_subcommand(1);

  Overrides run_flags;
  std::string run_scenario = "coupled-optimized";
  std::string run_out;
  CLI::App* run = app.add_subcommand("run", "Evaluate one scenario at one radius and seed");
  run_flags.attach(run);
  run->add_option("--scenario", run_scenario, "coupled-random | coupled-optimized | decoupled-random | "
                                              "decoupled-optimized | mismatched");
  run->add_option("--out", run_out, "Write the result row as CSV");

  Overrides sweep_flags;
  std::vector<double> divisors = {4, 8, 12, 16, 20};
  std::vector<std::string> sweep_scenarios;
  std::size_t seed_count = 10;
  std::string sweep_out;
  std::string aggregate_out;
  unsigned threads = 0;
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep the element radius at fixed aperture");
  sweep_flags.attach(sweep);
  sweep->add_option("--radius-divisors", divisors, "Radii a_S = lambda/d for each d")->delimiter(',');
  sweep->add_option("--scenarios", sweep_scenarios, "Scenarios to evaluate (default: all)")->delimiter(',');
  sweep->add_option("--seeds", seed_count, "Number of consecutive seeds starting at --seed");
  sweep->add_option("--out", sweep_out, "Per-row CSV")->required();
  sweep->add_option("--aggregate", aggregate_out, "Mean/std CSV (default: <out>.aggregate.csv)");
  sweep->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");

  std::size_t check_nt = 4, check_ns = 8, check_nr = 2;
  std::uint64_t check_seed = 1;
  double check_step = 1e-5;
  double check_tol = 1e-5;
  CLI::App* check = app.add_subcommand("check-gradient", "Closed-form gradient vs central differences");
  check->add_option("--nt", check_nt, "N_T");
  check->add_option("--ns", check_ns, "N_S");
  check->add_option("--nr", check_nr, "N_R");
  check->add_option("--seed", check_seed, "Instance seed");
  check->add_option("--step", check_step, "Relative finite-difference step");
  check->add_option("--tol", check_tol, "Pass threshold on the componentwise relative error");

  Overrides print_flags;
  CLI::App* print = app.add_subcommand("print-config", "Print the effective configuration as JSON");
  print_flags.attach(print);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const ScenarioConfig cfg = run_flags.resolve();
      const auto rows = irsmc::run_scenario(cfg, irsmc::parse_scenario(run_scenario));
      print_rows(rows, cfg.wavelength_m());
      if (!run_out.empty()) irsmc::write_text_file(run_out, irsmc::sweep_csv(cfg, rows));
      return rows.front().ok() ? 0 : 1;
    }
    if (*sweep) {
      const ScenarioConfig cfg = sweep_flags.resolve();
      std::vector<irsmc::Scenario> scenarios;
      for (const auto& s : sweep_scenarios) scenarios.push_back(irsmc::parse_scenario(s));
      if (scenarios.empty()) scenarios.assign(irsmc::kAllScenarios.begin(), irsmc::kAllScenarios.end());
      std::vector<std::uint64_t> seeds;
      for (std::size_t i = 0; i < seed_count; ++i) seeds.push_back(cfg.rng_seed + i);

      const auto start = std::chrono::steady_clock::now();
      const auto rows = irsmc::run_sweep(cfg, irsmc::radii_from_divisors(cfg, divisors), scenarios, seeds, threads);
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

      const auto agg = irsmc::aggregate(rows);
      irsmc::write_text_file(sweep_out, irsmc::sweep_csv(cfg, rows));
      irsmc::write_text_file(aggregate_out.empty() ? sweep_out + ".aggregate.csv" : aggregate_out,
                             irsmc::aggregate_csv(cfg, agg));
      for (const auto& a : agg) {
        std::printf("a_S=lambda/%-6.3g grid=%zux%zu %-20s mean=%.4f std=%.4f n=%zu failed=%zu\n",
                    cfg.wavelength_m() / a.radius_m, a.n1, a.n2, std::string(irsmc::scenario_name(a.scenario)).c_str(),
                    a.mean, a.stddev, a.count, a.failures);
      }
      std::printf("%zu rows in %.1f s\n", rows.size(), seconds);
      return 0;
    }
    if (*check) {
      const auto inst = irsmc::make_random_instance(check_nt, check_ns, check_nr, check_seed);
      const auto res = irsmc::check_reactance_gradient(inst.aux, inst.Z_S, inst.state, inst.covariance, check_step);
      std::printf("%4s %22s %22s %12s\n", "k", "analytic dC/dx", "central difference", "rel. error");
      for (Eigen::Index k = 0; k < res.analytic.size(); ++k) {
        const double a = res.analytic(k);
        const double f = res.finite_difference(k);
        std::printf("%4lld %22.14e %22.14e %12.3e\n", static_cast<long long>(k), a, f,
                    std::abs(a - f) / std::max(std::abs(a), std::abs(f)));
      }
      const bool pass = res.max_relative_error <= check_tol;
      std::printf("max relative error %.3e (%s, tolerance %.1e)\n", res.max_relative_error, pass ? "pass" : "FAIL",
                  check_tol);
      return pass ? 0 : 1;
    }
    if (*print) {
      std::cout << irsmc::to_json(print_flags.resolve()).dump(2) << '\n';
      return 0;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
  return 0;
}
