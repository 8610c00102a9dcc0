#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "irsmc/channel.hpp"
#include "irsmc/geometry.hpp"
#include "irsmc/optimizer.hpp"

namespace irsmc {

enum class Scenario {
  CoupledRandom,
  CoupledOptimized,
  DecoupledRandom,
  DecoupledOptimized,
  Mismatched,  // loads optimized on the decoupled model, rate evaluated on the coupled one
};

inline constexpr std::array<Scenario, 5> kAllScenarios = {
    Scenario::CoupledRandom, Scenario::CoupledOptimized, Scenario::DecoupledRandom,
    Scenario::DecoupledOptimized, Scenario::Mismatched};

std::string_view scenario_name(Scenario s);
Scenario parse_scenario(std::string_view name);

enum class InitMode { Uniform, Zero };

/// Downlink through a square IRS of tightly packed Chu elements (pitch = 2 a_S). Lengths in meters.
struct ScenarioConfig {
  double frequency_hz = 30e9;
  std::size_t n_tx = 8;
  std::size_t n_rx = 2;
  double aperture_m = 0.0;   // per side
  double radius_m = 0.0;     // a_S; element pitch is 2 a_S
  double tx_spacing_m = 0.0;
  double distance_ts_m = 40.0;
  double distance_sr_m = 5.0;
  double pathloss_exponent = 2.5;
  std::size_t paths_ts = 10;
  std::size_t paths_sr = 1;
  double reference_ohm = 50.0;           // R0 for Z_T, Z_G, Z_R, Z_L
  double element_resistance_ohm = 50.0;  // R of the surface Chu ladder
  double gain_tx = 1.5;
  double gain_surface = 1.5;
  double gain_rx = 1.5;
  double radius_tx_m = 0.0;
  double radius_rx_m = 0.0;
  double power_scale = 1e15;  // rho in R_T = (rho / N_T) I
  std::uint64_t rng_seed = 1;
  DipoleAlignment alignment = DipoleAlignment::FirstGridAxis;
  InitMode init = InitMode::Uniform;
  double init_half_range_ohm = 100.0;
  OptimizerConfig optimizer;

  double wavelength_m() const { return wavelength(frequency_hz); }
  double spacing_m() const { return 2.0 * radius_m; }
  std::size_t grid_side() const { return grid_side_for_aperture(aperture_m, spacing_m()); }

  void validate() const;

  /// N_T = 8, N_R = 2, 2 lambda aperture, a_S = lambda / 4 at 30 GHz.
  static ScenarioConfig desk();
  /// N_T = 32, N_R = 5, 4 lambda aperture, a_S = lambda / 4 at 30 GHz.
  static ScenarioConfig paper_fig5();
};

/// Radii a_S = lambda / divisor for each divisor.
std::vector<double> radii_from_divisors(const ScenarioConfig& cfg, const std::vector<double>& divisors);

/// One random draw of the propagation environment and starting loads. Scenarios evaluated on the
/// same realization share path angles and initial reactances.
struct Realization {
  ArrayLayout layout;
  MultiportImpedances coupled;  // Z_S with mutual coupling; Z_RT = 0
  CMatrix Z_S_decoupled;
  ChannelAuxiliaries aux;       // identical for both surface models
  TransmitCovariance covariance;
  IrsState initial;
  std::vector<double> ts_departure, ts_arrival;
  std::vector<double> sr_departure, sr_arrival;  // one entry per user and path
};

Realization build_realization(const ScenarioConfig& cfg, std::uint64_t seed);

struct SweepRow {
  std::size_t point = 0;
  double radius_m = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  Scenario scenario = Scenario::CoupledRandom;
  std::uint64_t seed = 0;
  double rate = 0.0;  // bits/s/Hz, NaN on failure
  std::size_t iterations = 0;
  bool converged = false;
  bool monotone = true;  // the ascent trace behind this row never decreased
  double power_scale = 0.0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

/// Evaluates one scenario at cfg.radius_m and cfg.rng_seed.
std::vector<SweepRow> run_scenario(const ScenarioConfig& cfg, Scenario scenario);

/// Cross product of radii x scenarios x seeds, rows ordered by (radius, scenario, seed) as given.
/// Each (radius, seed) pair is one task; `threads` = 0 uses the hardware concurrency. A failing
/// point yields rows with an error status instead of aborting the sweep.
std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, const std::vector<double>& radii_m,
                                const std::vector<Scenario>& scenarios, const std::vector<std::uint64_t>& seeds,
                                unsigned threads = 0);

struct AggregateRow {
  std::size_t point = 0;
  double radius_m = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  Scenario scenario = Scenario::CoupledRandom;
  std::size_t count = 0;
  std::size_t failures = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
};

std::vector<AggregateRow> aggregate(const std::vector<SweepRow>& rows);

std::string sweep_csv(const ScenarioConfig& cfg, const std::vector<SweepRow>& rows);
std::string aggregate_csv(const ScenarioConfig& cfg, const std::vector<AggregateRow>& rows);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace irsmc
