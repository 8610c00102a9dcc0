#include "irsmc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "irsmc/config_io.hpp"
#include "irsmc/errors.hpp"

namespace irsmc {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> draw_angles(std::size_t count, Rng& rng) {
  std::vector<double> out(count);
  for (double& a : out) a = rng.uniform(-constants::pi / 2, constants::pi / 2);
  return out;
}

// Angles on the surface are taken in the plane spanned by the layout normal and the in-plane axis
// orthogonal to the dipoles, where a CMS element has its constant equatorial gain.
Vec3 surface_phase_axis(const ArrayLayout& layout) { return layout.normal().cross(layout.dipole_axis); }

struct ScenarioOutcome {
  double rate = std::numeric_limits<double>::quiet_NaN();
  std::size_t iterations = 0;
  bool converged = false;
  bool monotone = true;
  std::string status = "ok";
};

// Runs the requested scenarios on one realization, sharing the decoupled optimization between
// DecoupledOptimized and Mismatched.
class RealizationRunner {
 public:
  RealizationRunner(const ScenarioConfig& cfg, const Realization& r) : cfg_(cfg), r_(r) {}

  ScenarioOutcome run(Scenario s) {
    ScenarioOutcome out;
    try {
      switch (s) {
        case Scenario::CoupledRandom:
          out.rate = rate(r_.coupled.Z_S, r_.initial);
          out.converged = true;
          break;
        case Scenario::DecoupledRandom:
          out.rate = rate(r_.Z_S_decoupled, r_.initial);
          out.converged = true;
          break;
        case Scenario::CoupledOptimized: {
          const OptimizationResult res = optimize_loads(r_.aux, r_.coupled.Z_S, r_.initial, r_.covariance, cfg_.optimizer);
          out.rate = res.rate();
          out.iterations = res.trace.iterations();
          out.converged = res.converged;
          out.monotone = res.trace.non_decreasing();
          break;
        }
        case Scenario::DecoupledOptimized: {
          const OptimizationResult& res = decoupled();
          out.rate = res.rate();
          out.iterations = res.trace.iterations();
          out.converged = res.converged;
          out.monotone = res.trace.non_decreasing();
          break;
        }
        case Scenario::Mismatched: {
          const OptimizationResult& res = decoupled();
          out.rate = rate(r_.coupled.Z_S, res.state);
          out.iterations = res.trace.iterations();
          out.converged = res.converged;
          out.monotone = res.trace.non_decreasing();
          break;
        }
      }
    } catch (const std::exception& err) {
      out.rate = std::numeric_limits<double>::quiet_NaN();
      out.status = std::string("error: ") + err.what();
    }
    return out;
  }

 private:
  double rate(const CMatrix& Z_S, const IrsState& state) const {
    return achievable_rate(r_.aux, Z_S, state, r_.covariance);
  }

  const OptimizationResult& decoupled() {
    if (!decoupled_) {
      decoupled_ = optimize_loads(r_.aux, r_.Z_S_decoupled, r_.initial, r_.covariance, cfg_.optimizer);
    }
    return *decoupled_;
  }

  const ScenarioConfig& cfg_;
  const Realization& r_;
  std::optional<OptimizationResult> decoupled_;
};

}  // namespace

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::CoupledRandom: return "coupled-random";
    case Scenario::CoupledOptimized: return "coupled-optimized";
    case Scenario::DecoupledRandom: return "decoupled-random";
    case Scenario::DecoupledOptimized: return "decoupled-optimized";
    case Scenario::Mismatched: return "mismatched";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  for (Scenario s : kAllScenarios) {
    if (scenario_name(s) == name) return s;
  }
  throw DomainError("unknown scenario '" + std::string(name) + "'");
}

void ScenarioConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be positive");
  };
  positive(frequency_hz, "frequency_hz");
  positive(aperture_m, "aperture_m");
  positive(radius_m, "radius_m");
  positive(tx_spacing_m, "tx_spacing_m");
  positive(distance_ts_m, "distance_ts_m");
  positive(distance_sr_m, "distance_sr_m");
  positive(reference_ohm, "reference_ohm");
  positive(element_resistance_ohm, "element_resistance_ohm");
  positive(gain_tx, "gain_tx");
  positive(gain_surface, "gain_surface");
  positive(gain_rx, "gain_rx");
  positive(radius_tx_m, "radius_tx_m");
  positive(radius_rx_m, "radius_rx_m");
  positive(power_scale, "power_scale");
  if (n_tx == 0 || n_rx == 0) throw DomainError("n_tx and n_rx must be at least 1");
  if (paths_ts == 0 || paths_sr == 0) throw DomainError("path counts must be at least 1");
  if (!(pathloss_exponent >= 2.0)) throw DomainError("pathloss_exponent must be at least 2");
  if (!(init_half_range_ohm >= 0.0)) throw DomainError("init_half_range_ohm must be non-negative");
  optimizer.validate();
}

ScenarioConfig ScenarioConfig::desk() {
  ScenarioConfig cfg;
  const double lambda = cfg.wavelength_m();
  cfg.n_tx = 8;
  cfg.n_rx = 2;
  cfg.aperture_m = 2.0 * lambda;
  cfg.radius_m = lambda / 4.0;
  cfg.tx_spacing_m = lambda / 2.0;
  cfg.radius_tx_m = lambda / 4.0;
  cfg.radius_rx_m = lambda / 4.0;
  return cfg;
}

ScenarioConfig ScenarioConfig::paper_fig5() {
  ScenarioConfig cfg = desk();
  cfg.n_tx = 32;
  cfg.n_rx = 5;
  cfg.aperture_m = 4.0 * cfg.wavelength_m();
  return cfg;
}

std::vector<double> radii_from_divisors(const ScenarioConfig& cfg, const std::vector<double>& divisors) {
  std::vector<double> out;
  out.reserve(divisors.size());
  for (double d : divisors) {
    if (!(d > 0.0)) throw DomainError("radius divisors must be positive");
    out.push_back(cfg.wavelength_m() / d);
  }
  return out;
}

Realization build_realization(const ScenarioConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  Realization r;
  r.ts_departure = draw_angles(cfg.paths_ts, rng);
  r.ts_arrival = draw_angles(cfg.paths_ts, rng);
  for (std::size_t u = 0; u < cfg.n_rx; ++u) {
    const std::vector<double> dep = draw_angles(cfg.paths_sr, rng);
    const std::vector<double> arr = draw_angles(cfg.paths_sr, rng);
    r.sr_departure.insert(r.sr_departure.end(), dep.begin(), dep.end());
    r.sr_arrival.insert(r.sr_arrival.end(), arr.begin(), arr.end());
  }

  const ChuElementSpec element{cfg.radius_m, cfg.element_resistance_ohm};
  const std::size_t side = cfg.grid_side();
  r.layout = build_irs_grid(side, side, cfg.spacing_m(), element, cfg.alignment);
  const std::size_t ns = r.layout.size();

  const TerminalImpedances terminals = assemble_terminals(cfg.n_tx, cfg.n_rx, cfg.reference_ohm);
  MultiportImpedances& z = r.coupled;
  z.Z_T = terminals.Z_T;
  z.Z_G = terminals.Z_G;
  z.Z_R = terminals.Z_R;
  z.Z_L = terminals.Z_L;
  z.Z_S = assemble_surface_impedance(r.layout, cfg.frequency_hz, true);
  z.Z_RT = CMatrix::Zero(static_cast<Eigen::Index>(cfg.n_rx), static_cast<Eigen::Index>(cfg.n_tx));
  r.Z_S_decoupled = decouple(z.Z_S);

  const ArrayManifold surface = ArrayManifold::from_layout(r.layout, surface_phase_axis(r.layout));

  LinkSpec downlink;
  downlink.tx = Terminal::Transmitter;
  downlink.rx = Terminal::Surface;
  downlink.tx_array = ArrayManifold::uniform_linear(cfg.n_tx, cfg.tx_spacing_m);
  downlink.rx_array = surface;
  downlink.paths = PathSet{r.ts_departure, r.ts_arrival, cfg.distance_ts_m, cfg.pathloss_exponent,
                           cfg.gain_tx, cfg.gain_surface, cfg.radius_tx_m, cfg.radius_m};
  z.Z_ST = transimpedance(downlink, z.Z_T, z.Z_S, cfg.frequency_hz);

  z.Z_RS = CMatrix(static_cast<Eigen::Index>(cfg.n_rx), static_cast<Eigen::Index>(ns));
  const CMatrix user_impedance = CMatrix::Identity(1, 1) * cfg.reference_ohm;
  for (std::size_t u = 0; u < cfg.n_rx; ++u) {
    LinkSpec reflect;
    reflect.tx = Terminal::Surface;
    reflect.rx = Terminal::Receiver;
    reflect.tx_array = surface;
    reflect.rx_array = ArrayManifold::uniform_linear(1, 0.0);
    const auto first = static_cast<std::ptrdiff_t>(u * cfg.paths_sr);
    const auto last = first + static_cast<std::ptrdiff_t>(cfg.paths_sr);
    reflect.paths = PathSet{{r.sr_departure.begin() + first, r.sr_departure.begin() + last},
                            {r.sr_arrival.begin() + first, r.sr_arrival.begin() + last},
                            cfg.distance_sr_m, cfg.pathloss_exponent, cfg.gain_surface, cfg.gain_rx,
                            cfg.radius_m, cfg.radius_rx_m};
    z.Z_RS.row(static_cast<Eigen::Index>(u)) = transimpedance(reflect, z.Z_S, user_impedance, cfg.frequency_hz);
  }

  r.aux = build_auxiliaries(z);
  r.covariance = TransmitCovariance::scaled_identity(cfg.n_tx, cfg.power_scale);
  r.initial = cfg.init == InitMode::Zero ? IrsState::zeros(ns) : IrsState::uniform(ns, cfg.init_half_range_ohm, rng);
  return r;
}

std::vector<SweepRow> run_scenario(const ScenarioConfig& cfg, Scenario scenario) {
  return run_sweep(cfg, {cfg.radius_m}, {scenario}, {cfg.rng_seed}, 1);
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, const std::vector<double>& radii_m,
                                const std::vector<Scenario>& scenarios, const std::vector<std::uint64_t>& seeds,
                                unsigned threads) {
  if (radii_m.empty() || scenarios.empty() || seeds.empty()) {
    throw DomainError("a sweep needs at least one radius, scenario and seed");
  }
  cfg.validate();

  const std::size_t n_points = radii_m.size();
  const std::size_t n_scen = scenarios.size();
  const std::size_t n_seeds = seeds.size();
  std::vector<SweepRow> rows(n_points * n_scen * n_seeds);
  auto slot = [&](std::size_t p, std::size_t s, std::size_t k) -> SweepRow& {
    return rows[(p * n_scen + s) * n_seeds + k];
  };

  auto run_task = [&](std::size_t task) {
    const std::size_t p = task / n_seeds;
    const std::size_t k = task % n_seeds;
    ScenarioConfig point = cfg;
    point.radius_m = radii_m[p];
    point.rng_seed = seeds[k];

    std::size_t side = 0;
    std::optional<Realization> realization;
    std::string failure;
    try {
      side = point.grid_side();
      realization = build_realization(point, seeds[k]);
    } catch (const std::exception& err) {
      failure = std::string("error: ") + err.what();
    }
    std::optional<RealizationRunner> runner;
    if (realization) runner.emplace(point, *realization);

    for (std::size_t s = 0; s < n_scen; ++s) {
      SweepRow& row = slot(p, s, k);
      row.point = p;
      row.radius_m = radii_m[p];
      row.n1 = side;
      row.n2 = side;
      row.scenario = scenarios[s];
      row.seed = seeds[k];
      row.power_scale = point.power_scale;
      if (!runner) {
        row.rate = std::numeric_limits<double>::quiet_NaN();
        row.status = failure;
        continue;
      }
      const ScenarioOutcome out = runner->run(scenarios[s]);
      row.rate = out.rate;
      row.iterations = out.iterations;
      row.converged = out.converged;
      row.monotone = out.monotone;
      row.status = out.status;
    }
  };

  const std::size_t n_tasks = n_points * n_seeds;
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_tasks));
  if (workers <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) run_task(t);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t t = next++; t < n_tasks; t = next++) run_task(t);
    });
  }
  for (std::thread& t : pool) t.join();
  return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<SweepRow>& rows) {
  std::vector<AggregateRow> out;
  std::map<std::pair<std::size_t, int>, std::size_t> index;
  std::vector<std::vector<double>> samples;
  for (const SweepRow& row : rows) {
    const auto key = std::make_pair(row.point, static_cast<int>(row.scenario));
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      AggregateRow agg;
      agg.point = row.point;
      agg.radius_m = row.radius_m;
      agg.n1 = row.n1;
      agg.n2 = row.n2;
      agg.scenario = row.scenario;
      out.push_back(agg);
      samples.emplace_back();
    }
    if (row.ok() && std::isfinite(row.rate)) {
      samples[it->second].push_back(row.rate);
    } else {
      ++out[it->second].failures;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::vector<double>& v = samples[i];
    out[i].count = v.size();
    if (v.empty()) {
      out[i].mean = out[i].stddev = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double sum = 0.0;
    for (double x : v) sum += x;
    out[i].mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - out[i].mean) * (x - out[i].mean);
    out[i].stddev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  }
  std::sort(out.begin(), out.end(), [](const AggregateRow& a, const AggregateRow& b) {
    return a.point != b.point ? a.point < b.point : static_cast<int>(a.scenario) < static_cast<int>(b.scenario);
  });
  return out;
}

namespace {

std::string config_preamble(const ScenarioConfig& cfg) {
  std::string out;
  for (const std::string& line : flatten_config(cfg)) out += "# " + line + "\n";
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c == '\n' ? ' ' : c;
  }
  return quoted + "\"";
}

}  // namespace

std::string sweep_csv(const ScenarioConfig& cfg, const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << config_preamble(cfg);
  os << "point,radius_m,wavelengths_per_radius,n1,n2,n_elements,scenario,seed,rate_bits_per_hz,iterations,"
        "converged,monotone_trace,power_scale,status\n";
  const double lambda = cfg.wavelength_m();
  for (const SweepRow& r : rows) {
    os << r.point << ',' << fmt(r.radius_m) << ',' << fmt(lambda / r.radius_m) << ',' << r.n1 << ',' << r.n2
       << ',' << r.n1 * r.n2 << ',' << scenario_name(r.scenario) << ',' << r.seed << ',' << fmt(r.rate) << ','
       << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << (r.monotone ? 1 : 0) << ',' << fmt(r.power_scale) << ','
       << csv_field(r.status) << '\n';
  }
  return os.str();
}

std::string aggregate_csv(const ScenarioConfig& cfg, const std::vector<AggregateRow>& rows) {
  std::ostringstream os;
  os << config_preamble(cfg);
  os << "point,radius_m,wavelengths_per_radius,n1,n2,n_elements,scenario,count,failures,mean_rate,std_rate\n";
  const double lambda = cfg.wavelength_m();
  for (const AggregateRow& r : rows) {
    os << r.point << ',' << fmt(r.radius_m) << ',' << fmt(lambda / r.radius_m) << ',' << r.n1 << ',' << r.n2
       << ',' << r.n1 * r.n2 << ',' << scenario_name(r.scenario) << ',' << r.count << ',' << r.failures << ','
       << fmt(r.mean) << ',' << fmt(r.stddev) << '\n';
  }
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace irsmc
