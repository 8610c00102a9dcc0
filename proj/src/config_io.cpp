#include "irsmc/config_io.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "irsmc/errors.hpp"

namespace irsmc {

using nlohmann::json;

namespace {

std::string alignment_name(DipoleAlignment a) {
  return a == DipoleAlignment::FirstGridAxis ? "first-axis" : "second-axis";
}

DipoleAlignment parse_alignment(const std::string& s) {
  if (s == "first-axis") return DipoleAlignment::FirstGridAxis;
  if (s == "second-axis") return DipoleAlignment::SecondGridAxis;
  throw DomainError("dipole_alignment must be 'first-axis' or 'second-axis', got '" + s + "'");
}

std::string init_name(InitMode m) { return m == InitMode::Zero ? "zero" : "uniform"; }

InitMode parse_init(const std::string& s) {
  if (s == "zero") return InitMode::Zero;
  if (s == "uniform") return InitMode::Uniform;
  throw DomainError("init must be 'uniform' or 'zero', got '" + s + "'");
}

template <typename Setters>
void apply(const json& j, const Setters& setters, const char* section) {
  if (!j.is_object()) throw DomainError(std::string(section) + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto setter = setters.find(it.key());
    if (setter == setters.end()) {
      throw DomainError(std::string("unknown key '") + it.key() + "' in " + section);
    }
    try {
      setter->second(it.value());
    } catch (const json::exception& err) {
      throw DomainError(std::string("bad value for '") + it.key() + "': " + err.what());
    }
  }
}

void flatten(const json& j, const std::string& prefix, std::vector<std::string>& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it.value().is_object()) {
      flatten(it.value(), key, out);
    } else if (it.value().is_string()) {
      out.push_back(key + "=" + it.value().get<std::string>());
    } else {
      out.push_back(key + "=" + it.value().dump());
    }
  }
}

}  // namespace

json to_json(const OptimizerConfig& c) {
  return json{{"step_size", c.step_size},   {"max_iters", c.max_iters},       {"grad_tol", c.grad_tol},
              {"backtracking", c.backtracking}, {"shrink", c.shrink},        {"max_shrinks", c.max_shrinks},
              {"armijo", c.armijo},         {"expand", c.expand},             {"max_step", c.max_step},
              {"max_condition", c.max_condition}};
}

json to_json(const ScenarioConfig& c) {
  return json{{"frequency_hz", c.frequency_hz},
              {"n_tx", c.n_tx},
              {"n_rx", c.n_rx},
              {"aperture_m", c.aperture_m},
              {"radius_m", c.radius_m},
              {"tx_spacing_m", c.tx_spacing_m},
              {"distance_ts_m", c.distance_ts_m},
              {"distance_sr_m", c.distance_sr_m},
              {"pathloss_exponent", c.pathloss_exponent},
              {"paths_ts", c.paths_ts},
              {"paths_sr", c.paths_sr},
              {"reference_ohm", c.reference_ohm},
              {"element_resistance_ohm", c.element_resistance_ohm},
              {"gain_tx", c.gain_tx},
              {"gain_surface", c.gain_surface},
              {"gain_rx", c.gain_rx},
              {"radius_tx_m", c.radius_tx_m},
              {"radius_rx_m", c.radius_rx_m},
              {"power_scale", c.power_scale},
              {"rng_seed", c.rng_seed},
              {"dipole_alignment", alignment_name(c.alignment)},
              {"init", init_name(c.init)},
              {"init_half_range_ohm", c.init_half_range_ohm},
              {"optimizer", to_json(c.optimizer)}};
}

OptimizerConfig optimizer_config_from_json(const json& j, OptimizerConfig c) {
  const std::map<std::string, std::function<void(const json&)>> setters = {
      {"step_size", [&](const json& v) { c.step_size = v.get<double>(); }},
      {"max_iters", [&](const json& v) { c.max_iters = v.get<int>(); }},
      {"grad_tol", [&](const json& v) { c.grad_tol = v.get<double>(); }},
      {"backtracking", [&](const json& v) { c.backtracking = v.get<bool>(); }},
      {"shrink", [&](const json& v) { c.shrink = v.get<double>(); }},
      {"max_shrinks", [&](const json& v) { c.max_shrinks = v.get<int>(); }},
      {"armijo", [&](const json& v) { c.armijo = v.get<double>(); }},
      {"expand", [&](const json& v) { c.expand = v.get<double>(); }},
      {"max_step", [&](const json& v) { c.max_step = v.get<double>(); }},
      {"max_condition", [&](const json& v) { c.max_condition = v.get<double>(); }},
  };
  apply(j, setters, "optimizer");
  return c;
}

ScenarioConfig scenario_config_from_json(const json& j, ScenarioConfig c) {
  const std::map<std::string, std::function<void(const json&)>> setters = {
      {"frequency_hz", [&](const json& v) { c.frequency_hz = v.get<double>(); }},
      {"n_tx", [&](const json& v) { c.n_tx = v.get<std::size_t>(); }},
      {"n_rx", [&](const json& v) { c.n_rx = v.get<std::size_t>(); }},
      {"aperture_m", [&](const json& v) { c.aperture_m = v.get<double>(); }},
      {"radius_m", [&](const json& v) { c.radius_m = v.get<double>(); }},
      {"tx_spacing_m", [&](const json& v) { c.tx_spacing_m = v.get<double>(); }},
      {"distance_ts_m", [&](const json& v) { c.distance_ts_m = v.get<double>(); }},
      {"distance_sr_m", [&](const json& v) { c.distance_sr_m = v.get<double>(); }},
      {"pathloss_exponent", [&](const json& v) { c.pathloss_exponent = v.get<double>(); }},
      {"paths_ts", [&](const json& v) { c.paths_ts = v.get<std::size_t>(); }},
      {"paths_sr", [&](const json& v) { c.paths_sr = v.get<std::size_t>(); }},
      {"reference_ohm", [&](const json& v) { c.reference_ohm = v.get<double>(); }},
      {"element_resistance_ohm", [&](const json& v) { c.element_resistance_ohm = v.get<double>(); }},
      {"gain_tx", [&](const json& v) { c.gain_tx = v.get<double>(); }},
      {"gain_surface", [&](const json& v) { c.gain_surface = v.get<double>(); }},
      {"gain_rx", [&](const json& v) { c.gain_rx = v.get<double>(); }},
      {"radius_tx_m", [&](const json& v) { c.radius_tx_m = v.get<double>(); }},
      {"radius_rx_m", [&](const json& v) { c.radius_rx_m = v.get<double>(); }},
      {"power_scale", [&](const json& v) { c.power_scale = v.get<double>(); }},
      {"rng_seed", [&](const json& v) { c.rng_seed = v.get<std::uint64_t>(); }},
      {"dipole_alignment", [&](const json& v) { c.alignment = parse_alignment(v.get<std::string>()); }},
      {"init", [&](const json& v) { c.init = parse_init(v.get<std::string>()); }},
      {"init_half_range_ohm", [&](const json& v) { c.init_half_range_ohm = v.get<double>(); }},
      {"optimizer", [&](const json& v) { c.optimizer = optimizer_config_from_json(v, c.optimizer); }},
  };
  apply(j, setters, "scenario config");
  return c;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path, const ScenarioConfig& base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& err) {
    throw DomainError("config '" + path.string() + "' is not valid JSON: " + err.what());
  }
  return scenario_config_from_json(j, base);
}

std::vector<std::string> flatten_config(const ScenarioConfig& cfg) {
  std::vector<std::string> out;
  flatten(to_json(cfg), "", out);
  return out;
}

}  // namespace irsmc
