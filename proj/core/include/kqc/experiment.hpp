#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kqc/circuit.hpp"
#include "kqc/classical.hpp"
#include "kqc/measure.hpp"
#include "kqc/rkha.hpp"

namespace kqc {

std::string version_string();

struct ExperimentConfig {
  std::string name = "custom";
  int n = 3;
  int d = 1;
  double p = 0.25;
  double tau = 0.25;
  std::vector<double> alphas{2.0 * std::numbers::pi};
  std::vector<double> initial_point{2.5};
  // Each entry is a preset name or a coefficient list.
  std::vector<nlohmann::json> observables{"sin"};
  double t_start = 0.0;
  double t_end = 1.0;
  double t_step = 0.02;
  std::uint64_t shots = 1000000;
  std::uint64_t seed = 20240101;
  PrepMode prep = PrepMode::Exact;
  int grid_size = 256;  // spectra eigenfunction grid, per dimension
  std::string output_dir = "out";

  // Throws ConfigError naming the first invalid field.
  void validate() const;

  RkhaParams params() const;
  Frequencies frequencies() const;
  TorusPoint initial() const;
  std::vector<Observable> resolved_observables() const;
  std::vector<double> times() const;

  nlohmann::json to_json() const;
  // Unknown keys are rejected; missing keys keep the values already in `base`.
  static ExperimentConfig from_json(const nlohmann::json& j, ExperimentConfig base);
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
};

ExperimentConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

struct SimulationResult {
  std::vector<double> times;
  std::vector<Histogram> histograms;
  // estimates[k][i]: observable k at time i.
  std::vector<std::vector<complex>> estimates;
  std::vector<std::vector<complex>> truths;

  // RMS and max of |estimate - truth| for observable k.
  double rms_error(std::size_t k = 0) const;
  double max_error(std::size_t k = 0) const;
};

// Runs the whole time series in memory. Results are independent of `threads`.
SimulationResult simulate_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

// Same as simulate_experiment with exact probabilities in place of sampling.
SimulationResult exact_experiment(const ExperimentConfig& cfg);

// Writes histograms.csv, estimation.csv (plus estimation_<k>.csv for extra
// observables) and metadata.json into cfg.output_dir.
SimulationResult run_simulate(const ExperimentConfig& cfg, unsigned threads = 1);
// Writes spectrum.json for the first observable; returns the spectrum JSON.
nlohmann::json run_spectra(const ExperimentConfig& cfg);
nlohmann::json run_walsh(const ExperimentConfig& cfg);
nlohmann::json run_circuit(const ExperimentConfig& cfg, double t);

}  // namespace kqc
