// kqc: compile torus rotations to qubit circuits, simulate, and measure.
#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "kqc/error.hpp"
#include "kqc/experiment.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::string preset;
  std::optional<int> n, d, grid_size;
  std::optional<double> p, tau, t_start, t_end, t_step;
  std::optional<std::uint64_t> shots, seed;
  std::optional<std::vector<double>> alphas, initial_point;
  std::optional<std::string> observable, prep, out;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "JSON config file");
  cmd->add_option("--preset", o.preset, "built-in config: fig5_n3, fig5_n7, fig6_n8");
  cmd->add_option("-n,--qubits", o.n, "qubit count");
  cmd->add_option("-d,--dim", o.d, "torus dimension");
  cmd->add_option("-p,--p", o.p, "kernel exponent in (0,1)");
  cmd->add_option("--tau", o.tau, "kernel locality");
  cmd->add_option("--alphas", o.alphas, "rotation frequencies");
  cmd->add_option("--x", o.initial_point, "initial angles");
  cmd->add_option("--observable", o.observable, "preset name or JSON coefficient list");
  cmd->add_option("--t-start", o.t_start);
  cmd->add_option("--t-end", o.t_end);
  cmd->add_option("--t-step", o.t_step);
  cmd->add_option("-K,--shots", o.shots, "shots per time point");
  cmd->add_option("--seed", o.seed);
  cmd->add_option("--prep", o.prep, "exact or efficient");
  cmd->add_option("--grid-size", o.grid_size, "eigenfunction grid points per dimension");
  cmd->add_option("-o,--out", o.out, "output directory");
}

kqc::ExperimentConfig resolve(const Overrides& o) {
  if (!o.config_path.empty() && !o.preset.empty())
    throw kqc::ConfigError("--preset", "give either --config or --preset");
  kqc::ExperimentConfig c;
  if (!o.preset.empty()) c = kqc::preset_config(o.preset);
  if (!o.config_path.empty()) c = kqc::ExperimentConfig::load(o.config_path);

  nlohmann::json patch = nlohmann::json::object();
  if (o.n) patch["n"] = *o.n;
  if (o.d) patch["d"] = *o.d;
  if (o.p) patch["p"] = *o.p;
  if (o.tau) patch["tau"] = *o.tau;
  if (o.alphas) patch["alphas"] = *o.alphas;
  if (o.initial_point) patch["initial_point"] = *o.initial_point;
  if (o.t_start) patch["t_start"] = *o.t_start;
  if (o.t_end) patch["t_end"] = *o.t_end;
  if (o.t_step) patch["t_step"] = *o.t_step;
  if (o.shots) patch["shots"] = *o.shots;
  if (o.seed) patch["seed"] = *o.seed;
  if (o.prep) patch["prep"] = *o.prep;
  if (o.grid_size) patch["grid_size"] = *o.grid_size;
  if (o.out) patch["output_dir"] = *o.out;
  if (o.observable) {
    const auto& s = *o.observable;
    patch["observable"] = (!s.empty() && s.front() == '[') ? nlohmann::json::parse(s) : nlohmann::json(s);
  }
  c = kqc::ExperimentConfig::from_json(patch, c);
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kqc: Koopman evolution of torus rotations on a simulated qubit register"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kqc::version_string());

  Overrides o;
  unsigned threads = 1;
  double t = 0.0;

  auto* sim = app.add_subcommand("simulate", "run the sampled time series and write CSV/JSON results");
  add_common(sim, o);
  sim->add_option("--threads", threads, "worker threads (results do not depend on this)");

  auto* spectra = app.add_subcommand("spectra", "write the spectrum of the observable's operator");
  add_common(spectra, o);

  auto* walsh = app.add_subcommand("walsh", "print the Walsh expansion of the evolution generator");
  add_common(walsh, o);

  auto* circ = app.add_subcommand("circuit", "print the compiled circuit as JSON");
  add_common(circ, o);
  circ->add_option("-t,--time", t, "evolution time");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = resolve(o);
    if (sim->parsed()) {
      const auto r = kqc::run_simulate(cfg, threads);
      std::cerr << "wrote " << cfg.output_dir << " (rms error " << r.rms_error(0) << ")\n";
    } else if (spectra->parsed()) {
      const auto j = kqc::run_spectra(cfg);
      std::cerr << "wrote " << cfg.output_dir << "/spectrum.json (" << j["eigenvalues"].size() << " eigenvalues)\n";
    } else if (walsh->parsed()) {
      std::cout << kqc::run_walsh(cfg).dump(2) << '\n';
    } else if (circ->parsed()) {
      std::cout << kqc::run_circuit(cfg, t).dump(2) << '\n';
    }
  } catch (const kqc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
