#include "kqc/experiment.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "kqc/error.hpp"
#include "kqc/opalg.hpp"
#include "kqc/walsh.hpp"

#ifndef KQC_VERSION
#define KQC_VERSION "0.0.0"
#endif

namespace kqc {

std::string version_string() { return KQC_VERSION; }

namespace {

Observable resolve_one(const nlohmann::json& spec) {
  if (spec.is_string()) return Observable::preset(spec.get<std::string>());
  return observable_from_json(spec);
}

std::string prep_name(PrepMode m) { return m == PrepMode::Exact ? "exact" : "efficient"; }

}  // namespace

void ExperimentConfig::validate() const {
  if (n < 1 || n > 20) throw ConfigError("n", "must be in 1..20");
  if (d < 1) throw ConfigError("d", "must be >= 1");
  if (n % d != 0) throw ConfigError("n", fmt::format("n={} is not divisible by d={}", n, d));
  if (!(p > 0 && p < 1)) throw ConfigError("p", "must lie in (0,1)");
  if (!(tau > 0) || !std::isfinite(tau)) throw ConfigError("tau", "must be positive");
  if (static_cast<int>(alphas.size()) != d) throw ConfigError("alphas", "need exactly d entries");
  for (double a : alphas)
    if (!(a > 0) || !std::isfinite(a)) throw ConfigError("alphas", "all frequencies must be positive");
  if (static_cast<int>(initial_point.size()) != d) throw ConfigError("initial_point", "need exactly d angles");
  for (double a : initial_point)
    if (!std::isfinite(a)) throw ConfigError("initial_point", "angles must be finite");
  if (!(t_step > 0)) throw ConfigError("t_step", "must be positive");
  if (!std::isfinite(t_start) || !std::isfinite(t_end)) throw ConfigError("t_start", "must be finite");
  if (t_end < t_start) throw ConfigError("t_end", "must not precede t_start");
  if (shots < 1) throw ConfigError("shots", "must be >= 1");
  if (grid_size < 1) throw ConfigError("grid_size", "must be >= 1");
  if (observables.empty()) throw ConfigError("observables", "need at least one observable");

  const IndexSetN set(n, d);
  for (const auto& spec : observables) {
    Observable f(1);
    try {
      f = resolve_one(spec);
    } catch (const std::exception& e) {
      throw ConfigError("observables", e.what());
    }
    if (f.dim() != d) throw ConfigError("observables", "observable dimension differs from d");
    for (const auto& [j, c] : f.coeffs())
      if (!j.is_zero() && !set.contains(j))
        throw ConfigError("observables", "index " + j.to_string() + " is outside J_n and not zero");
  }
}

RkhaParams ExperimentConfig::params() const { return RkhaParams(d, p, tau); }
Frequencies ExperimentConfig::frequencies() const { return Frequencies(alphas); }
TorusPoint ExperimentConfig::initial() const { return TorusPoint(initial_point); }

std::vector<Observable> ExperimentConfig::resolved_observables() const {
  std::vector<Observable> out;
  for (const auto& spec : observables) out.push_back(resolve_one(spec));
  return out;
}

std::vector<double> ExperimentConfig::times() const {
  const auto count = static_cast<std::size_t>(std::floor((t_end - t_start) / t_step + 1e-9)) + 1;
  std::vector<double> ts(count);
  for (std::size_t i = 0; i < count; ++i) ts[i] = t_start + static_cast<double>(i) * t_step;
  return ts;
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"name", name},
          {"n", n},
          {"d", d},
          {"p", p},
          {"tau", tau},
          {"alphas", alphas},
          {"initial_point", initial_point},
          {"observables", observables},
          {"t_start", t_start},
          {"t_end", t_end},
          {"t_step", t_step},
          {"shots", shots},
          {"seed", seed},
          {"prep", prep_name(prep)},
          {"grid_size", grid_size},
          {"output_dir", output_dir}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j, ExperimentConfig c) {
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  static const std::set<std::string> known{"name",   "n",      "d",      "p",      "tau",        "alphas",
                                           "initial_point", "observables", "observable", "t_start", "t_end",
                                           "t_step", "shots",  "seed",   "prep",   "grid_size",  "output_dir"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError(key, "unknown key");

  auto get = [&](const char* key, auto& out) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(out);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(key, e.what());
    }
  };
  get("name", c.name);
  get("n", c.n);
  get("d", c.d);
  get("p", c.p);
  get("tau", c.tau);
  get("alphas", c.alphas);
  get("initial_point", c.initial_point);
  get("t_start", c.t_start);
  get("t_end", c.t_end);
  get("t_step", c.t_step);
  get("shots", c.shots);
  get("seed", c.seed);
  get("grid_size", c.grid_size);
  get("output_dir", c.output_dir);
  if (j.contains("observable") && j.contains("observables"))
    throw ConfigError("observable", "give either 'observable' or 'observables'");
  if (j.contains("observable")) c.observables = {j.at("observable")};
  if (j.contains("observables")) {
    if (!j.at("observables").is_array()) throw ConfigError("observables", "must be a list");
    c.observables.assign(j.at("observables").begin(), j.at("observables").end());
  }
  if (j.contains("prep")) {
    const auto& v = j.at("prep");
    if (v == "exact")
      c.prep = PrepMode::Exact;
    else if (v == "efficient")
      c.prep = PrepMode::Efficient;
    else
      throw ConfigError("prep", "must be 'exact' or 'efficient'");
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) { return from_json(j, ExperimentConfig{}); }

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("<file>", e.what());
  }
  return from_json(j);
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.p = 0.25;
  c.tau = 0.25;
  c.t_start = 0.0;
  c.t_end = 1.0;
  c.t_step = 0.02;
  c.shots = 1000000;
  c.seed = 20240101;
  c.output_dir = "out/" + name;
  if (name == "fig5_n3" || name == "fig5_n7") {
    c.n = name == "fig5_n3" ? 3 : 7;
    c.d = 1;
    c.alphas = {2.0 * std::numbers::pi};
    c.initial_point = {2.5};
    c.observables = {"sin"};
    return c;
  }
  if (name == "fig6_n8") {
    c.n = 8;
    c.d = 2;
    c.alphas = {3.0 * std::numbers::sqrt2 * std::numbers::pi, 2.0 * std::numbers::pi};
    c.initial_point = {1.0, 2.5};
    c.observables = {"sin1cos2"};
    c.grid_size = 32;
    return c;
  }
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"fig5_n3", "fig5_n7", "fig6_n8"}; }

double SimulationResult::rms_error(std::size_t k) const {
  double s = 0;
  for (std::size_t i = 0; i < times.size(); ++i) s += std::norm(estimates[k][i] - truths[k][i]);
  return std::sqrt(s / static_cast<double>(times.size()));
}

double SimulationResult::max_error(std::size_t k) const {
  double m = 0;
  for (std::size_t i = 0; i < times.size(); ++i) m = std::max(m, std::abs(estimates[k][i] - truths[k][i]));
  return m;
}

namespace {

// Self-adjoint observables report real values; a large imaginary part is a bug.
complex realify(complex v, const Observable& f, const char* what) {
  if (!f.is_self_adjoint()) return v;
  if (std::abs(v.imag()) > 1e-10)
    throw Error(fmt::format("{} of a real observable has imaginary part {:.3e}", what, v.imag()));
  return {v.real(), 0.0};
}

template <class PerTime>
SimulationResult run_series(const ExperimentConfig& cfg, unsigned threads, PerTime per_time) {
  cfg.validate();
  const auto params = cfg.params();
  const auto freqs = cfg.frequencies();
  const auto x0 = cfg.initial();
  const auto obs = cfg.resolved_observables();

  SimulationResult r;
  r.times = cfg.times();
  const std::size_t nt = r.times.size();
  r.histograms.assign(nt, Histogram{});
  r.estimates.assign(obs.size(), std::vector<complex>(nt));
  r.truths.assign(obs.size(), std::vector<complex>(nt));

  auto work = [&](std::size_t i) {
    const double t = r.times[i];
    const Pipeline pipe = compile_pipeline(x0, t, cfg.n, params, freqs, cfg.prep);
    const StateVector state = simulate(pipe.flatten());
    const auto est = per_time(i, state, obs, r.histograms[i]);
    for (std::size_t k = 0; k < obs.size(); ++k) {
      r.estimates[k][i] = realify(est[k], obs[k], "estimate");
      // Ground truth never touches the circuit.
      r.truths[k][i] = realify(koopman_evolve(obs[k], x0, t, freqs), obs[k], "truth");
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(nt)));
  if (workers == 1) {
    for (std::size_t i = 0; i < nt; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < nt; i += workers) work(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return r;
}

}  // namespace

SimulationResult simulate_experiment(const ExperimentConfig& cfg, unsigned threads) {
  return run_series(cfg, threads,
                    [&](std::size_t i, const StateVector& state, const std::vector<Observable>& obs, Histogram& h) {
                      h = sample(state, cfg.shots, derive_seed(cfg.seed, i));
                      return estimate(h, obs, cfg.n, cfg.d);
                    });
}

SimulationResult exact_experiment(const ExperimentConfig& cfg) {
  return run_series(cfg, 1, [&](std::size_t, const StateVector& state, const std::vector<Observable>& obs, Histogram&) {
    std::vector<complex> out;
    for (const auto& f : obs) out.push_back(exact_expectation(state, f, cfg.n, cfg.d));
    return out;
  });
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw Error("cannot write " + p.string());
  return os;
}

}  // namespace

SimulationResult run_simulate(const ExperimentConfig& cfg, unsigned threads) {
  SimulationResult r = simulate_experiment(cfg, threads);
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);

  {
    auto os = open_out(dir / "histograms.csv");
    write_histogram_csv_header(os, true);
    for (std::size_t i = 0; i < r.times.size(); ++i) write_histogram_csv_rows(os, r.histograms[i], r.times[i]);
  }
  for (std::size_t k = 0; k < r.estimates.size(); ++k) {
    std::vector<EstimationRow> rows;
    for (std::size_t i = 0; i < r.times.size(); ++i) rows.push_back({r.times[i], r.estimates[k][i], r.truths[k][i]});
    auto os = open_out(dir / (k == 0 ? std::string("estimation.csv") : fmt::format("estimation_{}.csv", k)));
    write_estimation_csv(os, rows);
  }
  {
    nlohmann::json meta;
    meta["config"] = cfg.to_json();
    meta["rng"] = {{"algorithm", kRngAlgorithm},
                   {"seed", cfg.seed},
                   {"time_point_seed", "splitmix64(seed, time index)"}};
    meta["version"] = version_string();
    meta["rms_error"] = r.rms_error(0);
    meta["generated_at"] = fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::time(nullptr)));
    auto os = open_out(dir / "metadata.json");
    os << meta.dump(2) << '\n';
  }
  return r;
}

nlohmann::json run_spectra(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto params = cfg.params();
  const auto f = cfg.resolved_observables().front();
  const Spectrum spec = hermitian_spectrum(selfadjoint_operator(f, cfg.n, params, true));
  nlohmann::json j = spectrum_to_json(spec, cfg.grid_size, params);
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  auto os = open_out(dir / "spectrum.json");
  os << j.dump() << '\n';
  return j;
}

nlohmann::json run_walsh(const ExperimentConfig& cfg) {
  cfg.validate();
  const WalshCoeffs w = hamiltonian_walsh_coeffs(cfg.n, cfg.d, cfg.frequencies());
  const WalshCoeffs unit = hamiltonian_walsh_coeffs(cfg.n, cfg.d, std::vector<double>(cfg.alphas.size(), 1.0));
  nlohmann::json terms = nlohmann::json::array();
  const int m = cfg.n / cfg.d;
  for (const auto& [k, c] : w.terms) {
    const int bit = std::countr_zero(k);
    terms.push_back({{"index", k},
                     {"qubit", bit},
                     {"dimension", bit / m},
                     {"coefficient", c},
                     {"normalized", unit.at(k)}});
  }
  return {{"n", cfg.n}, {"d", cfg.d}, {"alphas", cfg.alphas}, {"terms", std::move(terms)}};
}

nlohmann::json run_circuit(const ExperimentConfig& cfg, double t) {
  cfg.validate();
  const Pipeline p = compile_pipeline(cfg.initial(), t, cfg.n, cfg.params(), cfg.frequencies(), cfg.prep);
  nlohmann::json j = pipeline_to_json(p);
  j["t"] = t;
  return j;
}

}  // namespace kqc
