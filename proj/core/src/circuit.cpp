#include "kqc/circuit.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "kqc/error.hpp"
#include "kqc/opalg.hpp"
#include "kqc/walsh.hpp"

namespace kqc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double vector_norm(const std::vector<complex>& v) {
  double s = 0;
  for (const auto& a : v) s += std::norm(a);
  return std::sqrt(s);
}

std::size_t mask_of(int n, int q) { return std::size_t{1} << (n - 1 - q); }

}  // namespace

std::string gate_name(const Gate& g) {
  return std::visit(overloaded{[](const Hadamard&) { return std::string("h"); },
                               [](const Rz&) { return std::string("rz"); },
                               [](const ControlledPhase&) { return std::string("cp"); },
                               [](const Swap&) { return std::string("swap"); },
                               [](const LoadAmplitudes&) { return std::string("load"); }},
                    g);
}

Circuit::Circuit(int n) : n_(n) {
  if (n < 1 || n > 30) throw InvalidArgument("Circuit: qubit count out of range");
}

void Circuit::add(Gate g) {
  auto check = [this](int q) {
    if (q < 0 || q >= n_) throw InvalidArgument("Circuit: qubit index out of range");
  };
  std::visit(overloaded{[&](const Hadamard& h) { check(h.q); },
                        [&](const Rz& r) { check(r.q); },
                        [&](const ControlledPhase& c) {
                          check(c.control);
                          check(c.target);
                          if (c.control == c.target) throw InvalidArgument("Circuit: cp on a single qubit");
                        },
                        [&](const Swap& s) {
                          check(s.a);
                          check(s.b);
                        },
                        [&](const LoadAmplitudes& l) {
                          if (l.amplitudes.size() != (std::size_t{1} << n_))
                            throw InvalidArgument("Circuit: load vector has wrong length");
                          if (std::abs(vector_norm(l.amplitudes) - 1.0) > 1e-12)
                            throw InvalidArgument("Circuit: load vector is not unit norm");
                        }},
             g);
  gates_.push_back(std::move(g));
}

void Circuit::append(const Circuit& other) {
  if (other.n_ != n_) throw InvalidArgument("Circuit: width mismatch in append");
  for (const auto& g : other.gates_) gates_.push_back(g);
}

StateVector::StateVector(int n) : n_(n) {
  if (n < 1 || n > 30) throw InvalidArgument("StateVector: qubit count out of range");
  amps_.assign(std::size_t{1} << n, complex{});
  amps_[0] = 1.0;
}

StateVector::StateVector(int n, std::vector<complex> amplitudes) : n_(n), amps_(std::move(amplitudes)) {
  if (n < 1 || n > 30 || amps_.size() != (std::size_t{1} << n))
    throw InvalidArgument("StateVector: amplitude count must be 2^n");
  if (std::abs(vector_norm(amps_) - 1.0) > 1e-12) throw InvalidArgument("StateVector: not unit norm");
}

double StateVector::norm() const { return vector_norm(amps_); }

bool StateVector::is_zero_state() const {
  if (amps_[0] != complex(1.0)) return false;
  for (std::size_t b = 1; b < amps_.size(); ++b)
    if (amps_[b] != complex{}) return false;
  return true;
}

complex StateVector::inner(const StateVector& other) const {
  if (other.n_ != n_) throw InvalidArgument("StateVector: width mismatch");
  complex s{};
  for (std::size_t b = 0; b < amps_.size(); ++b) s += std::conj(amps_[b]) * other.amps_[b];
  return s;
}

double fidelity(const StateVector& u, const StateVector& v) { return std::abs(u.inner(v)); }

Circuit prep_exact(const TorusPoint& x, int n, const RkhaParams& params) {
  const Eigen::VectorXcd v = feature_vector(x, n, params);
  std::vector<complex> amps(v.data(), v.data() + v.size());
  // kappa_n is summed separately from the amplitudes; renormalize the rounding.
  const double nrm = vector_norm(amps);
  for (auto& a : amps) a /= nrm;
  Circuit c(n);
  c.add(LoadAmplitudes{std::move(amps)});
  return c;
}

Circuit diagonal_phase_stage(int n, int d, const std::vector<double>& rates, double t) {
  const WalshCoeffs w = hamiltonian_walsh_coeffs(n, d, rates);
  Circuit c(n);
  for (int q = 0; q < n; ++q) c.add(Rz{q, 2.0 * w.at(std::uint64_t{1} << q) * t});
  return c;
}

Circuit koopman_stage(int n, int d, const Frequencies& freqs, double t) {
  if (freqs.dim() != d) throw InvalidArgument("koopman_stage: need d frequencies");
  return diagonal_phase_stage(n, d, freqs.alphas(), t);
}

Circuit prep_efficient(const TorusPoint& x, int n, int d) {
  if (x.dim() != d) throw InvalidArgument("prep_efficient: point dimension mismatch");
  Circuit c(n);
  for (int q = 0; q < n; ++q) c.add(Hadamard{q});
  // The shift by x is the unit-time rotation with rates equal to the angles of x.
  c.append(diagonal_phase_stage(n, d, x.angles(), 1.0));
  return c;
}

Circuit qft_stage(int n, int d, QftDirection direction) {
  if (d < 1 || n < 1 || n % d != 0) throw InvalidArgument("qft_stage: n must be divisible by d");
  const int m = n / d;
  // The textbook H + CP ladder yields kernel exp(+2 pi i p m / N); the forward
  // transform is its complex conjugate.
  const double sign = direction == QftDirection::Adjoint ? 1.0 : -1.0;
  Circuit c(n);
  for (int blk = 0; blk < d; ++blk) {
    const int off = blk * m;
    for (int q = 0; q < m; ++q) {
      c.add(Hadamard{off + q});
      for (int r = q + 1; r < m; ++r)
        c.add(ControlledPhase{off + r, off + q, sign * 2.0 * std::numbers::pi / std::ldexp(1.0, r - q + 1)});
    }
    for (int q = 0; q < m / 2; ++q) c.add(Swap{off + q, off + m - 1 - q});
  }
  return c;
}

StateVector simulate(const Circuit& c, StateVector state) {
  if (state.n() != c.n()) throw InvalidArgument("simulate: state width does not match circuit");
  const int n = c.n();
  auto& a = state.amplitudes();
  const std::size_t size = a.size();
  const double r2 = 1.0 / std::sqrt(2.0);
  for (const Gate& g : c.gates()) {
    std::visit(
        overloaded{
            [&](const Hadamard& h) {
              const std::size_t mk = mask_of(n, h.q);
              for (std::size_t b = 0; b < size; ++b) {
                if (b & mk) continue;
                const complex x = a[b], y = a[b | mk];
                a[b] = (x + y) * r2;
                a[b | mk] = (x - y) * r2;
              }
            },
            [&](const Rz& r) {
              const std::size_t mk = mask_of(n, r.q);
              const complex p0 = std::polar(1.0, -r.angle / 2), p1 = std::polar(1.0, r.angle / 2);
              for (std::size_t b = 0; b < size; ++b) a[b] *= (b & mk) ? p1 : p0;
            },
            [&](const ControlledPhase& cp) {
              const std::size_t mk = mask_of(n, cp.control) | mask_of(n, cp.target);
              const complex ph = std::polar(1.0, cp.angle);
              for (std::size_t b = 0; b < size; ++b)
                if ((b & mk) == mk) a[b] *= ph;
            },
            [&](const Swap& s) {
              const std::size_t ma = mask_of(n, s.a), mb = mask_of(n, s.b);
              for (std::size_t b = 0; b < size; ++b)
                if ((b & ma) && !(b & mb)) std::swap(a[b], a[(b & ~ma) | mb]);
            },
            [&](const LoadAmplitudes& l) {
              if (!state.is_zero_state()) throw InvalidArgument("simulate: load requires the |0...0> input");
              a = l.amplitudes;
            }},
        g);
  }
  return state;
}

StateVector simulate(const Circuit& c) { return simulate(c, StateVector(c.n())); }

Eigen::MatrixXcd circuit_unitary(const Circuit& c) {
  if (c.n() > 12) throw InvalidArgument("circuit_unitary: too many qubits for a dense unitary");
  const std::size_t size = std::size_t{1} << c.n();
  Eigen::MatrixXcd u(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
  for (std::size_t col = 0; col < size; ++col) {
    std::vector<complex> e(size, complex{});
    e[col] = 1.0;
    const StateVector out = simulate(c, StateVector(c.n(), std::move(e)));
    for (std::size_t r = 0; r < size; ++r)
      u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = out[r];
  }
  return u;
}

Circuit Pipeline::flatten() const {
  Circuit c(n);
  for (const auto& [name, stage] : stages) c.append(stage);
  return c;
}

Pipeline compile_pipeline(const TorusPoint& x, double t, int n, const RkhaParams& params,
                          const Frequencies& freqs, PrepMode prep, QftDirection qft) {
  const int d = params.d();
  if (x.dim() != d || freqs.dim() != d) throw InvalidArgument("compile_pipeline: dimension mismatch");
  Pipeline p;
  p.n = n;
  p.stages.emplace_back("load", prep == PrepMode::Exact ? prep_exact(x, n, params) : prep_efficient(x, n, d));
  p.stages.emplace_back("evolve", koopman_stage(n, d, freqs, t));
  p.stages.emplace_back("qft", qft_stage(n, d, qft));
  return p;
}

nlohmann::json gate_to_json(const Gate& g) {
  nlohmann::json j;
  j["gate"] = gate_name(g);
  std::visit(overloaded{[&](const Hadamard& h) { j["qubits"] = {h.q}; },
                        [&](const Rz& r) {
                          j["qubits"] = {r.q};
                          j["angle"] = r.angle;
                        },
                        [&](const ControlledPhase& c) {
                          j["qubits"] = {c.control, c.target};
                          j["angle"] = c.angle;
                        },
                        [&](const Swap& s) { j["qubits"] = {s.a, s.b}; },
                        [&](const LoadAmplitudes& l) {
                          j["qubits"] = nlohmann::json::array();
                          nlohmann::json amps = nlohmann::json::array();
                          for (const auto& a : l.amplitudes) amps.push_back({a.real(), a.imag()});
                          j["amplitudes"] = std::move(amps);
                        }},
             g);
  return j;
}

nlohmann::json circuit_to_json(const Circuit& c) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& g : c.gates()) arr.push_back(gate_to_json(g));
  return arr;
}

nlohmann::json pipeline_to_json(const Pipeline& p) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& [name, c] : p.stages) stages.push_back({{"name", name}, {"gates", circuit_to_json(c)}});
  return {{"n", p.n}, {"stages", std::move(stages)}};
}

}  // namespace kqc
