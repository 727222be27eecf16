#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "kqc/classical.hpp"
#include "kqc/rkha.hpp"

namespace kqc {

// Qubit q addresses bit q+1 of the register label, i.e. bit position n-1-q
// of the amplitude index. Qubit 0 is the most significant.
struct Hadamard {
  int q;
};
// diag(exp(-i angle/2), exp(i angle/2))
struct Rz {
  int q;
  double angle;
};
// diag(1, 1, 1, exp(i angle)) on (control, target)
struct ControlledPhase {
  int control;
  int target;
  double angle;
};
struct Swap {
  int a;
  int b;
};
// Initializes the register from |0...0> to the given unit vector.
struct LoadAmplitudes {
  std::vector<complex> amplitudes;
};

using Gate = std::variant<Hadamard, Rz, ControlledPhase, Swap, LoadAmplitudes>;

std::string gate_name(const Gate& g);

class Circuit {
 public:
  explicit Circuit(int n);

  int n() const noexcept { return n_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  std::size_t size() const noexcept { return gates_.size(); }

  // Validates qubit indices and amplitude norms.
  void add(Gate g);
  void append(const Circuit& other);

 private:
  int n_;
  std::vector<Gate> gates_;
};

class StateVector {
 public:
  // |0...0>
  explicit StateVector(int n);
  StateVector(int n, std::vector<complex> amplitudes);

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return amps_.size(); }
  const std::vector<complex>& amplitudes() const noexcept { return amps_; }
  std::vector<complex>& amplitudes() noexcept { return amps_; }
  complex operator[](std::size_t b) const { return amps_[b]; }

  double norm() const;
  bool is_zero_state() const;
  // <this|other>
  complex inner(const StateVector& other) const;

 private:
  int n_;
  std::vector<complex> amps_;
};

// |<u|v>|, the global-phase-insensitive overlap.
double fidelity(const StateVector& u, const StateVector& v);

// Single LoadAmplitudes gate with amplitude conj(psi_j(x)) / sqrt(kappa_n) at b = encode(j).
Circuit prep_exact(const TorusPoint& x, int n, const RkhaParams& params);
// Hadamards followed by the shift operator exp(-i j.x), as n Rz gates.
Circuit prep_efficient(const TorusPoint& x, int n, int d);

// n Rz gates applying exp(-i omega_j t) to each encoded basis state.
Circuit koopman_stage(int n, int d, const Frequencies& freqs, double t);
// Same diagonal stage for arbitrary real rates.
Circuit diagonal_phase_stage(int n, int d, const std::vector<double>& rates, double t);

enum class QftDirection { Forward, Adjoint };

// Per-block QFT. Forward realizes the kernel exp(-2 pi i p m / 2^(n/d)).
Circuit qft_stage(int n, int d, QftDirection direction);

StateVector simulate(const Circuit& c, StateVector input);
StateVector simulate(const Circuit& c);

// Dense unitary of a circuit without LoadAmplitudes; intended for small n.
Eigen::MatrixXcd circuit_unitary(const Circuit& c);

enum class PrepMode { Exact, Efficient };

// Named stages: load, evolve, qft.
struct Pipeline {
  int n = 0;
  std::vector<std::pair<std::string, Circuit>> stages;

  Circuit flatten() const;
};

Pipeline compile_pipeline(const TorusPoint& x, double t, int n, const RkhaParams& params,
                          const Frequencies& freqs, PrepMode prep = PrepMode::Exact,
                          QftDirection qft = QftDirection::Adjoint);

nlohmann::json gate_to_json(const Gate& g);
nlohmann::json circuit_to_json(const Circuit& c);
nlohmann::json pipeline_to_json(const Pipeline& p);

}  // namespace kqc
