#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kqc/rkha.hpp"

namespace kqc {

using complex = std::complex<double>;

// Point on the d-torus; angles are stored reduced into [0, 2pi).
class TorusPoint {
 public:
  explicit TorusPoint(std::vector<double> angles);

  int dim() const noexcept { return static_cast<int>(angles_.size()); }
  double operator[](int i) const { return angles_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& angles() const noexcept { return angles_; }

 private:
  std::vector<double> angles_;
};

double reduce_angle(double theta);

// Rotation frequencies, all strictly positive.
class Frequencies {
 public:
  explicit Frequencies(std::vector<double> alphas);

  int dim() const noexcept { return static_cast<int>(alphas_.size()); }
  double operator[](int i) const { return alphas_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& alphas() const noexcept { return alphas_; }

 private:
  std::vector<double> alphas_;
};

// Finite Fourier series f(x) = sum_j fhat_j exp(i j.x).
class Observable {
 public:
  explicit Observable(int d);

  int dim() const noexcept { return d_; }
  // Overwrites the coefficient at j; a zero value removes the entry.
  void set(const MultiIndex& j, complex value);
  complex coeff(const MultiIndex& j) const;
  const std::map<MultiIndex, complex>& coeffs() const noexcept { return coeffs_; }

  // Coefficient of the psi_j basis: exp(tau |j|_p / 2) fhat_j.
  complex rkha_coeff(const MultiIndex& j, const RkhaParams& params) const;

  // fhat_{-j} == conj(fhat_j) for every j in the support, to `tol`.
  bool is_self_adjoint(double tol = 1e-14) const;

  Observable operator+(const Observable& o) const;
  Observable operator*(complex s) const;

  static Observable constant(int d, complex c);
  // Named presets: "sin", "cos" (d=1), "sin1cos2" (d=2).
  static Observable preset(const std::string& name);
  static std::vector<std::string> preset_names();

 private:
  int d_;
  std::map<MultiIndex, complex> coeffs_;
};

// JSON form: [{"index": [..], "re": x, "im": y}, ...]
nlohmann::json observable_to_json(const Observable& f);
Observable observable_from_json(const nlohmann::json& j);

TorusPoint flow(const TorusPoint& x, double t, const Frequencies& freqs);

complex evaluate(const Observable& f, const TorusPoint& x);
// Raw angles, not reduced; used on grids.
complex evaluate(const Observable& f, const std::vector<double>& angles);

// (U^t f)(x) computed as f(flow(x, t)).
complex koopman_evolve(const Observable& f, const TorusPoint& x, double t, const Frequencies& freqs);
// Same quantity through the eigenfunction phases exp(i omega_j t).
complex koopman_evolve_spectral(const Observable& f, const TorusPoint& x, double t,
                                const Frequencies& freqs);

double eigenfrequency(const MultiIndex& j, const Frequencies& freqs);

}  // namespace kqc
