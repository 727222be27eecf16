#pragma once

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "kqc/classical.hpp"
#include "kqc/rkha.hpp"

namespace kqc {

// Operator on the 2^n-dimensional truncated space, in the psi_j basis with
// rows and columns ordered like IndexSetN.
struct DenseOperator {
  int n = 0;
  int d = 1;
  Eigen::MatrixXcd matrix;

  std::size_t dim() const { return std::size_t{1} << n; }
};

struct Spectrum {
  int n = 0;
  int d = 1;
  Eigen::VectorXd eigenvalues;    // ascending
  Eigen::MatrixXcd eigenvectors;  // columns, unitary
};

// Truncated multiplication operator: (A_f)_{ij} = c_{j,i-j} ftilde_{i-j}.
// With bias_correct the coefficients are first scaled by kappa / eta_l.
DenseOperator mult_operator(const Observable& f, int n, const RkhaParams& params,
                            bool bias_correct = false);

// (A_f + A_f^*) / 2, Hermitian bit-for-bit.
DenseOperator selfadjoint_operator(const Observable& f, int n, const RkhaParams& params,
                                   bool bias_correct);

// Amplitudes conj(psi_j(x)) / sqrt(kappa_n); the density matrix is their outer product.
Eigen::VectorXcd feature_vector(const TorusPoint& x, int n, const RkhaParams& params);

DenseOperator density_matrix(const TorusPoint& x, int n, const RkhaParams& params);

// Eigenfrequencies along the index ordering.
Eigen::VectorXd frequency_diagonal(int n, const Frequencies& freqs);

// rho_ij -> exp(i (omega_j - omega_i) t) rho_ij
DenseOperator evolve_density(const DenseOperator& rho, double t, const Frequencies& freqs);
// Heisenberg counterpart: tr(evolve_density(rho, t) A) == tr(rho heisenberg_evolve(A, t)).
DenseOperator heisenberg_evolve(const DenseOperator& op, double t, const Frequencies& freqs);

// tr(rho_{x,n}^{(t)} op).
complex expectation(const DenseOperator& op, const TorusPoint& x, double t, const RkhaParams& params,
                    const Frequencies& freqs);

// Self-adjoint path: operator from selfadjoint_operator(f, bias_correct = true).
complex evolve_expectation(const Observable& f, const TorusPoint& x, double t, int n,
                           const RkhaParams& params, const Frequencies& freqs);
// Multiplication path: operator from mult_operator(f, bias_correct = true).
complex evolve_expectation_mult(const Observable& f, const TorusPoint& x, double t, int n,
                                const RkhaParams& params, const Frequencies& freqs);

// Throws if `op` deviates from Hermitian by more than 1e-10 (relative to its largest entry).
// Eigenvalues ascend; values within 1e-12 of each other are ordered by eigenvector.
// Operators of real observables get eigenvectors with v_{-j} = conj(v_j).
Spectrum hermitian_spectrum(const DenseOperator& op);

// Evaluates sum_j coeffs_j psi_j on a uniform grid of grid_size points per
// dimension (row-major, first dimension slowest), scaled to unit L2 norm
// under the normalized Haar measure.
std::vector<complex> coefficient_grid(const Eigen::VectorXcd& coeffs, int grid_size, int n,
                                      const RkhaParams& params);

// Eigenfunction `index` on the grid, phase-aligned so the sample of largest
// modulus is real and positive; real parts are returned.
std::vector<double> eigenfunction_grid(const Spectrum& spec, int index, int grid_size, int n,
                                       const RkhaParams& params);

// {"eigenvalues": [...], "eigenvector_grids": [[...], ...]}
nlohmann::json spectrum_to_json(const Spectrum& spec, int grid_size, const RkhaParams& params);

// Per-block DFT with kernel exp(-2 pi i p m / 2^(n/d)) / sqrt(2^(n/d)); adjoint when `adjoint`.
Eigen::MatrixXcd fourier_matrix(int n, int d, bool adjoint = false);

}  // namespace kqc
