#include "kqc/opalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <nlohmann/json.hpp>

#include "kqc/error.hpp"

namespace kqc {

namespace {

void check_dim(const Observable& f, const RkhaParams& params) {
  if (f.dim() != params.d()) throw InvalidArgument("observable dimension does not match params.d");
}

}  // namespace

DenseOperator mult_operator(const Observable& f, int n, const RkhaParams& params, bool bias_correct) {
  check_dim(f, params);
  const IndexSetN set(n, params.d());
  const auto idx = set.indices();
  const double kappa = bias_correct ? kappa_infinite(params) : 1.0;

  DenseOperator op{n, params.d(), Eigen::MatrixXcd::Zero(set.size(), set.size())};
  for (const auto& [l, fhat] : f.coeffs()) {
    complex ft = f.rkha_coeff(l, params);
    if (bias_correct) {
      if (!l.is_zero() && !l.all_nonzero())
        throw InvalidArgument("bias correction needs support in J or the zero index; got " + l.to_string());
      ft *= kappa / eta_l(l, params);
    }
    for (std::uint64_t col = 0; col < set.size(); ++col) {
      const MultiIndex row_idx = idx[col] + l;
      if (!set.contains(row_idx)) continue;
      op.matrix(static_cast<Eigen::Index>(set.position(row_idx)), static_cast<Eigen::Index>(col)) +=
          structure_constant(idx[col], l, params) * ft;
    }
  }
  return op;
}

DenseOperator selfadjoint_operator(const Observable& f, int n, const RkhaParams& params,
                                   bool bias_correct) {
  DenseOperator a = mult_operator(f, n, params, bias_correct);
  Eigen::MatrixXcd s = (a.matrix + a.matrix.adjoint()) * 0.5;
  return DenseOperator{n, params.d(), std::move(s)};
}

Eigen::VectorXcd feature_vector(const TorusPoint& x, int n, const RkhaParams& params) {
  if (x.dim() != params.d()) throw InvalidArgument("feature_vector: point dimension mismatch");
  const IndexSetN set(n, params.d());
  const double norm = std::sqrt(kappa_n(n, params));
  Eigen::VectorXcd v(static_cast<Eigen::Index>(set.size()));
  for (std::uint64_t b = 0; b < set.size(); ++b) {
    const MultiIndex j = set.at(b);
    double phase = 0;
    for (int i = 0; i < params.d(); ++i) phase += j[i] * x[i];
    v(static_cast<Eigen::Index>(b)) =
        std::polar(std::exp(-params.tau() * pnorm(j, params.p()) / 2.0) / norm, -phase);
  }
  return v;
}

DenseOperator density_matrix(const TorusPoint& x, int n, const RkhaParams& params) {
  const Eigen::VectorXcd w = feature_vector(x, n, params);
  return DenseOperator{n, params.d(), w * w.adjoint()};
}

Eigen::VectorXd frequency_diagonal(int n, const Frequencies& freqs) {
  const IndexSetN set(n, freqs.dim());
  Eigen::VectorXd w(static_cast<Eigen::Index>(set.size()));
  for (std::uint64_t b = 0; b < set.size(); ++b)
    w(static_cast<Eigen::Index>(b)) = eigenfrequency(set.at(b), freqs);
  return w;
}

DenseOperator evolve_density(const DenseOperator& rho, double t, const Frequencies& freqs) {
  const Eigen::VectorXd w = frequency_diagonal(rho.n, freqs);
  DenseOperator out = rho;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    for (Eigen::Index j = 0; j < w.size(); ++j) out.matrix(i, j) *= std::polar(1.0, (w(j) - w(i)) * t);
  return out;
}

DenseOperator heisenberg_evolve(const DenseOperator& op, double t, const Frequencies& freqs) {
  const Eigen::VectorXd w = frequency_diagonal(op.n, freqs);
  DenseOperator out = op;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    for (Eigen::Index j = 0; j < w.size(); ++j) out.matrix(i, j) *= std::polar(1.0, (w(i) - w(j)) * t);
  return out;
}

complex expectation(const DenseOperator& op, const TorusPoint& x, double t, const RkhaParams& params,
                    const Frequencies& freqs) {
  // rho^{(t)} is the outer product of the phase-evolved feature vector.
  Eigen::VectorXcd w = feature_vector(x, op.n, params);
  const Eigen::VectorXd om = frequency_diagonal(op.n, freqs);
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) *= std::polar(1.0, -om(i) * t);
  return w.dot(op.matrix * w);
}

complex evolve_expectation(const Observable& f, const TorusPoint& x, double t, int n,
                           const RkhaParams& params, const Frequencies& freqs) {
  return expectation(selfadjoint_operator(f, n, params, true), x, t, params, freqs);
}

complex evolve_expectation_mult(const Observable& f, const TorusPoint& x, double t, int n,
                                const RkhaParams& params, const Frequencies& freqs) {
  return expectation(mult_operator(f, n, params, true), x, t, params, freqs);
}

namespace {

bool lex_less(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace

Spectrum hermitian_spectrum(const DenseOperator& op) {
  const auto& a = op.matrix;
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != op.dim())
    throw InvalidArgument("hermitian_spectrum: bad operator shape");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw InvalidArgument("hermitian_spectrum: operator is not Hermitian");

  const Eigen::Index dim = a.rows();
  Eigen::VectorXd vals;
  Eigen::MatrixXcd vecs;

  // Entry b holds index j and entry dim-1-b holds -j. If the operator commutes with
  // v_j -> conj(v_{-j}) (true for anything built from a real observable), solve the real
  // symmetric problem in the cos/sin pair basis so every eigenvector, degenerate or not,
  // expands to a real-valued function.
  bool conj_symmetric = dim % 2 == 0;
  for (Eigen::Index r = 0; conj_symmetric && r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c)
      if (std::abs(a(dim - 1 - r, dim - 1 - c) - std::conj(a(r, c))) > 1e-10 * scale) {
        conj_symmetric = false;
        break;
      }

  if (conj_symmetric) {
    const Eigen::Index half = dim / 2;
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index b = 0; b < half; ++b) {
      q(b, b) = s;
      q(dim - 1 - b, b) = s;
      q(b, half + b) = complex(0, s);
      q(dim - 1 - b, half + b) = complex(0, -s);
    }
    const Eigen::MatrixXd real_op = (q.adjoint() * a * q).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(real_op);
    if (solver.info() != Eigen::Success) throw ConvergenceError("hermitian_spectrum: eigensolver failed");
    vals = solver.eigenvalues();
    Eigen::MatrixXd y = solver.eigenvectors();
    // sign fix: largest entry positive
    for (Eigen::Index c = 0; c < dim; ++c) {
      Eigen::Index best = 0;
      for (Eigen::Index r = 1; r < dim; ++r)
        if (std::abs(y(r, c)) > std::abs(y(best, c)) * (1 + 1e-12)) best = r;
      if (y(best, c) < 0) y.col(c) *= -1.0;
    }
    vecs = q * y.cast<complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a);
    if (solver.info() != Eigen::Success) throw ConvergenceError("hermitian_spectrum: eigensolver failed");
    vals = solver.eigenvalues();
    vecs = solver.eigenvectors();

    // Fix each column's phase: first entry of maximal modulus becomes real positive.
    for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
      Eigen::Index best = 0;
      double best_abs = -1;
      for (Eigen::Index r = 0; r < vecs.rows(); ++r) {
        const double m = std::abs(vecs(r, c));
        if (m > best_abs * (1 + 1e-12)) {
          best_abs = m;
          best = r;
        }
      }
      vecs.col(c) *= std::conj(vecs(best, c)) / best_abs;
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(vals.size()));
  std::iota(order.begin(), order.end(), 0);
  const double tie = 1e-12 * scale;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    if (std::abs(vals(i) - vals(j)) > tie) return vals(i) < vals(j);
    return lex_less(vecs.col(i), vecs.col(j));
  });

  Spectrum s{op.n, op.d, Eigen::VectorXd(vals.size()), Eigen::MatrixXcd(vecs.rows(), vecs.cols())};
  for (std::size_t k = 0; k < order.size(); ++k) {
    s.eigenvalues(static_cast<Eigen::Index>(k)) = vals(order[k]);
    s.eigenvectors.col(static_cast<Eigen::Index>(k)) = vecs.col(order[k]);
  }
  return s;
}

std::vector<complex> coefficient_grid(const Eigen::VectorXcd& coeffs, int grid_size, int n,
                                      const RkhaParams& params) {
  const int d = params.d();
  const IndexSetN set(n, d);
  if (static_cast<std::size_t>(coeffs.size()) != set.size())
    throw InvalidArgument("coefficient_grid: coefficient vector has wrong length");
  if (grid_size < 1) throw InvalidArgument("coefficient_grid: grid_size must be positive");

  std::vector<MultiIndex> idx = set.indices();
  // Basis weight exp(-tau |j|_p / 2) and the L2 norm of the expansion.
  std::vector<complex> a(idx.size());
  double norm2 = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double w = std::exp(-params.tau() * pnorm(idx[k], params.p()) / 2.0);
    a[k] = coeffs(static_cast<Eigen::Index>(k)) * w;
    norm2 += std::norm(a[k]);
  }
  const double inv_norm = norm2 > 0 ? 1.0 / std::sqrt(norm2) : 0.0;

  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(grid_size);
  std::vector<complex> out(total);
  const double step = 2.0 * std::numbers::pi / grid_size;
  std::vector<int> g(static_cast<std::size_t>(d), 0);
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t rem = p;
    for (int i = d - 1; i >= 0; --i) {
      g[static_cast<std::size_t>(i)] = static_cast<int>(rem % static_cast<std::size_t>(grid_size));
      rem /= static_cast<std::size_t>(grid_size);
    }
    complex s{};
    for (std::size_t k = 0; k < idx.size(); ++k) {
      double phase = 0;
      for (int i = 0; i < d; ++i) phase += idx[k][i] * g[static_cast<std::size_t>(i)] * step;
      s += a[k] * std::polar(1.0, phase);
    }
    out[p] = s * inv_norm;
  }
  return out;
}

std::vector<double> eigenfunction_grid(const Spectrum& spec, int index, int grid_size, int n,
                                       const RkhaParams& params) {
  if (index < 0 || index >= spec.eigenvectors.cols())
    throw InvalidArgument("eigenfunction_grid: index out of range");
  const auto u = coefficient_grid(spec.eigenvectors.col(index), grid_size, n, params);
  std::size_t best = 0;
  for (std::size_t k = 1; k < u.size(); ++k)
    if (std::abs(u[k]) > std::abs(u[best])) best = k;
  const complex align = std::abs(u[best]) > 0 ? std::conj(u[best]) / std::abs(u[best]) : complex(1);
  std::vector<double> out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = (u[k] * align).real();
  return out;
}

nlohmann::json spectrum_to_json(const Spectrum& spec, int grid_size, const RkhaParams& params) {
  nlohmann::json j;
  j["eigenvalues"] = std::vector<double>(spec.eigenvalues.data(),
                                         spec.eigenvalues.data() + spec.eigenvalues.size());
  nlohmann::json grids = nlohmann::json::array();
  for (Eigen::Index k = 0; k < spec.eigenvectors.cols(); ++k)
    grids.push_back(eigenfunction_grid(spec, static_cast<int>(k), grid_size, spec.n, params));
  j["eigenvector_grids"] = std::move(grids);
  return j;
}

Eigen::MatrixXcd fourier_matrix(int n, int d, bool adjoint) {
  if (d < 1 || n < 1 || n % d != 0) throw InvalidArgument("fourier_matrix: n must be divisible by d");
  const int m = n / d;
  const Eigen::Index size = Eigen::Index{1} << m;
  Eigen::MatrixXcd block(size, size);
  const double sign = adjoint ? 1.0 : -1.0;
  for (Eigen::Index p = 0; p < size; ++p)
    for (Eigen::Index q = 0; q < size; ++q)
      block(p, q) = std::polar(1.0 / std::sqrt(static_cast<double>(size)),
                               sign * 2.0 * std::numbers::pi * static_cast<double>((p * q) % size) /
                                   static_cast<double>(size));
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Ones(1, 1);
  for (int i = 0; i < d; ++i) {
    Eigen::MatrixXcd next(out.rows() * size, out.cols() * size);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c) next.block(r * size, c * size, size, size) = out(r, c) * block;
    out = std::move(next);
  }
  return out;
}

}  // namespace kqc
