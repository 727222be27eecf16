#include "kqc/opalg.hpp"

#include <gtest/gtest.h>

#include <random>

#include "kqc/error.hpp"
#include "test_util.hpp"

namespace kqc {
namespace {

using testing::kTwoPi;

const RkhaParams kQuarter1(1, 0.25, 0.25);
const RkhaParams kQuarter2(2, 0.25, 0.25);

Observable psi_observable(const MultiIndex& m, const RkhaParams& q) {
  Observable f(m.dim());
  f.set(m, std::exp(-q.tau() * pnorm(m, q.p()) / 2.0));
  return f;
}

Observable random_real_observable(std::mt19937_64& rng, int d, int max_abs) {
  std::uniform_int_distribution<int> comp(-max_abs, max_abs);
  std::normal_distribution<double> g;
  Observable f(d);
  for (int k = 0; k < 4; ++k) {
    std::vector<int> j;
    for (int i = 0; i < d; ++i) {
      int v = 0;
      while (v == 0) v = comp(rng);
      j.push_back(v);
    }
    const complex c(g(rng), g(rng));
    const MultiIndex mi(j);
    f.set(mi, f.coeff(mi) + c);
    f.set(-mi, f.coeff(-mi) + std::conj(c));
  }
  return f;
}

// <psi_i, f psi_j> in the RKHA inner product, from Fourier coefficients of
// f * psi_j obtained by exact grid quadrature.
Eigen::MatrixXcd gram_oracle(const Observable& f, int n, const RkhaParams& q) {
  const int d = q.d();
  const IndexSetN set(n, d);
  const auto idx = set.indices();
  const int grid = 64;
  const auto grid_points = [&] {
    std::vector<std::vector<double>> pts;
    if (d == 1) {
      for (int a = 0; a < grid; ++a) pts.push_back({kTwoPi * a / grid});
    } else {
      for (int a = 0; a < grid; ++a)
        for (int b = 0; b < grid; ++b) pts.push_back({kTwoPi * a / grid, kTwoPi * b / grid});
    }
    return pts;
  }();
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) {
    std::vector<complex> prod(grid_points.size());
    for (std::size_t k = 0; k < grid_points.size(); ++k)
      prod[k] = evaluate(f, grid_points[k]) * testing::psi(idx[c].components(), grid_points[k], q.p(), q.tau());
    for (std::size_t r = 0; r < idx.size(); ++r) {
      complex coef{};
      for (std::size_t k = 0; k < grid_points.size(); ++k) {
        double ph = 0;
        for (int i = 0; i < d; ++i) ph += idx[r][i] * grid_points[k][static_cast<std::size_t>(i)];
        coef += prod[k] * std::polar(1.0, -ph);
      }
      coef /= static_cast<double>(grid_points.size());
      g(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          coef * std::exp(q.tau() * pnorm(idx[r], q.p()) / 2.0);
    }
  }
  return g;
}

TEST(MultOperator, PsiOneIsSubdiagonal) {
  const auto a = mult_operator(psi_observable({1}, kQuarter1), 3, kQuarter1).matrix;
  const IndexSetN set(3, 1);
  for (Eigen::Index r = 0; r < 8; ++r)
    for (Eigen::Index c = 0; c < 8; ++c) {
      const int diff = set.at(static_cast<std::uint64_t>(r))[0] - set.at(static_cast<std::uint64_t>(c))[0];
      if (diff == 1) {
        EXPECT_EQ(r, c + 1);
        EXPECT_NEAR(a(r, c).real(), structure_constant(set.at(static_cast<std::uint64_t>(c)), {1}, kQuarter1), 1e-15);
      } else {
        EXPECT_EQ(a(r, c), complex{});
      }
    }
}

TEST(MultOperator, ConstantIsIdentity) {
  const auto a = mult_operator(Observable::constant(2, 1.0), 4, kQuarter2).matrix;
  EXPECT_EQ((a - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(MultOperator, MatchesQuadratureGram) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 3; ++trial) {
    const auto f1 = random_real_observable(rng, 1, 5);
    EXPECT_LT((mult_operator(f1, 4, kQuarter1).matrix - gram_oracle(f1, 4, kQuarter1)).cwiseAbs().maxCoeff(), 1e-12);
    const auto f2 = random_real_observable(rng, 2, 3);
    EXPECT_LT((mult_operator(f2, 4, kQuarter2).matrix - gram_oracle(f2, 4, kQuarter2)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SelfAdjointOperator, PsiOneIsSymmetricBidiagonal) {
  const auto s = selfadjoint_operator(psi_observable({1}, kQuarter1), 3, kQuarter1, false).matrix;
  const IndexSetN set(3, 1);
  for (Eigen::Index r = 0; r < 8; ++r)
    for (Eigen::Index c = 0; c < 8; ++c) {
      const int diff = set.at(static_cast<std::uint64_t>(r))[0] - set.at(static_cast<std::uint64_t>(c))[0];
      EXPECT_EQ(s(r, c), s(c, r));
      EXPECT_EQ(s(r, c).imag(), 0.0);
      if (std::abs(diff) != 1) EXPECT_EQ(s(r, c), complex{});
      else EXPECT_GT(s(r, c).real(), 0.0);
    }
}

TEST(SelfAdjointOperator, ExactlyHermitian) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    Observable f(2);
    f.set({1, 2}, {0.3, 0.8});
    f.set({-1, 1}, {-0.5, 0.1});
    const auto s = selfadjoint_operator(f, 6, kQuarter2, true).matrix;
    EXPECT_TRUE(s == s.adjoint());
  }
}

TEST(SelfAdjointOperator, SineSpectrumInsideUnitInterval) {
  for (int n : {3, 7}) {
    const auto spec = hermitian_spectrum(selfadjoint_operator(Observable::preset("sin"), n, kQuarter1, true));
    EXPECT_GE(spec.eigenvalues.minCoeff(), -1.05);
    EXPECT_LE(spec.eigenvalues.maxCoeff(), 1.05);
  }
}

TEST(SelfAdjointOperator, BiasCorrectionRejectsPartiallyZeroIndex) {
  Observable f(2);
  f.set({1, 0}, 0.5);
  f.set({-1, 0}, 0.5);
  EXPECT_THROW(selfadjoint_operator(f, 4, kQuarter2, true), InvalidArgument);
  EXPECT_NO_THROW(selfadjoint_operator(f, 4, kQuarter2, false));
  EXPECT_THROW(selfadjoint_operator(Observable::preset("sin"), 4, kQuarter2, true), InvalidArgument);
}

TEST(SelfAdjointOperator, BiasCorrectionScalesByKappaOverEta) {
  const auto f = Observable::preset("cos");
  const auto plain = selfadjoint_operator(f, 3, kQuarter1, false).matrix;
  const auto corr = selfadjoint_operator(f, 3, kQuarter1, true).matrix;
  const double ratio = kappa_infinite(kQuarter1) / eta_l({1}, kQuarter1);
  EXPECT_NEAR((corr - plain * ratio).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(SelfAdjointOperator, Injective) {
  std::mt19937_64 rng(50);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_real_observable(rng, 1, 4);
    if (f.coeffs().empty()) continue;
    EXPECT_GT(selfadjoint_operator(f, 4, kQuarter1, true).matrix.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(DensityMatrix, TracePurityDiagonal) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const TorusPoint x(testing::random_angles(rng, 2));
    const auto rho = density_matrix(x, 6, kQuarter2).matrix;
    EXPECT_NEAR(std::abs(rho.trace() - complex(1.0)), 0.0, 1e-12);
    EXPECT_LT((rho * rho - rho).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((rho - rho.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    const IndexSetN set(6, 2);
    const double kn = kappa_n(6, kQuarter2);
    for (std::uint64_t b = 0; b < set.size(); ++b) {
      const double expect = std::exp(-0.25 * pnorm(set.at(b), 0.25)) / kn;
      EXPECT_NEAR(rho(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)).real(), expect, 1e-15);
    }
  }
}

TEST(Evolution, PreservesTraceAndPurity) {
  const Frequencies a({1.1, 2.9});
  const auto rho = density_matrix(TorusPoint({0.4, 5.0}), 6, kQuarter2);
  for (double t : {0.3, -2.0, 17.5}) {
    const auto r = evolve_density(rho, t, a).matrix;
    EXPECT_NEAR(std::abs(r.trace() - complex(1.0)), 0.0, 1e-12);
    EXPECT_LT((r * r - r).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Evolution, EvolvedStateIsFeatureOfFlowedPoint) {
  const Frequencies a({1.1, 2.9});
  const TorusPoint x({0.4, 5.0});
  const double t = 0.77;
  const auto lhs = evolve_density(density_matrix(x, 6, kQuarter2), t, a).matrix;
  const auto rhs = density_matrix(flow(x, t, a), 6, kQuarter2).matrix;
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Evolution, SchrodingerEqualsHeisenberg) {
  const Frequencies a({3 * std::sqrt(2.0) * testing::kPi, kTwoPi});
  const auto s = selfadjoint_operator(Observable::preset("sin1cos2"), 6, kQuarter2, true);
  const auto rho = density_matrix(TorusPoint({1.0, 2.5}), 6, kQuarter2);
  for (double t : {0.0, 0.13, 0.5, 0.94}) {
    const complex sch = (evolve_density(rho, t, a).matrix * s.matrix).trace();
    const complex hei = (rho.matrix * heisenberg_evolve(s, t, a).matrix).trace();
    EXPECT_NEAR(std::abs(sch - hei), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(expectation(s, TorusPoint({1.0, 2.5}), t, kQuarter2, a) - sch), 0.0, 1e-12);
  }
}

TEST(EvolveExpectation, ConstantIsOne) {
  const auto v = evolve_expectation(Observable::constant(1, 1.0), TorusPoint({2.5}), 0.0, 5, kQuarter1, Frequencies({1.0}));
  EXPECT_NEAR(std::abs(v - complex(1.0)), 0.0, 1e-12);
}

std::pair<double, double> sine_errors(int n) {
  const auto f = Observable::preset("sin");
  const auto s = selfadjoint_operator(f, n, kQuarter1, true);
  const Frequencies a({kTwoPi});
  double mx = 0, ss = 0;
  for (int k = 0; k <= 50; ++k) {
    const double t = 0.02 * k;
    const complex v = expectation(s, TorusPoint({2.5}), t, kQuarter1, a);
    EXPECT_LT(std::abs(v.imag()), 1e-10);
    const double e = std::abs(v.real() - std::sin(2.5 + kTwoPi * t));
    mx = std::max(mx, e);
    ss += e * e;
  }
  return {mx, std::sqrt(ss / 51)};
}

TEST(EvolveExpectation, SineTracksTruthAtSevenQubits) {
  const auto [max7, rms7] = sine_errors(7);
  const auto [max3, rms3] = sine_errors(3);
  EXPECT_LT(max7, 0.05);
  EXPECT_GT(rms3, rms7);
  // Regression values from the dense oracle.
  EXPECT_NEAR(max7, 0.0174, 5e-4);
  EXPECT_NEAR(max3, 0.251, 5e-3);
}

TEST(EvolveExpectation, ConsistencyImprovesWithQubits) {
  std::mt19937_64 rng(17);
  const Frequencies a1({1.0}), a2({1.0, 1.0});
  for (int trial = 0; trial < 20; ++trial) {
    const TorusPoint x1(testing::random_angles(rng, 1));
    double prev = 1e9;
    for (int n : {1, 2, 3}) {
      const double e = std::abs(evolve_expectation(Observable::preset("sin"), x1, 0, n, kQuarter1, a1) -
                                evaluate(Observable::preset("sin"), x1));
      EXPECT_LT(e, prev);
      prev = e;
    }
    const TorusPoint x2(testing::random_angles(rng, 2));
    prev = 1e9;
    for (int n : {2, 4, 6}) {
      const double e = std::abs(evolve_expectation(Observable::preset("sin1cos2"), x2, 0, n, kQuarter2, a2) -
                                evaluate(Observable::preset("sin1cos2"), x2));
      EXPECT_LT(e, prev);
      prev = e;
    }
  }
}

TEST(EvolveExpectation, MultiplicationPathConverges) {
  const auto f = Observable::preset("sin");
  const Frequencies a({kTwoPi});
  double prev = 1e9;
  for (int n : {3, 5, 7}) {
    double mx = 0;
    for (int k = 0; k <= 50; ++k) {
      const double t = 0.02 * k;
      mx = std::max(mx, std::abs(evolve_expectation_mult(f, TorusPoint({2.5}), t, n, kQuarter1, a) -
                                 std::sin(2.5 + kTwoPi * t)));
    }
    EXPECT_LT(mx, prev);
    prev = mx;
  }
}

TEST(HermitianSpectrum, DiagonalSorted) {
  DenseOperator op{2, 1, Eigen::MatrixXcd::Zero(4, 4)};
  op.matrix.diagonal() << 3.0, -1.0, 2.0, 0.5;
  const auto s = hermitian_spectrum(op);
  EXPECT_EQ(s.eigenvalues, (Eigen::VectorXd(4) << -1.0, 0.5, 2.0, 3.0).finished());
}

TEST(HermitianSpectrum, RejectsNonHermitian) {
  DenseOperator op{1, 1, Eigen::MatrixXcd::Zero(2, 2)};
  op.matrix(0, 1) = 1.0;
  EXPECT_THROW(hermitian_spectrum(op), InvalidArgument);
}

TEST(HermitianSpectrum, ReconstructsAndOrthonormal) {
  const auto op = selfadjoint_operator(Observable::preset("sin1cos2"), 6, kQuarter2, true);
  const auto s = hermitian_spectrum(op);
  const Eigen::MatrixXcd& u = s.eigenvectors;
  const Eigen::MatrixXcd rec = u * s.eigenvalues.cast<complex>().asDiagonal() * u.adjoint();
  EXPECT_LT((rec - op.matrix).norm() / op.matrix.norm(), 1e-9);
  EXPECT_LT((u.adjoint() * u - Eigen::MatrixXcd::Identity(64, 64)).cwiseAbs().maxCoeff(), 1e-9);
  for (Eigen::Index k = 1; k < s.eigenvalues.size(); ++k) EXPECT_LE(s.eigenvalues(k - 1), s.eigenvalues(k) + 1e-12);
}

TEST(HermitianSpectrum, RealObservableGivesConjugateSymmetricVectors) {
  const auto s = hermitian_spectrum(selfadjoint_operator(Observable::preset("sin"), 7, kQuarter1, true));
  const Eigen::Index dim = s.eigenvectors.rows();
  for (Eigen::Index c = 0; c < dim; ++c)
    for (Eigen::Index r = 0; r < dim; ++r)
      EXPECT_NEAR(std::abs(s.eigenvectors(dim - 1 - r, c) - std::conj(s.eigenvectors(r, c))), 0.0, 1e-14);
}

TEST(HermitianSpectrum, Deterministic) {
  const auto op = selfadjoint_operator(Observable::preset("sin1cos2"), 4, kQuarter2, true);
  const auto a = hermitian_spectrum(op), b = hermitian_spectrum(op);
  EXPECT_TRUE(a.eigenvalues == b.eigenvalues);
  EXPECT_TRUE(a.eigenvectors == b.eigenvectors);
}

int count_near_edges(const Spectrum& s) {
  int c = 0;
  for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) c += std::abs(std::abs(s.eigenvalues(k)) - 1.0) < 0.1;
  return c;
}

TEST(HermitianSpectrum, EdgeClusteringGrows) {
  const auto s3 = hermitian_spectrum(selfadjoint_operator(Observable::preset("sin"), 3, kQuarter1, true));
  const auto s7 = hermitian_spectrum(selfadjoint_operator(Observable::preset("sin"), 7, kQuarter1, true));
  EXPECT_GT(count_near_edges(s7), count_near_edges(s3));
}

TEST(EigenfunctionGrid, FeatureVectorGivesKernelSection) {
  const double y = 1.7;
  const auto v = feature_vector(TorusPoint({y}), 5, kQuarter1);
  const auto u = coefficient_grid(v, 64, 5, kQuarter1);
  // sum_j conj(psi_j(y)) psi_j(x) = k_n(x, y); compare shape up to the scale factor.
  const double scale = u[0].real() / kernel_n({0.0}, {y}, 5, kQuarter1);
  for (int k = 0; k < 64; ++k) {
    const double x = kTwoPi * k / 64;
    EXPECT_NEAR(u[static_cast<std::size_t>(k)].real(), scale * kernel_n({x}, {y}, 5, kQuarter1), 1e-12);
    EXPECT_NEAR(u[static_cast<std::size_t>(k)].imag(), 0.0, 1e-12);
  }
}

TEST(EigenfunctionGrid, ConstantVectorByLinearity) {
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(8);
  const auto u = coefficient_grid(ones, 16, 3, kQuarter1);
  double norm2 = 0;
  for (int j : testing::jvals(3)) norm2 += std::exp(-0.25 * std::pow(std::abs(j), 0.25));
  for (int k = 0; k < 16; ++k) {
    complex s{};
    for (int j : testing::jvals(3)) s += testing::psi({j}, {kTwoPi * k / 16}, 0.25, 0.25);
    EXPECT_NEAR(std::abs(u[static_cast<std::size_t>(k)] - s / std::sqrt(norm2)), 0.0, 1e-12);
  }
}

TEST(EigenfunctionGrid, UnitNormOnFineGrid) {
  const auto s = hermitian_spectrum(selfadjoint_operator(Observable::preset("sin"), 7, kQuarter1, true));
  for (int k = 0; k < 128; k += 9) {
    const auto u = eigenfunction_grid(s, k, 512, 7, kQuarter1);
    double q = 0;
    for (double v : u) q += v * v;
    EXPECT_NEAR(q / 512.0, 1.0, 0.05) << k;
  }
  EXPECT_THROW(eigenfunction_grid(s, 128, 512, 7, kQuarter1), InvalidArgument);
}

TEST(EigenfunctionGrid, LocalizedWhereSineMatchesEigenvalue) {
  const auto s = hermitian_spectrum(selfadjoint_operator(Observable::preset("sin"), 7, kQuarter1, true));
  int checked = 0;
  for (int k = 0; k < 128; ++k) {
    const double ev = s.eigenvalues(k);
    if (std::abs(ev) >= 0.9) continue;
    const auto u = eigenfunction_grid(s, k, 512, 7, kQuarter1);
    std::size_t best = 0;
    for (std::size_t i = 1; i < u.size(); ++i)
      if (std::abs(u[i]) > std::abs(u[best])) best = i;
    EXPECT_LT(std::abs(std::sin(kTwoPi * static_cast<double>(best) / 512.0) - ev), 0.1) << k;
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(FourierMatrix, UnitaryAndBlockStructured) {
  const auto f = fourier_matrix(4, 2);
  EXPECT_LT((f.adjoint() * f - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((fourier_matrix(4, 2, true) - f.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(std::abs(f(1, 1) - std::polar(0.25, -kTwoPi / 4)), 0.0, 1e-15);
}

}  // namespace
}  // namespace kqc
