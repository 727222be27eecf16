#include "kqc/measure.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "kqc/error.hpp"
#include "test_util.hpp"

namespace kqc {
namespace {

using testing::kPi;
using testing::kTwoPi;

StateVector basis(int n, std::uint64_t b) {
  std::vector<complex> a(std::size_t{1} << n, complex{});
  a[b] = 1;
  return StateVector(n, a);
}

StateVector uniform(int n) {
  const std::size_t size = std::size_t{1} << n;
  return StateVector(n, std::vector<complex>(size, complex(1 / std::sqrt(double(size)))));
}

StateVector pipeline_state(const TorusPoint& x, double t, int n, const RkhaParams& q, const Frequencies& a) {
  return simulate(compile_pipeline(x, t, n, q, a).flatten());
}

double total_variation(const Histogram& h, const std::vector<double>& p) {
  double tv = 0;
  for (std::size_t b = 0; b < p.size(); ++b) tv += std::abs(double(h.counts[b]) / double(h.shots) - p[b]);
  return tv / 2;
}

TEST(Probabilities, BasisAndUniform) {
  const auto p = probabilities(basis(3, 5));
  for (std::size_t b = 0; b < 8; ++b) EXPECT_EQ(p[b], b == 5 ? 1.0 : 0.0);
  for (double v : probabilities(uniform(4))) EXPECT_NEAR(v, 1.0 / 16, 1e-15);
}

TEST(Probabilities, ThreeQubitPipelineIsConcentrated) {
  const auto p = probabilities(pipeline_state(TorusPoint({2.5}), 0.94, 3, RkhaParams(1, 0.25, 0.25), Frequencies({kTwoPi})));
  double sum = 0;
  for (double v : p) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_GT(*std::max_element(p.begin(), p.end()), 0.3);
}

TEST(Sample, BasisStateGetsAllShots) {
  const auto h = sample(basis(4, 9), 12345, 1);
  EXPECT_EQ(h.counts[9], 12345u);
  EXPECT_EQ(h.shots, 12345u);
}

TEST(Sample, UniformWithinFiveSigma) {
  const std::uint64_t k = 1000000;
  const auto h = sample(uniform(3), k, 99);
  const double sigma = std::sqrt(k * (1.0 / 8) * (7.0 / 8));
  std::uint64_t total = 0;
  for (auto c : h.counts) {
    EXPECT_LT(std::abs(double(c) - k / 8.0), 5 * sigma);
    total += c;
  }
  EXPECT_EQ(total, k);
}

TEST(Sample, TotalVariationShrinksWithShots) {
  const auto s = pipeline_state(TorusPoint({2.5}), 0.3, 5, RkhaParams(1, 0.25, 0.25), Frequencies({kTwoPi}));
  const auto p = probabilities(s);
  EXPECT_GT(total_variation(sample(s, 10000, 5), p), total_variation(sample(s, 1000000, 5), p));
}

TEST(Sample, DeterministicAndThreadIndependent) {
  const auto s = pipeline_state(TorusPoint({1.0, 2.5}), 0.4, 8, RkhaParams(2, 0.25, 0.25), Frequencies({1.3, 2.0}));
  const auto a = sample(s, 300000, 42, 1);
  EXPECT_EQ(a, sample(s, 300000, 42, 1));
  EXPECT_EQ(a, sample(s, 300000, 42, 4));
  EXPECT_NE(a, sample(s, 300000, 43, 1));
  EXPECT_THROW(sample(s, 0, 1), InvalidArgument);
}

TEST(DecodeGridpoint, Examples) {
  EXPECT_EQ(decode_gridpoint(BitString(0, 4), 4, 2), (std::vector<double>{0.0, 0.0}));
  EXPECT_NEAR(decode_gridpoint(BitString::parse("110"), 3, 1)[0], 3 * kPi / 2, 1e-15);
  const auto x = decode_gridpoint(BitString::parse("1001"), 4, 2);
  EXPECT_NEAR(x[0], kPi, 1e-15);
  EXPECT_NEAR(x[1], kPi / 2, 1e-15);
  EXPECT_THROW(decode_gridpoint(BitString(1, 3), 3, 2), InvalidArgument);
}

TEST(DecodeGridpoint, ExactMultiplesOfGridStep) {
  for (std::uint64_t b = 0; b < 256; ++b) {
    const auto x = decode_gridpoint(b, 8, 2);
    for (double v : x) {
      const double k = v / (kTwoPi / 16);
      EXPECT_NEAR(k, std::round(k), 1e-12);
    }
  }
}

TEST(Estimate, ConstantAndSingleBitstring) {
  const auto s = pipeline_state(TorusPoint({2.5}), 0.2, 4, RkhaParams(1, 0.25, 0.25), Frequencies({kTwoPi}));
  const auto h = sample(s, 5000, 3);
  const auto est = estimate(h, {Observable::constant(1, 0.7), Observable::preset("sin"), Observable::preset("cos")}, 4, 1);
  EXPECT_NEAR(std::abs(est[0] - complex(0.7)), 0.0, 1e-15);
  Histogram one{3, 10, std::vector<std::uint64_t>(8, 0)};
  one.counts[6] = 10;
  EXPECT_NEAR(estimate(one, {Observable::preset("sin")}, 3, 1)[0].real(), std::sin(3 * kPi / 2), 1e-15);
  // One histogram serves every observable.
  EXPECT_EQ(est[1], estimate(h, {Observable::preset("sin")}, 4, 1)[0]);
  EXPECT_EQ(est[2], estimate(h, {Observable::preset("cos")}, 4, 1)[0]);
}

TEST(ExactExpectation, BasisAndUniform) {
  EXPECT_NEAR(exact_expectation(basis(3, 6), Observable::preset("sin"), 3, 1).real(), -1.0, 1e-15);
  EXPECT_NEAR(std::abs(exact_expectation(uniform(5), Observable::preset("sin"), 5, 1)), 0.0, 1e-12);
}

TEST(ExactExpectation, SevenQubitSineTracksTruth) {
  const RkhaParams q(1, 0.25, 0.25);
  const Frequencies a({kTwoPi});
  double mx = 0;
  for (int k = 0; k <= 50; ++k) {
    const double t = 0.02 * k;
    const auto v = exact_expectation(pipeline_state(TorusPoint({2.5}), t, 7, q, a), Observable::preset("sin"), 7, 1);
    mx = std::max(mx, std::abs(v - std::sin(2.5 + kTwoPi * t)));
  }
  EXPECT_LT(mx, 0.05);
  EXPECT_NEAR(mx, 0.031, 2e-3);
}

TEST(ExactExpectation, SampleMeanWithinMonteCarloBound) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ut(0, 1);
  const RkhaParams q(1, 0.25, 0.25);
  const Frequencies a({kTwoPi});
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = pipeline_state(TorusPoint(testing::random_angles(rng, 1)), ut(rng), 5, q, a);
    const auto f = Observable::preset("sin");
    const auto est = estimate(sample(s, 1000000, 1000 + trial), {f}, 5, 1)[0];
    EXPECT_LT(std::abs(est - exact_expectation(s, f, 5, 1)), 4.0 / 1000.0);
  }
}

TEST(Estimate, UnbiasedOverSeeds) {
  const auto s = pipeline_state(TorusPoint({2.5}), 0.6, 5, RkhaParams(1, 0.25, 0.25), Frequencies({kTwoPi}));
  const auto f = Observable::preset("sin");
  const double mean = exact_expectation(s, f, 5, 1).real();
  const auto p = probabilities(s);
  double var = 0;
  for (std::uint64_t b = 0; b < p.size(); ++b) var += p[b] * std::pow(evaluate(f, decode_gridpoint(b, 5, 1)).real() - mean, 2);
  double acc = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) acc += estimate(sample(s, 10000, seed), {f}, 5, 1)[0].real();
  const double se = std::sqrt(var / (100.0 * 10000.0));
  EXPECT_LT(std::abs(acc / 100 - mean), 3 * se);
}

TEST(ExactExpectation, ErrorShrinksAlongQubitTauSchedule) {
  const Frequencies a({kTwoPi});
  auto rms = [&](int n, double tau) {
    const RkhaParams q(1, 0.25, tau);
    double ss = 0;
    for (int k = 0; k <= 50; ++k) {
      const double t = 0.02 * k;
      const auto v = exact_expectation(pipeline_state(TorusPoint({2.5}), t, n, q, a), Observable::preset("sin"), n, 1);
      ss += std::norm(v - std::sin(2.5 + kTwoPi * t));
    }
    return std::sqrt(ss / 51);
  };
  EXPECT_LT(rms(7, 0.125), rms(3, 0.25));
}

TEST(DiagonalizationResiduals, DecayWithQubits) {
  const RkhaParams q(1, 0.25, 0.25);
  std::vector<double> xs, ys;
  for (int n : {4, 6, 8}) {
    const auto r = diagonalization_residuals({1}, n, q);
    xs.push_back(n);
    ys.push_back(std::log2(*std::max_element(r.begin(), r.end())));
  }
  const double slope = (ys[2] - ys[0]) / (xs[2] - xs[0]);
  EXPECT_LE(slope, -(0.5 - 0.25) + 0.15);
  // Regression value at n = 4.
  EXPECT_NEAR(std::exp2(ys[0]), 0.3122, 5e-4);
}

TEST(CsvWriters, Format) {
  Histogram h{2, 5, {0, 3, 0, 2}};
  std::ostringstream os;
  write_histogram_csv_header(os, true);
  write_histogram_csv_rows(os, h, 0.02);
  EXPECT_EQ(os.str(), "t,bitstring,integer_index,count\n0.02,01,1,3\n0.02,11,3,2\n");
  std::ostringstream es;
  write_estimation_csv(es, {{0.5, {0.25, 0.0}, {0.5, 0.0}}});
  EXPECT_EQ(es.str(), "t,estimate_re,estimate_im,truth_re,truth_im,abs_error\n0.5,0.25,0,0.5,0,0.25\n");
}

}  // namespace
}  // namespace kqc
