#include "kqc/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "kqc/error.hpp"
#include "kqc/opalg.hpp"

namespace kqc {

std::vector<double> probabilities(const StateVector& state) {
  std::vector<double> p(state.size());
  for (std::size_t b = 0; b < p.size(); ++b) p[b] = std::norm(state[b]);
  return p;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

void sample_shard(const std::vector<double>& cdf, std::uint64_t shots, std::uint64_t seed,
                  std::vector<std::uint64_t>& counts) {
  std::mt19937_64 gen(seed);
  const double total = cdf.back();
  for (std::uint64_t k = 0; k < shots; ++k) {
    // std distributions are not specified bit-for-bit across libraries.
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53 * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t b = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    ++counts[b];
  }
}

}  // namespace

Histogram sample(const StateVector& state, std::uint64_t shots, std::uint64_t seed, unsigned threads) {
  if (shots < 1) throw InvalidArgument("sample: shots must be >= 1");
  const auto p = probabilities(state);
  std::vector<double> cdf(p.size());
  double acc = 0;
  for (std::size_t b = 0; b < p.size(); ++b) cdf[b] = acc += p[b];

  const std::uint64_t shards = (shots + kShardSize - 1) / kShardSize;
  std::vector<std::vector<std::uint64_t>> partial(shards, std::vector<std::uint64_t>(p.size(), 0));
  auto run = [&](std::uint64_t s) {
    const std::uint64_t len = std::min(kShardSize, shots - s * kShardSize);
    sample_shard(cdf, len, derive_seed(seed, s), partial[s]);
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(shards)));
  if (workers == 1) {
    for (std::uint64_t s = 0; s < shards; ++s) run(s);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t s = w; s < shards; s += workers) run(s);
      });
    for (auto& th : pool) th.join();
  }

  Histogram h{state.n(), shots, std::vector<std::uint64_t>(p.size(), 0)};
  for (const auto& part : partial)
    for (std::size_t b = 0; b < part.size(); ++b) h.counts[b] += part[b];
  return h;
}

std::vector<double> decode_gridpoint(std::uint64_t b, int n, int d) {
  if (d < 1 || n < 1 || n % d != 0) throw InvalidArgument("decode_gridpoint: n must be divisible by d");
  if (b >> n) throw InvalidArgument("decode_gridpoint: bit string wider than n");
  const int m = n / d;
  const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
  const double step = 2.0 * std::numbers::pi / std::ldexp(1.0, m);
  std::vector<double> x(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = static_cast<double>((b >> (n - (i + 1) * m)) & mask) * step;
  return x;
}

std::vector<double> decode_gridpoint(const BitString& b, int n, int d) {
  if (b.width() != n) throw InvalidArgument("decode_gridpoint: width mismatch");
  return decode_gridpoint(b.value(), n, d);
}

std::vector<complex> estimate(const Histogram& hist, const std::vector<Observable>& observables, int n, int d) {
  if (hist.n != n || hist.counts.size() != (std::size_t{1} << n))
    throw InvalidArgument("estimate: histogram width mismatch");
  std::vector<complex> sums(observables.size(), complex{});
  for (std::uint64_t b = 0; b < hist.counts.size(); ++b) {
    if (hist.counts[b] == 0) continue;
    const auto x = decode_gridpoint(b, n, d);
    for (std::size_t k = 0; k < observables.size(); ++k)
      sums[k] += static_cast<double>(hist.counts[b]) * evaluate(observables[k], x);
  }
  for (auto& s : sums) s /= static_cast<double>(hist.shots);
  return sums;
}

complex exact_expectation(const StateVector& state, const Observable& f, int n, int d) {
  if (state.n() != n) throw InvalidArgument("exact_expectation: width mismatch");
  complex s{};
  for (std::uint64_t b = 0; b < state.size(); ++b) {
    const double pb = std::norm(state[b]);
    if (pb == 0) continue;
    s += pb * evaluate(f, decode_gridpoint(b, n, d));
  }
  return s;
}

std::vector<double> diagonalization_residuals(const MultiIndex& m, int n, const RkhaParams& params) {
  const int d = params.d();
  Observable psi(d);
  psi.set(m, std::exp(-params.tau() * pnorm(m, params.p()) / 2.0));
  const Eigen::MatrixXcd a = mult_operator(psi, n, params).matrix;
  const Eigen::MatrixXcd f = fourier_matrix(n, d);
  const Eigen::MatrixXcd conj = f.adjoint() * a * f;
  std::vector<double> out(static_cast<std::size_t>(conj.cols()));
  for (Eigen::Index l = 0; l < conj.cols(); ++l) {
    Eigen::VectorXcd col = conj.col(l);
    col(l) -= evaluate(psi, decode_gridpoint(static_cast<std::uint64_t>(l), n, d));
    out[static_cast<std::size_t>(l)] = col.norm();
  }
  return out;
}

void write_histogram_csv_header(std::ostream& os, bool with_time) {
  os << (with_time ? "t,bitstring,integer_index,count\n" : "bitstring,integer_index,count\n");
}

void write_histogram_csv_rows(std::ostream& os, const Histogram& hist, double t) {
  for (std::uint64_t b = 0; b < hist.counts.size(); ++b) {
    if (hist.counts[b] == 0) continue;
    if (!std::isnan(t)) os << fmt::format("{:.6g},", t);
    os << BitString(b, hist.n).to_string() << ',' << b << ',' << hist.counts[b] << '\n';
  }
}

void write_estimation_csv(std::ostream& os, const std::vector<EstimationRow>& rows) {
  os << "t,estimate_re,estimate_im,truth_re,truth_im,abs_error\n";
  for (const auto& r : rows)
    os << fmt::format("{:.6g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.t, r.estimate.real(),
                      r.estimate.imag(), r.truth.real(), r.truth.imag(), std::abs(r.estimate - r.truth));
}

}  // namespace kqc
