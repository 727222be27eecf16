#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "kqc/circuit.hpp"
#include "kqc/classical.hpp"
#include "kqc/rkha.hpp"
#include "kqc/walsh.hpp"

namespace kqc {

// Shot counts indexed by the integer value of the measured bit string.
struct Histogram {
  int n = 0;
  std::uint64_t shots = 0;
  std::vector<std::uint64_t> counts;

  friend bool operator==(const Histogram&, const Histogram&) = default;
};

std::vector<double> probabilities(const StateVector& state);

// Sampler description written into run metadata.
inline constexpr const char* kRngAlgorithm =
    "mt19937_64 per shard of 65536 shots, shard seed = splitmix64(seed, shard), "
    "53-bit uniform, inverse-CDF binary search";
inline constexpr std::uint64_t kShardSize = 65536;

// Mixes a seed with a stream index (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// K independent computational-basis measurements. The result depends only on
// (state, shots, seed); `threads` changes wall time, never the counts.
Histogram sample(const StateVector& state, std::uint64_t shots, std::uint64_t seed, unsigned threads = 1);

// Grid point of b: each n/d-bit block (most significant first) times 2 pi / 2^(n/d).
std::vector<double> decode_gridpoint(const BitString& b, int n, int d);
std::vector<double> decode_gridpoint(std::uint64_t b, int n, int d);

// Sample means of f(x_b), one per observable, from a single histogram.
std::vector<complex> estimate(const Histogram& hist, const std::vector<Observable>& observables, int n, int d);

// sum_b p_b f(x_b), the infinite-shot limit of estimate.
complex exact_expectation(const StateVector& state, const Observable& f, int n, int d);

// Residuals || F* A F |l> - psi_m(x_l) |l> || for every register state l,
// where A is the truncated multiplication operator of psi_m.
std::vector<double> diagonalization_residuals(const MultiIndex& m, int n, const RkhaParams& params);

// CSV writers. The time column is omitted when `t` is NaN.
void write_histogram_csv_header(std::ostream& os, bool with_time);
void write_histogram_csv_rows(std::ostream& os, const Histogram& hist, double t);

struct EstimationRow {
  double t;
  complex estimate;
  complex truth;
};
void write_estimation_csv(std::ostream& os, const std::vector<EstimationRow>& rows);

}  // namespace kqc
