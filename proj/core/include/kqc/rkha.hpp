#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace kqc {

// Kernel parameters on the d-torus: exponent p in (0,1), locality tau > 0.
class RkhaParams {
 public:
  RkhaParams(int d, double p, double tau);

  int d() const noexcept { return d_; }
  double p() const noexcept { return p_; }
  double tau() const noexcept { return tau_; }

  friend bool operator==(const RkhaParams&, const RkhaParams&) = default;

 private:
  int d_;
  double p_;
  double tau_;
};

// Integer Fourier index in Z^d. Indices used as basis labels have every
// component nonzero; the zero index is allowed for constants.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> components) : c_(std::move(components)) {}
  MultiIndex(std::initializer_list<int> components) : c_(components) {}

  static MultiIndex zero(int d) { return MultiIndex(std::vector<int>(d, 0)); }

  int dim() const noexcept { return static_cast<int>(c_.size()); }
  int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& components() const noexcept { return c_; }

  bool is_zero() const;
  // True when no component is zero.
  bool all_nonzero() const;

  MultiIndex operator+(const MultiIndex& o) const;
  MultiIndex operator-(const MultiIndex& o) const;
  MultiIndex operator-() const;

  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> c_;
};

// Truncated index set J_n: d-fold product of
// {-2^(m-1), ..., -1, 1, ..., 2^(m-1)} with m = n/d.
// Ordered lexicographically, which coincides with the qubit encoding order.
class IndexSetN {
 public:
  IndexSetN(int n, int d);

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  int bits_per_dim() const noexcept { return n_ / d_; }
  // 2^(m-1): largest absolute component.
  int half_width() const noexcept { return half_; }
  std::size_t size() const noexcept { return std::size_t{1} << n_; }

  // Order-preserving bijection from per-dimension values onto 0..2^m-1.
  int ordinal(int component) const;
  int component_at(int ordinal) const;

  bool contains(const MultiIndex& j) const;
  // Position of j in the ordering; throws if j is not in the set.
  std::uint64_t position(const MultiIndex& j) const;
  MultiIndex at(std::uint64_t position) const;

  std::vector<MultiIndex> indices() const;

 private:
  int n_;
  int d_;
  int half_;
};

// Per-dimension values of J_{n,d}.
std::vector<int> per_dimension_values(int n, int d);

double pnorm(const MultiIndex& j, double p);

// c_jl = exp(-tau (|j|_p + |l|_p - |j+l|_p) / 2), so that psi_j psi_l = c_jl psi_{j+l}.
double structure_constant(const MultiIndex& j, const MultiIndex& l, const RkhaParams& params);

// Sum of exp(-tau |j|_p) over J_n.
double kappa_n(int n, const RkhaParams& params);

// Result of the one-dimensional series sum_{j>=1} exp(-tau j^p).
struct SeriesSum {
  double value = 0;        // best estimate (direct sum + corrected tail)
  double partial_sum = 0;  // direct sum up to `cutoff`
  double tail_bound = 0;   // integral of the summand from `cutoff` to infinity
  std::uint64_t cutoff = 0;
};

inline constexpr double kDefaultRelTol = 1e-10;
inline constexpr std::uint64_t kDefaultMaxCutoff = std::uint64_t{1} << 32;

SeriesSum one_sided_series(double p, double tau, double rel_tol = kDefaultRelTol,
                           std::uint64_t max_cutoff = kDefaultMaxCutoff);

// Full-lattice sum over J (no truncation). Cached per (p, tau, rel_tol).
double kappa_infinite(const RkhaParams& params, double rel_tol = kDefaultRelTol);

// Sum of exp(-tau |j|_p) over {j in J : j + l in J}.
double eta_l(const MultiIndex& l, const RkhaParams& params, double rel_tol = kDefaultRelTol);

// Truncated kernel k_n(x, y) = sum_{J_n} psi_j(x) conj(psi_j(y)). Real by the
// +/- symmetry of J_n.
double kernel_n(const std::vector<double>& x, const std::vector<double>& y, int n,
                const RkhaParams& params);

}  // namespace kqc
