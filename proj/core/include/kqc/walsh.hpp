#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kqc/classical.hpp"
#include "kqc/rkha.hpp"

namespace kqc {

// n-bit register label. Bit 1 is the most significant bit of value(), so
// "110" is 6. Qubit q (0-based) corresponds to bit(q + 1).
class BitString {
 public:
  BitString(std::uint64_t value, int width);
  // Bits listed most significant first.
  static BitString from_bits(const std::vector<int>& bits);
  static BitString parse(const std::string& s);

  std::uint64_t value() const noexcept { return value_; }
  int width() const noexcept { return width_; }
  // 1-based, bit(1) is the most significant.
  int bit(int i) const;
  std::vector<int> bits() const;
  std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::uint64_t value_;
  int width_;
};

// Base-2 digits of j, least significant first.
std::vector<int> binary_expand(std::uint64_t j, int width);
// Digits of m with the order reversed so that the first is the most significant.
BitString reversed_binary(std::uint64_t m, int width);
std::uint64_t from_reversed_binary(const BitString& b);

std::uint64_t bit_reverse(std::uint64_t m, int width);

// Discrete Walsh function of order n: (-1)^(sum_i digit_i(j) * rdigit_i(m)).
int walsh_function(std::uint64_t j, std::uint64_t m, int n);

// hhat_j = (1/N) sum_m w_j(m) values[m], O(N log N).
std::vector<double> walsh_fourier_transform(const std::vector<double>& values);
// values[m] = sum_j coeffs[j] w_j(m).
std::vector<double> inverse_walsh_fourier_transform(const std::vector<double>& coeffs);

// Sparse Walsh expansion of a diagonal operator.
struct WalshCoeffs {
  int n = 0;
  std::map<std::uint64_t, double> terms;

  double at(std::uint64_t k) const;
  std::vector<double> dense() const;
};

// Closed-form expansion of the diagonal generator with eigenvalues omega_j on
// the encoded register. Exactly n terms, at powers of two. `rates` may be any
// real vector (frequencies, or angles for the shift operator).
WalshCoeffs hamiltonian_walsh_coeffs(int n, int d, const std::vector<double>& rates);
WalshCoeffs hamiltonian_walsh_coeffs(int n, int d, const Frequencies& freqs);

// h[m] = omega of the index encoded by the bit string with integer value m.
std::vector<double> spectral_function(int n, int d, const Frequencies& freqs);

BitString encode_index(const MultiIndex& j, int n, int d);
MultiIndex decode_index(const BitString& b, int n, int d);

}  // namespace kqc
