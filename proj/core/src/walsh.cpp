#include "kqc/walsh.hpp"

#include <bit>
#include <cmath>

#include "kqc/error.hpp"

namespace kqc {

BitString::BitString(std::uint64_t value, int width) : value_(value), width_(width) {
  if (width < 1 || width > 63) throw InvalidArgument("BitString: width out of range");
  if (value >> width) throw InvalidArgument("BitString: value does not fit in width");
}

BitString BitString::from_bits(const std::vector<int>& bits) {
  std::uint64_t v = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw InvalidArgument("BitString: bits must be 0 or 1");
    v = (v << 1) | static_cast<std::uint64_t>(b);
  }
  return BitString(v, static_cast<int>(bits.size()));
}

BitString BitString::parse(const std::string& s) {
  std::vector<int> bits;
  for (char c : s) {
    if (c != '0' && c != '1') throw InvalidArgument("BitString: bad character in '" + s + "'");
    bits.push_back(c - '0');
  }
  return from_bits(bits);
}

int BitString::bit(int i) const {
  if (i < 1 || i > width_) throw InvalidArgument("BitString: bit index out of range");
  return static_cast<int>((value_ >> (width_ - i)) & 1u);
}

std::vector<int> BitString::bits() const {
  std::vector<int> r;
  for (int i = 1; i <= width_; ++i) r.push_back(bit(i));
  return r;
}

std::string BitString::to_string() const {
  std::string s;
  for (int i = 1; i <= width_; ++i) s += static_cast<char>('0' + bit(i));
  return s;
}

std::vector<int> binary_expand(std::uint64_t j, int width) {
  if (width < 1 || width > 63 || (j >> width)) throw InvalidArgument("binary_expand: value out of range");
  std::vector<int> digits;
  for (int i = 0; i < width; ++i) digits.push_back(static_cast<int>((j >> i) & 1u));
  return digits;
}

BitString reversed_binary(std::uint64_t m, int width) { return BitString(m, width); }

std::uint64_t from_reversed_binary(const BitString& b) { return b.value(); }

std::uint64_t bit_reverse(std::uint64_t m, int width) {
  std::uint64_t r = 0;
  for (int i = 0; i < width; ++i) {
    r = (r << 1) | (m & 1u);
    m >>= 1;
  }
  return r;
}

int walsh_function(std::uint64_t j, std::uint64_t m, int n) {
  const std::uint64_t size = std::uint64_t{1} << n;
  if (j >= size || m >= size) throw InvalidArgument("walsh_function: argument out of range");
  return std::popcount(j & bit_reverse(m, n)) % 2 ? -1 : 1;
}

namespace {

int log2_exact(std::size_t size) {
  if (size == 0 || !std::has_single_bit(size))
    throw InvalidArgument("Walsh transform: length must be a power of two");
  return std::countr_zero(size);
}

// In-place natural-order Hadamard butterfly.
void hadamard_butterfly(std::vector<double>& a) {
  for (std::size_t h = 1; h < a.size(); h <<= 1)
    for (std::size_t i = 0; i < a.size(); i += 2 * h)
      for (std::size_t k = i; k < i + h; ++k) {
        const double x = a[k], y = a[k + h];
        a[k] = x + y;
        a[k + h] = x - y;
      }
}

}  // namespace

std::vector<double> walsh_fourier_transform(const std::vector<double>& values) {
  const int n = log2_exact(values.size());
  // w_j(m) pairs j with the reversed digits of m, so permute before the
  // natural-order butterfly.
  std::vector<double> a(values.size());
  for (std::size_t m = 0; m < values.size(); ++m) a[bit_reverse(m, n)] = values[m];
  hadamard_butterfly(a);
  const double inv = 1.0 / static_cast<double>(values.size());
  for (double& v : a) v *= inv;
  return a;
}

std::vector<double> inverse_walsh_fourier_transform(const std::vector<double>& coeffs) {
  const int n = log2_exact(coeffs.size());
  std::vector<double> a(coeffs);
  hadamard_butterfly(a);
  std::vector<double> out(coeffs.size());
  for (std::size_t m = 0; m < coeffs.size(); ++m) out[m] = a[bit_reverse(m, n)];
  return out;
}

double WalshCoeffs::at(std::uint64_t k) const {
  auto it = terms.find(k);
  return it == terms.end() ? 0.0 : it->second;
}

std::vector<double> WalshCoeffs::dense() const {
  std::vector<double> v(std::size_t{1} << n, 0.0);
  for (const auto& [k, c] : terms) v[k] = c;
  return v;
}

WalshCoeffs hamiltonian_walsh_coeffs(int n, int d, const std::vector<double>& rates) {
  if (d < 1 || n < 1 || n % d != 0) throw InvalidArgument("hamiltonian_walsh_coeffs: n must be divisible by d");
  if (static_cast<int>(rates.size()) != d) throw InvalidArgument("hamiltonian_walsh_coeffs: need d rates");
  const int m = n / d;
  WalshCoeffs w;
  w.n = n;
  for (int i = 0; i < d; ++i) {
    for (int l = 0; l < m; ++l) {
      // Exact dyadic rational: -(2^(m-l-1) + [l == 0]) / 2.
      const double unit = -(std::ldexp(1.0, m - l - 1) + (l == 0 ? 1.0 : 0.0)) / 2.0;
      w.terms[std::uint64_t{1} << (l + i * m)] = rates[static_cast<std::size_t>(i)] * unit;
    }
  }
  return w;
}

WalshCoeffs hamiltonian_walsh_coeffs(int n, int d, const Frequencies& freqs) {
  return hamiltonian_walsh_coeffs(n, d, freqs.alphas());
}

std::vector<double> spectral_function(int n, int d, const Frequencies& freqs) {
  IndexSetN set(n, d);
  std::vector<double> h(set.size());
  for (std::uint64_t b = 0; b < set.size(); ++b) h[b] = eigenfrequency(set.at(b), freqs);
  return h;
}

BitString encode_index(const MultiIndex& j, int n, int d) {
  IndexSetN set(n, d);
  return BitString(set.position(j), n);
}

MultiIndex decode_index(const BitString& b, int n, int d) {
  if (b.width() != n) throw InvalidArgument("decode_index: width mismatch");
  return IndexSetN(n, d).at(b.value());
}

}  // namespace kqc
