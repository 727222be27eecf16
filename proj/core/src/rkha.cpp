#include "kqc/rkha.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "kqc/error.hpp"

namespace kqc {

RkhaParams::RkhaParams(int d, double p, double tau) : d_(d), p_(p), tau_(tau) {
  if (d < 1) throw InvalidArgument("RkhaParams: d must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("RkhaParams: p must lie in (0,1)");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("RkhaParams: tau must be > 0");
}

bool MultiIndex::is_zero() const {
  for (int v : c_)
    if (v != 0) return false;
  return true;
}

bool MultiIndex::all_nonzero() const {
  for (int v : c_)
    if (v == 0) return false;
  return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  if (o.dim() != dim()) throw InvalidArgument("MultiIndex: dimension mismatch");
  std::vector<int> r(c_);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += o.c_[i];
  return MultiIndex(std::move(r));
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const { return *this + (-o); }

MultiIndex MultiIndex::operator-() const {
  std::vector<int> r(c_);
  for (int& v : r) v = -v;
  return MultiIndex(std::move(r));
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c_[i]);
  }
  return s + ")";
}

IndexSetN::IndexSetN(int n, int d) : n_(n), d_(d) {
  if (d < 1 || n < 1) throw InvalidArgument("IndexSetN: n and d must be positive");
  if (n % d != 0) throw InvalidArgument("IndexSetN: n must be divisible by d");
  if (n > 30) throw InvalidArgument("IndexSetN: n too large");
  half_ = 1 << (n / d - 1);
}

int IndexSetN::ordinal(int component) const {
  if (component == 0 || component < -half_ || component > half_)
    throw InvalidArgument("IndexSetN: component outside J_{n,d}");
  return component < 0 ? component + half_ : component + half_ - 1;
}

int IndexSetN::component_at(int ordinal) const {
  if (ordinal < 0 || ordinal >= 2 * half_) throw InvalidArgument("IndexSetN: ordinal out of range");
  return ordinal < half_ ? ordinal - half_ : ordinal - half_ + 1;
}

bool IndexSetN::contains(const MultiIndex& j) const {
  if (j.dim() != d_) return false;
  for (int i = 0; i < d_; ++i) {
    const int v = j[i];
    if (v == 0 || v < -half_ || v > half_) return false;
  }
  return true;
}

std::uint64_t IndexSetN::position(const MultiIndex& j) const {
  if (!contains(j)) throw InvalidArgument("IndexSetN: " + j.to_string() + " not in J_n");
  const int m = bits_per_dim();
  std::uint64_t pos = 0;
  for (int i = 0; i < d_; ++i) pos = (pos << m) | static_cast<std::uint64_t>(ordinal(j[i]));
  return pos;
}

MultiIndex IndexSetN::at(std::uint64_t position) const {
  if (position >= size()) throw InvalidArgument("IndexSetN: position out of range");
  const int m = bits_per_dim();
  const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
  std::vector<int> c(static_cast<std::size_t>(d_));
  for (int i = d_ - 1; i >= 0; --i) {
    c[static_cast<std::size_t>(i)] = component_at(static_cast<int>(position & mask));
    position >>= m;
  }
  return MultiIndex(std::move(c));
}

std::vector<MultiIndex> IndexSetN::indices() const {
  std::vector<MultiIndex> out;
  out.reserve(size());
  for (std::uint64_t b = 0; b < size(); ++b) out.push_back(at(b));
  return out;
}

std::vector<int> per_dimension_values(int n, int d) {
  IndexSetN set(n, d);
  std::vector<int> v;
  for (int o = 0; o < 2 * set.half_width(); ++o) v.push_back(set.component_at(o));
  return v;
}

double pnorm(const MultiIndex& j, double p) {
  double s = 0;
  for (int v : j.components())
    if (v != 0) s += std::pow(std::abs(static_cast<double>(v)), p);
  return s;
}

double structure_constant(const MultiIndex& j, const MultiIndex& l, const RkhaParams& params) {
  const double p = params.p();
  return std::exp(-params.tau() * (pnorm(j, p) + pnorm(l, p) - pnorm(j + l, p)) / 2.0);
}

double kappa_n(int n, const RkhaParams& params) {
  // The sum over the product set factorizes per dimension.
  double one_dim = 0;
  for (int v : per_dimension_values(n, params.d()))
    one_dim += std::exp(-params.tau() * std::pow(std::abs(static_cast<double>(v)), params.p()));
  return std::pow(one_dim, params.d());
}

namespace {

// Neumaier compensated accumulator.
struct Accumulator {
  double sum = 0, comp = 0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Integral of exp(-tau u^p) over [M, inf) = (1/p) tau^(-1/p) Gamma(1/p, tau M^p).
double tail_integral(double p, double tau, double m) {
  const double a = 1.0 / p;
  const double x = tau * std::pow(m, p);
  const double q = boost::math::gamma_q(a, x);
  if (q == 0.0) return 0.0;
  return std::exp(std::log(q) + boost::math::lgamma(a) - a * std::log(tau)) / p;
}

}  // namespace

SeriesSum one_sided_series(double p, double tau, double rel_tol, std::uint64_t max_cutoff) {
  if (!(rel_tol > 0)) throw InvalidArgument("one_sided_series: rel_tol must be > 0");
  RkhaParams check(1, p, tau);
  (void)check;

  const double a = tau * p;
  // Remainder constant of the third-order Euler-Maclaurin formula: 2 zeta(3) / (2 pi)^3.
  const double c3 = 2.0 * boost::math::zeta(3.0) / std::pow(2.0 * std::numbers::pi, 3);

  auto f = [&](double u) { return std::exp(-tau * std::pow(u, p)); };

  Accumulator acc;
  std::uint64_t m = 0;
  std::uint64_t target = 64;
  while (true) {
    for (std::uint64_t j = m + 1; j <= target; ++j) acc.add(f(static_cast<double>(j)));
    m = target;
    const double u = static_cast<double>(m);
    const double fm = f(u);
    const double d1 = -a * std::pow(u, p - 1) * fm;
    const double d2 = fm * (a * a * std::pow(u, 2 * p - 2) + a * (1 - p) * std::pow(u, p - 2));
    const double partial = acc.value();
    const double upper = tail_integral(p, tau, u);
    const double lower = tail_integral(p, tau, u + 1);
    // Past the inflection of f''' the remainder is bounded by c3 |f''(M)|.
    const double remainder = c3 * d2;
    if (remainder <= rel_tol * partial) {
      double tail = upper - fm / 2.0 - d1 / 12.0;
      tail = std::clamp(tail, lower, upper);
      return SeriesSum{partial + tail, partial, upper, m};
    }
    if (target >= max_cutoff)
      throw ConvergenceError("one_sided_series: tolerance not reached below max cutoff");
    target = std::min(target * 2, max_cutoff);
  }
}

double kappa_infinite(const RkhaParams& params, double rel_tol) {
  static std::mutex mu;
  static std::map<std::tuple<double, double, double>, double> cache;
  const auto key = std::make_tuple(params.p(), params.tau(), rel_tol);
  double one_dim = 0;
  bool hit = false;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) {
      one_dim = it->second;
      hit = true;
    }
  }
  if (!hit) {
    one_dim = 2.0 * one_sided_series(params.p(), params.tau(), rel_tol).value;
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, one_dim);
  }
  return std::pow(one_dim, params.d());
}

double eta_l(const MultiIndex& l, const RkhaParams& params, double rel_tol) {
  if (l.dim() != params.d()) throw InvalidArgument("eta_l: index dimension mismatch");
  const RkhaParams one(1, params.p(), params.tau());
  const double per_dim = kappa_infinite(one, rel_tol);
  double prod = 1.0;
  for (int v : l.components()) {
    // In each coordinate exactly the value -l_i is removed when l_i != 0.
    if (v == 0)
      prod *= per_dim;
    else
      prod *= per_dim - std::exp(-params.tau() * std::pow(std::abs(static_cast<double>(v)), params.p()));
  }
  return prod;
}

double kernel_n(const std::vector<double>& x, const std::vector<double>& y, int n,
                const RkhaParams& params) {
  const int d = params.d();
  if (static_cast<int>(x.size()) != d || static_cast<int>(y.size()) != d)
    throw InvalidArgument("kernel_n: point dimension mismatch");
  const auto values = per_dimension_values(n, d);
  double prod = 1.0;
  for (int i = 0; i < d; ++i) {
    const double delta = x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)];
    double s = 0;
    for (int v : values)
      s += std::exp(-params.tau() * std::pow(std::abs(static_cast<double>(v)), params.p())) *
           std::cos(v * delta);
    prod *= s;
  }
  return prod;
}

}  // namespace kqc
