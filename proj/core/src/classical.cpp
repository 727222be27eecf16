#include "kqc/classical.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "kqc/error.hpp"

namespace kqc {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double reduce_angle(double theta) {
  if (!std::isfinite(theta)) throw InvalidArgument("angle must be finite");
  double r = std::fmod(theta, kTwoPi);
  if (r < 0) r += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

TorusPoint::TorusPoint(std::vector<double> angles) : angles_(std::move(angles)) {
  if (angles_.empty()) throw InvalidArgument("TorusPoint: empty");
  for (double& a : angles_) a = reduce_angle(a);
}

Frequencies::Frequencies(std::vector<double> alphas) : alphas_(std::move(alphas)) {
  if (alphas_.empty()) throw InvalidArgument("Frequencies: empty");
  for (double a : alphas_)
    if (!(a > 0) || !std::isfinite(a)) throw InvalidArgument("Frequencies: all must be positive");
}

Observable::Observable(int d) : d_(d) {
  if (d < 1) throw InvalidArgument("Observable: d must be >= 1");
}

void Observable::set(const MultiIndex& j, complex value) {
  if (j.dim() != d_) throw InvalidArgument("Observable: index dimension mismatch");
  if (value == complex{})
    coeffs_.erase(j);
  else
    coeffs_[j] = value;
}

complex Observable::coeff(const MultiIndex& j) const {
  auto it = coeffs_.find(j);
  return it == coeffs_.end() ? complex{} : it->second;
}

complex Observable::rkha_coeff(const MultiIndex& j, const RkhaParams& params) const {
  return std::exp(params.tau() * pnorm(j, params.p()) / 2.0) * coeff(j);
}

bool Observable::is_self_adjoint(double tol) const {
  for (const auto& [j, c] : coeffs_)
    if (std::abs(coeff(-j) - std::conj(c)) > tol) return false;
  return true;
}

Observable Observable::operator+(const Observable& o) const {
  if (o.d_ != d_) throw InvalidArgument("Observable: dimension mismatch");
  Observable r = *this;
  for (const auto& [j, c] : o.coeffs_) r.set(j, r.coeff(j) + c);
  return r;
}

Observable Observable::operator*(complex s) const {
  Observable r(d_);
  for (const auto& [j, c] : coeffs_) r.set(j, s * c);
  return r;
}

Observable Observable::constant(int d, complex c) {
  Observable f(d);
  f.set(MultiIndex::zero(d), c);
  return f;
}

Observable Observable::preset(const std::string& name) {
  const complex half_i_inv = 1.0 / complex(0, 2);  // 1/(2i)
  if (name == "sin") {
    Observable f(1);
    f.set({1}, half_i_inv);
    f.set({-1}, -half_i_inv);
    return f;
  }
  if (name == "cos") {
    Observable f(1);
    f.set({1}, 0.5);
    f.set({-1}, 0.5);
    return f;
  }
  if (name == "sin1cos2") {
    // sin(a) cos(b) = (e^{ia} - e^{-ia})/(2i) * (e^{ib} + e^{-ib})/2
    Observable f(2);
    for (int s2 : {-1, 1}) {
      f.set({1, s2}, half_i_inv / 2.0);
      f.set({-1, s2}, -half_i_inv / 2.0);
    }
    return f;
  }
  throw InvalidArgument("unknown observable preset '" + name + "'");
}

std::vector<std::string> Observable::preset_names() { return {"sin", "cos", "sin1cos2"}; }

nlohmann::json observable_to_json(const Observable& f) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [j, c] : f.coeffs())
    arr.push_back({{"index", j.components()}, {"re", c.real()}, {"im", c.imag()}});
  return arr;
}

Observable observable_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("observable JSON must be a non-empty list");
  const int d = static_cast<int>(j.at(0).at("index").size());
  Observable f(d);
  for (const auto& e : j) {
    auto idx = e.at("index").get<std::vector<int>>();
    if (static_cast<int>(idx.size()) != d) throw InvalidArgument("observable JSON: mixed index dimensions");
    const double re = e.value("re", 0.0);
    const double im = e.value("im", 0.0);
    MultiIndex mi(std::move(idx));
    f.set(mi, f.coeff(mi) + complex(re, im));
  }
  return f;
}

TorusPoint flow(const TorusPoint& x, double t, const Frequencies& freqs) {
  if (x.dim() != freqs.dim()) throw InvalidArgument("flow: dimension mismatch");
  std::vector<double> a(x.angles());
  for (int i = 0; i < x.dim(); ++i) a[static_cast<std::size_t>(i)] += freqs[i] * t;
  return TorusPoint(std::move(a));
}

complex evaluate(const Observable& f, const std::vector<double>& angles) {
  if (static_cast<int>(angles.size()) != f.dim()) throw InvalidArgument("evaluate: dimension mismatch");
  complex s{};
  for (const auto& [j, c] : f.coeffs()) {
    double phase = 0;
    for (int i = 0; i < f.dim(); ++i) phase += j[i] * angles[static_cast<std::size_t>(i)];
    s += c * std::polar(1.0, phase);
  }
  return s;
}

complex evaluate(const Observable& f, const TorusPoint& x) { return evaluate(f, x.angles()); }

complex koopman_evolve(const Observable& f, const TorusPoint& x, double t, const Frequencies& freqs) {
  return evaluate(f, flow(x, t, freqs));
}

complex koopman_evolve_spectral(const Observable& f, const TorusPoint& x, double t,
                                const Frequencies& freqs) {
  if (x.dim() != f.dim()) throw InvalidArgument("koopman_evolve: dimension mismatch");
  complex s{};
  for (const auto& [j, c] : f.coeffs()) {
    double phase = eigenfrequency(j, freqs) * t;
    for (int i = 0; i < f.dim(); ++i) phase += j[i] * x[i];
    s += c * std::polar(1.0, phase);
  }
  return s;
}

double eigenfrequency(const MultiIndex& j, const Frequencies& freqs) {
  if (j.dim() != freqs.dim()) throw InvalidArgument("eigenfrequency: dimension mismatch");
  double w = 0;
  for (int i = 0; i < j.dim(); ++i) w += j[i] * freqs[i];
  return w;
}

}  // namespace kqc
