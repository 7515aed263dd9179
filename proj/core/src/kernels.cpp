#include "sqfn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sqfn/errors.hpp"
#include "sqfn/field.hpp"
#include "sqfn/quadrature.hpp"

namespace sqfn {

namespace {

void require_dimension(int n) {
  if (n < 2) throw ParameterError("dimension must be at least 2");
}

void require_riesz_range(double alpha, int n) {
  require_dimension(n);
  if (!(alpha > 0.0 && alpha < static_cast<double>(n))) {
    std::ostringstream msg;
    msg << "Riesz kernel needs 0 < alpha < n; got alpha=" << alpha << ", n=" << n;
    throw ParameterError(msg.str());
  }
}

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// int_0^theta sin^m(psi) dpsi via the reduction formula.
double sine_power_integral(int m, double theta) {
  double s0 = theta;
  double s1 = 1.0 - std::cos(theta);
  if (m == 0) return s0;
  if (m == 1) return s1;
  const double sin_t = std::sin(theta), cos_t = std::cos(theta);
  double prev2 = s0, prev1 = s1;
  double cur = s1;
  for (int k = 2; k <= m; ++k) {
    cur = -std::pow(sin_t, k - 1) * cos_t / k + (k - 1.0) / k * prev2;
    prev2 = prev1;
    prev1 = cur;
  }
  return cur;
}

// Fraction of the unit sphere S^{n-1} whose polar angle from a fixed axis
// satisfies cos(angle) > c.
double cap_fraction(int n, double c) {
  c = std::clamp(c, -1.0, 1.0);
  if (n == 2) return std::acos(c) / std::numbers::pi;
  if (n == 3) return 0.5 * (1.0 - c);
  return sine_power_integral(n - 2, std::acos(c)) / sine_power_integral(n - 2, std::numbers::pi);
}

// Derivative at x[0] of the cubic through the first four nodes.
double end_slope(const double* x, const double* y) {
  double slope = 0.0;
  for (int i = 0; i < 4; ++i) {
    // d/dx of the i-th Lagrange basis polynomial at x[0].
    double denom = 1.0;
    for (int j = 0; j < 4; ++j)
      if (j != i) denom *= x[i] - x[j];
    double num = 0.0;
    for (int skip = 0; skip < 4; ++skip) {
      if (skip == i) continue;
      double term = 1.0;
      for (int j = 0; j < 4; ++j)
        if (j != i && j != skip) term *= x[0] - x[j];
      num += term;
    }
    slope += y[i] * num / denom;
  }
  return slope;
}

}  // namespace

KernelSpec KernelSpec::ball(int dimension) {
  require_dimension(dimension);
  return KernelSpec(KernelKind::BallIndicator, dimension, 1);
}

KernelSpec KernelSpec::iterate(int dimension, int j) {
  require_dimension(dimension);
  if (j < 1 || j > 20) throw ParameterError("iterate order must lie in [1, 20]");
  return KernelSpec(KernelKind::Iterate, dimension, j);
}

KernelSpec KernelSpec::binomial(int dimension, int k) {
  require_dimension(dimension);
  if (k < 1 || k > 20) throw ParameterError("binomial order k must lie in [1, 20]");
  return KernelSpec(KernelKind::Binomial, dimension, k);
}

std::vector<double> KernelSpec::iterate_weights() const {
  switch (kind_) {
    case KernelKind::BallIndicator:
      return {1.0};
    case KernelKind::Iterate: {
      std::vector<double> w(static_cast<std::size_t>(order_), 0.0);
      w.back() = 1.0;
      return w;
    }
    case KernelKind::Binomial:
      return binomial_coefficients(order_);
  }
  return {};
}

std::string KernelSpec::name() const {
  switch (kind_) {
    case KernelKind::BallIndicator:
      return "ball";
    case KernelKind::Iterate:
      return "iterate(" + std::to_string(order_) + ")";
    case KernelKind::Binomial:
      return "binomial(" + std::to_string(order_) + ")";
  }
  return "unknown";
}

std::vector<double> binomial_coefficients(int k) {
  if (k < 1 || k > 20) throw ParameterError("binomial order k must lie in [1, 20], got " + std::to_string(k));
  std::vector<std::int64_t> c(static_cast<std::size_t>(k));
  std::int64_t choose = 1;  // C(k, j)
  std::int64_t total = 0;
  for (int j = 1; j <= k; ++j) {
    choose = choose * (k - j + 1) / j;
    c[static_cast<std::size_t>(j - 1)] = (j % 2 == 1) ? choose : -choose;
    total += c[static_cast<std::size_t>(j - 1)];
  }
  if (total != 1) throw Error("binomial coefficients do not sum to one");
  return std::vector<double>(c.begin(), c.end());
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

double tau(double alpha, int n) {
  require_riesz_range(alpha, n);
  return std::tgamma(0.5 * (n - alpha)) /
         (std::pow(std::numbers::pi, 0.5 * n) * std::pow(2.0, alpha) * std::tgamma(0.5 * alpha));
}

double riesz_value(double alpha, int n, std::span<const double> x) {
  if (static_cast<int>(x.size()) != n) throw ParameterError("point dimension mismatch");
  double r = norm(x);
  if (r == 0.0) throw ParameterError("Riesz kernel is singular at the origin");
  return tau(alpha, n) * std::pow(r, alpha - n);
}

double grad_riesz_magnitude(double alpha, int n, std::span<const double> x) {
  if (static_cast<int>(x.size()) != n) throw ParameterError("point dimension mismatch");
  double r = norm(x);
  if (r == 0.0) throw ParameterError("Riesz kernel gradient is singular at the origin");
  return tau(alpha, n) * (n - alpha) * std::pow(r, alpha - n - 1.0);
}

double smoothed_riesz_value(double alpha, int n, double r, double rel_tol) {
  const double t = tau(alpha, n);
  if (!(r >= 0.0) || !std::isfinite(r)) throw ParameterError("radius must be finite and nonnegative");
  if (r == 0.0) return t * n / alpha;

  const double full = r < 1.0 ? std::pow(1.0 - r, alpha) / alpha : 0.0;
  const double a = std::abs(1.0 - r);
  const double b = 1.0 + r;
  auto integrand = [&](double rho) {
    if (rho <= 0.0) return 0.0;
    double c = (rho * rho + r * r - 1.0) / (2.0 * rho * r);
    return std::pow(rho, alpha - 1.0) * cap_fraction(n, c);
  };
  quad::Options opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = rel_tol * full * 1e-3;
  opt.max_cells = 2000;
  auto partial = quad::integrate_cosine_mapped(integrand, a, b, opt);
  const double total = full + partial.value;
  if (!partial.converged) {
    double achieved = partial.error / std::max(std::abs(total), 1e-300);
    std::ostringstream msg;
    msg << "smoothed Riesz quadrature at r=" << r << " reached relative accuracy " << achieved
        << ", requested " << rel_tol;
    throw ConvergenceError(msg.str(), achieved);
  }
  return t * n * total;
}

RadialProfile smoothed_riesz_profile(double alpha, int n, std::span<const double> radii, double rel_tol) {
  require_riesz_range(alpha, n);
  RadialProfile profile;
  profile.alpha = alpha;
  profile.n = n;
  profile.singular_exponent = alpha - n;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw ParameterError("profile radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw ParameterError("profile radii must be strictly increasing");
  }
  profile.radii.assign(radii.begin(), radii.end());
  profile.values.reserve(radii.size());
  for (double r : radii) profile.values.push_back(smoothed_riesz_value(alpha, n, r, rel_tol));
  return profile;
}

void write_profile_csv(const RadialProfile& profile, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FieldIoError(FieldIoError::Kind::Open, "cannot open " + path.string() + " for writing");
  out << "r,G\n";
  for (std::size_t i = 0; i < profile.radii.size(); ++i)
    out << format_real(profile.radii[i]) << ',' << format_real(profile.values[i]) << '\n';
}

SmoothedRieszTable::SmoothedRieszTable(double alpha, int n) : SmoothedRieszTable(alpha, n, Resolution{}) {}

SmoothedRieszTable::SmoothedRieszTable(double alpha, int n, Resolution res)
    : alpha_(alpha), n_(n), tau_(tau(alpha, n)), r_max_(res.r_max) {
  if (res.inner_nodes < 4 || res.shell_nodes < 4 || !(res.log_step > 0.0) || !(res.r_max > 2.5))
    throw ParameterError("invalid tabulation resolution");
  const double p = std::clamp(std::ceil(4.0 / alpha), 2.0, 8.0);
  const double node_tol = 1e-12;

  for (int i = 0; i <= res.inner_nodes; ++i) {
    double s = static_cast<double>(i) / res.inner_nodes;
    double r = (i == res.inner_nodes) ? 1.0 : 1.0 - std::pow(1.0 - s, p);
    inner_.x.push_back(r);
    inner_.y.push_back(smoothed_riesz_value(alpha, n, r, node_tol));
  }
  for (int i = 0; i <= res.shell_nodes; ++i) {
    double s = static_cast<double>(i) / res.shell_nodes;
    double r = (i == res.shell_nodes) ? 2.0 : 1.0 + std::pow(s, p);
    shell_.x.push_back(r);
    shell_.y.push_back(i == 0 ? inner_.y.back() : smoothed_riesz_value(alpha, n, r, node_tol));
  }
  const int outer_count = static_cast<int>(std::ceil(std::log(r_max_ / 2.0) / res.log_step));
  for (int i = 0; i <= outer_count; ++i) {
    double lr = (i == outer_count) ? std::log(r_max_) : std::log(2.0) + i * res.log_step;
    double g = (i == 0) ? shell_.y.back() : smoothed_riesz_value(alpha, n, std::exp(lr), node_tol);
    outer_.x.push_back(lr);
    outer_.y.push_back(std::log(g));
  }
  inner_.fit();
  shell_.fit();
  outer_.fit();
  // Averaging r^p over a unit ball gives r^p (1 + c r^-2 + O(r^-4)); the
  // excess ratio at r_max fixes c.
  far_ratio_ = std::exp(outer_.y.back()) / (tau_ * std::pow(r_max_, alpha - n)) - 1.0;
}

void SmoothedRieszTable::Segment::fit() {
  const std::size_t m = x.size();
  const double left = end_slope(x.data(), y.data());
  std::vector<double> rx(x.rbegin(), x.rbegin() + 4), ry(y.rbegin(), y.rbegin() + 4);
  const double right = end_slope(rx.data(), ry.data());
  // Tridiagonal system for the second derivatives, solved by elimination.
  std::vector<double> diag(m), upper(m), rhs(m);
  auto h = [&](std::size_t i) { return x[i + 1] - x[i]; };
  auto d = [&](std::size_t i) { return (y[i + 1] - y[i]) / h(i); };
  diag[0] = h(0) / 3.0;
  upper[0] = h(0) / 6.0;
  rhs[0] = d(0) - left;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double lower = h(i - 1) / 6.0;
    diag[i] = (h(i - 1) + h(i)) / 3.0;
    upper[i] = h(i) / 6.0;
    rhs[i] = d(i) - d(i - 1);
    const double f = lower / diag[i - 1];
    diag[i] -= f * upper[i - 1];
    rhs[i] -= f * rhs[i - 1];
  }
  {
    const std::size_t i = m - 1;
    const double lower = h(i - 1) / 6.0;
    diag[i] = h(i - 1) / 3.0;
    rhs[i] = right - d(i - 1);
    const double f = lower / diag[i - 1];
    diag[i] -= f * upper[i - 1];
    rhs[i] -= f * rhs[i - 1];
  }
  curvature.assign(m, 0.0);
  curvature[m - 1] = rhs[m - 1] / diag[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) curvature[i] = (rhs[i] - upper[i] * curvature[i + 1]) / diag[i];
}

double SmoothedRieszTable::Segment::eval(double at) const {
  const std::size_t m = x.size();
  auto it = std::upper_bound(x.begin(), x.end(), at);
  std::size_t i = (it == x.begin()) ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
  if (i >= m - 1) i = m - 2;
  const double h = x[i + 1] - x[i];
  const double a = (x[i + 1] - at) / h;
  const double b = (at - x[i]) / h;
  return a * y[i] + b * y[i + 1] +
         ((a * a * a - a) * curvature[i] + (b * b * b - b) * curvature[i + 1]) * h * h / 6.0;
}

double SmoothedRieszTable::operator()(double r) const {
  r = std::abs(r);
  if (r <= 1.0) return inner_.eval(r);
  if (r <= 2.0) return shell_.eval(r);
  if (r <= r_max_) return std::exp(outer_.eval(std::log(r)));
  const double q = r_max_ / r;
  return (1.0 + far_ratio_ * q * q) * tau_ * std::pow(r, alpha_ - n_);
}

RadialProfile SmoothedRieszTable::nodes() const {
  RadialProfile p;
  p.alpha = alpha_;
  p.n = n_;
  p.singular_exponent = alpha_ - n_;
  auto append = [&](double r, double g) {
    if (!p.radii.empty() && !(r > p.radii.back())) return;
    p.radii.push_back(r);
    p.values.push_back(g);
  };
  for (std::size_t i = 0; i < inner_.x.size(); ++i) append(inner_.x[i], inner_.y[i]);
  for (std::size_t i = 0; i < shell_.x.size(); ++i) append(shell_.x[i], shell_.y[i]);
  for (std::size_t i = 0; i < outer_.x.size(); ++i) append(std::exp(outer_.x[i]), std::exp(outer_.y[i]));
  return p;
}

}  // namespace sqfn
