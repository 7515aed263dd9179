#include "sqfn/convolve.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "sqfn/errors.hpp"

namespace sqfn {

namespace {

constexpr double kScaleSlack = 1e-12;

void require_support(const GridSpec& grid, double t, int multiple) {
  if (multiple * t > 0.5 * grid.period() * (1.0 + kScaleSlack)) {
    std::ostringstream msg;
    msg << "support violation: " << multiple << " * t = " << multiple * t << " exceeds L/2 = " << 0.5 * grid.period()
        << " and would wrap the torus";
    throw ParameterError(msg.str());
  }
}

}  // namespace

const char* to_string(SymbolMode mode) { return mode == SymbolMode::Discrete ? "discrete" : "analytic"; }

double analytic_ball_symbol(int n, double t, double freq) {
  const double z = 2.0 * std::numbers::pi * t * std::abs(freq);
  if (z < 1e-8) return 1.0 - z * z / (2.0 * (n + 2));
  const double nu = 0.5 * n;
  return std::tgamma(nu + 1.0) * std::pow(2.0 / z, nu) * std::cyl_bessel_j(nu, z);
}

void require_ball_scale(const GridSpec& grid, double t) {
  const double lo = 2.0 * grid.spacing();
  const double hi = 0.5 * grid.period();
  if (!(t >= lo * (1.0 - kScaleSlack) && t <= hi * (1.0 + kScaleSlack))) {
    std::ostringstream msg;
    msg << "ball radius t=" << t << " outside [2h, L/2] = [" << lo << ", " << hi << "]";
    throw ParameterError(msg.str());
  }
}

BallSymbolTable::BallSymbolTable(const GridSpec& grid, double t, SymbolMode mode)
    : grid_(grid), t_(t), mode_(mode) {
  require_ball_scale(grid, t);
  const int n = grid.dimension();
  const int N = grid.samples_per_axis();
  const double h = grid.spacing();
  auto plan = FftPlan::for_grid(grid);

  if (mode == SymbolMode::Discrete) {
    std::vector<double> indicator(grid.size(), 0.0);
    const double limit = t * t * (1.0 + kScaleSlack);
    for (std::size_t i = 0; i < indicator.size(); ++i) {
      auto idx = grid.unravel(i);
      double r2 = 0.0;
      for (int c : idx) {
        double d = (c <= N / 2 ? c : c - N) * h;
        r2 += d * d;
      }
      if (r2 <= limit) {
        indicator[i] = 1.0;
        ++count_;
      }
    }
    auto spectrum = plan->forward(indicator);
    const double mass = spectrum[0].real();
    values_.resize(spectrum.size());
    for (std::size_t i = 0; i < spectrum.size(); ++i) values_[i] = spectrum[i].real() / mass;
    values_[0] = 1.0;
  } else {
    values_.resize(plan->spectrum_size());
    const double L = grid.period();
    SpectralIndex(grid).for_each([&](std::size_t flat, std::span<const int> k) {
      double k2 = 0.0;
      for (int v : k) k2 += static_cast<double>(v) * v;
      values_[flat] = analytic_ball_symbol(n, t, std::sqrt(k2) / L);
    });
  }
}

std::shared_ptr<const BallSymbolTable> BallSymbolTable::cached(const GridSpec& grid, double t, SymbolMode mode) {
  using Key = std::tuple<int, int, std::uint64_t, std::uint64_t, int>;
  static std::mutex m;
  static std::map<Key, std::shared_ptr<const BallSymbolTable>> cache;
  Key key{grid.dimension(), grid.samples_per_axis(), std::bit_cast<std::uint64_t>(grid.period()),
          std::bit_cast<std::uint64_t>(t), static_cast<int>(mode)};
  {
    std::lock_guard lock(m);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto table = std::make_shared<const BallSymbolTable>(grid, t, mode);
  std::lock_guard lock(m);
  if (cache.size() >= 512) cache.clear();
  return cache.emplace(key, table).first->second;
}

namespace spectral {

Spectrum apply_iterate_weights(std::span<const std::complex<double>> fhat, std::span<const double> symbol,
                               std::span<const double> weights) {
  if (weights.empty()) throw ParameterError("empty kernel weights");
  Spectrum power(fhat.begin(), fhat.end());
  Spectrum acc(fhat.size());
  for (std::size_t i = 0; i < fhat.size(); ++i) {
    power[i] *= symbol[i];
    acc[i] = weights[0] * power[i];
  }
  for (std::size_t j = 1; j < weights.size(); ++j) {
    const double w = weights[j];
    for (std::size_t i = 0; i < fhat.size(); ++i) {
      power[i] *= symbol[i];
      if (w != 0.0) acc[i] += w * power[i];
    }
  }
  return acc;
}

Spectrum multiply(std::span<const std::complex<double>> fhat, std::span<const double> symbol) {
  Spectrum out(fhat.begin(), fhat.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= symbol[i];
  return out;
}

}  // namespace spectral

Field kernel_smooth(const Field& f, double t, const KernelSpec& kernel, SymbolMode mode) {
  if (kernel.dimension() != f.grid().dimension()) throw ParameterError("kernel and field dimensions differ");
  require_ball_scale(f.grid(), t);
  require_support(f.grid(), t, kernel.order());
  auto plan = FftPlan::for_grid(f.grid());
  auto table = BallSymbolTable::cached(f.grid(), t, mode);
  auto weights = kernel.iterate_weights();
  auto fhat = plan->forward(f.values());
  return Field(f.grid(), plan->inverse(spectral::apply_iterate_weights(fhat, table->values(), weights)));
}

Field ball_average(const Field& f, double t, SymbolMode mode) {
  return kernel_smooth(f, t, KernelSpec::ball(f.grid().dimension()), mode);
}

Field binomial_smooth(const Field& f, double t, int k, SymbolMode mode) {
  return kernel_smooth(f, t, KernelSpec::binomial(f.grid().dimension(), k), mode);
}

Field fractional_laplacian(const Field& f, double alpha) {
  const auto& grid = f.grid();
  const int n = grid.dimension();
  if (!(alpha > 0.0 && alpha < n)) {
    std::ostringstream msg;
    msg << "fractional Laplacian order must satisfy 0 < alpha < n; got alpha=" << alpha << ", n=" << n;
    throw ParameterError(msg.str());
  }
  if (!f.mean_zero()) throw ParameterError("fractional Laplacian requires a mean-zero field");
  auto plan = FftPlan::for_grid(grid);
  auto spectrum = plan->forward(f.values());
  const double base = 2.0 * std::numbers::pi / grid.period();
  SpectralIndex(grid).for_each([&](std::size_t flat, std::span<const int> k) {
    double k2 = 0.0;
    for (int v : k) k2 += static_cast<double>(v) * v;
    spectrum[flat] *= (k2 == 0.0) ? 0.0 : std::pow(base * std::sqrt(k2), alpha);
  });
  return Field(grid, plan->inverse(spectrum));
}

}  // namespace sqfn
