#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "sqfn/fft.hpp"
#include "sqfn/field.hpp"
#include "sqfn/kernels.hpp"

namespace sqfn {

/// How the Fourier symbol of the radius-t ball average is obtained.
enum class SymbolMode {
  /// Transform of the sampled indicator (cells whose center lies in the
  /// closed ball), renormalized to unit mass. Constants are fixed exactly.
  Discrete,
  /// Continuum symbol Gamma(n/2+1) (2/z)^{n/2} J_{n/2}(z), z = 2 pi t |xi|.
  Analytic,
};

const char* to_string(SymbolMode mode);

/// Fourier symbol of the ball average A_t on one grid, one real value per
/// half-complex frequency.
class BallSymbolTable {
 public:
  BallSymbolTable(const GridSpec& grid, double t, SymbolMode mode);

  /// Shared, immutable table for (grid, t, mode); built on first use.
  static std::shared_ptr<const BallSymbolTable> cached(const GridSpec& grid, double t, SymbolMode mode);

  const GridSpec& grid() const noexcept { return grid_; }
  double scale() const noexcept { return t_; }
  SymbolMode mode() const noexcept { return mode_; }
  std::span<const double> values() const noexcept { return values_; }
  /// Number of grid points in the sampled ball (Discrete mode only, else 0).
  std::size_t ball_count() const noexcept { return count_; }

 private:
  GridSpec grid_;
  double t_;
  SymbolMode mode_;
  std::size_t count_ = 0;
  std::vector<double> values_;
};

/// Continuum ball-average symbol at |xi| = freq (cycles per unit length).
double analytic_ball_symbol(int n, double t, double freq);

/// Throws ParameterError unless 2h <= t <= L/2.
void require_ball_scale(const GridSpec& grid, double t);

/// A_t f: average of f over the ball of radius t around each sample.
Field ball_average(const Field& f, double t, SymbolMode mode = SymbolMode::Discrete);

/// K^(k)_t * f = sum_j c_j (A_t)^j f with c_j = binomial_coefficients(k).
/// Requires k t <= L/2 so the smoothed support does not wrap.
Field binomial_smooth(const Field& f, double t, int k, SymbolMode mode = SymbolMode::Discrete);

/// Smoothing by any KernelSpec at scale t.
Field kernel_smooth(const Field& f, double t, const KernelSpec& kernel, SymbolMode mode = SymbolMode::Discrete);

/// (-Delta)^{alpha/2} f: multiplier |2 pi xi|^alpha on nonzero frequencies,
/// zero at DC. f must be mean-zero and 0 < alpha < n.
Field fractional_laplacian(const Field& f, double alpha);

namespace spectral {

/// sum_j w_j symbol^j * fhat, j = 1..weights.size(). The first term is
/// formed by multiplication, not by adding to zero, so weights {1} give
/// exactly symbol * fhat.
Spectrum apply_iterate_weights(std::span<const std::complex<double>> fhat, std::span<const double> symbol,
                               std::span<const double> weights);

Spectrum multiply(std::span<const std::complex<double>> fhat, std::span<const double> symbol);

}  // namespace spectral

}  // namespace sqfn
