#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqfn/convolve.hpp"
#include "sqfn/field.hpp"
#include "sqfn/kernels.hpp"

namespace sqfn {

/// Geometric scales t_i = t_min 2^{i/m}, i = 0..count-1, with midpoint
/// weight ln2/m in log t, discretizing the dt/t scale integral.
class ScaleGrid {
 public:
  /// `support_multiple` is the largest kernel order the grid must serve:
  /// the largest scale must satisfy support_multiple * t <= L/2.
  /// Throws ParameterError on an empty grid or violated bounds.
  static ScaleGrid make(const GridSpec& grid, double t_min, double t_max, int per_octave, int support_multiple = 1);

  /// Largest admissible t_max for kernels of the given order: L / (2 k).
  static double max_admissible_scale(const GridSpec& grid, int support_multiple);

  std::span<const double> scales() const noexcept { return scales_; }
  std::size_t size() const noexcept { return scales_.size(); }
  double t_min() const noexcept { return t_min_; }
  double t_max() const noexcept { return t_max_; }
  int per_octave() const noexcept { return per_octave_; }
  int support_multiple() const noexcept { return support_multiple_; }
  double log_weight() const noexcept { return log_weight_; }
  const GridSpec& grid() const noexcept { return grid_; }

 private:
  ScaleGrid(const GridSpec& grid) : grid_(grid) {}
  GridSpec grid_;
  double t_min_ = 0.0;
  double t_max_ = 0.0;
  int per_octave_ = 1;
  int support_multiple_ = 1;
  double log_weight_ = 0.0;
  std::vector<double> scales_;
};

struct SquareFnOptions {
  SymbolMode mode = SymbolMode::Discrete;
  /// Permit alpha outside the theorem range; recorded in the output.
  bool override_range = false;
  int threads = 1;
};

struct SquareFnOutput {
  Field result;
  std::vector<double> scales;
  /// L^1 mass of each scale's integrand field, same order as `scales`.
  std::vector<double> per_scale_mass;
  double log_weight = 0.0;
  double alpha = 0.0;
  KernelSpec kernel;
  SymbolMode mode = SymbolMode::Discrete;
  bool in_theorem_range = true;
  bool range_override_used = false;
};

/// Empty when alpha lies in the characterization range for `kernel`
/// (n/2 < alpha < n, and alpha < 2k for Binomial(k)); otherwise a message
/// quoting the range.
std::string theorem_range_violation(int n, double alpha, const KernelSpec& kernel);

/// Square function of f for the given smoothing kernel:
///   S(f)(x)^2 = sum_i w * v_n t_i^{-2 alpha} A_{t_i}(|f - K_{t_i} f|^2)(x),
/// which is the scale-discretized form of
///   int int_{B(x,t)} |f(z) - K_t f(z)|^2 dz t^{-2 alpha - n} dt / t.
/// The outer ball average is always the ball indicator, whatever `kernel` is.
SquareFnOutput square_function(const Field& f, double alpha, const KernelSpec& kernel, const ScaleGrid& scales,
                               const SquareFnOptions& options = {});

/// U_alpha(f): square_function with the ball indicator.
SquareFnOutput u_alpha(const Field& f, double alpha, const ScaleGrid& scales, const SquareFnOptions& options = {});

/// E~_alpha^(k)(f): square_function with the binomial kernel K^(k).
SquareFnOutput e_tilde(const Field& f, double alpha, int k, const ScaleGrid& scales,
                       const SquareFnOptions& options = {});

/// E~_alpha^(k)(f) computed from the deviation (I - A_t)^k f directly,
/// without forming K^(k). Independent route for the identity
/// I - K^(k)_t * = (I - A_t)^k.
SquareFnOutput e_tilde_direct(const Field& f, double alpha, int k, const ScaleGrid& scales,
                              const SquareFnOptions& options = {});

/// (t, mass) pairs of the per-scale integrand masses.
std::vector<std::pair<double, double>> per_scale_profile(const SquareFnOutput& out);

/// "t,mass" rows.
void write_scale_profile_csv(const SquareFnOutput& out, const std::filesystem::path& path);

}  // namespace sqfn
