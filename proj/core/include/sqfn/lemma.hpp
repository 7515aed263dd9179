#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqfn/kernels.hpp"

namespace sqfn {

/// Shared state for one (alpha, n): the tabulated smoothed Riesz profile
/// G = L_alpha * Phi. Immutable; safe to share between threads.
class LemmaContext {
 public:
  LemmaContext(double alpha, int n);
  LemmaContext(double alpha, int n, SmoothedRieszTable::Resolution resolution);

  double alpha() const noexcept { return alpha_; }
  int dimension() const noexcept { return n_; }
  const SmoothedRieszTable& profile() const noexcept { return table_; }

 private:
  double alpha_;
  int n_;
  SmoothedRieszTable table_;
};

struct FValue {
  double value = 0.0;
  /// Estimated relative error of `value`.
  double achieved_tol = 0.0;
  /// The region {z in B_0 : 2|v| < |u - z| < 6} is empty; value is 0.
  bool empty_region = false;
};

/// F(u, v) = int_{z in B_0, 2|v| < |u - z| < 6} |G(u - v - z) - G(u - z)|^2 dz,
/// so that the two-point integral i11(x, y, t) = t^{-2n} F(x/t, y/t).
///
/// Integrated in polar coordinates about u (z = u - rho e), which makes every
/// region boundary a coordinate bound. Angular segments end at tangency
/// directions and at the directions where the chord of B_0 meets
/// rho = 2|v| or rho = 6; radial segments end where either argument of G
/// crosses the unit sphere, where G is only C^1. Supported for n = 2, 3.
/// Requires v != 0 and tol in [1e-10, 1e-4]; throws ConvergenceError when the
/// tolerance cannot be met.
FValue f_dimensionless(const LemmaContext& ctx, std::span<const double> u, std::span<const double> v, double tol);

/// Two-point integral at physical (x, y, t), via t^{-2n} F(x/t, y/t); t > 0, y != 0.
double i11(const LemmaContext& ctx, std::span<const double> x, std::span<const double> y, double t, double tol);

/// |u| < 7 and 0 < |v| < |u|/2: the dimensionless form of t > |x|/7 > 2|y|/7.
bool admissible(std::span<const double> u, std::span<const double> v);

struct SampleSpec {
  /// Random base points u with |u| in [u_min, u_max].
  int bases = 20;
  /// Rungs j = 1..ladder with |v| = |u| 2^{-j} / 2 along a random direction.
  int ladder = 8;
  std::uint64_t seed = 1;
  double u_min = 0.05;
  double u_max = 6.95;
  /// Extra (u, v) pairs; inadmissible ones are skipped with a label.
  std::vector<std::pair<std::vector<double>, std::vector<double>>> custom;
};

struct ScanSample {
  std::vector<double> u;
  std::vector<double> v;
  int base = -1;  ///< -1 for custom samples
  int rung = 0;
  /// "ok", "skipped: ..." or "failed: ...".
  std::string status = "ok";
  double F = 0.0;
  double ratio = 0.0;  ///< F / |v|^2
  double achieved_tol = 0.0;
  bool empty_region = false;
};

struct LadderSlope {
  int base = 0;
  /// |v| of each rung, decreasing.
  std::vector<double> radii;
  /// slopes[j] = log(F_j / F_{j+1}) / log(|v_j| / |v_{j+1}|).
  std::vector<double> slopes;
  /// Minimum over the last three slopes (the smallest |v|).
  double tail_min_slope = 0.0;
};

struct BoundScanReport {
  double alpha = 0.0;
  int n = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  std::vector<ScanSample> samples;
  std::vector<LadderSlope> ladders;
  double sup_ratio = 0.0;
  double min_tail_slope = 0.0;
  double max_achieved_tol = 0.0;
  int evaluated = 0;
  int skipped = 0;
  int failed = 0;
};

/// Evaluates F over the sample design and summarizes F / |v|^2 and the
/// small-|v| log-log slopes. Per-sample failures are recorded and the scan
/// continues.
BoundScanReport bound_scan(const LemmaContext& ctx, const SampleSpec& spec, double tol, int threads = 1);

struct GradIntegralCheck {
  double alpha = 0.0;
  int n = 0;
  double radius = 0.0;
  /// Sum over dyadic shells C 2^{-j-1} < |w| < C 2^{-j} of product-Gauss
  /// integrals of |grad L_alpha|, closed with the geometric tail.
  double quadrature = 0.0;
  /// Polar antiderivative of the exact gradient magnitude:
  /// sigma_{n-1} tau(alpha) (n - alpha) C^{alpha-1} / (alpha - 1), alpha > 1.
  double closed_form = 0.0;
  double relative_error = 0.0;
  /// sigma_{n-1} tau(alpha) (n - alpha) C^alpha / alpha, i.e. (n - alpha)
  /// times the integral of L_alpha itself over |w| <= C. Kept for comparison;
  /// it is not the integral of |grad L_alpha|.
  double potential_form = 0.0;
  double potential_form_relative_error = 0.0;
  /// Observed ratio of successive shell contributions (2^{1-alpha} exactly).
  double shell_ratio = 0.0;
  int shells = 0;
  /// n/2 < alpha and n/2 >= 1, the range used by the finiteness argument.
  bool in_theorem_range = false;
};

/// int_{|w| <= C} |grad L_alpha|(w) dw by quadrature and in closed form;
/// 0 < alpha < n, 2 <= n <= 5. The integrand behaves like |w|^{alpha-n-1}, so
/// the integral is finite only for alpha > 1; otherwise ConvergenceError.
GradIntegralCheck grad_integral_check(double alpha, int n, double radius);

std::string to_json(const BoundScanReport& report, std::span<const GradIntegralCheck> grad_checks = {});
/// "ux,uy,vx,vy,F,ratio" (n = 2; further coordinates appended for n = 3).
void write_scan_csv(const BoundScanReport& report, const std::filesystem::path& path);

}  // namespace sqfn
