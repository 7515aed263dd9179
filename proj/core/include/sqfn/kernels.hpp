#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace sqfn {

/// Unit-mass, compactly supported smoothing kernels built from the normalized
/// indicator of the unit ball.
enum class KernelKind {
  BallIndicator,  ///< |B(0,1)|^{-1} chi_{B(0,1)}
  Iterate,        ///< j-fold self-convolution of the ball indicator
  Binomial,       ///< -sum_{j=1..k} (-1)^j C(k,j) Phi^(j)
};

class KernelSpec {
 public:
  static KernelSpec ball(int dimension);
  static KernelSpec iterate(int dimension, int j);
  static KernelSpec binomial(int dimension, int k);

  KernelKind kind() const noexcept { return kind_; }
  /// j for Iterate, k for Binomial, 1 for BallIndicator.
  int order() const noexcept { return order_; }
  int dimension() const noexcept { return n_; }

  /// 1, j or k: the support radius of the unscaled kernel.
  double support_radius() const noexcept { return static_cast<double>(order_); }

  /// Weights of Phi^(1), ..., Phi^(m) in the kernel. They sum to one.
  std::vector<double> iterate_weights() const;

  std::string name() const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  KernelSpec(KernelKind kind, int n, int order) : kind_(kind), n_(n), order_(order) {}
  KernelKind kind_;
  int n_;
  int order_;
};

/// c_j = -(-1)^j C(k, j), j = 1..k; 1 <= k <= 20. Computed in integers.
std::vector<double> binomial_coefficients(int k);

/// Volume of the unit n-ball.
double unit_ball_volume(int n);
/// Surface area sigma_{n-1} of the unit sphere in R^n.
double unit_sphere_area(int n);

/// Normalizing constant of the Riesz kernel,
/// Gamma(n/2 - alpha/2) / (pi^{n/2} 2^alpha Gamma(alpha/2)); 0 < alpha < n.
double tau(double alpha, int n);

/// L_alpha(x) = tau(alpha) |x|^{alpha - n}; x != 0.
double riesz_value(double alpha, int n, std::span<const double> x);

/// |grad L_alpha|(x) = tau(alpha) (n - alpha) |x|^{alpha - n - 1}.
double grad_riesz_magnitude(double alpha, int n, std::span<const double> x);

/// G(r) = (L_alpha * Phi)(r e) for the normalized unit-ball indicator Phi.
///
/// Computed from G(r) = tau n [ (1-r)_+^alpha / alpha
///                              + int_{|1-r|}^{1+r} rho^{alpha-1} frac(rho, r) drho ],
/// where frac is the fraction of the sphere of radius rho inside B(r e, 1).
/// The singular factor is integrated in polar form around the singular point;
/// r = 0 is allowed. Throws ConvergenceError if the adaptive rule stalls.
double smoothed_riesz_value(double alpha, int n, double r, double rel_tol = 1e-11);

/// Samples of G on caller-chosen radii.
struct RadialProfile {
  double alpha = 0.0;
  int n = 0;
  std::vector<double> radii;
  std::vector<double> values;
  /// alpha - n: the exponent of the unsmoothed kernel at the origin.
  double singular_exponent = 0.0;
};

/// radii must be positive and strictly increasing.
RadialProfile smoothed_riesz_profile(double alpha, int n, std::span<const double> radii, double rel_tol = 1e-8);

/// "r,G(r)" rows.
void write_profile_csv(const RadialProfile& profile, const std::filesystem::path& path);

/// Tabulated G with piecewise cubic interpolation.
///
/// G is smooth on [0, 1) and (1, inf) but only C^1 across r = 1 for
/// alpha in (1, 2), so r = 1 is a node and no stencil straddles it. The
/// segments [0, 1] and [1, 2] use nodes graded toward r = 1 with power
/// p = max(2, ceil(4 / alpha)); [2, r_max] uses a logarithmic grid with
/// interpolation of log G against log r. Beyond r_max, G / L_alpha - 1 decays
/// like r^-2 from its value at r_max.
class SmoothedRieszTable {
 public:
  struct Resolution {
    int inner_nodes = 400;
    int shell_nodes = 400;
    double log_step = 0.01;
    double r_max = 64.0;
  };

  SmoothedRieszTable(double alpha, int n);
  SmoothedRieszTable(double alpha, int n, Resolution resolution);

  double operator()(double r) const;

  double alpha() const noexcept { return alpha_; }
  int dimension() const noexcept { return n_; }
  /// All tabulation nodes, in increasing order.
  RadialProfile nodes() const;

 private:
  // Clamped cubic spline; C^2 inside a segment so differences of G stay
  // smooth for the quadratures built on top of it.
  struct Segment {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> curvature;
    void fit();
    double eval(double at) const;
  };

  double alpha_;
  int n_;
  double tau_;
  double r_max_;
  double far_ratio_;
  Segment inner_;
  Segment shell_;
  Segment outer_;  // in (log r, log G)
};

}  // namespace sqfn
