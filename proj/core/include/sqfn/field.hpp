#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sqfn {

/// Geometry of a periodic sampling grid on the torus [0, L)^n.
///
/// Samples sit at x = i * h for integer multi-indices i in [0, N)^n, stored
/// row-major (last axis fastest).
class GridSpec {
 public:
  /// Throws ParameterError unless n >= 2, N >= 8 is a power of two and L > 0.
  GridSpec(int dimension, int samples_per_axis, double period);

  int dimension() const noexcept { return n_; }
  int samples_per_axis() const noexcept { return N_; }
  double period() const noexcept { return L_; }
  double spacing() const noexcept { return h_; }

  /// N^n.
  std::size_t size() const noexcept { return size_; }
  /// h^n, the quadrature weight of one sample.
  double cell_volume() const noexcept { return cell_volume_; }

  /// Multi-index of a flat sample index.
  std::vector<int> unravel(std::size_t index) const;
  std::size_t ravel(std::span<const int> multi_index) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int n_;
  int N_;
  double L_;
  double h_;
  std::size_t size_;
  double cell_volume_;
};

/// Real samples of a periodic function on a GridSpec. Immutable.
class Field {
 public:
  /// Throws ParameterError if the sample count is not N^n or a value is not
  /// finite.
  Field(GridSpec grid, std::vector<double> values);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  /// |mean| <= 1e-12 * max|values|.
  bool mean_zero() const noexcept { return mean_zero_; }
  double mean() const noexcept { return mean_; }
  double max_abs() const noexcept { return max_abs_; }

 private:
  GridSpec grid_;
  std::vector<double> values_;
  double mean_ = 0.0;
  double max_abs_ = 0.0;
  bool mean_zero_ = false;
};

using Sampler = std::function<double(std::span<const double>)>;

/// Evaluates `sampler` at every grid point (physical coordinates).
Field make_field(const GridSpec& grid, const Sampler& sampler);

/// Deterministic pairwise summation.
double pairwise_sum(std::span<const double> values);

/// Riemann-sum L^p norm, p in {1, 2}.
double lp_norm(const Field& f, double p);

/// Discrete inner product sum f*g*h^n.
double inner_product(const Field& f, const Field& g);

/// Circular shift: out[(i + s) mod N] = f[i]. Components must lie in [0, N];
/// N is reduced to 0.
Field translate(const Field& f, std::span<const int> shift);

/// Pointwise a*f + b*g on a shared grid.
Field linear_combination(double a, const Field& f, double b, const Field& g);
Field scale(const Field& f, double c);

/// The field x -> f(2x) on the grid with 2N samples per axis. The samples are
/// tiled from f, so no resampling error enters.
Field dilate_by_two(const Field& f);

/// Binary format: "SQFN1\0", u32 n, u32 N, f64 L, N^n f64 samples, all
/// little-endian.
void write_field(const Field& f, const std::filesystem::path& path);
Field read_field(const std::filesystem::path& path);

/// 17-significant-digit decimal rendering used by every CSV writer.
std::string format_real(double value);

/// One "x1,...,xn,value" row per sample, coordinates in physical units.
void write_field_csv(const Field& f, const std::filesystem::path& path);

}  // namespace sqfn
