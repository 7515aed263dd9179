#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "sqfn/field.hpp"

namespace sqfn {

using Spectrum = std::vector<std::complex<double>>;

/// Real-to-complex transform of an n-dimensional periodic grid.
///
/// The spectrum uses the half-complex layout: axes 0..n-2 have N entries,
/// the last axis N/2 + 1. Plans are created once per (n, N) with
/// FFTW_ESTIMATE, which keeps results bit-reproducible between runs, and are
/// shared between threads (execution is thread-safe; planning is serialized).
class FftPlan {
 public:
  static std::shared_ptr<const FftPlan> for_grid(const GridSpec& grid);

  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  /// Unnormalized forward transform.
  Spectrum forward(std::span<const double> samples) const;
  /// Inverse transform scaled by 1/N^n, so inverse(forward(x)) == x.
  std::vector<double> inverse(std::span<const std::complex<double>> spectrum) const;
  /// Unnormalized backward transform (sum_k c_k e^{+2 pi i k.j / N}).
  std::vector<double> synthesize(std::span<const std::complex<double>> spectrum) const;

  std::size_t spectrum_size() const noexcept { return spectrum_size_; }
  std::size_t real_size() const noexcept { return real_size_; }

 private:
  FftPlan(int n, int N);
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t spectrum_size_;
  std::size_t real_size_;
};

/// Signed integer frequencies of every entry of a half-complex spectrum.
///
/// `for_each(fn)` calls fn(flat_index, k) with k the signed frequency vector
/// (entries in (-N/2, N/2] for the full axes, [0, N/2] for the last).
class SpectralIndex {
 public:
  explicit SpectralIndex(const GridSpec& grid);

  template <class Fn>
  void for_each(Fn&& fn) const {
    std::vector<int> k(static_cast<std::size_t>(n_), 0);
    std::vector<int> raw(static_cast<std::size_t>(n_), 0);
    for (std::size_t flat = 0; flat < size_; ++flat) {
      for (int a = 0; a < n_; ++a) {
        int v = raw[static_cast<std::size_t>(a)];
        k[static_cast<std::size_t>(a)] = (a < n_ - 1 && v > N_ / 2) ? v - N_ : v;
      }
      fn(flat, std::span<const int>(k));
      for (int a = n_ - 1; a >= 0; --a) {
        int extent = (a == n_ - 1) ? N_ / 2 + 1 : N_;
        if (++raw[static_cast<std::size_t>(a)] < extent) break;
        raw[static_cast<std::size_t>(a)] = 0;
      }
    }
  }

  std::size_t size() const noexcept { return size_; }

 private:
  int n_;
  int N_;
  std::size_t size_;
};

}  // namespace sqfn
