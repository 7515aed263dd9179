#include "sqfn/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

namespace sqfn {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct FftPlan::Impl {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

FftPlan::FftPlan(int n, int N) : impl_(std::make_unique<Impl>()) {
  std::vector<int> dims(static_cast<std::size_t>(n), N);
  real_size_ = 1;
  spectrum_size_ = 1;
  for (int a = 0; a < n; ++a) {
    real_size_ *= static_cast<std::size_t>(N);
    spectrum_size_ *= static_cast<std::size_t>(a == n - 1 ? N / 2 + 1 : N);
  }
  std::lock_guard lock(planner_mutex());
  double* real = fftw_alloc_real(real_size_);
  fftw_complex* cplx = fftw_alloc_complex(spectrum_size_);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  impl_->r2c = fftw_plan_dft_r2c(n, dims.data(), real, cplx, flags);
  impl_->c2r = fftw_plan_dft_c2r(n, dims.data(), cplx, real, flags);
  fftw_free(real);
  fftw_free(cplx);
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(impl_->r2c);
  fftw_destroy_plan(impl_->c2r);
}

std::shared_ptr<const FftPlan> FftPlan::for_grid(const GridSpec& grid) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const FftPlan>> cache;
  std::lock_guard lock(cache_mutex);
  auto key = std::make_pair(grid.dimension(), grid.samples_per_axis());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::shared_ptr<const FftPlan> plan(new FftPlan(key.first, key.second));
  cache.emplace(key, plan);
  return plan;
}

Spectrum FftPlan::forward(std::span<const double> samples) const {
  std::vector<double> in(samples.begin(), samples.end());
  Spectrum out(spectrum_size_);
  fftw_execute_dft_r2c(impl_->r2c, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> FftPlan::synthesize(std::span<const std::complex<double>> spectrum) const {
  Spectrum in(spectrum.begin(), spectrum.end());  // c2r overwrites its input
  std::vector<double> out(real_size_);
  fftw_execute_dft_c2r(impl_->c2r, reinterpret_cast<fftw_complex*>(in.data()), out.data());
  return out;
}

std::vector<double> FftPlan::inverse(std::span<const std::complex<double>> spectrum) const {
  auto out = synthesize(spectrum);
  const double scale = 1.0 / static_cast<double>(real_size_);
  for (double& v : out) v *= scale;
  return out;
}

SpectralIndex::SpectralIndex(const GridSpec& grid)
    : n_(grid.dimension()), N_(grid.samples_per_axis()), size_(1) {
  for (int a = 0; a < n_; ++a) size_ *= static_cast<std::size_t>(a == n_ - 1 ? N_ / 2 + 1 : N_);
}

}  // namespace sqfn
