#include "sqfn/squarefn.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "sqfn/errors.hpp"
#include "sqfn/fft.hpp"
#include "sqfn/parallel.hpp"

namespace sqfn {

namespace {

constexpr double kSlack = 1e-12;
constexpr double kRoundingFloor = 1e-13;

// Deviation field d_t for one scale, given the spectrum of f and the ball
// symbol at that scale.
using DeviationFn = std::function<std::vector<double>(const Field&, std::span<const std::complex<double>>,
                                                      const BallSymbolTable&, const FftPlan&)>;

SquareFnOutput run_pipeline(const Field& f, double alpha, const KernelSpec& kernel, const ScaleGrid& scales,
                            const SquareFnOptions& options, const DeviationFn& deviation) {
  const auto& grid = f.grid();
  const int n = grid.dimension();
  if (!(scales.grid() == grid)) throw ParameterError("scale grid was built for a different sampling grid");
  if (kernel.dimension() != n) throw ParameterError("kernel dimension differs from field dimension");
  if (kernel.order() > scales.support_multiple()) {
    std::ostringstream msg;
    msg << "scale grid admits kernels of order <= " << scales.support_multiple() << " but kernel "
        << kernel.name() << " needs " << kernel.order() << " * t_max <= L/2";
    throw ParameterError(msg.str());
  }
  auto violation = theorem_range_violation(n, alpha, kernel);
  if (!violation.empty() && !options.override_range) throw RangeError(violation);

  auto plan = FftPlan::for_grid(grid);
  const auto fhat = plan->forward(f.values());
  const double vn = unit_ball_volume(n);
  const double w = scales.log_weight();
  const auto ts = scales.scales();
  const std::size_t count = ts.size();

  std::vector<double> sum(grid.size(), 0.0);
  std::vector<double> masses(count, 0.0);
  const auto batch = static_cast<std::size_t>(std::max(1, options.threads));
  std::vector<std::vector<double>> integrands(batch);

  for (std::size_t start = 0; start < count; start += batch) {
    const std::size_t stop = std::min(count, start + batch);
    parallel_for(stop - start, options.threads, [&](std::size_t j) {
      const double t = ts[start + j];
      auto table = BallSymbolTable::cached(grid, t, options.mode);
      auto d = deviation(f, fhat, *table, *plan);
      double peak = 0.0;
      for (double& v : d) {
        v *= v;
        peak = std::max(peak, v);
      }
      auto avg = plan->inverse(spectral::multiply(plan->forward(d), table->values()));
      // Values this far below the peak are FFT rounding; the square root
      // would otherwise lift them to ~1e-8 and break shift equivariance.
      const double floor = kRoundingFloor * peak;
      const double factor = vn * std::pow(t, -2.0 * alpha);
      for (double& v : avg) v = v > floor ? factor * v : 0.0;
      masses[start + j] = pairwise_sum(avg) * grid.cell_volume();
      integrands[j] = std::move(avg);
    });
    // Ordered reduction in ascending t keeps results independent of threads.
    for (std::size_t j = 0; j < stop - start; ++j) {
      const auto& I = integrands[j];
      for (std::size_t x = 0; x < sum.size(); ++x) sum[x] += w * I[x];
    }
  }
  for (double& v : sum) v = std::sqrt(v);

  return SquareFnOutput{Field(grid, std::move(sum)),
                        std::vector<double>(ts.begin(), ts.end()),
                        std::move(masses),
                        w,
                        alpha,
                        kernel,
                        options.mode,
                        violation.empty(),
                        !violation.empty()};
}

}  // namespace

ScaleGrid ScaleGrid::make(const GridSpec& grid, double t_min, double t_max, int per_octave, int support_multiple) {
  if (per_octave < 1) throw ParameterError("scales per octave must be at least 1");
  if (support_multiple < 1) throw ParameterError("support multiple must be at least 1");
  if (!(t_min > 0.0) || !(t_max > 0.0)) throw ParameterError("scale bounds must be positive");
  if (t_min > t_max) throw ParameterError("empty scale grid: t_min > t_max");
  const double lo = 2.0 * grid.spacing();
  const double hi = max_admissible_scale(grid, support_multiple);
  if (t_min < lo * (1.0 - kSlack)) {
    std::ostringstream msg;
    msg << "t_min=" << t_min << " below 2h=" << lo;
    throw ParameterError(msg.str());
  }
  if (t_max > hi * (1.0 + kSlack)) {
    std::ostringstream msg;
    msg << "t_max=" << t_max << " exceeds L/(2k)=" << hi << " for kernel order " << support_multiple;
    throw ParameterError(msg.str());
  }
  ScaleGrid g(grid);
  g.t_min_ = t_min;
  g.t_max_ = t_max;
  g.per_octave_ = per_octave;
  g.support_multiple_ = support_multiple;
  g.log_weight_ = std::numbers::ln2 / per_octave;
  const auto count = static_cast<std::size_t>(std::floor(per_octave * std::log2(t_max / t_min) + 1e-9)) + 1;
  g.scales_.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    g.scales_.push_back(t_min * std::exp2(static_cast<double>(i) / per_octave));
  return g;
}

double ScaleGrid::max_admissible_scale(const GridSpec& grid, int support_multiple) {
  return grid.period() / (2.0 * support_multiple);
}

std::string theorem_range_violation(int n, double alpha, const KernelSpec& kernel) {
  const double half = 0.5 * n;
  std::ostringstream msg;
  if (kernel.kind() == KernelKind::Binomial) {
    const int k = kernel.order();
    const double upper = std::min(2.0 * k, static_cast<double>(n));
    if (!(alpha > half && alpha < upper)) {
      msg << "alpha=" << alpha << " outside the admissible range n/2 < alpha < min(2k, n) (n=" << n << ", k=" << k
          << ")";
    }
  } else if (!(alpha > half && alpha < n)) {
    msg << "alpha=" << alpha << " outside the admissible range n/2 < alpha < n (n=" << n << ")";
  }
  return msg.str();
}

SquareFnOutput square_function(const Field& f, double alpha, const KernelSpec& kernel, const ScaleGrid& scales,
                               const SquareFnOptions& options) {
  const auto weights = kernel.iterate_weights();
  auto deviation = [&](const Field& field, std::span<const std::complex<double>> fhat, const BallSymbolTable& table,
                       const FftPlan& plan) {
    auto smooth = plan.inverse(spectral::apply_iterate_weights(fhat, table.values(), weights));
    for (std::size_t i = 0; i < smooth.size(); ++i) smooth[i] = field[i] - smooth[i];
    return smooth;
  };
  return run_pipeline(f, alpha, kernel, scales, options, deviation);
}

SquareFnOutput u_alpha(const Field& f, double alpha, const ScaleGrid& scales, const SquareFnOptions& options) {
  return square_function(f, alpha, KernelSpec::ball(f.grid().dimension()), scales, options);
}

SquareFnOutput e_tilde(const Field& f, double alpha, int k, const ScaleGrid& scales,
                       const SquareFnOptions& options) {
  return square_function(f, alpha, KernelSpec::binomial(f.grid().dimension(), k), scales, options);
}

SquareFnOutput e_tilde_direct(const Field& f, double alpha, int k, const ScaleGrid& scales,
                              const SquareFnOptions& options) {
  auto deviation = [k](const Field&, std::span<const std::complex<double>> fhat, const BallSymbolTable& table,
                       const FftPlan& plan) {
    Spectrum d(fhat.begin(), fhat.end());
    const auto symbol = table.values();
    for (int j = 0; j < k; ++j)
      for (std::size_t i = 0; i < d.size(); ++i) d[i] -= symbol[i] * d[i];
    return plan.inverse(d);
  };
  return run_pipeline(f, alpha, KernelSpec::binomial(f.grid().dimension(), k), scales, options, deviation);
}

std::vector<std::pair<double, double>> per_scale_profile(const SquareFnOutput& out) {
  std::vector<std::pair<double, double>> profile;
  profile.reserve(out.scales.size());
  for (std::size_t i = 0; i < out.scales.size(); ++i) profile.emplace_back(out.scales[i], out.per_scale_mass[i]);
  return profile;
}

void write_scale_profile_csv(const SquareFnOutput& out, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw FieldIoError(FieldIoError::Kind::Open, "cannot open " + path.string() + " for writing");
  os << "t,mass\n";
  for (auto [t, mass] : per_scale_profile(out)) os << format_real(t) << ',' << format_real(mass) << '\n';
}

}  // namespace sqfn
