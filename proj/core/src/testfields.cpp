#include "sqfn/testfields.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "sqfn/errors.hpp"
#include "sqfn/fft.hpp"

namespace sqfn {

namespace {

double bump(double r, double w) {
  if (r >= w) return 0.0;
  const double q = r / w;
  return std::exp(1.0 - 1.0 / (1.0 - q * q));
}

// exp(-1/x) for x > 0, else 0.
double smooth_step_base(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// 1 on [0, 1/2], 0 on [1, inf), C-infinity in between.
double smooth_cutoff(double s) {
  const double a = smooth_step_base(1.0 - s);
  const double b = smooth_step_base(s - 0.5);
  return a / (a + b);
}

double periodic_distance(std::span<const double> x, std::span<const double> c, double L) {
  double r2 = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    double d = std::remainder(x[a] - c[a], L);
    r2 += d * d;
  }
  return std::sqrt(r2);
}

std::vector<double> resolve_center(const GridSpec& grid, std::span<const double> center) {
  if (center.empty()) return std::vector<double>(static_cast<std::size_t>(grid.dimension()), 0.25 * grid.period());
  if (static_cast<int>(center.size()) != grid.dimension())
    throw ParameterError("center has " + std::to_string(center.size()) + " coordinates, grid dimension is " +
                         std::to_string(grid.dimension()));
  return std::vector<double>(center.begin(), center.end());
}

void require_width(const GridSpec& grid, double width, const char* what) {
  if (!(width > 0.0) || width > 0.25 * grid.period() * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << what << "=" << width << " must lie in (0, L/4] = (0, " << 0.25 * grid.period() << "]";
    throw ParameterError(msg.str());
  }
}

// values[i] - values[i - (N/2, ..., N/2)], exactly antisymmetric under the
// half-period shift.
Field subtract_antipodal_copy(const GridSpec& grid, const std::vector<double>& values) {
  const int N = grid.samples_per_axis();
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto idx = grid.unravel(i);
    for (int& c : idx) c = (c + N / 2) % N;
    out[i] = values[i] - values[grid.ravel(idx)];
  }
  return Field(grid, std::move(out));
}

std::uint64_t mix(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double phase_of(std::uint64_t seed, std::span<const int> k) {
  std::uint64_t h = mix(seed);
  for (int v : k) h = mix(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(v)));
  return 2.0 * std::numbers::pi * static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

Field mean_zero_atom(const GridSpec& grid, std::span<const double> center, double width) {
  require_width(grid, width, "atom width");
  auto c = resolve_center(grid, center);
  std::vector<double> b(grid.size());
  std::vector<double> x(static_cast<std::size_t>(grid.dimension()));
  for (std::size_t i = 0; i < b.size(); ++i) {
    auto idx = grid.unravel(i);
    for (std::size_t a = 0; a < x.size(); ++a) x[a] = idx[a] * grid.spacing();
    b[i] = bump(periodic_distance(x, c, grid.period()), width);
  }
  return subtract_antipodal_copy(grid, b);
}

Sampler atom_sampler(double period, std::vector<double> center, double width) {
  std::vector<double> anti = center;
  for (double& v : anti) v += 0.5 * period;
  return [=](std::span<const double> x) {
    return bump(periodic_distance(x, center, period), width) - bump(periodic_distance(x, anti, period), width);
  };
}

Field singular_bump(const GridSpec& grid, std::span<const double> center, double beta, double cutoff_width) {
  const int n = grid.dimension();
  if (!(beta > -0.5 * n && beta < 2.0)) {
    std::ostringstream msg;
    msg << "bump exponent beta=" << beta << " must lie in (-n/2, 2) = (" << -0.5 * n << ", 2)";
    throw ParameterError(msg.str());
  }
  require_width(grid, cutoff_width, "cutoff width");
  auto c = resolve_center(grid, center);
  const double cap = n / (n + beta) * std::pow(grid.spacing(), beta);
  std::vector<double> v(grid.size());
  std::vector<double> x(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto idx = grid.unravel(i);
    for (std::size_t a = 0; a < x.size(); ++a) x[a] = idx[a] * grid.spacing();
    const double r = periodic_distance(x, c, grid.period());
    if (r >= cutoff_width) {
      v[i] = 0.0;
      continue;
    }
    double core = std::pow(r, beta);
    if (beta < 0.0) core = std::min(core, cap);
    v[i] = core * smooth_cutoff(r / cutoff_width);
  }
  return subtract_antipodal_copy(grid, v);
}

Field spectral_noise(const GridSpec& grid, double decay_exponent, std::uint64_t seed) {
  const int n = grid.dimension();
  const int N = grid.samples_per_axis();
  if (!(decay_exponent > 0.0 && decay_exponent < n + 2.0)) {
    std::ostringstream msg;
    msg << "noise decay exponent s=" << decay_exponent << " must lie in (0, n + 2)";
    throw ParameterError(msg.str());
  }
  auto plan = FftPlan::for_grid(grid);
  Spectrum coeffs(plan->spectrum_size(), {0.0, 0.0});
  std::vector<int> canonical(static_cast<std::size_t>(n));
  SpectralIndex(grid).for_each([&](std::size_t flat, std::span<const int> k) {
    double k2 = 0.0;
    int first_nonzero = 0;
    for (int v : k) {
      if (std::abs(v) >= N / 2) return;
      k2 += static_cast<double>(v) * v;
      if (first_nonzero == 0) first_nonzero = v;
    }
    if (k2 == 0.0) return;
    const bool flip = first_nonzero < 0;
    for (std::size_t a = 0; a < canonical.size(); ++a) canonical[a] = flip ? -k[a] : k[a];
    const double phase = phase_of(seed, canonical);
    const double amp = std::pow(std::sqrt(k2) / grid.period(), -decay_exponent);
    coeffs[flat] = std::polar(amp, flip ? -phase : phase);
  });
  return Field(grid, plan->synthesize(coeffs));
}

Field generate(const GridSpec& grid, const FieldRecipe& recipe) {
  switch (recipe.kind) {
    case RecipeKind::MeanZeroAtom:
      return mean_zero_atom(grid, recipe.center, recipe.width);
    case RecipeKind::SingularBump:
      return singular_bump(grid, recipe.center, recipe.beta, recipe.width);
    case RecipeKind::SpectralNoise:
      return spectral_noise(grid, recipe.decay_exponent, recipe.seed);
  }
  throw ParameterError("unknown recipe kind");
}

std::string to_string(RecipeKind kind) {
  switch (kind) {
    case RecipeKind::MeanZeroAtom:
      return "atom";
    case RecipeKind::SingularBump:
      return "bump";
    case RecipeKind::SpectralNoise:
      return "spectral";
  }
  return "unknown";
}

RecipeKind recipe_kind_from_string(std::string_view name) {
  if (name == "atom") return RecipeKind::MeanZeroAtom;
  if (name == "bump") return RecipeKind::SingularBump;
  if (name == "spectral") return RecipeKind::SpectralNoise;
  throw ParameterError("unknown recipe kind '" + std::string(name) + "' (expected atom, bump or spectral)");
}

std::string to_json(const FieldRecipe& recipe) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(recipe.kind);
  switch (recipe.kind) {
    case RecipeKind::MeanZeroAtom:
      j["center"] = recipe.center;
      j["width"] = recipe.width;
      break;
    case RecipeKind::SingularBump:
      j["center"] = recipe.center;
      j["beta"] = recipe.beta;
      j["width"] = recipe.width;
      break;
    case RecipeKind::SpectralNoise:
      j["decay_exponent"] = recipe.decay_exponent;
      j["seed"] = recipe.seed;
      j["generator"] = kNoiseGenerator;
      break;
  }
  return j.dump();
}

FieldRecipe recipe_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("recipe is not valid JSON: ") + e.what());
  }
  FieldRecipe r;
  try {
    r.kind = recipe_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("center")) r.center = j["center"].get<std::vector<double>>();
    if (j.contains("width")) r.width = j["width"].get<double>();
    if (j.contains("beta")) r.beta = j["beta"].get<double>();
    if (j.contains("decay_exponent")) r.decay_exponent = j["decay_exponent"].get<double>();
    if (j.contains("seed")) r.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("generator") && j["generator"].get<std::string>() != kNoiseGenerator)
      throw ParameterError("unsupported noise generator '" + j["generator"].get<std::string>() + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed recipe: ") + e.what());
  }
  return r;
}

}  // namespace sqfn
