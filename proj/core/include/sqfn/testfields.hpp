#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqfn/field.hpp"

namespace sqfn {

/// Identifier of the phase generator used by spectral_noise. Recorded in every
/// recipe so other implementations can reproduce the field:
///   mix(x): z = x + 0x9E3779B97F4A7C15;
///           z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
///           z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
///           return z ^ (z >> 31)
///   h = mix(seed); for each axis a: h = mix(h ^ uint64(int64(k_a)))
///   phase = 2 pi * (h >> 11) * 2^-53
/// where k is the canonical member of {k, -k} (first nonzero entry positive).
inline constexpr const char* kNoiseGenerator = "splitmix64-counter-v1";

enum class RecipeKind { MeanZeroAtom, SingularBump, SpectralNoise };

struct FieldRecipe {
  RecipeKind kind = RecipeKind::MeanZeroAtom;
  std::vector<double> center;  ///< atom and bump; empty means L/4 in every axis
  double width = 0.125;        ///< atom width, bump cutoff width
  double beta = 1.0;           ///< bump exponent
  double decay_exponent = 2.0; ///< noise amplitude |xi|^{-s}
  std::uint64_t seed = 0;
};

/// Smooth bump b(r) = exp(1 - 1/(1 - (r/w)^2)), r < w, at `center` minus the
/// same bump at center + (L/2, ..., L/2). 0 < width <= L/4.
Field mean_zero_atom(const GridSpec& grid, std::span<const double> center, double width);

/// The atom as an analytic L-periodic function of physical coordinates.
Sampler atom_sampler(double period, std::vector<double> center, double width);

/// |x - c|^beta times a smooth cutoff of radius cutoff_width, minus the
/// antipodal copy. beta in (-n/2, 2). For beta < 0 values are capped at the
/// average of |x|^beta over the ball of radius h.
Field singular_bump(const GridSpec& grid, std::span<const double> center, double beta, double cutoff_width);

/// Random-phase field with Fourier amplitude |xi|^{-s} on every frequency
/// with all |k_a| < N/2, zero DC. s in (0, n + 2). Frequencies shared by two
/// grid sizes get the same coefficient, so refining the grid only adds modes.
Field spectral_noise(const GridSpec& grid, double decay_exponent, std::uint64_t seed);

Field generate(const GridSpec& grid, const FieldRecipe& recipe);

std::string to_string(RecipeKind kind);
RecipeKind recipe_kind_from_string(std::string_view name);

/// Recipe JSON, including "generator": kNoiseGenerator for noise recipes.
std::string to_json(const FieldRecipe& recipe);
FieldRecipe recipe_from_json(std::string_view text);

}  // namespace sqfn
