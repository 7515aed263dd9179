#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqfn/convolve.hpp"
#include "sqfn/field.hpp"
#include "sqfn/squarefn.hpp"

namespace sqfn {

struct NormOptions {
  SymbolMode mode = SymbolMode::Discrete;
  bool override_range = false;
  int threads = 1;
};

/// Pointwise max over the scale grid of |A_t f|.
Field maximal_function(const Field& f, const ScaleGrid& scales, const NormOptions& options = {});

/// Surrogate Hardy-space norm: L^1 norm of maximal_function. f must be
/// mean-zero.
double h1_norm(const Field& f, const ScaleGrid& scales, const NormOptions& options = {});

/// Surrogate W^alpha_{H^1} norm: h1_norm(f) + h1_norm((-Delta)^{alpha/2} f),
/// 0 < alpha < n.
double sobolev_h1_norm(const Field& f, double alpha, const ScaleGrid& scales, const NormOptions& options = {});

inline constexpr const char* kH1Surrogate = "l1_of_scale_grid_ball_maximal_function";
inline constexpr const char* kSobolevSurrogate = "h1(f)+h1(fractional_laplacian(f,alpha))";

struct RegularityReport {
  std::string label;
  double alpha = 0.0;
  int n = 0;
  int samples_per_axis = 0;
  double period = 0.0;

  double h1_norm = 0.0;
  double sobolev_h1_norm = 0.0;
  double u_alpha_l1 = 0.0;
  std::vector<int> k_list;
  std::vector<double> e_tilde_l1;

  /// sobolev / (h1 + u_alpha_l1); empty when the denominator vanishes.
  std::optional<double> ratio_thm1;
  /// sobolev / (h1 + e_tilde_l1[k]) per k.
  std::vector<std::optional<double>> ratio_thm2;

  double t_min = 0.0;
  double t_max = 0.0;
  int per_octave = 0;
  std::size_t scale_count = 0;
  std::string symbol_mode;
  bool in_theorem_range = true;
  bool range_override_used = false;
  std::string h1_surrogate = kH1Surrogate;
  std::string sobolev_surrogate = kSobolevSurrogate;
};

/// All norms of the two characterizations for one field. f must be mean-zero;
/// alpha must satisfy the theorem range for U_alpha and for every k unless
/// options.override_range is set.
RegularityReport equivalence_report(const Field& f, double alpha, std::span<const int> k_list,
                                    const ScaleGrid& scales, const NormOptions& options = {});

/// Flat JSON object; undefined ratios are written as the string "undefined".
std::string to_json(const RegularityReport& report);
std::string report_csv_header(std::span<const int> k_list);
std::string report_csv_row(const RegularityReport& report);

}  // namespace sqfn
