#include "sqfn/hardy.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

#include "sqfn/errors.hpp"
#include "sqfn/fft.hpp"
#include "sqfn/parallel.hpp"

namespace sqfn {

namespace {

void require_mean_zero(const Field& f, const char* what) {
  if (!f.mean_zero()) {
    std::ostringstream msg;
    msg << what << " requires a mean-zero field (mean " << f.mean() << ")";
    throw ParameterError(msg.str());
  }
}

std::optional<double> safe_ratio(double num, double den) {
  if (den == 0.0 || !std::isfinite(num / den)) return std::nullopt;
  return num / den;
}

std::string ratio_text(const std::optional<double>& r) { return r ? format_real(*r) : "undefined"; }

}  // namespace

Field maximal_function(const Field& f, const ScaleGrid& scales, const NormOptions& options) {
  const auto& grid = f.grid();
  if (!(scales.grid() == grid)) throw ParameterError("scale grid was built for a different sampling grid");
  auto plan = FftPlan::for_grid(grid);
  const auto fhat = plan->forward(f.values());
  const auto ts = scales.scales();
  std::vector<double> sup(grid.size(), 0.0);
  const auto batch = static_cast<std::size_t>(std::max(1, options.threads));
  std::vector<std::vector<double>> averages(batch);
  for (std::size_t start = 0; start < ts.size(); start += batch) {
    const std::size_t stop = std::min(ts.size(), start + batch);
    parallel_for(stop - start, options.threads, [&](std::size_t j) {
      auto table = BallSymbolTable::cached(grid, ts[start + j], options.mode);
      averages[j] = plan->inverse(spectral::multiply(fhat, table->values()));
    });
    for (std::size_t j = 0; j < stop - start; ++j)
      for (std::size_t x = 0; x < sup.size(); ++x) sup[x] = std::max(sup[x], std::abs(averages[j][x]));
  }
  return Field(grid, std::move(sup));
}

double h1_norm(const Field& f, const ScaleGrid& scales, const NormOptions& options) {
  require_mean_zero(f, "h1_norm");
  return lp_norm(maximal_function(f, scales, options), 1.0);
}

double sobolev_h1_norm(const Field& f, double alpha, const ScaleGrid& scales, const NormOptions& options) {
  require_mean_zero(f, "sobolev_h1_norm");
  const int n = f.grid().dimension();
  if (!(alpha > 0.0 && alpha < n)) {
    std::ostringstream msg;
    msg << "sobolev_h1_norm needs 0 < alpha < n; got alpha=" << alpha << ", n=" << n;
    throw RangeError(msg.str());
  }
  return h1_norm(f, scales, options) + h1_norm(fractional_laplacian(f, alpha), scales, options);
}

RegularityReport equivalence_report(const Field& f, double alpha, std::span<const int> k_list,
                                    const ScaleGrid& scales, const NormOptions& options) {
  require_mean_zero(f, "equivalence_report");
  const int n = f.grid().dimension();
  RegularityReport r;
  r.alpha = alpha;
  r.n = n;
  r.samples_per_axis = f.grid().samples_per_axis();
  r.period = f.grid().period();
  r.t_min = scales.t_min();
  r.t_max = scales.t_max();
  r.per_octave = scales.per_octave();
  r.scale_count = scales.size();
  r.symbol_mode = to_string(options.mode);
  r.k_list.assign(k_list.begin(), k_list.end());

  SquareFnOptions sq{options.mode, options.override_range, options.threads};
  auto u = u_alpha(f, alpha, scales, sq);
  r.in_theorem_range = u.in_theorem_range;
  r.range_override_used = u.range_override_used;
  r.u_alpha_l1 = lp_norm(u.result, 1.0);
  for (int k : k_list) {
    auto e = e_tilde(f, alpha, k, scales, sq);
    r.in_theorem_range = r.in_theorem_range && e.in_theorem_range;
    r.range_override_used = r.range_override_used || e.range_override_used;
    r.e_tilde_l1.push_back(lp_norm(e.result, 1.0));
  }
  r.h1_norm = h1_norm(f, scales, options);
  r.sobolev_h1_norm = r.h1_norm + h1_norm(fractional_laplacian(f, alpha), scales, options);

  r.ratio_thm1 = safe_ratio(r.sobolev_h1_norm, r.h1_norm + r.u_alpha_l1);
  for (double e : r.e_tilde_l1) r.ratio_thm2.push_back(safe_ratio(r.sobolev_h1_norm, r.h1_norm + e));
  return r;
}

std::string to_json(const RegularityReport& r) {
  nlohmann::ordered_json j;
  j["label"] = r.label;
  j["alpha"] = r.alpha;
  j["n"] = r.n;
  j["samples_per_axis"] = r.samples_per_axis;
  j["period"] = r.period;
  j["h1_norm"] = r.h1_norm;
  j["sobolev_h1_norm"] = r.sobolev_h1_norm;
  j["u_alpha_l1"] = r.u_alpha_l1;
  j["k_list"] = r.k_list;
  j["e_tilde_l1"] = r.e_tilde_l1;
  auto ratio = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    if (v) return *v;
    return "undefined";
  };
  j["ratio_thm1"] = ratio(r.ratio_thm1);
  auto thm2 = nlohmann::ordered_json::array();
  for (const auto& v : r.ratio_thm2) thm2.push_back(ratio(v));
  j["ratio_thm2"] = thm2;
  j["t_min"] = r.t_min;
  j["t_max"] = r.t_max;
  j["per_octave"] = r.per_octave;
  j["scale_count"] = r.scale_count;
  j["symbol_mode"] = r.symbol_mode;
  j["in_theorem_range"] = r.in_theorem_range;
  j["range_override_used"] = r.range_override_used;
  j["h1_surrogate"] = r.h1_surrogate;
  j["sobolev_surrogate"] = r.sobolev_surrogate;
  return j.dump(2);
}

std::string report_csv_header(std::span<const int> k_list) {
  std::string h = "label,alpha,N,h1_norm,sobolev_h1_norm,u_alpha_l1,ratio_thm1";
  for (int k : k_list) h += ",e_tilde_l1_k" + std::to_string(k) + ",ratio_thm2_k" + std::to_string(k);
  return h;
}

std::string report_csv_row(const RegularityReport& r) {
  std::ostringstream row;
  row << r.label << ',' << format_real(r.alpha) << ',' << r.samples_per_axis << ',' << format_real(r.h1_norm) << ','
      << format_real(r.sobolev_h1_norm) << ',' << format_real(r.u_alpha_l1) << ',' << ratio_text(r.ratio_thm1);
  for (std::size_t i = 0; i < r.e_tilde_l1.size(); ++i)
    row << ',' << format_real(r.e_tilde_l1[i]) << ',' << ratio_text(r.ratio_thm2[i]);
  return row.str();
}

}  // namespace sqfn
