#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sqfn/errors.hpp"
#include "sqfn/hardy.hpp"
#include "sqfn/lemma.hpp"

namespace sqfn::cli {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FieldIoError(FieldIoError::Kind::Open, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw FieldIoError(FieldIoError::Kind::Write, "write to " + path.string() + " failed");
}

void prepare(const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw FieldIoError(FieldIoError::Kind::Open, "cannot create output directory " + out.string());
}

void write_config(const Json& config, const std::filesystem::path& out) {
  write_text(out / "run_config.json", config.dump(2) + "\n");
}

// Pointwise relative deviation over points where b >= resolved * max|b|.
// FFT rounding in the squared field is tied to its global peak, and the final
// square root turns that into a relative error growing like (max/b)^2, so tiny
// values carry no relative information.
double max_relative_deviation(const Field& a, const Field& b, double resolved) {
  const double ref = b.max_abs();
  if (ref == 0.0) return a.max_abs();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(b[i]) < resolved * ref) continue;
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::abs(b[i]));
  }
  return worst;
}

NormOptions norm_options(const Json& c) {
  NormOptions opt;
  opt.mode = mode_from(c);
  opt.override_range = c["override_range"].get<bool>();
  opt.threads = c["threads"].get<int>();
  return opt;
}

std::string shift_label(std::span<const int> s) {
  std::ostringstream os;
  os << "shift=";
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? ":" : "") << s[i];
  return os.str();
}

}  // namespace

int run_gen(const Json& c, const std::filesystem::path& out) {
  const GridSpec grid = grid_from(c["grid"]);
  const Field f = generate(grid, recipe_from(c["recipe"]));
  prepare(out);
  write_field(f, out / "field.sqfn");
  if (c["csv"].get<bool>()) write_field_csv(f, out / "field.csv");
  write_config(c, out);
  return 0;
}

int run_squarefn(const Json& c, const std::filesystem::path& out) {
  const Field f = input_field(c);
  const GridSpec& grid = f.grid();
  const KernelSpec kernel = kernel_from(c["kernel"], grid.dimension());
  const ScaleGrid scales = scales_from(c["scales"], grid, kernel.order());
  SquareFnOptions opt;
  opt.mode = mode_from(c);
  opt.override_range = c["override_range"].get<bool>();
  opt.threads = c["threads"].get<int>();
  const double alpha = c["alpha"].get<double>();

  const SquareFnOutput result = square_function(f, alpha, kernel, scales, opt);
  if (result.range_override_used)
    std::cerr << "warning: " << theorem_range_violation(grid.dimension(), alpha, kernel) << " (override in effect)\n";

  Json summary;
  summary["alpha"] = alpha;
  summary["kernel"] = kernel.name();
  summary["symbol_mode"] = to_string(result.mode);
  summary["in_theorem_range"] = result.in_theorem_range;
  summary["range_override_used"] = result.range_override_used;
  summary["scale_count"] = scales.size();
  summary["t_min"] = scales.t_min();
  summary["t_max"] = scales.t_max();
  summary["log_weight"] = result.log_weight;
  summary["result_l1"] = lp_norm(result.result, 1.0);
  summary["result_l2"] = lp_norm(result.result, 2.0);
  summary["result_max"] = result.result.max_abs();

  int code = 0;
  if (c["check_identity"].get<bool>()) {
    // Same quantity through the direct (I - A_t)^k path.
    const SquareFnOutput direct = e_tilde_direct(f, alpha, kernel.order(), scales, opt);
    constexpr double kResolved = 1e-2;
    const double dev = max_relative_deviation(result.result, direct.result, kResolved);
    const bool ok = dev <= 1e-12;
    summary["identity_check"] = Json{{"path", "(I-A_t)^" + std::to_string(kernel.order()) + " f"},
                                     {"max_relative_deviation", dev},
                                     {"compared_where_at_least_fraction_of_max", kResolved},
                                     {"tolerance", 1e-12},
                                     {"passed", ok}};
    if (!ok) {
      std::cerr << "error: identity check failed, max relative deviation " << dev << "\n";
      code = 3;
    }
  }

  prepare(out);
  write_field(result.result, out / "result.sqfn");
  write_scale_profile_csv(result, out / "profile.csv");
  write_text(out / "summary.json", summary.dump(2) + "\n");
  write_config(c, out);
  return code;
}

int run_equiv(const Json& c, const std::filesystem::path& out) {
  const double alpha = c["alpha"].get<double>();
  const auto k_list = c["k_list"].get<std::vector<int>>();
  const int kmax = k_list.empty() ? 1 : *std::max_element(k_list.begin(), k_list.end());
  const NormOptions opt = norm_options(c);
  const auto kind = c["family"]["kind"].get<std::string>();

  std::vector<RegularityReport> reports;
  auto run = [&](const Field& f, const ScaleGrid& scales, std::string label) {
    auto r = equivalence_report(f, alpha, k_list, scales, opt);
    r.label = std::move(label);
    reports.push_back(std::move(r));
  };

  if (kind == "refinement") {
    const Json& g = c["grid"];
    for (int N : c["family"]["sizes"].get<std::vector<int>>()) {
      const GridSpec grid(g["n"].get<int>(), N, g["period"].get<double>());
      const Field f = generate(grid, recipe_from(c["recipe"]));
      run(f, scales_from(c["scales"], grid, kmax), "N=" + std::to_string(N));
    }
  } else {
    const Field f = input_field(c);
    const ScaleGrid scales = scales_from(c["scales"], f.grid(), kmax);
    if (kind == "single") {
      run(f, scales, "base");
    } else if (kind == "translations") {
      for (const auto& s : c["family"]["shifts"].get<std::vector<std::vector<int>>>())
        run(translate(f, s), scales, shift_label(s));
    } else {
      // f(2x) lives on the doubled grid; its matched scales are halved.
      run(f, scales, "base");
      const Field g = dilate_by_two(f);
      const ScaleGrid half =
          ScaleGrid::make(g.grid(), 0.5 * scales.t_min(), 0.5 * scales.t_max(), scales.per_octave(), kmax);
      run(g, half, "dilated");
    }
  }

  Json doc;
  doc["family"] = kind;
  doc["reports"] = Json::array();
  std::string csv = report_csv_header(k_list) + "\n";
  for (const auto& r : reports) {
    doc["reports"].push_back(Json::parse(to_json(r)));
    csv += report_csv_row(r) + "\n";
    if (!r.ratio_thm1) std::cerr << "warning: " << r.label << ": norm ratio undefined (zero denominator)\n";
  }

  prepare(out);
  write_text(out / "report.json", doc.dump(2) + "\n");
  write_text(out / "rows.csv", csv);
  write_config(c, out);
  return 0;
}

int run_lemma(const Json& c, const std::filesystem::path& out) {
  const LemmaContext ctx(c["alpha"].get<double>(), c["n"].get<int>());
  const Json& s = c["sampling"];
  SampleSpec spec;
  spec.bases = s["bases"].get<int>();
  spec.ladder = s["ladder"].get<int>();
  spec.seed = s["seed"].get<std::uint64_t>();
  spec.u_min = s["u_min"].get<double>();
  spec.u_max = s["u_max"].get<double>();
  for (const auto& p : s["custom"])
    spec.custom.emplace_back(p["u"].get<std::vector<double>>(), p["v"].get<std::vector<double>>());

  const BoundScanReport report = bound_scan(ctx, spec, c["tol"].get<double>(), c["threads"].get<int>());

  std::vector<GradIntegralCheck> checks;
  Json diverged = Json::array();
  for (const auto& g : c["grad_checks"]) {
    try {
      checks.push_back(grad_integral_check(g["alpha"].get<double>(), g["n"].get<int>(), g["radius"].get<double>()));
    } catch (const ConvergenceError& e) {
      diverged.push_back(Json{{"n", g["n"]}, {"alpha", g["alpha"]}, {"radius", g["radius"]}, {"error", e.what()}});
    }
  }
  Json doc = Json::parse(to_json(report, checks));
  doc["grad_check_failures"] = diverged;

  prepare(out);
  write_text(out / "lemma_report.json", doc.dump(2) + "\n");
  write_scan_csv(report, out / "lemma_samples.csv");
  write_config(c, out);

  const int attempted = report.evaluated + report.failed;
  if (report.failed > 0) std::cerr << "warning: " << report.failed << " of " << attempted << " samples failed\n";
  if (attempted > 0 && 10 * report.failed > attempted) return 3;
  return 0;
}

}  // namespace sqfn::cli
