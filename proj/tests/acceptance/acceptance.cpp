// Acceptance runner: one PASS/FAIL line per criterion.
//   sqfn_acceptance            run all
//   sqfn_acceptance --only 4   run one
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sqfn/errors.hpp"
#include "sqfn/hardy.hpp"
#include "sqfn/lemma.hpp"
#include "sqfn/quadrature.hpp"
#include "sqfn/squarefn.hpp"
#include "sqfn/testfields.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace sqfn;
using namespace sqfn::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream log;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    log << "    [" << (ok ? "ok" : "xx") << "] " << what << "\n";
  }
  void note(const std::string& what) { log << "    " << what << "\n"; }
};

std::string sci(double v, int digits = 3) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(digits) << v;
  return os.str();
}

std::string fix(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

Field atom(int N) { return mean_zero_atom(GridSpec(2, N, 1.0), std::vector<double>{}, 0.125); }

// ---------------------------------------------------------------------------

void trivial_kernels(Outcome& out) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int n : {2, 3}) {
    const int N = n == 2 ? 256 : 32;
    GridSpec g(n, N, 1.0);
    auto scales = ScaleGrid::make(g, 2.0 * g.spacing(), 0.5, 4);
    for (int trial = 0; trial < 3; ++trial) {
      const double c = trial == 0 ? 1.0 : u(rng);
      Field f(g, std::vector<double>(g.size(), c));
      auto r = u_alpha(f, 0.75 * n, scales);
      bool zero = true;
      for (std::size_t i = 0; i < f.size(); ++i) zero = zero && r.result[i] == 0.0;
      out.check(zero, "n=" + std::to_string(n) + " constant " + sci(c) + ": U is exactly 0 at every point");
    }
  }
  for (const Field& f : {atom(256), spectral_noise(GridSpec(2, 256, 1.0), 2.0, 7)}) {
    auto scales = ScaleGrid::make(f.grid(), 2.0 / 256, 0.5, 4);
    auto a = u_alpha(f, 1.5, scales);
    auto b = e_tilde(f, 1.5, 1, scales);
    bool same = true;
    for (std::size_t i = 0; i < f.size(); ++i) same = same && a.result[i] == b.result[i];
    same = same && a.per_scale_mass == b.per_scale_mass;
    out.check(same, "binomial kernel with k=1 is bitwise identical to the ball square function");
  }
  out.check(binomial_coefficients(1) == std::vector<double>{1.0}, "coefficients k=1: [1]");
  out.check(binomial_coefficients(2) == std::vector<double>{2.0, -1.0}, "coefficients k=2: [2, -1]");
  out.check(binomial_coefficients(3) == std::vector<double>{3.0, -3.0, 1.0}, "coefficients k=3: [3, -3, 1]");
}

void binomial_identity(Outcome& out) {
  const GridSpec g(2, 256, 1.0);
  // 12 scales from 2h, three per octave: t_max = 2h 2^{11/3} < L/4
  auto scales = ScaleGrid::make(g, 2.0 * g.spacing(), 2.0 * g.spacing() * std::exp2(11.0 / 3.0), 3, 2);
  out.note("N=256, n=2, " + std::to_string(scales.size()) + " scales in [" + sci(scales.t_min()) + ", " +
           sci(scales.t_max()) + "], alpha=1.5");
  if (scales.size() != 12) out.check(false, "scale count is 12");

  auto pointwise = [](const Field& a, const Field& b, double floor_frac) {
    const double ref = b.max_abs();
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), floor_frac * ref));
    return worst;
  };

  for (std::uint64_t seed : {7u, 8u}) {
    Field f = spectral_noise(g, 2.0, seed);
    auto a = e_tilde(f, 1.5, 2, scales).result;
    auto b = e_tilde_direct(f, 1.5, 2, scales).result;
    double minimum = b.max_abs();
    for (double v : b.values()) minimum = std::min(minimum, v);
    const double dev = pointwise(a, b, 0.0);
    out.check(dev <= 1e-12, "spectral noise seed " + std::to_string(seed) + ": max pointwise |a-b|/|b| over all " +
                                std::to_string(f.size()) + " points = " + sci(dev) + " (min U / max U = " +
                                sci(minimum / b.max_abs()) + ")");
  }

  // Compactly supported atom: U decays to the FFT rounding floor away from the
  // support. Rounding in U^2 sits near 1e-17 of the peak, so the relative error
  // of U grows like (max U / U)^2 and passes 1e-12 once U < ~3e-3 max U.
  Field f = atom(256);
  auto a = e_tilde(f, 1.5, 2, scales).result;
  auto b = e_tilde_direct(f, 1.5, 2, scales).result;
  auto masked = [&](double frac) {
    const double ref = b.max_abs();
    double worst = 0.0;
    std::size_t points = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (b[i] < frac * ref) continue;
      ++points;
      worst = std::max(worst, std::abs(a[i] - b[i]) / b[i]);
    }
    return std::pair{worst, points};
  };
  const auto [dev, points] = masked(1e-2);
  out.check(dev <= 1e-12, "atom: max pointwise |a-b|/|b| over the " + std::to_string(points) +
                              " points with U >= 1e-2 max U = " + sci(dev));
  out.note("atom, for reference: max|a-b| / max|b| = " + sci(max_abs_diff(a, b) / b.max_abs()) +
           "; pointwise relative where U >= 1e-3 max U " + sci(masked(1e-3).first) + ", 1e-4 max U " +
           sci(masked(1e-4).first) + ", all points " + sci(pointwise(a, b, 0.0)));
}

void harmonic_oracle(Outcome& out) {
  struct Case {
    int n, N;
    std::vector<int> k;
    double alpha;
    int order;  // 1 ball, >1 binomial
  };
  const std::vector<Case> cases{{2, 128, {3, 1}, 1.5, 1},
                                {2, 128, {0, 5}, 1.2, 2},
                                {2, 128, {2, -2}, 1.8, 3},
                                {3, 32, {1, 2, 0}, 2.0, 1}};
  for (const auto& c : cases) {
    GridSpec g(c.n, c.N, 1.0);
    Field f = harmonic(g, c.k);
    const double t_max = ScaleGrid::max_admissible_scale(g, c.order);
    auto scales = ScaleGrid::make(g, 2.0 * g.spacing(), t_max, 4, c.order);
    auto res = c.order == 1 ? u_alpha(f, c.alpha, scales) : e_tilde(f, c.alpha, c.order, scales);
    std::vector<int> k2(c.k);
    for (int& v : k2) v *= 2;
    double worst_mass = 0.0, worst_point = 0.0;
    std::vector<double> per_scale_amp, per_scale_mod;
    for (std::size_t j = 0; j < scales.size(); ++j) {
      const double t = scales.scales()[j];
      const double mk = cosine_sum_symbol(g, t, c.k), m2k = cosine_sum_symbol(g, t, k2);
      const double amp = unit_ball_volume(c.n) * std::pow(t, -2.0 * c.alpha) * std::pow(1.0 - mk, 2 * c.order) / 2;
      per_scale_amp.push_back(amp);
      per_scale_mod.push_back(m2k);
      worst_mass = std::max(worst_mass, rel_diff(res.per_scale_mass[j], amp));  // L^n = 1
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      auto idx = g.unravel(i);
      double p = 0.0;
      for (std::size_t a = 0; a < idx.size(); ++a) p += static_cast<double>(c.k[a]) * idx[a];
      const double cos2 = std::cos(4.0 * std::numbers::pi * p / c.N);
      double s = 0.0;
      for (std::size_t j = 0; j < scales.size(); ++j) s += scales.log_weight() * per_scale_amp[j] * (1 + per_scale_mod[j] * cos2);
      worst_point = std::max(worst_point, rel_diff(res.result[i], std::sqrt(s)));
    }
    std::ostringstream label;
    label << "n=" << c.n << " N=" << c.N << " k=(";
    for (std::size_t a = 0; a < c.k.size(); ++a) label << (a ? "," : "") << c.k[a];
    label << ") alpha=" << c.alpha << (c.order == 1 ? " ball" : " binomial(" + std::to_string(c.order) + ")")
          << ", " << scales.size() << " scales";
    out.check(worst_mass <= 1e-10, label.str() + ": worst per-scale relative error " + sci(worst_mass));
    out.check(worst_point <= 1e-10, label.str() + ": worst pointwise relative error " + sci(worst_point));
  }
}

void dilation_law(Outcome& out) {
  Field f = atom(256);
  Field g = dilate_by_two(f);
  // t_max strictly below L/2: at L/2 the coarse and fine discrete balls differ
  auto sf = ScaleGrid::make(f.grid(), 2.0 / 256, 0.25, 4);
  auto sg = ScaleGrid::make(g.grid(), 1.0 / 256, 0.125, 4);
  out.note("f on N=256 with scales [" + sci(sf.t_min()) + ", " + sci(sf.t_max()) + "]; f(2x) on N=512 with halved scales");
  for (double alpha : {1.2, 1.5, 1.8}) {
    auto uf = u_alpha(f, alpha, sf).result;
    auto ug = u_alpha(g, alpha, sg).result;
    const double factor = std::pow(2.0, alpha);
    double worst = 0.0, worst_abs = 0.0;
    for (std::size_t i = 0; i < ug.size(); ++i) {
      auto idx = g.grid().unravel(i);
      std::vector<int> j{idx[0] % 256, idx[1] % 256};
      const double expect = factor * uf[f.grid().ravel(j)];
      worst = std::max(worst, rel_diff(ug[i], expect));
      worst_abs = std::max(worst_abs, std::abs(ug[i] - expect));
    }
    out.check(worst <= 1e-2, "alpha=" + fix(alpha, 1) + ": worst pointwise relative deviation " + sci(worst) +
                                 " (absolute / max " + sci(worst_abs / ug.max_abs()) + ")");
  }
}

void bound_scan_criterion(Outcome& out) {
  const LemmaContext ctx(1.5, 2);
  SampleSpec spec;  // 20 bases x 8 rungs
  spec.seed = 1;
  const double tol = 1e-8;
  auto a = bound_scan(ctx, spec, tol);
  auto b = bound_scan(ctx, spec, tol / 2);
  out.note("n=2, alpha=1.5, " + std::to_string(spec.bases) + " bases x " + std::to_string(spec.ladder) +
           " rungs, |v| = |u| 2^-j / 2");
  out.check(a.evaluated >= 100, std::to_string(a.evaluated) + " samples evaluated (>= 100)");
  out.check(a.failed == 0 && b.failed == 0, "quadrature failures: " + std::to_string(a.failed) + " at tol " +
                                                sci(tol, 0) + ", " + std::to_string(b.failed) + " at tol/2");
  bool finite = true;
  for (const auto& s : a.samples)
    if (s.status == "ok") finite = finite && std::isfinite(s.ratio);
  out.check(finite && std::isfinite(a.sup_ratio), "all F/|v|^2 finite, sup = " + sci(a.sup_ratio, 6));
  const double drift = rel_diff(a.sup_ratio, b.sup_ratio);
  out.check(drift <= 0.05, "sup under tolerance halving: " + sci(b.sup_ratio, 6) + ", change " + sci(drift));
  out.check(a.min_tail_slope >= 1.9, "minimum small-|v| log-log slope over the last three rungs: " +
                                         fix(a.min_tail_slope));

  SampleSpec axis;
  axis.bases = 0;
  for (int j = 1; j <= 8; ++j)
    axis.custom.emplace_back(std::vector<double>{3.0, 0.0}, std::vector<double>{3.0 * std::ldexp(0.5, -j), 0.0});
  auto c = bound_scan(ctx, axis, tol);
  double worst = INFINITY;
  for (int j = 5; j < 8; ++j)
    worst = std::min(worst, std::log(c.samples[j - 1].F / c.samples[j].F) / std::log(2.0));
  out.check(worst >= 1.9, "u=(3,0), v along (1,0): last three slopes >= " + fix(worst));
}

void gradient_integral(Outcome& out) {
  // Target: sigma_{n-1} tau (n - alpha) C^alpha / alpha, agreement 1e-6.
  // Also printed: the polar antiderivative of |grad L_alpha| itself, which
  // carries C^{alpha-1} / (alpha - 1).
  for (int n : {2, 3})
    for (double frac : {0.6, 0.8})
      for (double C : {0.5, 1.0, 2.0}) {
        const double alpha = frac * n;
        auto g = grad_integral_check(alpha, n, C);
        const double target = unit_sphere_area(n) * tau(alpha, n) * (n - alpha) * std::pow(C, alpha) / alpha;
        const double err = rel_diff(g.quadrature, target);
        std::ostringstream s;
        s << "n=" << n << " alpha=" << fix(alpha, 1) << " C=" << fix(C, 1) << ": quadrature " << sci(g.quadrature, 9)
          << " vs target " << sci(target, 9) << " rel " << sci(err) << "; vs antiderivative "
          << sci(g.closed_form, 9) << " rel " << sci(g.relative_error);
        out.check(err <= 1e-6, s.str());
      }
  try {
    auto g = grad_integral_check(1.0, 2, 1.0);
    out.check(rel_diff(g.quadrature, 1.0) <= 1e-6, "n=2 alpha=1 C=1: quadrature " + sci(g.quadrature, 9) + " vs 1.0");
  } catch (const ConvergenceError& e) {
    out.check(false, std::string("n=2 alpha=1 C=1: target 1.0, quadrature ") + e.what());
  }
}

void scaling_identity(Outcome& out) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Ctx {
    int n;
    double alpha, tol;
    int triples;
  };
  for (const auto& c : {Ctx{2, 1.5, 1e-9, 8}, Ctx{2, 1.2, 1e-9, 4}, Ctx{3, 2.0, 1e-7, 3}}) {
    const LemmaContext ctx(c.alpha, c.n);
    double worst = 0.0;
    for (int trial = 0; trial < c.triples; ++trial) {
      // admissible: t > |x|/7 > 2|y|/7
      const double t = 0.2 + 2.0 * unit(rng);
      const double xr = t * (0.1 + 6.8 * unit(rng));
      const double yr = xr * (0.05 + 0.4 * unit(rng));
      std::normal_distribution<double> nd;
      std::vector<double> x(c.n), y(c.n);
      double nx = 0, ny = 0;
      for (int a = 0; a < c.n; ++a) nx += (x[a] = nd(rng)) * x[a], ny += (y[a] = nd(rng)) * y[a];
      for (int a = 0; a < c.n; ++a) x[a] *= xr / std::sqrt(nx), y[a] *= yr / std::sqrt(ny);
      const double base = i11(ctx, x, y, t, c.tol);
      for (double lambda : {0.5, 2.0, 4.0}) {
        std::vector<double> lx(x), ly(y);
        for (int a = 0; a < c.n; ++a) lx[a] *= lambda, ly[a] *= lambda;
        const double scaled = i11(ctx, lx, ly, lambda * t, c.tol) * std::pow(lambda, 2.0 * c.n);
        worst = std::max(worst, rel_diff(scaled, base));
      }
    }
    out.check(worst <= 2 * c.tol, "n=" + std::to_string(c.n) + " alpha=" + fix(c.alpha, 1) + ", " +
                                      std::to_string(c.triples) + " random triples x lambda in {0.5,2,4}: worst " +
                                      sci(worst) + " (tol " + sci(c.tol, 0) + ")");
  }

  // The reduction above is exact by construction (powers of two rescale
  // bitwise), so also integrate in the original variables: w = t z over the
  // disc |w| < t with the dilated kernel t^{-2} G(|.|/t). Triples are chosen so
  // 2|y| < |x - w| < 6t holds on the whole disc and both kernel arguments stay
  // beyond t, where G is smooth (it is only C^1 across the unit sphere).
  const LemmaContext ctx(1.5, 2);
  const auto& G = ctx.profile();
  const auto rule = quad::gauss_legendre(40);
  constexpr int kAngles = 256;
  auto physical = [&](const std::vector<double>& x, const std::vector<double>& y, double t) {
    double total = 0.0;
    for (int a = 0; a < kAngles; ++a) {
      const double th = 2.0 * std::numbers::pi * (a + 0.5) / kAngles;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double r = 0.5 * t * (1.0 + rule.nodes[i]);
        const double wx = r * std::cos(th), wy = r * std::sin(th);
        const double diff = G(std::hypot(x[0] - y[0] - wx, x[1] - y[1] - wy) / t) / (t * t) -
                            G(std::hypot(x[0] - wx, x[1] - wy) / t) / (t * t);
        total += 0.5 * t * rule.weights[i] * r * diff * diff;
      }
    }
    // dz = t^{-2} dw
    return total * 2.0 * std::numbers::pi / kAngles / (t * t);
  };
  double worst = 0.0;
  int evaluated = 0;
  for (int trial = 0; trial < 4; ++trial) {
    const double t = 0.2 + 2.0 * unit(rng);
    const double xr = t * (2.2 + 2.6 * unit(rng));
    const double yr = (xr - 2.0 * t) * (0.05 + 0.4 * unit(rng));
    const double ax = 2.0 * std::numbers::pi * unit(rng), ay = 2.0 * std::numbers::pi * unit(rng);
    const std::vector<double> x{xr * std::cos(ax), xr * std::sin(ax)}, y{yr * std::cos(ay), yr * std::sin(ay)};
    for (double lambda : {1.0, 0.5, 2.0, 4.0}) {
      const std::vector<double> lx{lambda * x[0], lambda * x[1]}, ly{lambda * y[0], lambda * y[1]};
      worst = std::max(worst, rel_diff(i11(ctx, lx, ly, lambda * t, 1e-10), physical(lx, ly, lambda * t)));
      ++evaluated;
    }
  }
  out.check(worst <= 1e-9, "n=2 alpha=1.5, " + std::to_string(evaluated) +
                               " scaled triples against a product-rule integral in the original variables: worst " +
                               sci(worst) + " (tol 1e-09)");
}

void equivalence_band(Outcome& out) {
  const double alpha = 1.5;
  const std::vector<int> ks{1};
  // translations by multiples of N/8 in each axis, N/2-step family included
  {
    Field f = atom(256);
    auto scales = ScaleGrid::make(f.grid(), 2.0 / 256, 0.5, 4);
    std::vector<double> ratios;
    for (int i = 0; i < 8; ++i) {
      std::vector<int> s{(i * 256 / 8) % 256, (i * 512 / 8) % 256};
      ratios.push_back(*equivalence_report(translate(f, s), alpha, ks, scales).ratio_thm1);
    }
    for (std::vector<int> s : {std::vector<int>{128, 0}, {0, 128}, {128, 128}, {37, 201}})
      ratios.push_back(*equivalence_report(translate(f, s), alpha, ks, scales).ratio_thm1);
    double spread = 0.0;
    for (double r : ratios) spread = std::max(spread, rel_diff(r, ratios[0]));
    out.check(spread <= 1e-12, std::to_string(ratios.size()) + " translates: ratio " + fix(ratios[0], 6) +
                                   ", max relative spread " + sci(spread));
  }
  {
    Field f = atom(256);
    auto sf = ScaleGrid::make(f.grid(), 2.0 / 256, 0.25, 4);
    Field g = dilate_by_two(f);
    auto sg = ScaleGrid::make(g.grid(), 1.0 / 256, 0.125, 4);
    const double rf = *equivalence_report(f, alpha, ks, sf).ratio_thm1;
    const double rg = *equivalence_report(g, alpha, ks, sg).ratio_thm1;
    const double change = std::max(rf, rg) / std::min(rf, rg);
    out.check(change < 2.0, "dilation by 2: ratio " + fix(rf) + " -> " + fix(rg) + ", factor " + fix(change));
  }
  std::vector<int> sizes{128, 256, 512};
  std::vector<double> ratio, atom_u, noise_u;
  for (int N : sizes) {
    GridSpec g(2, N, 1.0);
    auto scales = ScaleGrid::make(g, 2.0 * g.spacing(), 1.0 / 6, 4);
    auto ra = equivalence_report(mean_zero_atom(g, std::vector<double>{}, 0.125), alpha, ks, scales);
    ratio.push_back(*ra.ratio_thm1);
    atom_u.push_back(ra.u_alpha_l1);
    // amplitude |xi|^{-2}: smoothness index 2 - n/2 = 1 < alpha
    noise_u.push_back(lp_norm(u_alpha(spectral_noise(g, 2.0, 7), alpha, scales).result, 1.0));
  }
  const double d1 = std::abs(ratio[1] - ratio[0]) / ratio[1], d2 = std::abs(ratio[2] - ratio[1]) / ratio[2];
  out.check(d2 < d1, "refinement N=128,256,512: ratio " + fix(ratio[0]) + ", " + fix(ratio[1]) + ", " +
                         fix(ratio[2]) + "; successive changes " + sci(d1) + " > " + sci(d2));
  out.check(noise_u[1] > noise_u[0] && noise_u[2] > noise_u[1],
            "spectral noise s=2: ||U f||_1 = " + fix(noise_u[0], 2) + ", " + fix(noise_u[1], 2) + ", " +
                fix(noise_u[2], 2) + " (growth x" + fix(noise_u[1] / noise_u[0], 3) + ", x" +
                fix(noise_u[2] / noise_u[1], 3) + ")");
  const double a1 = std::abs(atom_u[1] - atom_u[0]) / atom_u[1], a2 = std::abs(atom_u[2] - atom_u[1]) / atom_u[2];
  out.check(a2 < a1 && atom_u[2] / atom_u[0] < 1.1,
            "atom: ||U f||_1 = " + fix(atom_u[0]) + ", " + fix(atom_u[1]) + ", " + fix(atom_u[2]) +
                " (changes " + sci(a1) + ", " + sci(a2) + ")");
}

void kernel_consistency(Outcome& out) {
  const std::vector<int> ks{1, 2, 3};
  for (int N : {256, 512}) {
    GridSpec g(2, N, 1.0);
    auto scales = ScaleGrid::make(g, 2.0 * g.spacing(), 1.0 / 6, 4, 3);
    auto r = equivalence_report(mean_zero_atom(g, std::vector<double>{}, 0.125), 1.5, ks, scales);
    double lo = INFINITY, hi = 0.0;
    std::string values;
    for (const auto& v : r.ratio_thm2) {
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
      values += (values.empty() ? "" : ", ") + fix(*v);
    }
    out.check(hi / lo <= 5.0, "N=" + std::to_string(N) + " k=1,2,3: ratios " + values + "; max/min " + fix(hi / lo));
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SQFN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void reproducibility(Outcome& out) {
  using Json = nlohmann::json;
  const auto dir = fs::temp_directory_path() / ("sqfn_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  struct Job {
    std::string command, name;
    Json config;
  };
  const std::vector<Job> jobs{
      {"gen", "gen_noise", {{"grid", {{"samples_per_axis", 64}}}, {"recipe", {{"kind", "spectral"}, {"seed", 11}}}, {"csv", true}}},
      {"squarefn", "sq_atom", {{"grid", {{"samples_per_axis", 128}}}, {"kernel", {{"kind", "binomial"}, {"k", 2}}}, {"check_identity", true}, {"threads", 2}}},
      {"squarefn", "sq_bump", {{"grid", {{"samples_per_axis", 64}}}, {"recipe", {{"kind", "bump"}, {"beta", 1.0}, {"width", 0.2}}}, {"alpha", 1.2}}},
      {"equiv", "eq_trans", {{"grid", {{"samples_per_axis", 64}}}, {"family", {{"kind", "translations"}, {"count", 4}}}}},
      {"equiv", "eq_dil", {{"grid", {{"samples_per_axis", 64}}}, {"family", {{"kind", "dilation"}}}, {"scales", {{"t_max", 0.125}}}, {"k_list", {1, 2}}}},
      {"lemma", "lemma", {{"sampling", {{"bases", 3}, {"ladder", 4}, {"seed", 5}}}, {"threads", 2}}},
  };
  for (const auto& job : jobs) {
    const auto cfg = dir / (job.name + ".json");
    std::ofstream(cfg) << job.config.dump(2);
    const auto first = dir / job.name, second = dir / (job.name + "_rerun");
    const int c1 = run_cli(job.command + " --config " + cfg.string() + " --out " + first.string());
    const int c2 = run_cli(job.command + " --config " + (first / "run_config.json").string() + " --out " + second.string());
    bool same = c1 == 0 && c2 == 0;
    std::size_t files = 0;
    if (same) {
      for (const auto& e : fs::directory_iterator(first)) {
        ++files;
        same = same && fs::exists(second / e.path().filename()) && slurp(e.path()) == slurp(second / e.path().filename());
      }
    }
    out.check(same, job.command + " (" + job.name + "): exit " + std::to_string(c1) + "/" + std::to_string(c2) + ", " +
                        std::to_string(files) + " files byte-identical on re-run from run_config.json");
  }
  fs::remove_all(dir);
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "trivial-kernel identities", trivial_kernels},
      {2, "k=2 kernel-path identity", binomial_identity},
      {3, "single-harmonic symbol oracle", harmonic_oracle},
      {4, "dilation law", dilation_law},
      {5, "two-point bound scan", bound_scan_criterion},
      {6, "gradient-integral identity", gradient_integral},
      {7, "dimensionless scaling identity", scaling_identity},
      {8, "norm-equivalence band", equivalence_band},
      {9, "binomial-kernel consistency", kernel_consistency},
      {10, "CLI reproducibility", reproducibility},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: " << argv[0] << " [--only N]\n";
      return 2;
    }
  }
  int failures = 0, ran = 0;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    ++ran;
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.check(false, std::string("unexpected exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << std::setw(2) << c.id << " " << (out.pass ? "PASS" : "FAIL") << "  " << c.name
              << "  (" << fix(secs, 1) << " s)\n"
              << out.log.str() << std::flush;
    if (!out.pass) ++failures;
  }
  if (ran == 0) {
    std::cerr << "no criterion " << only << "\n";
    return 2;
  }
  return failures ? 1 : 0;
}
