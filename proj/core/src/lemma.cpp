#include "sqfn/lemma.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "sqfn/errors.hpp"
#include "sqfn/field.hpp"
#include "sqfn/parallel.hpp"
#include "sqfn/quadrature.hpp"

namespace sqfn {

namespace {

constexpr double kOuterRadius = 6.0;
constexpr double kAdmissibleRadius = 7.0;

using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Orthonormal frame whose first vector is u/|u| (e_1 when u = 0).
std::vector<Vec> frame_along(std::span<const double> u) {
  const std::size_t n = u.size();
  std::vector<Vec> frame;
  Vec first(n, 0.0);
  const double r = norm(u);
  if (r > 0.0) {
    for (std::size_t i = 0; i < n; ++i) first[i] = u[i] / r;
  } else {
    first[0] = 1.0;
  }
  frame.push_back(first);
  // Gram-Schmidt against the coordinate axes, most orthogonal first.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(first[a]) < std::abs(first[b]); });
  for (std::size_t axis : order) {
    if (frame.size() == n) break;
    Vec e(n, 0.0);
    e[axis] = 1.0;
    for (const auto& f : frame) {
      const double p = dot(e, f);
      for (std::size_t i = 0; i < n; ++i) e[i] -= p * f[i];
    }
    const double len = norm(e);
    if (len < 1e-8) continue;
    for (double& c : e) c /= len;
    frame.push_back(e);
  }
  if (n == 2) {
    // Keep a right-handed frame so joint rotations map frames to frames.
    frame[1] = {-first[1], first[0]};
  }
  return frame;
}

// Chord of B_0 along z = u - rho e for a direction at polar angle gamma from
// u: rho in (rho_lo, rho_hi) intersected with (2|v|, 6).
struct Chord {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return !(hi > lo); }
};

Chord chord(double u_len, double cos_gamma, double v_len) {
  const double b = u_len * cos_gamma;
  const double disc = b * b - u_len * u_len + 1.0;
  if (disc <= 0.0) return {};
  const double s = std::sqrt(disc);
  return {std::max({b - s, 2.0 * v_len, 0.0}), std::min(b + s, kOuterRadius)};
}

// Angles gamma in (0, pi) where the chord endpoints meet rho = R.
void crossing_angles(double u_len, double R, std::vector<double>& out) {
  if (u_len <= 0.0 || R <= 0.0) return;
  const double c = (u_len * u_len + R * R - 1.0) / (2.0 * R * u_len);
  if (c > -1.0 && c < 1.0) out.push_back(std::acos(c));
}

struct Integrator {
  const SmoothedRieszTable& G;
  int n;
  double u_len;
  double v_len;
  Vec v;
  std::vector<Vec> frame;
  double inner_rel;
  double inner_abs;
  // Largest relative shortfall of a nested integral that missed its target.
  double nested_shortfall = 0.0;

  void note(const quad::Result& r, double target_rel, double target_abs) {
    if (r.converged) return;
    const double scale = std::max(std::abs(r.value), target_abs / std::max(target_rel, 1e-300));
    if (scale > 0.0) nested_shortfall = std::max(nested_shortfall, r.error / scale);
  }

  // Radial integral for unit direction e.
  double radial(std::span<const double> e) {
    const double cg = dot(e, frame[0]);
    Chord c = chord(u_len, cg, v_len);
    if (c.empty()) return 0.0;
    const double ev = dot(e, v);
    double breaks[3];
    std::size_t nb = 0;
    breaks[nb++] = 1.0;
    const double disc = ev * ev - v_len * v_len + 1.0;
    if (disc > 0.0) {
      const double s = std::sqrt(disc);
      breaks[nb++] = ev - s;
      breaks[nb++] = ev + s;
    }
    auto integrand = [&](double rho) {
      // |rho e - v|^2 = rho^2 - 2 rho e.v + |v|^2
      const double shifted = std::sqrt(std::max(0.0, rho * rho - 2.0 * rho * ev + v_len * v_len));
      const double diff = G(shifted) - G(rho);
      return diff * diff * std::pow(rho, n - 1);
    };
    quad::Options opt;
    opt.rel_tol = inner_rel;
    opt.abs_tol = inner_abs;
    opt.max_cells = 400;
    auto r = quad::integrate(integrand, c.lo, c.hi, std::span<const double>(breaks, nb), opt);
    note(r, opt.rel_tol, opt.abs_tol);
    return r.value;
  }

  Vec direction2(double phi) const {
    const double cp = std::cos(phi), sp = std::sin(phi);
    return {cp * frame[0][0] + sp * frame[1][0], cp * frame[0][1] + sp * frame[1][1]};
  }

  Vec direction3(double psi, double phi) const {
    const double cs = std::cos(psi), ss = std::sin(psi);
    const double cp = std::cos(phi), sp = std::sin(phi);
    Vec e(3);
    for (std::size_t i = 0; i < 3; ++i) e[i] = cs * frame[0][i] + ss * (cp * frame[1][i] + sp * frame[2][i]);
    return e;
  }

  quad::Result integrate(double outer_rel) {
    const double gamma_max = (u_len < 1.0) ? std::numbers::pi : std::asin(std::min(1.0, 1.0 / u_len));
    std::vector<double> angles;
    crossing_angles(u_len, 2.0 * v_len, angles);
    crossing_angles(u_len, kOuterRadius, angles);
    std::vector<double> cuts;
    quad::Options opt;
    opt.rel_tol = outer_rel;
    opt.max_cells = 2000;
    quad::Result total;
    total.converged = true;
    auto add = [&](const quad::Result& r) {
      total.value += r.value;
      total.error += r.error;
      total.cells += r.cells;
      total.converged = total.converged && r.converged;
    };

    if (n == 2) {
      cuts.push_back(-gamma_max);
      for (double a : angles)
        if (a < gamma_max) {
          cuts.push_back(a);
          cuts.push_back(-a);
        }
      cuts.push_back(gamma_max);
      std::sort(cuts.begin(), cuts.end());
      auto f = [&](double phi) {
        auto e = direction2(phi);
        return radial(e);
      };
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) add(quad::integrate_cosine_mapped(f, cuts[i], cuts[i + 1], opt));
    } else {
      cuts.push_back(0.0);
      for (double a : angles)
        if (a < gamma_max) cuts.push_back(a);
      cuts.push_back(gamma_max);
      std::sort(cuts.begin(), cuts.end());
      quad::Options mid = opt;
      mid.rel_tol = outer_rel * 0.25;
      mid.abs_tol = inner_abs;
      mid.max_cells = 400;
      auto f = [&](double psi) {
        const double s = std::sin(psi);
        if (s == 0.0) return 0.0;
        auto g = [&](double phi) {
          auto e = direction3(psi, phi);
          return radial(e);
        };
        auto r = quad::integrate(g, 0.0, 2.0 * std::numbers::pi, mid);
        note(r, mid.rel_tol, mid.abs_tol);
        return r.value * s;
      };
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) add(quad::integrate_cosine_mapped(f, cuts[i], cuts[i + 1], opt));
    }
    return total;
  }
};

// Uniform double in [0, 1) from (seed, stream, index), same mixer as the
// noise generator.
double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  auto mix = [](std::uint64_t x) {
    std::uint64_t z = x + 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  const std::uint64_t h = mix(mix(mix(seed) ^ stream) ^ index);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

Vec random_direction(int n, std::uint64_t seed, std::uint64_t stream) {
  Vec d(static_cast<std::size_t>(n));
  for (std::uint64_t attempt = 0;; ++attempt) {
    for (int i = 0; i < n; ++i) {
      // Box-Muller normal deviates.
      const double a = uniform01(seed, stream, attempt * 64 + 2 * i);
      const double b = uniform01(seed, stream, attempt * 64 + 2 * i + 1);
      d[static_cast<std::size_t>(i)] =
          std::sqrt(-2.0 * std::log(1.0 - a)) * std::cos(2.0 * std::numbers::pi * b);
    }
    const double len = norm(d);
    if (len > 1e-6) {
      for (double& c : d) c /= len;
      return d;
    }
  }
}

void require_lemma_dimension(int n) {
  if (n != 2 && n != 3) throw ParameterError("F(u, v) quadrature supports n = 2 and n = 3, got " + std::to_string(n));
}

}  // namespace

LemmaContext::LemmaContext(double alpha, int n) : LemmaContext(alpha, n, SmoothedRieszTable::Resolution{}) {}

LemmaContext::LemmaContext(double alpha, int n, SmoothedRieszTable::Resolution resolution)
    : alpha_(alpha), n_(n), table_((require_lemma_dimension(n), alpha), n, resolution) {}

bool admissible(std::span<const double> u, std::span<const double> v) {
  const double ul = norm(u), vl = norm(v);
  return ul < kAdmissibleRadius && vl > 0.0 && vl < 0.5 * ul;
}

FValue f_dimensionless(const LemmaContext& ctx, std::span<const double> u, std::span<const double> v, double tol) {
  const int n = ctx.dimension();
  if (static_cast<int>(u.size()) != n || static_cast<int>(v.size()) != n)
    throw ParameterError("u and v must have dimension " + std::to_string(n));
  if (!(tol >= 1e-10 && tol <= 1e-4)) throw ParameterError("tolerance must lie in [1e-10, 1e-4]");
  const double u_len = norm(u);
  const double v_len = norm(v);
  if (v_len == 0.0) throw ParameterError("v must be nonzero");

  FValue out;
  if (2.0 * v_len >= u_len + 1.0 || u_len - 1.0 >= kOuterRadius) {
    out.empty_region = true;
    return out;
  }

  Integrator integ{ctx.profile(), n, u_len, v_len, Vec(v.begin(), v.end()), frame_along(u), 1e-3, 0.0};
  // Coarse pass sets the absolute floor of the inner integrals.
  auto coarse = integ.integrate(1e-3);
  if (coarse.value <= 0.0) {
    out.empty_region = coarse.value == 0.0;
    return out;
  }
  const double outer_measure = (n == 2) ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
  integ.inner_rel = 0.1 * tol;
  integ.inner_abs = 0.1 * tol * coarse.value / outer_measure;
  integ.nested_shortfall = 0.0;
  const double outer_rel = n == 2 ? 0.7 * tol : 0.5 * tol;
  auto fine = integ.integrate(outer_rel);
  out.value = fine.value;
  // Nested integrals that met their targets contribute at most their declared
  // relative tolerance plus the absolute floor, relative to the total.
  double nested = integ.inner_rel + integ.inner_abs * outer_measure / fine.value;
  if (n == 3) nested += 0.25 * outer_rel;
  out.achieved_tol = fine.error / fine.value + nested + integ.nested_shortfall;
  if (!fine.converged || out.achieved_tol > tol) {
    std::ostringstream msg;
    msg << "F(u, v) quadrature reached relative accuracy " << out.achieved_tol << ", requested " << tol;
    throw ConvergenceError(msg.str(), out.achieved_tol);
  }
  return out;
}

double i11(const LemmaContext& ctx, std::span<const double> x, std::span<const double> y, double t, double tol) {
  if (!(t > 0.0)) throw ParameterError("t must be positive");
  const int n = ctx.dimension();
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
    throw ParameterError("x and y must have dimension " + std::to_string(n));
  Vec u(x.begin(), x.end()), v(y.begin(), y.end());
  for (double& c : u) c /= t;
  for (double& c : v) c /= t;
  return std::pow(t, -2.0 * n) * f_dimensionless(ctx, u, v, tol).value;
}

BoundScanReport bound_scan(const LemmaContext& ctx, const SampleSpec& spec, double tol, int threads) {
  const int n = ctx.dimension();
  if (spec.bases < 0 || spec.ladder < 0) throw ParameterError("sample counts must be nonnegative");
  if (!(spec.u_min > 0.0 && spec.u_max < kAdmissibleRadius && spec.u_min <= spec.u_max))
    throw ParameterError("base radii must satisfy 0 < u_min <= u_max < 7");

  BoundScanReport report;
  report.alpha = ctx.alpha();
  report.n = n;
  report.tol = tol;
  report.seed = spec.seed;

  for (int b = 0; b < spec.bases; ++b) {
    const double radius = spec.u_min + (spec.u_max - spec.u_min) * uniform01(spec.seed, 1, static_cast<std::uint64_t>(b));
    Vec u = random_direction(n, spec.seed, 1000 + 2 * static_cast<std::uint64_t>(b));
    for (double& c : u) c *= radius;
    Vec dir = random_direction(n, spec.seed, 1001 + 2 * static_cast<std::uint64_t>(b));
    for (int j = 1; j <= spec.ladder; ++j) {
      ScanSample s;
      s.u = u;
      s.v = dir;
      const double vl = radius * std::ldexp(0.5, -j);
      for (double& c : s.v) c *= vl;
      s.base = b;
      s.rung = j;
      report.samples.push_back(std::move(s));
    }
  }
  for (const auto& [u, v] : spec.custom) {
    ScanSample s;
    s.u = u;
    s.v = v;
    if (static_cast<int>(u.size()) != n || static_cast<int>(v.size()) != n) {
      s.status = "skipped: dimension mismatch";
    } else if (!admissible(u, v)) {
      s.status = "skipped: inadmissible (needs |u| < 7 and 0 < |v| < |u|/2)";
    }
    report.samples.push_back(std::move(s));
  }

  parallel_for(report.samples.size(), threads, [&](std::size_t i) {
    auto& s = report.samples[i];
    if (s.status != "ok") return;
    try {
      auto F = f_dimensionless(ctx, s.u, s.v, tol);
      s.F = F.value;
      s.achieved_tol = F.achieved_tol;
      s.empty_region = F.empty_region;
      const double vl = norm(s.v);
      s.ratio = s.F / (vl * vl);
    } catch (const Error& e) {
      s.status = std::string("failed: ") + e.what();
    }
  });

  report.min_tail_slope = std::numeric_limits<double>::infinity();
  for (const auto& s : report.samples) {
    if (s.status == "ok") {
      ++report.evaluated;
      report.sup_ratio = std::max(report.sup_ratio, s.ratio);
      report.max_achieved_tol = std::max(report.max_achieved_tol, s.achieved_tol);
    } else if (s.status.rfind("skipped", 0) == 0) {
      ++report.skipped;
    } else {
      ++report.failed;
    }
  }
  for (int b = 0; b < spec.bases; ++b) {
    LadderSlope ladder;
    ladder.base = b;
    std::vector<const ScanSample*> rungs;
    for (const auto& s : report.samples)
      if (s.base == b) rungs.push_back(&s);
    bool complete = true;
    for (const auto* s : rungs) {
      ladder.radii.push_back(norm(s->v));
      complete = complete && s->status == "ok" && s->F > 0.0;
    }
    if (complete) {
      for (std::size_t j = 0; j + 1 < rungs.size(); ++j)
        ladder.slopes.push_back(std::log(rungs[j]->F / rungs[j + 1]->F) /
                                std::log(ladder.radii[j] / ladder.radii[j + 1]));
    }
    ladder.tail_min_slope = std::numeric_limits<double>::quiet_NaN();
    if (!ladder.slopes.empty()) {
      const std::size_t from = ladder.slopes.size() > 3 ? ladder.slopes.size() - 3 : 0;
      ladder.tail_min_slope = *std::min_element(ladder.slopes.begin() + static_cast<std::ptrdiff_t>(from),
                                                ladder.slopes.end());
      report.min_tail_slope = std::min(report.min_tail_slope, ladder.tail_min_slope);
    }
    report.ladders.push_back(std::move(ladder));
  }
  if (!std::isfinite(report.min_tail_slope)) report.min_tail_slope = std::numeric_limits<double>::quiet_NaN();
  return report;
}

GradIntegralCheck grad_integral_check(double alpha, int n, double radius) {
  if (n < 2 || n > 5) throw ParameterError("gradient integral check supports 2 <= n <= 5");
  if (!(radius > 0.0)) throw ParameterError("radius must be positive");
  GradIntegralCheck out;
  out.alpha = alpha;
  out.n = n;
  out.radius = radius;
  const double front = unit_sphere_area(n) * tau(alpha, n) * (n - alpha);
  out.potential_form = front * std::pow(radius, alpha) / alpha;
  out.closed_form = alpha > 1.0 ? front * std::pow(radius, alpha - 1.0) / (alpha - 1.0)
                                : std::numeric_limits<double>::infinity();
  out.in_theorem_range = alpha > 0.5 * n && 0.5 * n >= 1.0;

  const auto radial = quad::gauss_legendre(20);
  const auto angular = quad::gauss_legendre(n == 2 ? 16 : 12);

  // Product rule over hyperspherical angles: theta_1..theta_{n-2} in [0, pi]
  // with weight sin^{n-1-i}, theta_{n-1} in [0, 2 pi].
  struct Direction {
    Vec e;
    double weight;
  };
  std::vector<Direction> directions{{Vec{}, 1.0}};
  for (int level = 0; level < n - 1; ++level) {
    const bool last = level == n - 2;
    const double span = last ? 2.0 * std::numbers::pi : std::numbers::pi;
    std::vector<Direction> next;
    for (const auto& d : directions) {
      for (std::size_t q = 0; q < angular.nodes.size(); ++q) {
        const double theta = 0.5 * span * (angular.nodes[q] + 1.0);
        double w = d.weight * 0.5 * span * angular.weights[q];
        if (!last) w *= std::pow(std::sin(theta), n - 2 - level);
        next.push_back({d.e, w});
        next.back().e.push_back(theta);
      }
    }
    directions = std::move(next);
  }
  std::vector<Direction> units;
  for (const auto& d : directions) {
    Vec e(static_cast<std::size_t>(n));
    double prod = 1.0;
    for (int i = 0; i < n - 1; ++i) {
      const double th = d.e[static_cast<std::size_t>(i)];
      e[static_cast<std::size_t>(i)] = prod * std::cos(th);
      prod *= std::sin(th);
    }
    e[static_cast<std::size_t>(n - 1)] = prod;
    units.push_back({e, d.weight});
  }

  auto shell = [&](double lo, double hi) {
    double sum = 0.0;
    Vec w(static_cast<std::size_t>(n));
    for (std::size_t q = 0; q < radial.nodes.size(); ++q) {
      const double rho = 0.5 * (lo + hi) + 0.5 * (hi - lo) * radial.nodes[q];
      double ang = 0.0;
      for (const auto& d : units) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = rho * d.e[i];
        ang += d.weight * grad_riesz_magnitude(alpha, n, w);
      }
      sum += 0.5 * (hi - lo) * radial.weights[q] * ang * std::pow(rho, n - 1);
    }
    return sum;
  };

  double total = 0.0;
  double prev = 0.0, prev_ratio = 0.0;
  constexpr int kMaxShells = 4000;
  for (int j = 0; j < kMaxShells; ++j) {
    const double hi = std::ldexp(radius, -j);
    const double c = shell(0.5 * hi, hi);
    total += c;
    out.shells = j + 1;
    if (j >= 1) {
      const double ratio = c / prev;
      if (!(ratio < 1.0)) {
        std::ostringstream msg;
        msg << "gradient integral diverges at the origin: shell ratio " << ratio << " >= 1 for alpha=" << alpha;
        throw ConvergenceError(msg.str(), std::numeric_limits<double>::infinity());
      }
      if (j >= 2 && std::abs(ratio - prev_ratio) <= 1e-10 * ratio) {
        total += c * ratio / (1.0 - ratio);
        out.shell_ratio = ratio;
        out.quadrature = total;
        out.relative_error = std::abs(out.quadrature - out.closed_form) / std::abs(out.closed_form);
        out.potential_form_relative_error =
            std::abs(out.quadrature - out.potential_form) / std::abs(out.potential_form);
        return out;
      }
      prev_ratio = ratio;
    }
    prev = c;
  }
  throw ConvergenceError("gradient integral shell series did not settle", 1.0);
}

std::string to_json(const BoundScanReport& r, std::span<const GradIntegralCheck> grad_checks) {
  nlohmann::ordered_json j;
  j["alpha"] = r.alpha;
  j["n"] = r.n;
  j["tol"] = r.tol;
  j["seed"] = r.seed;
  j["evaluated"] = r.evaluated;
  j["skipped"] = r.skipped;
  j["failed"] = r.failed;
  j["sup_ratio"] = r.sup_ratio;
  if (std::isfinite(r.min_tail_slope))
    j["min_tail_slope"] = r.min_tail_slope;
  else
    j["min_tail_slope"] = nullptr;
  j["max_achieved_tol"] = r.max_achieved_tol;
  auto samples = nlohmann::ordered_json::array();
  for (const auto& s : r.samples) {
    nlohmann::ordered_json o;
    o["u"] = s.u;
    o["v"] = s.v;
    o["base"] = s.base;
    o["rung"] = s.rung;
    o["status"] = s.status;
    o["F"] = s.F;
    o["ratio"] = s.ratio;
    o["achieved_tol"] = s.achieved_tol;
    o["empty_region"] = s.empty_region;
    samples.push_back(std::move(o));
  }
  j["samples"] = std::move(samples);
  auto ladders = nlohmann::ordered_json::array();
  for (const auto& l : r.ladders) {
    nlohmann::ordered_json o;
    o["base"] = l.base;
    o["radii"] = l.radii;
    o["slopes"] = l.slopes;
    if (std::isfinite(l.tail_min_slope))
      o["tail_min_slope"] = l.tail_min_slope;
    else
      o["tail_min_slope"] = nullptr;
    ladders.push_back(std::move(o));
  }
  j["ladders"] = std::move(ladders);
  auto grads = nlohmann::ordered_json::array();
  for (const auto& g : grad_checks) {
    nlohmann::ordered_json o;
    o["alpha"] = g.alpha;
    o["n"] = g.n;
    o["radius"] = g.radius;
    o["quadrature"] = g.quadrature;
    o["closed_form"] = g.closed_form;
    o["relative_error"] = g.relative_error;
    o["potential_form"] = g.potential_form;
    o["potential_form_relative_error"] = g.potential_form_relative_error;
    o["shell_ratio"] = g.shell_ratio;
    o["shells"] = g.shells;
    o["in_theorem_range"] = g.in_theorem_range;
    grads.push_back(std::move(o));
  }
  j["grad_checks"] = std::move(grads);
  return j.dump(2);
}

void write_scan_csv(const BoundScanReport& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FieldIoError(FieldIoError::Kind::Open, "cannot open " + path.string() + " for writing");
  static constexpr const char* axes = "xyzwv";
  for (int i = 0; i < r.n; ++i) out << (i ? "," : "") << 'u' << axes[i];
  for (int i = 0; i < r.n; ++i) out << ",v" << axes[i];
  out << ",F,ratio\n";
  for (const auto& s : r.samples) {
    if (s.status != "ok") continue;
    for (std::size_t i = 0; i < s.u.size(); ++i) out << (i ? "," : "") << format_real(s.u[i]);
    for (double c : s.v) out << ',' << format_real(c);
    out << ',' << format_real(s.F) << ',' << format_real(s.ratio) << '\n';
  }
}

}  // namespace sqfn
