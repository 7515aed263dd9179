#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <span>
#include <vector>

namespace sqfn::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes by Newton iteration on the three-term recurrence.
inline GaussRule gauss_legendre(int points) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(points));
  rule.weights.resize(static_cast<std::size_t>(points));
  for (int i = 0; i < (points + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= points; ++k) {
        double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    auto lo = static_cast<std::size_t>(i);
    auto hi = static_cast<std::size_t>(points - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  return rule;
}

inline const GaussRule& default_rule() {
  static const GaussRule rule = gauss_legendre(10);
  return rule;
}

template <class F>
double gauss_apply(const GaussRule& rule, F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

struct Result {
  double value = 0.0;
  /// Sum over cells of |coarse - refined| estimates.
  double error = 0.0;
  int cells = 0;
  bool converged = false;
};

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_cells = 4000;
};

/// Adaptive Gauss quadrature over [a, b] split at `breakpoints`.
///
/// Each cell carries a coarse rule on the whole cell and the same rule on its
/// two halves; the difference is the cell's error estimate. The cell with the
/// largest estimate is bisected until the total estimate drops below
/// max(abs_tol, rel_tol * |value|).
template <class F>
Result integrate(F&& f, double a, double b, std::span<const double> breakpoints, const Options& opt = {}) {
  const GaussRule& rule = default_rule();
  struct Cell {
    double a, b, left, right, error;
    bool operator<(const Cell& o) const { return error < o.error; }
  };
  std::vector<double> cuts{a};
  for (double p : breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  auto make_cell = [&](double lo, double hi, double whole) {
    double mid = 0.5 * (lo + hi);
    double l = gauss_apply(rule, f, lo, mid);
    double r = gauss_apply(rule, f, mid, hi);
    return Cell{lo, hi, l, r, std::abs(whole - (l + r))};
  };

  std::priority_queue<Cell> cells;
  double value = 0.0, error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    Cell c = make_cell(cuts[i], cuts[i + 1], gauss_apply(rule, f, cuts[i], cuts[i + 1]));
    value += c.left + c.right;
    error += c.error;
    cells.push(c);
  }
  Result res;
  while (!cells.empty()) {
    if (error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) {
      res.converged = true;
      break;
    }
    if (static_cast<int>(cells.size()) >= opt.max_cells) break;
    Cell c = cells.top();
    double mid = 0.5 * (c.a + c.b);
    // Cells narrower than rounding resolution cannot be refined further.
    if (!(mid > c.a && mid < c.b) || (c.b - c.a) < 1e-14 * std::max(1.0, std::abs(c.a))) {
      res.converged = error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value)) * 10.0;
      break;
    }
    cells.pop();
    Cell l = make_cell(c.a, mid, c.left);
    Cell r = make_cell(mid, c.b, c.right);
    value += (l.left + l.right + r.left + r.right) - (c.left + c.right);
    error += l.error + r.error - c.error;
    cells.push(l);
    cells.push(r);
  }
  if (cells.empty()) res.converged = true;
  // Re-sum from the cells for a value free of running-update drift.
  double sum = 0.0, err = 0.0;
  res.cells = static_cast<int>(cells.size());
  while (!cells.empty()) {
    sum += cells.top().left + cells.top().right;
    err += cells.top().error;
    cells.pop();
  }
  res.value = sum;
  res.error = err;
  return res;
}

template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
  return integrate(std::forward<F>(f), a, b, std::span<const double>{}, opt);
}

/// Integrates over [a, b] after the substitution x = m - r cos(s), s in
/// [0, pi], which removes square-root endpoint behaviour.
template <class F>
Result integrate_cosine_mapped(F&& f, double a, double b, const Options& opt = {}) {
  const double m = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  auto g = [&](double s) { return f(m - r * std::cos(s)) * r * std::sin(s); };
  return integrate(g, 0.0, std::numbers::pi, std::span<const double>{}, opt);
}

}  // namespace sqfn::quad
