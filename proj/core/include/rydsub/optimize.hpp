#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace rydsub {

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
  bool degenerate = false;   // objective flat across the scan
  bool boundary_hit = false; // optimum at an end of the search range
  std::size_t evaluations = 0;
};

inline std::vector<double> log_space(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::pow(10.0, n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  if (n > 0) {
    out.front() = lo;
    out.back() = hi;
  }
  return out;
}

/// Golden-section search for a maximum of f on [a, b].
template <class F>
ScalarOptimum golden_section_maximize(F&& f, double a, double b, double x_tol = 1e-10, int max_iter = 200) {
  constexpr double inv_phi = 0.6180339887498948482;
  ScalarOptimum out;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  out.evaluations = 2;
  for (int it = 0; it < max_iter && (b - a) > x_tol * (1.0 + std::abs(c) + std::abs(d)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++out.evaluations;
  }
  if (fc >= fd) {
    out.x = c;
    out.value = fc;
  } else {
    out.x = d;
    out.value = fd;
  }
  return out;
}

/// Coarse log-spaced scan over [lo, hi] followed by golden-section
/// refinement inside the bracket around the best scan point. The returned
/// value is never below the best scan value.
template <class F>
ScalarOptimum scan_then_golden_maximize(F&& f, double lo, double hi, std::size_t scan_points = 17,
                                        double x_tol = 1e-10, double flat_tol = 1e-12) {
  const auto grid = log_space(lo, hi, scan_points);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid[i]);
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  ScalarOptimum out;
  out.evaluations = grid.size();
  if (*max_it - *min_it <= flat_tol) {
    out.degenerate = true;
    out.boundary_hit = true;
    out.x = hi;
    out.value = values.back();
    return out;
  }
  const auto best = static_cast<std::size_t>(max_it - values.begin());
  const double a = grid[best == 0 ? 0 : best - 1];
  const double b = grid[std::min(best + 1, grid.size() - 1)];
  ScalarOptimum refined = golden_section_maximize(f, a, b, x_tol);
  out.evaluations += refined.evaluations;
  if (refined.value >= *max_it) {
    out.x = refined.x;
    out.value = refined.value;
  } else {
    out.x = grid[best];
    out.value = *max_it;
  }
  const double edge_tol = 1e-6 * (hi - lo);
  out.boundary_hit = out.x - lo <= edge_tol || hi - out.x <= edge_tol;
  return out;
}

} // namespace rydsub
