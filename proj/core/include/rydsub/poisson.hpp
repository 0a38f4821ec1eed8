#pragma once

#include <cmath>
#include <cstddef>

namespace rydsub {

inline constexpr double default_poisson_tail = 1e-12;

/// Poisson probability P(n; mean), evaluated in log space.
inline double poisson_pmf(std::size_t n, double mean) {
  if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
  const double k = static_cast<double>(n);
  return std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
}

/// Number of terms N such that sum_{n >= N} (n + 1) P(n; mean) < tail, which
/// bounds the truncation error of a Poisson average of any f with
/// |f(n)| <= n + 1.
inline std::size_t poisson_terms(double mean, double tail = default_poisson_tail) {
  if (mean == 0.0) return 1;
  std::size_t n = static_cast<std::size_t>(std::ceil(mean)) + 1;
  for (;; ++n) {
    const double k = static_cast<double>(n);
    // sum_{m >= n} (m + 1) P(m) <= (n + 1) P(n) / (1 - mean / (n + 1))^2 for n + 1 > mean
    const double ratio = mean / (k + 1.0);
    if (ratio < 1.0 && (k + 1.0) * poisson_pmf(n, mean) / ((1.0 - ratio) * (1.0 - ratio)) < tail) return n;
  }
}

/// sum_{n=0}^{N-1} P(n; mean) f(n) with N = poisson_terms(mean, tail).
template <class F>
double poisson_average(double mean, F&& f, double tail = default_poisson_tail) {
  const std::size_t terms = poisson_terms(mean, tail);
  double sum = 0.0;
  for (std::size_t n = 0; n < terms; ++n) sum += poisson_pmf(n, mean) * f(n);
  return sum;
}

/// Same with an explicit number of terms.
template <class F>
double poisson_average_fixed(double mean, std::size_t terms, F&& f) {
  double sum = 0.0;
  for (std::size_t n = 0; n < terms; ++n) sum += poisson_pmf(n, mean) * f(n);
  return sum;
}

} // namespace rydsub
