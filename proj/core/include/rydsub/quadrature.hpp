#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace rydsub::quadrature {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1]. Nodes are
// stored for the non-negative half; index 7 is the centre.
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for kronrod_nodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> gauss7_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// 10-point Gauss-Legendre, non-negative half.
inline constexpr std::array<double, 5> legendre10_nodes = {
    0.1488743389816312108848260, 0.4333953941292471907992659, 0.6794095682990244062343274,
    0.8650633666889845107320967, 0.9739065285171717200779640};
inline constexpr std::array<double, 5> legendre10_weights = {
    0.2955242247147528701738930, 0.2692667193099963550912269, 0.2190863625159820439955349,
    0.1494513491505805931457763, 0.0666713443086881375935688};

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  std::size_t intervals = 0;
  bool converged = true;
};

template <class T>
double magnitude(const T& v) {
  using std::abs;
  return abs(v);
}

/// Kronrod and embedded Gauss estimates of the integral of f over [a, b].
template <class F>
auto gauss_kronrod15(F&& f, double a, double b) {
  using T = decltype(f(a));
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(centre);
  T kronrod = fc * kronrod_weights[7];
  T gauss = fc * gauss7_weights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kronrod_nodes[j];
    const T sum = f(centre - dx) + f(centre + dx);
    kronrod += sum * kronrod_weights[j];
    if (j % 2 == 1) gauss += sum * gauss7_weights[j / 2];
  }
  return std::pair<T, T>{kronrod * half, gauss * half};
}

/// Fixed 10-point Gauss-Legendre rule over [a, b].
template <class F>
auto gauss_legendre10(F&& f, double a, double b) {
  using T = decltype(f(a));
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  T sum{};
  for (std::size_t j = 0; j < legendre10_nodes.size(); ++j) {
    const double dx = half * legendre10_nodes[j];
    sum += (f(centre - dx) + f(centre + dx)) * legendre10_weights[j];
  }
  return sum * half;
}

/// Sorted, de-duplicated breakpoints clipped to [lo, hi], always including
/// both ends.
inline std::vector<double> panel_edges(double lo, double hi, std::span<const double> interior) {
  std::vector<double> edges{lo, hi};
  for (double x : interior)
    if (x > lo && x < hi) edges.push_back(x);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double u, double v) { return std::abs(u - v) <= 1e-13; }),
              edges.end());
  return edges;
}

/// Globally adaptive bisection on each panel between consecutive edges.
/// The tolerance is absolute and distributed over the panels by width.
template <class F>
auto integrate(F&& f, std::span<const double> edges, double abs_tol, int max_depth = 48) {
  using T = decltype(f(edges.front()));
  Result<T> result;
  const double total = edges.back() - edges.front();
  if (!(total > 0.0)) return result;

  struct Span {
    double a, b;
    int depth;
  };
  std::vector<Span> stack;
  for (std::size_t i = edges.size() - 1; i > 0; --i) stack.push_back({edges[i - 1], edges[i], 0});

  while (!stack.empty()) {
    const Span s = stack.back();
    stack.pop_back();
    const auto [k, g] = gauss_kronrod15(f, s.a, s.b);
    const double err = magnitude(k - g);
    const double local_tol = abs_tol * (s.b - s.a) / total;
    if (err <= local_tol || s.depth >= max_depth) {
      if (err > local_tol) result.converged = false;
      result.value += k;
      result.error += err;
      ++result.intervals;
      continue;
    }
    const double mid = 0.5 * (s.a + s.b);
    stack.push_back({mid, s.b, s.depth + 1});
    stack.push_back({s.a, mid, s.depth + 1});
  }
  return result;
}

/// Running integral G(z) = \int_{lo}^{z} g. The integrand is refined once
/// into accepted leaves; G at any point is the cached prefix at the left
/// edge of its leaf plus a 10-point rule over the remainder.
template <class T, class F>
class Cumulative {
public:
  Cumulative(F g, std::span<const double> edges, double abs_tol, int max_depth = 48)
      : g_(std::move(g)) {
    const double total = edges.back() - edges.front();
    T prefix{};
    struct Span {
      double a, b;
      int depth;
    };
    std::vector<Span> stack;
    for (std::size_t i = edges.size() - 1; i > 0; --i) stack.push_back({edges[i - 1], edges[i], 0});
    // Depth-first with the left half on top keeps leaves in ascending order.
    while (!stack.empty()) {
      const Span s = stack.back();
      stack.pop_back();
      const auto [k, gs] = gauss_kronrod15(g_, s.a, s.b);
      const double err = magnitude(k - gs);
      const double local_tol = abs_tol * (s.b - s.a) / total;
      if (err <= local_tol || s.depth >= max_depth) {
        if (err > local_tol) converged_ = false;
        starts_.push_back(s.a);
        prefixes_.push_back(prefix);
        prefix += k;
        error_ += err;
        continue;
      }
      const double mid = 0.5 * (s.a + s.b);
      stack.push_back({mid, s.b, s.depth + 1});
      stack.push_back({s.a, mid, s.depth + 1});
    }
    end_ = edges.back();
    total_ = prefix;
  }

  T operator()(double z) const {
    if (z >= end_) return total_;
    if (z <= starts_.front()) return T{};
    const auto it = std::upper_bound(starts_.begin(), starts_.end(), z);
    const std::size_t leaf = static_cast<std::size_t>(it - starts_.begin()) - 1;
    const double a = starts_[leaf];
    if (z == a) return prefixes_[leaf];
    return prefixes_[leaf] + gauss_legendre10(g_, a, z);
  }

  T total() const { return total_; }
  double error() const { return error_; }
  bool converged() const { return converged_; }
  std::size_t leaves() const { return starts_.size(); }

private:
  F g_;
  std::vector<double> starts_;
  std::vector<T> prefixes_;
  T total_{};
  double end_ = 0.0;
  double error_ = 0.0;
  bool converged_ = true;
};

} // namespace rydsub::quadrature
