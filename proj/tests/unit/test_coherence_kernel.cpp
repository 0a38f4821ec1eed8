#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "reference.hpp"
#include "rydsub/coherence_kernel.hpp"
#include "rydsub/errors.hpp"

using namespace rydsub;

namespace {

std::vector<double> random_positions(std::mt19937_64& rng, int n, double length) {
  std::uniform_real_distribution<double> u(0.0, length);
  std::vector<double> v;
  while (static_cast<int>(v.size()) < n) {
    const double x = u(rng);
    if (std::none_of(v.begin(), v.end(), [x](double y) { return std::abs(x - y) < 1e-6; })) v.push_back(x);
  }
  std::sort(v.begin(), v.end());
  return v;
}

} // namespace

TEST_CASE("transmission amplitude basics") {
  ModelParams params;
  params.d_b = 3.0;
  const GateConfig far({12.0, 18.0}, params.length);
  // Before the first excitation and far from it the medium is transparent.
  CHECK(std::abs(transmission_amplitude(3.0, far, params) - 1.0) < 1e-3);

  params.d_b = 0.0;
  const GateConfig one({5.0}, params.length);
  for (double z : {0.0, 4.5, 5.3, 20.0}) {
    const double s = total_potential(z, one, params);
    const auto expected = 1.0 / std::complex<double>(1.0, s);
    CHECK(std::abs(transmission_amplitude(z, one, params) - expected) < 1e-15);
  }
}

TEST_CASE("phi matches the decomposition oracle for one excitation") {
  ModelParams params;
  params.d_b = 2.0;
  const auto v = phi(GateConfig({5.0}, 20.0), GateConfig({15.0}, 20.0), params);
  const auto expect = ref::phi({5.0}, {15.0}, 2.0, 20.0);
  CHECK(std::abs(v.value - expect) < 1e-7);
  const double A = std::exp(-2.0 * scattering_exponent());
  CHECK(std::abs(v.value) == doctest::Approx(A).epsilon(0.05));
  CHECK(v.n_g == 1);
}

TEST_CASE("phi matches the decomposition oracle on random configurations") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> ud(0.0, 6.0);
  ModelParams params;
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 1 + trial % 3;
    const auto x = random_positions(rng, n, params.length);
    const auto y = random_positions(rng, n, params.length);
    params.d_b = ud(rng);
    const auto v = phi(std::span<const double>(x), std::span<const double>(y), params);
    const auto expect = ref::phi(x, y, params.d_b, params.length);
    CAPTURE(trial);
    CHECK(std::abs(v.value - expect) < 1e-6);
  }
}

TEST_CASE("phi kernel identities on random configurations") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ud(0.0, 6.0);
  ModelParams params;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    const auto xv = random_positions(rng, n, params.length);
    const auto yv = random_positions(rng, n, params.length);
    params.d_b = ud(rng);
    const GateConfig x(xv, params.length), y(yv, params.length);
    const auto xy = phi(x, y, params);
    const auto yx = phi(y, x, params);
    CHECK(std::abs(phi(x, x, params).value - 1.0) < 1e-6);
    CHECK(std::abs(xy.value) <= 1.0 + 10.0 * params.quad_rel_tol);
    CHECK(std::abs(xy.value - std::conj(yx.value)) < 1e-10);
  }
}

TEST_CASE("phi flags and argument checks") {
  ModelParams params;
  CHECK_THROWS_AS(phi(GateConfig({5.0}, 20.0), GateConfig({5.0, 9.0}, 20.0), params), dimension_mismatch);
  const auto close = phi(GateConfig({5.0, 6.0}, 20.0), GateConfig({5.0, 9.0}, 20.0), params);
  CHECK(close.dilute_violation);
  const auto edge = phi(GateConfig({1.0}, 20.0), GateConfig({9.0}, 20.0), params);
  CHECK(edge.near_boundary);
  const auto bulk = phi(GateConfig({5.0}, 20.0), GateConfig({9.0}, 20.0), params);
  CHECK_FALSE(bulk.near_boundary);
  CHECK_FALSE(bulk.dilute_violation);
  params.d_b = 0.0;
  CHECK(phi(GateConfig({5.0}, 20.0), GateConfig({9.0}, 20.0), params).value == std::complex<double>(1.0, 0.0));
}

TEST_CASE("upstream shared excitation: Phi_2 = 1 + A phi_1 of the downstream pair") {
  // Photons that pass the common first excitation see the second pair with
  // amplitude A; scattering at the first excitation is identical in both branches.
  ModelParams params;
  params.d_b = 1.5;
  const auto two = phi(GateConfig({4.0, 10.0}, 20.0), GateConfig({4.0, 15.0}, 20.0), params).value;
  const auto one = phi(GateConfig({10.0}, 20.0), GateConfig({15.0}, 20.0), params).value;
  const double shield = 1.0 - scattering_probability(params.d_b);
  CHECK(std::abs(two - (1.0 + shield * (one - 1.0))) < 1e-3);
}

TEST_CASE("factorization for an excitation outside the medium") {
  // An excitation far beyond the exit interacts with nothing, so the two-body
  // kernel reduces to the single-body kernel of the remaining pair.
  ModelParams params;
  params.d_b = 2.0;
  const std::vector<double> x{6.0, 80.0}, y{11.0, 80.0};
  const std::vector<double> x1{6.0}, y1{11.0};
  const auto two = phi(std::span<const double>(x), std::span<const double>(y), params).value;
  const auto one = phi(std::span<const double>(x1), std::span<const double>(y1), params).value;
  CHECK(std::abs(two - one) < 1e-3);
}

TEST_CASE("dilute approximation agrees with the full kernel") {
  ModelParams params;
  params.d_b = 3.0;
  const GateConfig x({4.0, 12.0}, 20.0), y({6.0, 12.0}, 20.0);
  const auto full = phi(x, y, params).value;
  const auto approx = phi_approx_sum(x, y, params).value;
  CHECK(std::abs(full - approx) / std::abs(full) < 0.10);

  // n_g = 1 reduces to phi itself.
  const GateConfig a({7.0}, 20.0), b({13.0}, 20.0);
  CHECK(std::abs(phi_approx_sum(a, b, params).value - phi(a, b, params).value) < 1e-12);
  CHECK(phi_approx_sum(x, x, params).value == std::complex<double>(1.0, 0.0));
  CHECK(phi_approx_sum(GateConfig({4.0, 5.0}, 20.0), y, params).dilute_violation);
}

TEST_CASE("dilute approximation error stays below 0.15 of the decoherence") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(2.5, 17.5), ud(3.0, 6.0);
  ModelParams params;
  int tested = 0;
  while (tested < 30) {
    std::vector<double> x{u(rng), u(rng)}, y{u(rng), u(rng)};
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x[1] - x[0] <= 2.0 || y[1] - y[0] <= 2.0) continue;
    params.d_b = ud(rng);
    const GateConfig gx(x, params.length), gy(y, params.length);
    const auto full = phi(gx, gy, params).value;
    const auto approx = phi_approx_sum(gx, gy, params).value;
    CAPTURE(x[0]);
    CAPTURE(y[0]);
    CHECK(std::abs(full - approx) / std::abs(1.0 - full) < 0.15);
    ++tested;
  }
}

TEST_CASE("infinite optical depth limit") {
  CHECK(phi_infinite_db(GateConfig({4.0, 10.0}, 20.0), GateConfig({4.0, 15.0}, 20.0)).value == 1.0);
  CHECK(phi_infinite_db(GateConfig({4.0, 10.0}, 20.0), GateConfig({7.0, 10.0}, 20.0)).value == 0.0);

  const GateConfig x({5.0, 11.0}, 20.0), y({8.0, 14.0}, 20.0);
  ModelParams params;
  double prev = 1e9;
  for (double d_b : {2.0, 4.0, 6.0, 8.0, 10.0}) {
    params.d_b = d_b;
    const double gap = std::abs(phi(x, y, params).value - phi_infinite_db(x, y).value);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("first-excitation limit leaves a potential-tail residue") {
  ModelParams params;
  auto gap = [&](std::vector<double> x, std::vector<double> y, double d_b) {
    params.d_b = d_b;
    const std::vector<double> x1{x.front()}, y1{y.front()};
    return std::abs(phi(std::span<const double>(x), std::span<const double>(y), params).value -
                    phi(std::span<const double>(x1), std::span<const double>(y1), params).value);
  };
  // Parallel pairs: the residue shrinks with d_b and with the separation.
  for (double s : {4.0, 9.0}) {
    double prev = 1e9;
    for (double d_b : {2.0, 4.0, 6.0, 8.0, 10.0}) {
      const double g = gap({4.0, 4.0 + s}, {6.0, 6.0 + s}, d_b);
      CHECK(g < prev);
      prev = g;
    }
  }
  CHECK(gap({4.0, 13.0}, {6.0, 15.0}, 10.0) < gap({4.0, 10.0}, {6.0, 12.0}, 10.0));

  // A second excitation 3.7 z_b behind the first: its r^-6 tail enters the
  // first excitation's exponent with weight d_b, so the residue grows.
  const std::vector<double> x{8.04, 11.74}, y{8.25, 14.51};
  double prev = 0.0;
  for (double d_b : {4.0, 6.0, 8.0, 10.0}) {
    const double g = gap(x, y, d_b);
    CHECK(g > prev);
    CHECK(g < 1e-2);
    prev = g;
  }
}

TEST_CASE("profile exposes the field ratio and amplitude consistently") {
  ModelParams params;
  params.d_b = 1.0;
  const std::vector<double> pos{5.0, 9.5};
  const TransmissionProfile prof(pos, params);
  for (double z : {0.0, 5.0, 7.25, 20.0}) {
    const double s = total_potential(z, std::span<const double>(pos), params);
    const std::complex<double> I{0.0, 1.0};
    CHECK(std::abs(prof.amplitude(z) - I / (I - s) * prof.field_ratio(z)) < 1e-14);
  }
}
