#include <cmath>
#include <vector>

#include "doctest.h"
#include "rydsub/coherence_kernel.hpp"
#include "rydsub/density_evolution.hpp"
#include "rydsub/errors.hpp"

using namespace rydsub;
using cplx = std::complex<double>;

namespace {

ModelParams coarse(double d_b) {
  ModelParams p;
  p.d_b = d_b;
  p.grid_points = 8;
  return p;
}

double diagonal_min(const DensityMatrixGrid& g) {
  double m = 1e300;
  for (std::size_t i = 0; i < g.size(); ++i) m = std::min(m, g.at(i, i).real());
  return m;
}

} // namespace

TEST_CASE("mode sampling is normalized") {
  for (const auto& mode : {SpinWaveMode::gaussian(10.0, 3.0), SpinWaveMode::flat(8.0, 5.0),
                           SpinWaveMode::gaussian(2.0, 1.5)}) {
    const auto axis = mode.support_axis(20.0, 16);
    const auto amp = mode.sample(axis);
    double norm = 0.0;
    for (const auto& c : amp) norm += std::norm(c) * (axis[1] - axis[0]);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(axis.front() >= 0.0);
    CHECK(axis.back() <= 20.0);
  }
  SpinWaveMode table;
  table.kind = SpinWaveMode::Kind::custom_table;
  table.table = {1.0, 2.0, 1.0};
  const auto amp = table.sample({0.0, 0.5, 1.0});
  CHECK(std::norm(amp[1]) == doctest::Approx(4.0 / 3.0));
  CHECK_THROWS_AS(table.sample({0.0, 1.0}), grid_mismatch);
  CHECK_THROWS_AS(SpinWaveMode::gaussian(50.0, 1.0).support_axis(20.0, 8), invalid_parameter);
}

TEST_CASE("zero photons give the separable reference slice") {
  const auto mode = SpinWaveMode::gaussian(10.0, 3.0);
  const auto g = two_excitation_slice(9.0, 0, mode, coarse(2.0));
  const auto amp = mode.sample(g.axis);
  const double w = std::norm(amp.front() / mode.raw(g.axis.front()) * mode.raw(9.0));
  for (std::size_t i = 0; i < g.size(); i += 7)
    for (std::size_t j = 0; j < g.size(); j += 5) CHECK(std::abs(g.at(i, j) - w * amp[i] * std::conj(amp[j])) < 1e-15);
  CHECK(g.n_s == 0);
}

TEST_CASE("evolution preserves the diagonal and Hermiticity") {
  const auto mode = SpinWaveMode::gaussian(10.0, 3.0);
  const auto params = coarse(1.0);
  const auto rho0 = two_excitation_slice(10.0, 0, mode, params);
  const PhiTable table = slice_phi_table(10.0, rho0.axis, params);
  double prev_purity = rho0.purity();
  for (int n_s : {0, 1, 2, 5, 40}) {
    const auto rho = evolve_density(rho0, n_s, table);
    CHECK(rho.hermiticity_defect() < 1e-10);
    CHECK(diagonal_min(rho) >= -1e-12);
    CHECK(rho.trace() == doctest::Approx(rho0.trace()).epsilon(1e-12));
    CHECK(rho.purity() <= prev_purity * (1.0 + 1e-12));
    prev_purity = rho.purity();
    for (std::size_t i = 0; i < rho.size(); ++i) CHECK(rho.at(i, i) == rho0.at(i, i));
  }
  CHECK(evolve_density(rho0, 0, table).values == rho0.values);

  auto other = rho0;
  other.axis.pop_back();
  CHECK_THROWS_AS(evolve_density(other, 1, table), grid_mismatch);
}

TEST_CASE("correlated decoherence in the two-excitation slice") {
  // Photons scattered by the excitation at r never reach excitations behind
  // it, so coherence survives downstream of r and is lost upstream.
  const double r = 10.0;
  const auto g = two_excitation_slice(r, 5, SpinWaveMode::gaussian(10.0, 3.0), coarse(2.0));
  double up = 0.0, down = 0.0;
  int n_up = 0, n_down = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      const double x = g.axis[i], y = g.axis[j];
      if (x > r + 2 && y > r + 2) {
        down += std::abs(g.at(i, j));
        ++n_down;
      } else if (x < r - 2 && y < r - 2) {
        up += std::abs(g.at(i, j));
        ++n_up;
      }
    }
  REQUIRE(n_up > 0);
  REQUIRE(n_down > 0);
  CHECK((down / n_down) / (up / n_up) > 10.0);
  CHECK(g.meta.at("mode") == "gaussian(center=10,sigma=3)");
}

TEST_CASE("slice far beyond the exit reduces to single-excitation decoherence") {
  const auto params = coarse(1.0);
  const auto mode = SpinWaveMode::gaussian(10.0, 3.0);
  const double r = 60.0;
  const auto rho0 = two_excitation_slice(r, 0, mode, params);
  const auto rho = two_excitation_slice(r, 3, mode, params);
  for (std::size_t i = 0; i < rho.size(); i += 9)
    for (std::size_t j = 0; j < rho.size(); j += 11) {
      const double x = rho.axis[i], y = rho.axis[j];
      const auto single = phi(GateConfig({x}, 20.0), GateConfig({y}, 20.0), params).value;
      const cplx expected = rho0.at(i, j) * std::pow(single, 3);
      CHECK(std::abs(rho.at(i, j) - expected) <= 1e-9 * std::abs(rho0.at(i, j)) + 1e-300);
    }
}

TEST_CASE("shared excitation far downstream factorizes") {
  ModelParams params;
  params.d_b = 2.0;
  const std::vector<double> x1{6.0}, y1{9.0};
  params.length = 40.0;
  const std::vector<double> xf{6.0, 34.0}, yf{9.0, 34.0};
  const auto two = phi(std::span<const double>(xf), std::span<const double>(yf), params).value;
  const auto one = phi(std::span<const double>(x1), std::span<const double>(y1), params).value;
  CHECK(std::abs(two - one) < 1e-3);
}

TEST_CASE("reduced density matrices") {
  const auto mode = SpinWaveMode::gaussian(10.0, 2.0);
  const auto params = coarse(1.0);
  const double p = scattering_probability(params.d_b);

  CHECK_THROWS_AS(reduced_density(0, 2, 1, p, mode, params), index_out_of_range);
  CHECK_THROWS_AS(reduced_density(3, 2, 1, p, mode, params), index_out_of_range);

  const auto rho0 = reduced_density(1, 1, 0, p, mode, params);
  const auto amp = mode.sample(rho0.axis);
  CHECK(std::abs(rho0.at(3, 17) - amp[3] * std::conj(amp[17])) < 1e-15);
  CHECK(rho0.trace() == doctest::Approx(1.0).epsilon(1e-6));

  SUBCASE("full scattering leaves the second excitation untouched") {
    const auto r2 = reduced_density(2, 3, 7, 1.0, mode, params, SinglePhiModel::piecewise);
    const auto base = reduced_density(2, 3, 0, 1.0, mode, params, SinglePhiModel::piecewise);
    CHECK(r2.values == base.values);
  }

  SUBCASE("piecewise model gives the (1 - p)^n_s off-diagonal factor") {
    const int n_s = 3;
    const auto r1 = reduced_density(1, 2, n_s, p, mode, params, SinglePhiModel::piecewise);
    for (std::size_t i = 0; i < r1.size(); i += 5)
      for (std::size_t j = i + 1; j < r1.size(); j += 7)
        CHECK(std::abs(r1.at(i, j) - rho0.at(i, j) * std::pow(1.0 - p, n_s)) < 1e-15);
  }

  SUBCASE("piecewise and quadrature kernels agree away from contact") {
    const auto pw = reduced_density(1, 1, 1, p, mode, params, SinglePhiModel::piecewise);
    const auto qd = reduced_density(1, 1, 1, p, mode, params, SinglePhiModel::quadrature);
    for (std::size_t i = 0; i < pw.size(); ++i)
      for (std::size_t j = 0; j < pw.size(); ++j) {
        if (std::abs(pw.axis[i] - pw.axis[j]) < 3.0) continue;
        // One photon: entries differ by rho_0 (phi_quad - phi_piecewise).
        CHECK(std::abs(qd.at(i, j) - pw.at(i, j)) <= 0.1 * p * std::abs(rho0.at(i, j)));
      }
  }

  SUBCASE("purity never increases") {
    double prev = rho0.purity();
    for (int n_s : {1, 2, 4, 8}) {
      const auto r = reduced_density(1, 1, n_s, p, mode, params);
      CHECK(r.hermiticity_defect() < 1e-10);
      CHECK(r.purity() <= prev * (1.0 + 1e-12));
      prev = r.purity();
    }
  }
}
